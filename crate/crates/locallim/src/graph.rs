//! Labelled simple graphs and multigraphs with the traversal primitives the
//! rest of the crate consumes: components, distances, induced balls, and a
//! left-right planarity test.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod planarity;

/// Vertices are labelled `1..=n`.
pub type Vertex = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("endpoint {v} out of range 1..={n}")]
    OutOfRange { v: Vertex, n: usize },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
}

/// A labelled simple graph on vertex set `1..=n`. Immutable after
/// construction; the adjacency list is built lazily and cached.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair `(u, v)` with `u < v`.
    edges: Vec<(Vertex, Vertex)>,
    #[serde(skip)]
    adj: OnceLock<Vec<Vec<Vertex>>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}
impl Eq for Graph {}
impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.edges.hash(state);
    }
}
impl PartialOrd for Graph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Graph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.edges).cmp(&(other.n, &other.edges))
    }
}

impl Graph {
    pub fn new(n: usize, mut edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        for e in edges.iter_mut() {
            if e.0 == e.1 {
                return Err(GraphError::Loop(e.0));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            for v in [e.0, e.1] {
                if v < 1 || v > n {
                    return Err(GraphError::OutOfRange { v, n });
                }
            }
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(Graph {
            n,
            edges,
            adj: OnceLock::new(),
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let e = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&e).is_ok()
    }

    /// Adjacency lists indexed by vertex label; index 0 is unused.
    pub fn adjacency(&self) -> &[Vec<Vertex>] {
        self.adj.get_or_init(|| {
            let mut adj = vec![Vec::new(); self.n + 1];
            for &(u, v) in &self.edges {
                adj[u].push(v);
                adj[v].push(u);
            }
            adj
        })
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency()[v].len()
    }

    /// Parses the edge-list format: a header line `n m` followed by `m` lines
    /// `u v` with `1 <= u < v <= n` and no duplicates. Lines starting with
    /// `#` are comments and are skipped.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());
        let (header_no, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header line \"n m\"".into(),
        })?;
        let parse_usize = |tok: &str, line: usize| {
            tok.parse::<usize>().map_err(|_| GraphError::Parse {
                line,
                msg: format!("expected a non-negative integer, got {tok:?}"),
            })
        };
        let mut it = header.split_whitespace();
        let n = parse_usize(
            it.next().ok_or(GraphError::Parse {
                line: header_no + 1,
                msg: "header needs two fields \"n m\"".into(),
            })?,
            header_no + 1,
        )?;
        let m = parse_usize(
            it.next().ok_or(GraphError::Parse {
                line: header_no + 1,
                msg: "header needs two fields \"n m\"".into(),
            })?,
            header_no + 1,
        )?;
        if it.next().is_some() {
            return Err(GraphError::Parse {
                line: header_no + 1,
                msg: "trailing tokens after \"n m\"".into(),
            });
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (no, l) = lines.next().ok_or(GraphError::Parse {
                line: header_no + 1,
                msg: format!("expected {m} edge lines, found {}", edges.len()),
            })?;
            let line = no + 1;
            let mut it = l.split_whitespace();
            let (u, v) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (parse_usize(a, line)?, parse_usize(b, line)?),
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        msg: "expected exactly two fields \"u v\"".into(),
                    })
                }
            };
            if u >= v {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("edge must satisfy u < v, got {u} {v}"),
                });
            }
            if v > n {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("label {v} out of range 1..={n}"),
                });
            }
            edges.push((u, v));
        }
        if let Some((no, _)) = lines.next() {
            return Err(GraphError::Parse {
                line: no + 1,
                msg: "unexpected content after the last edge".into(),
            });
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::Parse {
                    line: header_no + 1,
                    msg: format!("duplicate edge {} {}", w[0].0, w[0].1),
                });
            }
        }
        Graph::new(n, edges)
    }

    /// Deterministic inverse of [`Graph::parse`]: edges sorted
    /// lexicographically, one per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Connected components: each sorted ascending, the list ordered by
    /// (size descending, smallest label ascending).
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n + 1];
        let mut out = Vec::new();
        for s in 1..=self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        out
    }

    /// Vertex set of the largest component; ties broken by smallest label.
    pub fn largest_component(&self) -> Vec<Vertex> {
        assert!(self.n >= 1, "largest_component needs n >= 1");
        self.components().into_iter().next().unwrap()
    }

    /// Shortest-path length, or `None` when `u` and `v` lie in different
    /// components.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<usize> {
        assert!(u >= 1 && u <= self.n && v >= 1 && v <= self.n);
        if u == v {
            return Some(0);
        }
        let adj = self.adjacency();
        let mut dist = vec![usize::MAX; self.n + 1];
        dist[u] = 0;
        let mut q = VecDeque::from([u]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    if y == v {
                        return Some(dist[y]);
                    }
                    q.push_back(y);
                }
            }
        }
        None
    }

    /// Induced ball of the given radius around `v`; see [`RootedBall`].
    pub fn ball(&self, v: Vertex, radius: usize) -> RootedBall {
        BallScanner::new(self.n).ball(self, v, radius)
    }

    /// Planarity via the left-right criterion. Exactness is cross-checked in
    /// the test suite against a Kuratowski/Wagner brute force on all graphs
    /// with at most six vertices.
    pub fn is_planar(&self) -> bool {
        planarity::is_planar(self)
    }
}

/// Multigraph on `1..=n`; loops and parallel edges allowed. Edge identity is
/// positional: edge `i` is `edges()[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl MultiGraph {
    pub fn new(n: usize, mut edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            for v in [e.0, e.1] {
                if v < 1 || v > n {
                    return Err(GraphError::OutOfRange { v, n });
                }
            }
        }
        Ok(MultiGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Degree with loops counting two.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn min_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Same line format as [`Graph::parse`] but with `u <= v`, duplicates and
    /// loops allowed.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());
        let (header_no, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header line \"n m\"".into(),
        })?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| GraphError::Parse {
                line: header_no + 1,
                msg: "header must be \"n m\"".into(),
            })?;
        if nums.len() != 2 {
            return Err(GraphError::Parse {
                line: header_no + 1,
                msg: "header must be \"n m\"".into(),
            });
        }
        let (n, m) = (nums[0], nums[1]);
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (no, l) = lines.next().ok_or(GraphError::Parse {
                line: header_no + 1,
                msg: format!("expected {m} edge lines, found {}", edges.len()),
            })?;
            let toks: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| GraphError::Parse {
                    line: no + 1,
                    msg: "expected two integers".into(),
                })?;
            if toks.len() != 2 {
                return Err(GraphError::Parse {
                    line: no + 1,
                    msg: "expected exactly two fields \"u v\"".into(),
                });
            }
            edges.push((toks[0], toks[1]));
        }
        MultiGraph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// The induced subgraph on all vertices within a given distance of a root,
/// relabelled `1..=b` by (depth, original label); the root is vertex 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    pub graph: Graph,
    pub root: Vertex,
    pub radius: usize,
    /// `depth[v]` for ball labels `v` in `1..=b`; index 0 unused.
    pub depth: Vec<usize>,
    /// Original label of each ball vertex; index 0 unused.
    pub orig: Vec<Vertex>,
}

impl RootedBall {
    pub fn size(&self) -> usize {
        self.graph.n()
    }

    pub fn is_tree(&self) -> bool {
        self.graph.m() + 1 == self.graph.n()
    }
}

/// Reusable BFS workspace so that extracting many balls from one large graph
/// costs O(ball) each instead of O(n).
pub struct BallScanner {
    stamp: Vec<u64>,
    depth: Vec<usize>,
    cur: u64,
}

impl BallScanner {
    pub fn new(n: usize) -> Self {
        BallScanner {
            stamp: vec![0; n + 1],
            depth: vec![0; n + 1],
            cur: 0,
        }
    }

    pub fn ball(&mut self, g: &Graph, v: Vertex, radius: usize) -> RootedBall {
        assert!(v >= 1 && v <= g.n(), "root {v} out of range 1..={}", g.n());
        assert!(g.n() + 1 == self.stamp.len(), "scanner sized for a different graph");
        let adj = g.adjacency();
        self.cur += 1;
        let stamp = self.cur;
        self.stamp[v] = stamp;
        self.depth[v] = 0;
        let mut verts = vec![v];
        let mut head = 0;
        while head < verts.len() {
            let x = verts[head];
            head += 1;
            if self.depth[x] == radius {
                continue;
            }
            for &y in &adj[x] {
                if self.stamp[y] != stamp {
                    self.stamp[y] = stamp;
                    self.depth[y] = self.depth[x] + 1;
                    verts.push(y);
                }
            }
        }
        // BFS discovers by depth already; make the within-depth order the
        // original label order.
        verts.sort_unstable_by_key(|&x| (self.depth[x], x));
        let b = verts.len();
        let mut orig = vec![0; b + 1];
        let mut depth = vec![0; b + 1];
        for (i, &x) in verts.iter().enumerate() {
            orig[i + 1] = x;
            depth[i + 1] = self.depth[x];
        }
        // collect induced edges: for each ball vertex scan its adjacency
        let mut edges = Vec::new();
        {
            use std::collections::HashMap;
            let mut idx: HashMap<Vertex, usize> = HashMap::with_capacity(b);
            for (i, &x) in verts.iter().enumerate() {
                idx.insert(x, i + 1);
            }
            for (i, &x) in verts.iter().enumerate() {
                for &y in &adj[x] {
                    if let Some(&j) = idx.get(&y) {
                        if i + 1 < j {
                            edges.push((i + 1, j));
                        }
                    }
                }
            }
        }
        let graph = Graph::new(b, edges).expect("induced ball is a valid simple graph");
        RootedBall {
            graph,
            root: 1,
            radius,
            depth,
            orig,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn parse_basic() {
        let t = Graph::parse("3 0\n").unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.m(), 0);

        let tri = Graph::parse("3 3\n1 2\n1 3\n2 3\n").unwrap();
        assert_eq!(tri.edges(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn parse_rejects_u_ge_v() {
        let err = Graph::parse("2 1\n2 1\n").unwrap_err();
        match err {
            GraphError::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("u < v"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_out_of_range_and_duplicates() {
        assert!(matches!(
            Graph::parse("3 1\n1 4\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(Graph::parse("3 2\n1 2\n1 2\n").is_err());
        assert!(Graph::parse("3 1\nx y\n").is_err());
    }

    #[test]
    fn parse_skips_comments() {
        let t = Graph::parse("# sampler: gnm\n3 1\n# interior comment\n1 3\n").unwrap();
        assert_eq!(t.edges(), &[(1, 3)]);
    }

    #[test]
    fn serialization_round_trip_is_byte_exact() {
        let graph = g(5, &[(2, 5), (1, 2), (3, 4)]);
        let text = graph.to_edge_list();
        assert_eq!(text, "5 3\n1 2\n2 5\n3 4\n");
        assert_eq!(Graph::parse(&text).unwrap(), graph);
    }

    #[test]
    fn components_ordering() {
        let graph = g(4, &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(graph.components(), vec![vec![1, 2, 3], vec![4]]);

        let empty = Graph::empty(3);
        assert_eq!(empty.components(), vec![vec![1], vec![2], vec![3]]);

        let two = g(5, &[(1, 2), (3, 4), (4, 5)]);
        assert_eq!(two.components(), vec![vec![3, 4, 5], vec![1, 2]]);
    }

    #[test]
    fn largest_component_tie_break() {
        let two_triangles = g(6, &[(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]);
        assert_eq!(two_triangles.largest_component(), vec![1, 2, 3]);

        let path5 = g(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(path5.largest_component(), vec![1, 2, 3, 4, 5]);

        let star_plus_edge = g(7, &[(1, 2), (1, 3), (1, 4), (1, 5), (6, 7)]);
        assert_eq!(star_plus_edge.largest_component(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn distances() {
        let c5 = g(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]);
        assert_eq!(c5.distance(1, 2), Some(1));
        assert_eq!(c5.distance(1, 3), Some(2));
        let two = g(4, &[(1, 2), (3, 4)]);
        assert_eq!(two.distance(1, 3), None);
    }

    #[test]
    fn ball_is_induced() {
        let tri = g(3, &[(1, 2), (1, 3), (2, 3)]);
        let b = tri.ball(2, 1);
        assert_eq!(b.size(), 3);
        assert_eq!(b.graph.m(), 3); // boundary edge included
        assert_eq!(b.orig[1], 2);

        let path = g(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        let b = path.ball(3, 1);
        assert_eq!(b.size(), 3);
        assert_eq!(b.graph.edges(), &[(1, 2), (1, 3)]);
        assert_eq!(b.orig, vec![0, 3, 2, 4]);
        assert_eq!(b.depth, vec![0, 0, 1, 1]);

        let b0 = path.ball(2, 0);
        assert_eq!(b0.size(), 1);
        assert_eq!(b0.graph.m(), 0);
    }

    #[test]
    fn ball_vertex_set_matches_distance_filter() {
        let graph = g(
            7,
            &[(1, 2), (2, 3), (3, 4), (4, 1), (4, 5), (5, 6), (6, 7), (2, 7)],
        );
        for v in 1..=7 {
            for r in 0..4 {
                let b = graph.ball(v, r);
                let mut expect: Vec<Vertex> = (1..=7)
                    .filter(|&w| graph.distance(v, w).is_some_and(|d| d <= r))
                    .collect();
                expect.sort_unstable();
                let mut got: Vec<Vertex> = b.orig[1..].to_vec();
                got.sort_unstable();
                assert_eq!(got, expect);
                // induced property: every graph edge inside the set appears
                let inside: std::collections::HashSet<_> = b.orig[1..].iter().copied().collect();
                let expect_m = graph
                    .edges()
                    .iter()
                    .filter(|(a, c)| inside.contains(a) && inside.contains(c))
                    .count();
                assert_eq!(b.graph.m(), expect_m);
            }
        }
    }

    #[test]
    fn multigraph_degree_counts_loops_twice() {
        let mg = MultiGraph::new(2, vec![(1, 1), (1, 2), (1, 2)]).unwrap();
        assert_eq!(mg.degree(1), 4);
        assert_eq!(mg.degree(2), 2);
        assert_eq!(mg.min_degree(), 2);
    }
}
