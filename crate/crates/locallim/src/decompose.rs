//! Structural decomposition of a graph into complex part, non-complex part,
//! core, and kernel, plus the inverse rebuild and the summary counts used by
//! the internal-structure diagnostics.
//!
//! A component is complex when its cycle space has dimension at least two,
//! i.e. its edge count is at least its vertex count plus one. The core is the
//! maximal subgraph of the complex part with minimum degree two (iterated
//! leaf deletion); the kernel contracts every maximal path whose interior
//! vertices have degree two into a single multigraph edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, MultiGraph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("input is not complex: component with {v} vertices has only {e} edges")]
    NotComplex { v: usize, e: usize },
    #[error("input has a vertex of degree {deg} < 2 at {vertex}")]
    MinDegree { vertex: Vertex, deg: usize },
    #[error("component is a bare cycle: no vertex of degree >= 3")]
    BareCycle,
    #[error("kernel vertex map / edge paths inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A subgraph keeping the original vertex labels of the host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledSubgraph {
    /// Sorted original labels.
    pub vertices: Vec<Vertex>,
    /// Edges in original labels, `u < v`, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
}

impl LabelledSubgraph {
    pub fn from_graph(g: &Graph) -> Self {
        LabelledSubgraph {
            vertices: (1..=g.n()).collect(),
            edges: g.edges().to_vec(),
        }
    }

    pub fn empty() -> Self {
        LabelledSubgraph {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    /// Relabel to a contiguous `Graph`; returns the new graph and the map
    /// new label -> original label (index 0 unused).
    pub fn to_graph(&self) -> (Graph, Vec<Vertex>) {
        let mut back = Vec::with_capacity(self.v() + 1);
        back.push(0);
        back.extend_from_slice(&self.vertices);
        let fwd: BTreeMap<Vertex, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i + 1))
            .collect();
        let edges = self.edges.iter().map(|&(u, v)| (fwd[&u], fwd[&v])).collect();
        let g = Graph::new(self.v(), edges).expect("relabelled subgraph is valid");
        (g, back)
    }

    fn adjacency(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(u, v) in &self.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        adj
    }

    /// Per-component (vertices, edge count), components sorted by
    /// (size descending, smallest label).
    pub fn components(&self) -> Vec<(Vec<Vertex>, usize)> {
        let adj = self.adjacency();
        let mut seen: BTreeMap<Vertex, bool> = self.vertices.iter().map(|&v| (v, false)).collect();
        let mut out = Vec::new();
        for &s in &self.vertices {
            if seen[&s] {
                continue;
            }
            *seen.get_mut(&s).unwrap() = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for &w in &adj[&v] {
                    if !seen[&w] {
                        *seen.get_mut(&w).unwrap() = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            let inside: std::collections::BTreeSet<Vertex> = comp.iter().copied().collect();
            let e = self
                .edges
                .iter()
                .filter(|(u, _)| inside.contains(u))
                .count();
            out.push((comp, e));
        }
        out.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0[0].cmp(&b.0[0])));
        out
    }
}

/// Full decomposition of one graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub complex_part: LabelledSubgraph,
    pub non_complex_part: LabelledSubgraph,
    pub core: LabelledSubgraph,
    pub kernel: MultiGraph,
    /// Kernel label (1-based, index 0 unused) -> original label.
    pub kernel_vertex_map: Vec<Vertex>,
    /// Per kernel edge id: the ordered interior core vertices of its path.
    pub edge_paths: Vec<Vec<Vertex>>,
    /// Per kernel edge id: interior vertex count (`edge_paths[i].len()`).
    pub subdivision: Vec<usize>,
    /// Vertex set of the largest component of the whole graph.
    pub largest: Vec<Vertex>,
}

/// The counts behind the internal-structure diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureStats {
    pub n: usize,
    pub m: usize,
    pub n_u: usize,
    pub m_u: usize,
    pub v_q: usize,
    pub v_c: usize,
    pub v_k: usize,
    pub e_k: usize,
    pub v_l: usize,
    pub v_rest_of_q: usize,
}

impl StructureStats {
    pub const CSV_HEADER: &'static str = "n,m,n_u,m_u,v_q,v_c,v_k,e_k,v_l,v_rest_of_q";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.n_u,
            self.m_u,
            self.v_q,
            self.v_c,
            self.v_k,
            self.e_k,
            self.v_l,
            self.v_rest_of_q
        )
    }
}

/// Splits into (complex part, non-complex part); a component is complex iff
/// its edge count is at least its vertex count plus one.
pub fn split_complex(g: &Graph) -> (LabelledSubgraph, LabelledSubgraph) {
    let whole = LabelledSubgraph::from_graph(g);
    let mut complex_vs = Vec::new();
    let mut other_vs = Vec::new();
    for (comp, e) in whole.components() {
        if e > comp.len() {
            complex_vs.extend(comp);
        } else {
            other_vs.extend(comp);
        }
    }
    complex_vs.sort_unstable();
    other_vs.sort_unstable();
    let cset: std::collections::BTreeSet<Vertex> = complex_vs.iter().copied().collect();
    let (mut ce, mut oe) = (Vec::new(), Vec::new());
    for &(u, v) in g.edges() {
        if cset.contains(&u) {
            ce.push((u, v));
        } else {
            oe.push((u, v));
        }
    }
    (
        LabelledSubgraph {
            vertices: complex_vs,
            edges: ce,
        },
        LabelledSubgraph {
            vertices: other_vs,
            edges: oe,
        },
    )
}

fn check_complex(q: &LabelledSubgraph) -> Result<(), DecomposeError> {
    for (comp, e) in q.components() {
        if e < comp.len() + 1 {
            return Err(DecomposeError::NotComplex { v: comp.len(), e });
        }
    }
    Ok(())
}

/// Maximal subgraph of minimum degree >= 2, by iterated deletion of
/// degree-<=1 vertices. Requires the input to be complex.
pub fn core_of(q: &LabelledSubgraph) -> Result<LabelledSubgraph, DecomposeError> {
    check_complex(q)?;
    let mut adj = q.adjacency();
    let mut deg: BTreeMap<Vertex, usize> = adj.iter().map(|(&v, a)| (v, a.len())).collect();
    let mut alive: BTreeMap<Vertex, bool> = q.vertices.iter().map(|&v| (v, true)).collect();
    let mut queue: Vec<Vertex> = deg
        .iter()
        .filter(|&(_, &d)| d <= 1)
        .map(|(&v, _)| v)
        .collect();
    while let Some(v) = queue.pop() {
        if !alive[&v] || deg[&v] > 1 {
            continue;
        }
        *alive.get_mut(&v).unwrap() = false;
        let nbrs = std::mem::take(adj.get_mut(&v).unwrap());
        for w in nbrs {
            if alive[&w] {
                let d = deg.get_mut(&w).unwrap();
                *d -= 1;
                if *d <= 1 {
                    queue.push(w);
                }
            }
        }
    }
    let vertices: Vec<Vertex> = q.vertices.iter().copied().filter(|v| alive[v]).collect();
    let vset: std::collections::BTreeSet<Vertex> = vertices.iter().copied().collect();
    let edges = q
        .edges
        .iter()
        .copied()
        .filter(|(u, v)| vset.contains(u) && vset.contains(v))
        .collect();
    Ok(LabelledSubgraph { vertices, edges })
}

/// Contracts maximal degree-2 paths of a core into kernel edges.
///
/// Returns the kernel multigraph (vertices relabelled `1..=v_K` in ascending
/// original-label order), the label map, per-edge interior paths in original
/// labels, and the subdivision numbers. Edge ids are assigned by sorting
/// `(endpoint ids, path)`; non-loop paths run from the smaller kernel
/// endpoint to the larger, loop paths start with the smaller first interior
/// vertex.
/// Kernel multigraph, label map (index 0 unused), per-edge interior paths,
/// and subdivision numbers.
pub type KernelParts = (MultiGraph, Vec<Vertex>, Vec<Vec<Vertex>>, Vec<usize>);

pub fn kernel_of(c: &LabelledSubgraph) -> Result<KernelParts, DecomposeError> {
    check_complex(c)?;
    let adj = c.adjacency();
    for (&v, a) in &adj {
        if a.len() < 2 {
            return Err(DecomposeError::MinDegree {
                vertex: v,
                deg: a.len(),
            });
        }
    }
    let kernel_orig: Vec<Vertex> = c
        .vertices
        .iter()
        .copied()
        .filter(|v| adj[v].len() >= 3)
        .collect();
    if kernel_orig.is_empty() && !c.vertices.is_empty() {
        return Err(DecomposeError::BareCycle);
    }
    let kid: BTreeMap<Vertex, usize> = kernel_orig
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i + 1))
        .collect();

    // walk maximal paths between kernel vertices, consuming half-edges
    let mut half_used: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
    for &(u, v) in &c.edges {
        half_used.insert((u, v), 0);
        half_used.insert((v, u), 0);
    }
    let mut raw: Vec<(usize, usize, Vec<Vertex>)> = Vec::new();
    for &start in &kernel_orig {
        let nbrs = adj[&start].clone();
        for first in nbrs {
            if half_used[&(start, first)] > 0 {
                continue;
            }
            *half_used.get_mut(&(start, first)).unwrap() += 1;
            let mut interior = Vec::new();
            let mut prev = start;
            let mut cur = first;
            while !kid.contains_key(&cur) {
                interior.push(cur);
                // interior vertices have degree exactly 2
                let next = if adj[&cur][0] == prev {
                    adj[&cur][1]
                } else {
                    adj[&cur][0]
                };
                prev = cur;
                cur = next;
            }
            // block the future walk that would start at `cur` towards `prev`
            *half_used.get_mut(&(cur, prev)).unwrap() += 1;
            let (a, b) = (kid[&start], kid[&cur]);
            let (a, b, path) = if a < b || (a == b && oriented_loop_forward(&interior)) {
                (a, b, interior)
            } else {
                let mut rev = interior;
                rev.reverse();
                (b, a, rev)
            };
            raw.push((a, b, path));
        }
    }
    raw.sort();
    let mut edges = Vec::with_capacity(raw.len());
    let mut paths = Vec::with_capacity(raw.len());
    let mut subdivision = Vec::with_capacity(raw.len());
    for (a, b, p) in raw {
        edges.push((a, b));
        subdivision.push(p.len());
        paths.push(p);
    }
    let kernel = MultiGraph::new(kernel_orig.len(), edges)?;
    let mut map = Vec::with_capacity(kernel_orig.len() + 1);
    map.push(0);
    map.extend_from_slice(&kernel_orig);
    Ok((kernel, map, paths, subdivision))
}

fn oriented_loop_forward(interior: &[Vertex]) -> bool {
    // loop paths have >= 2 interior vertices in a simple core; keep the
    // direction whose first interior label is smaller
    match (interior.first(), interior.last()) {
        (Some(&f), Some(&l)) => f <= l,
        _ => true,
    }
}

/// Inverse of [`kernel_of`]: subdivides each kernel edge by its interior
/// path. Fails if labels collide or the result is not a simple core.
pub fn rebuild_core(
    kernel: &MultiGraph,
    edge_paths: &[Vec<Vertex>],
    kernel_vertex_map: &[Vertex],
) -> Result<LabelledSubgraph, DecomposeError> {
    if kernel_vertex_map.len() != kernel.n() + 1 {
        return Err(DecomposeError::Inconsistent(format!(
            "kernel_vertex_map has {} entries for {} kernel vertices",
            kernel_vertex_map.len(),
            kernel.n()
        )));
    }
    if edge_paths.len() != kernel.m() {
        return Err(DecomposeError::Inconsistent(format!(
            "{} paths for {} kernel edges",
            edge_paths.len(),
            kernel.m()
        )));
    }
    let mut vertices: Vec<Vertex> = kernel_vertex_map[1..].to_vec();
    let mut seen: std::collections::BTreeSet<Vertex> = vertices.iter().copied().collect();
    if seen.len() != vertices.len() {
        return Err(DecomposeError::Inconsistent(
            "duplicate labels in kernel_vertex_map".into(),
        ));
    }
    for p in edge_paths {
        for &v in p {
            if !seen.insert(v) {
                return Err(DecomposeError::Inconsistent(format!(
                    "interior vertex {v} reused"
                )));
            }
            vertices.push(v);
        }
    }
    let mut edges = Vec::new();
    for (id, &(a, b)) in kernel.edges().iter().enumerate() {
        let (oa, ob) = (kernel_vertex_map[a], kernel_vertex_map[b]);
        let mut chain = Vec::with_capacity(edge_paths[id].len() + 2);
        chain.push(oa);
        chain.extend_from_slice(&edge_paths[id]);
        chain.push(ob);
        for w in chain.windows(2) {
            let (u, v) = (w[0].min(w[1]), w[0].max(w[1]));
            if u == v {
                return Err(DecomposeError::Inconsistent(format!(
                    "subdivided edge {id} produces a loop at {u}"
                )));
            }
            edges.push((u, v));
        }
    }
    edges.sort_unstable();
    for w in edges.windows(2) {
        if w[0] == w[1] {
            return Err(DecomposeError::Inconsistent(format!(
                "subdivided kernel is not simple: duplicate edge {} {}",
                w[0].0, w[0].1
            )));
        }
    }
    vertices.sort_unstable();
    Ok(LabelledSubgraph { vertices, edges })
}

/// Full decomposition; core and kernel are empty when the complex part is.
pub fn decompose(g: &Graph) -> Decomposition {
    let (complex_part, non_complex_part) = split_complex(g);
    let (core, kernel, kernel_vertex_map, edge_paths, subdivision) = if complex_part.v() == 0 {
        (
            LabelledSubgraph::empty(),
            MultiGraph::new(0, Vec::new()).unwrap(),
            vec![0],
            Vec::new(),
            Vec::new(),
        )
    } else {
        let core = core_of(&complex_part).expect("complex part is complex");
        let (k, map, paths, sub) = kernel_of(&core).expect("core of a complex part has a kernel");
        (core, k, map, paths, sub)
    };
    let largest = if g.n() >= 1 {
        g.largest_component()
    } else {
        Vec::new()
    };
    Decomposition {
        complex_part,
        non_complex_part,
        core,
        kernel,
        kernel_vertex_map,
        edge_paths,
        subdivision,
        largest,
    }
}

/// True iff some component has at least two independent cycles.
pub fn has_complex_component(g: &Graph) -> bool {
    // union-find with per-component edge counts
    let n = g.n();
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut vcount = vec![1usize; n + 1];
    let mut ecount = vec![0usize; n + 1];
    for &(u, v) in g.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            ecount[ru] += 1;
        } else {
            parent[ru] = rv;
            vcount[rv] += vcount[ru];
            ecount[rv] += ecount[ru] + 1;
        }
    }
    (1..=n).any(|v| {
        let r = find(&mut parent, v);
        r == v && ecount[r] > vcount[r]
    })
}

pub fn structure_stats(g: &Graph, d: &Decomposition) -> StructureStats {
    let v_rest_of_q = if d.complex_part.v() == 0 {
        0
    } else {
        let comps = d.complex_part.components();
        d.complex_part.v() - comps[0].0.len()
    };
    StructureStats {
        n: g.n(),
        m: g.m(),
        n_u: d.non_complex_part.v(),
        m_u: d.non_complex_part.e(),
        v_q: d.complex_part.v(),
        v_c: d.core.v(),
        v_k: d.kernel.n(),
        e_k: d.kernel.m(),
        v_l: d.largest.len(),
        v_rest_of_q,
    }
}
