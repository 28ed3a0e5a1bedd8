//! Brute-force enumerations of small target classes, used as independent
//! references for the sampler-uniformity suites. Everything here works by
//! filtering edge subsets (or, for cores, label placements); none of it
//! shares a code path with the samplers it is used to check.

use crate::graph::{Graph, MultiGraph, Vertex};

/// All unordered pairs over `1..=n`, lexicographic.
pub fn all_pairs(n: usize) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for u in 1..=n {
        for v in u + 1..=n {
            out.push((u, v));
        }
    }
    out
}

/// Calls `visit` with every m-subset of the pair universe as a graph.
pub fn for_each_gnm(n: usize, m: usize, visit: &mut dyn FnMut(Graph)) {
    let pairs = all_pairs(n);
    let p = pairs.len();
    if m > p {
        return;
    }
    let mut pick: Vec<usize> = (0..m).collect();
    loop {
        let edges: Vec<(Vertex, Vertex)> = pick.iter().map(|&i| pairs[i]).collect();
        visit(Graph::new(n, edges).expect("pair subsets are simple"));
        // advance to the next combination
        let mut i = m;
        while i > 0 && pick[i - 1] == p - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        pick[i - 1] += 1;
        for j in i..m {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

pub fn all_gnm(n: usize, m: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for_each_gnm(n, m, &mut |g| out.push(g));
    out
}

fn is_connected(g: &Graph) -> bool {
    g.n() == 0 || g.components().len() == 1
}

/// All labelled trees on `1..=n` (n^(n-2) of them), by filtering spanning
/// edge subsets for connectivity.
pub fn all_trees(n: usize) -> Vec<Graph> {
    if n == 1 {
        return vec![Graph::empty(1)];
    }
    let mut out = Vec::new();
    for_each_gnm(n, n - 1, &mut |g| {
        if is_connected(&g) {
            out.push(g);
        }
    });
    out
}

/// Per-component excess check without going through the decomposition code.
fn component_excesses(g: &Graph) -> Vec<(usize, usize)> {
    let mut parent: Vec<usize> = (0..=g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut vc = vec![1usize; g.n() + 1];
    let mut ec = vec![0usize; g.n() + 1];
    for &(u, v) in g.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            ec[ru] += 1;
        } else {
            parent[ru] = rv;
            vc[rv] += vc[ru];
            ec[rv] += ec[ru] + 1;
        }
    }
    (1..=g.n())
        .filter(|&v| find(&mut parent, v) == v)
        .map(|v| (vc[v], ec[v]))
        .collect()
}

/// All forests on `1..=n` with exactly `t` components whose roots `1..=t`
/// are pairwise separated (t * n^(n-t-1) of them).
pub fn all_forests(n: usize, t: usize) -> Vec<Graph> {
    assert!(t >= 1 && t <= n);
    let mut out = Vec::new();
    for_each_gnm(n, n - t, &mut |g| {
        let comps = g.components();
        if comps.len() != t {
            return;
        }
        // n - t edges with t components means acyclic; check root separation
        let rooted = comps
            .iter()
            .all(|c| c.iter().filter(|&&v| v <= t).count() == 1);
        if rooted {
            out.push(g);
        }
    });
    out
}

/// All graphs on `1..=n` with `m` edges and no complex component.
pub fn all_noncomplex(n: usize, m: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for_each_gnm(n, m, &mut |g| {
        if component_excesses(&g).iter().all(|&(v, e)| e <= v) {
            out.push(g);
        }
    });
    out
}

/// All complex graphs on `1..=q` whose core is `core` on labels
/// `1..=v(core)`: the core overlaid with every rooted forest F(q, v(core)).
pub fn all_complexparts(core: &Graph, q: usize) -> Vec<Graph> {
    let vc = core.n();
    assert!(vc <= q);
    all_forests(q, vc)
        .into_iter()
        .map(|f| {
            let mut edges: Vec<(Vertex, Vertex)> = core.edges().to_vec();
            edges.extend_from_slice(f.edges());
            Graph::new(q, edges).expect("forest avoids core edges")
        })
        .collect()
}

/// All labelled cores with kernel `kernel` and `v(kernel) + k` vertices:
/// every distribution of the k subdivision labels over kernel edges as
/// ordered sequences whose subdivided graph is simple, deduplicated as
/// labelled graphs.
#[allow(clippy::mutable_key_type)] // Graph's cached adjacency never affects its ordering
pub fn all_cores_with_kernel(kernel: &MultiGraph, k: usize) -> Vec<Graph> {
    let e = kernel.m();
    let vk = kernel.n();
    let mut seqs: Vec<Vec<Vertex>> = vec![Vec::new(); e];
    let mut found: std::collections::BTreeSet<Graph> = std::collections::BTreeSet::new();
    place(kernel, vk, k, 0, &mut seqs, &mut found);
    return found.into_iter().collect();

    fn place(
        kernel: &MultiGraph,
        vk: usize,
        k: usize,
        next: usize,
        seqs: &mut Vec<Vec<Vertex>>,
        found: &mut std::collections::BTreeSet<Graph>,
    ) {
        if next == k {
            if let Some(g) = subdivide_simple(kernel, seqs) {
                found.insert(g);
            }
            return;
        }
        let label = vk + next + 1;
        for ei in 0..seqs.len() {
            for pos in 0..=seqs[ei].len() {
                seqs[ei].insert(pos, label);
                place(kernel, vk, k, next + 1, seqs, found);
                seqs[ei].remove(pos);
            }
        }
    }

    fn subdivide_simple(kernel: &MultiGraph, seqs: &[Vec<Vertex>]) -> Option<Graph> {
        let n = kernel.n() + seqs.iter().map(|s| s.len()).sum::<usize>();
        let mut edges = Vec::new();
        for (id, &(u, v)) in kernel.edges().iter().enumerate() {
            let mut prev = u;
            for &w in &seqs[id] {
                edges.push((prev, w));
                prev = w;
            }
            if prev == v {
                return None; // loop left intact or subdivided once
            }
            edges.push((prev, v));
        }
        let mut norm: Vec<(Vertex, Vertex)> = edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) || norm.iter().any(|&(a, b)| a == b) {
            return None;
        }
        Some(Graph::new(n, norm).expect("checked simple"))
    }
}

/// All planar graphs on `1..=n <= 5` with `m` edges. Up to five vertices the
/// only non-planar graph is the complete graph on five vertices, so this
/// stays independent of the production planarity test.
pub fn all_planar_small(n: usize, m: usize) -> Vec<Graph> {
    assert!(n <= 5, "exact small-class enumeration is defined for n <= 5");
    let mut out = all_gnm(n, m);
    if n == 5 && m == 10 {
        out.clear();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnm_counts() {
        assert_eq!(all_gnm(4, 2).len(), 15);
        assert_eq!(all_gnm(4, 0).len(), 1);
        assert_eq!(all_gnm(4, 6).len(), 1);
        assert_eq!(all_gnm(5, 3).len(), 120);
    }

    #[test]
    fn cayley_counts() {
        assert_eq!(all_trees(2).len(), 1);
        assert_eq!(all_trees(3).len(), 3);
        assert_eq!(all_trees(4).len(), 16);
        assert_eq!(all_trees(5).len(), 125);
    }

    #[test]
    fn forest_counts() {
        // t * n^(n-t-1)
        assert_eq!(all_forests(4, 2).len(), 8);
        assert_eq!(all_forests(4, 3).len(), 3);
        assert_eq!(all_forests(5, 2).len(), 50);
        assert_eq!(all_forests(5, 3).len(), 15);
        assert_eq!(all_forests(6, 4).len(), 24);
        assert_eq!(all_forests(3, 3).len(), 1);
    }

    #[test]
    fn noncomplex_counts() {
        // every 4-vertex 4-edge graph is unicyclic or less
        assert_eq!(all_noncomplex(4, 4).len(), 15);
        // 4 vertices, 5 edges always carries excess >= 1 somewhere
        assert_eq!(all_noncomplex(4, 5).len(), 0);
    }

    #[test]
    fn complexpart_counts() {
        let k4 = Graph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(all_complexparts(&k4, 6).len(), 24);
        assert_eq!(all_complexparts(&k4, 4).len(), 1);
    }

    #[test]
    fn core_counts() {
        let theta = MultiGraph::new(2, vec![(1, 2), (1, 2), (1, 2)]).unwrap();
        // k = 2: one labelled core
        assert_eq!(all_cores_with_kernel(&theta, 2).len(), 1);
        // k = 0 or 1 cannot make three parallel edges simple
        assert_eq!(all_cores_with_kernel(&theta, 0).len(), 0);
        assert_eq!(all_cores_with_kernel(&theta, 1).len(), 0);
        let k4 = MultiGraph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(all_cores_with_kernel(&k4, 0).len(), 1);
        // one extra vertex on any of 6 edges
        assert_eq!(all_cores_with_kernel(&k4, 1).len(), 6);
    }

    #[test]
    fn planar_small() {
        assert_eq!(all_planar_small(4, 3).len(), 20);
        assert_eq!(all_planar_small(5, 10).len(), 0);
        assert_eq!(all_planar_small(5, 9).len(), 10);
    }
}
