//! Seeded exact samplers: uniform labelled trees (Prüfer), rooted forests
//! (weighted Prüfer with a super-root), Galton-Watson balls and total
//! progeny, Skeleton-tree balls with k rays, G(n,m), graphs without complex
//! components (rejection), random complex parts over a fixed core, random
//! cores over a fixed kernel (sequential gap insertion), and uniform planar
//! graphs by rejection or an edge-swap chain.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::decompose;
use crate::graph::{Graph, MultiGraph, RootedBall, Vertex};
use crate::limits::PlaneTree;
use crate::rng::RngState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("sampling budget exhausted after {tries} tries")]
    BudgetExhausted { tries: u64 },
    #[error("the target class is empty: {0}")]
    EmptyClass(String),
}

/// Uniform labelled tree on `1..=n` via a uniform Prüfer sequence.
pub fn sample_cayley_tree(n: usize, rng: &mut RngState) -> Result<Graph, SampleError> {
    if n == 0 {
        return Err(SampleError::Contract("tree needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(Graph::empty(1));
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let edges = prufer_decode(n, &seq);
    Ok(Graph::new(n, edges.into_iter().map(|(u, v)| (u + 1, v + 1)).collect())
        .expect("Prüfer decode yields a tree"))
}

/// Decodes a Prüfer sequence over ids `0..n` into tree edges (0-based).
fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len(), n - 2);
    let mut deg = vec![1usize; n];
    for &s in seq {
        deg[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // pointer-based decode: `ptr` scans for the smallest leaf once
    let mut ptr = 0;
    while deg[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &s in seq {
        edges.push((leaf, s));
        deg[s] -= 1;
        if deg[s] == 1 && s < ptr {
            leaf = s;
        } else {
            ptr += 1;
            while deg[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// A forest on `1..=n` whose components are rooted at the labels `1..=t`,
/// each root in its own component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedForest {
    pub graph: Graph,
    pub roots: usize,
}

impl RootedForest {
    /// The component containing `v` together with its root label in `1..=t`.
    pub fn component_of(&self, v: Vertex) -> (Vec<Vertex>, Vertex) {
        let comp: Vec<Vertex> = self
            .graph
            .components()
            .into_iter()
            .find(|c| c.binary_search(&v).is_ok())
            .expect("v is in some component");
        let root = *comp.iter().find(|&&x| x <= self.roots).expect("one root per component");
        (comp, root)
    }
}

/// Uniform rooted forest over all `t * n^(n-t-1)` forests with roots
/// `1..=t`.
///
/// A Prüfer sequence of length `n-t-1` is drawn over a super-root (weight t)
/// and the non-root labels (weight 1 each), decoded to a tree on the merged
/// vertex set, and each super-root edge is assigned an independent uniform
/// root. The weighting makes every (tree, assignment) pair equally likely,
/// and the pairs biject with rooted forests.
pub fn sample_forest(n: usize, t: usize, rng: &mut RngState) -> Result<RootedForest, SampleError> {
    if t < 1 || t > n {
        return Err(SampleError::Contract(format!(
            "forest needs 1 <= t <= n, got t={t}, n={n}"
        )));
    }
    if t == n {
        return Ok(RootedForest {
            graph: Graph::empty(n),
            roots: t,
        });
    }
    // merged vertex ids: 0 = super-root, j >= 1 = label t + j
    let v = n - t + 1;
    let seq: Vec<usize> = (0..v.saturating_sub(2))
        .map(|_| {
            let x = rng.gen_range(0..n);
            if x < t {
                0
            } else {
                x - t + 1
            }
        })
        .collect();
    let merged = prufer_decode(v, &seq);
    let mut edges = Vec::with_capacity(n - t);
    for (a, b) in merged {
        let (star, other) = if a == 0 {
            (true, b)
        } else if b == 0 {
            (true, a)
        } else {
            (false, a)
        };
        if star {
            let root = rng.gen_range(1..=t);
            edges.push((root, other + t));
        } else {
            edges.push((a + t, b + t));
        }
    }
    let graph = Graph::new(n, edges).expect("forest edges are simple");
    let forest = RootedForest { graph, roots: t };
    assert_forest_shape(&forest, n, t);
    Ok(forest)
}

/// Postcondition check run on every draw: acyclic, exactly t components,
/// roots pairwise separated.
fn assert_forest_shape(f: &RootedForest, n: usize, t: usize) {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for &(u, v) in f.graph.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        assert!(ru != rv, "forest sampler produced a cycle");
        parent[ru] = rv;
        comps -= 1;
    }
    assert_eq!(comps, t, "forest sampler produced {comps} components, expected {t}");
    let mut root_reps: Vec<usize> = (1..=t).map(|r| find(&mut parent, r)).collect();
    root_reps.sort_unstable();
    root_reps.dedup();
    assert_eq!(root_reps.len(), t, "two roots share a component");
}

/// Knuth's product-of-uniforms Poisson sampler; exact, and fast for the
/// small means (c <= 2) used throughout.
pub(crate) struct PoissonGen {
    threshold: f64,
}

impl PoissonGen {
    pub(crate) fn new(c: f64) -> Self {
        assert!(c >= 0.0);
        PoissonGen {
            threshold: (-c).exp(),
        }
    }

    pub(crate) fn draw(&self, rng: &mut RngState) -> usize {
        if self.threshold >= 1.0 {
            return 0;
        }
        let mut k = 0usize;
        let mut p = 1.0f64;
        loop {
            p *= rng.gen::<f64>();
            if p <= self.threshold {
                return k;
            }
            k += 1;
        }
    }
}

/// The first `radius` generations of a Galton-Watson tree with Poisson(c)
/// offspring, generated breadth-first as a plane tree.
pub fn sample_gw_ball(c: f64, radius: usize, rng: &mut RngState) -> PlaneTree {
    assert!(c >= 0.0);
    if radius == 0 {
        return PlaneTree::single_root(0);
    }
    let gen = PoissonGen::new(c);
    let mut counts = Vec::new();
    let mut level = 1usize;
    for _ in 0..radius {
        if level == 0 {
            break;
        }
        let mut next = 0usize;
        for _ in 0..level {
            let d = gen.draw(rng);
            counts.push(d);
            next += d;
        }
        level = next;
    }
    PlaneTree::new(radius, counts).expect("branching process emits a consistent plane tree")
}

/// Total progeny of a (sub)critical Galton-Watson tree, or `Capped` when the
/// population exceeds `cap` before extinction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwTotal {
    Size(u64),
    Capped,
}

pub fn sample_gw_total(c: f64, cap: u64, rng: &mut RngState) -> Result<GwTotal, SampleError> {
    if !(0.0..=1.0).contains(&c) {
        return Err(SampleError::Contract(format!(
            "total progeny needs 0 <= c <= 1 (survival would bias the cap), got {c}"
        )));
    }
    if cap < 1 {
        return Err(SampleError::Contract("cap must be at least 1".into()));
    }
    let gen = PoissonGen::new(c);
    let mut total: u64 = 1;
    let mut open: u64 = 1;
    while open > 0 {
        let d = gen.draw(rng) as u64;
        open += d;
        open -= 1;
        total += d;
        if total > cap {
            return Ok(GwTotal::Capped);
        }
    }
    Ok(GwTotal::Size(total))
}

/// Radius-`radius` ball at the root of the Skeleton tree with `k` rays: `k`
/// rays of length `radius`, an independent Poisson(1) Galton-Watson tree
/// truncated at the remaining depth hanging off the root and every ray
/// vertex.
pub fn sample_skeleton_ball(k: usize, radius: usize, rng: &mut RngState) -> RootedBall {
    let gen = PoissonGen::new(1.0);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next_id = 1usize; // vertex labels, root = 1
    let attach_gw = |at: usize, depth_budget: usize,
                     edges: &mut Vec<(usize, usize)>,
                     next_id: &mut usize,
                     rng: &mut RngState| {
        let mut frontier = vec![(at, depth_budget)];
        while let Some((v, budget)) = frontier.pop() {
            if budget == 0 {
                continue;
            }
            let d = gen.draw(rng);
            for _ in 0..d {
                *next_id += 1;
                let w = *next_id;
                edges.push((v, w));
                frontier.push((w, budget - 1));
            }
        }
    };
    attach_gw(1, radius, &mut edges, &mut next_id, rng);
    for _ in 0..k {
        let mut prev = 1usize;
        for j in 1..=radius {
            next_id += 1;
            let w = next_id;
            edges.push((prev, w));
            attach_gw(w, radius - j, &mut edges, &mut next_id, rng);
            prev = w;
        }
    }
    let g = Graph::new(next_id, edges).expect("skeleton ball construction is simple");
    g.ball(1, radius)
}

fn pair_count(n: usize) -> u64 {
    (n as u64) * (n as u64 - 1) / 2
}

/// Lexicographic index -> unordered pair over `1..=n`.
fn unrank_pair(n: usize, idx: u64) -> (Vertex, Vertex) {
    // offset(u) = number of pairs with first endpoint < u
    let offset = |u: u64| (u - 1) * (n as u64) - u * (u - 1) / 2;
    let (mut lo, mut hi) = (1u64, n as u64 - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if offset(mid) <= idx {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let u = lo;
    let v = u + 1 + (idx - offset(u));
    (u as Vertex, v as Vertex)
}

/// Uniform graph with `m` edges via a partial Fisher-Yates shuffle of the
/// edge universe.
pub fn sample_gnm(n: usize, m: usize, rng: &mut RngState) -> Result<Graph, SampleError> {
    let max = pair_count(n);
    if m as u64 > max {
        return Err(SampleError::Contract(format!(
            "m = {m} exceeds the {max} possible edges on {n} vertices"
        )));
    }
    let mut perm: HashMap<u64, u64> = HashMap::with_capacity(2 * m);
    let mut edges = Vec::with_capacity(m);
    for i in 0..m as u64 {
        let j = rng.gen_range(i..max);
        let vi = *perm.get(&i).unwrap_or(&i);
        let vj = *perm.get(&j).unwrap_or(&j);
        perm.insert(j, vi);
        perm.insert(i, vj);
        edges.push(unrank_pair(n, vj));
    }
    Ok(Graph::new(n, edges).expect("distinct pair indices give a simple graph"))
}

/// Uniform graph without complex components, by rejection from G(n,m).
pub fn sample_noncomplex(
    n: usize,
    m: usize,
    max_tries: u64,
    rng: &mut RngState,
) -> Result<Graph, SampleError> {
    if n < 1 {
        return Err(SampleError::Contract("need n >= 1".into()));
    }
    for _ in 0..max_tries {
        let g = sample_gnm(n, m, rng)?;
        if !decompose::has_complex_component(&g) {
            return Ok(g);
        }
    }
    Err(SampleError::BudgetExhausted { tries: max_tries })
}

/// Uniform complex graph on `1..=q` whose core is `core` placed on the
/// labels `1..=v(core)`: a rooted forest F(q, v(core)) is drawn and its
/// component rooted at i is grafted onto core vertex i.
pub fn sample_complexpart(core: &Graph, q: usize, rng: &mut RngState) -> Result<Graph, SampleError> {
    let vc = core.n();
    if vc > q {
        return Err(SampleError::Contract(format!(
            "core has {vc} vertices > q = {q}"
        )));
    }
    for v in 1..=vc {
        if core.degree(v) < 2 {
            return Err(SampleError::Contract(format!(
                "core vertex {v} has degree {} < 2",
                core.degree(v)
            )));
        }
    }
    let sub = crate::decompose::LabelledSubgraph::from_graph(core);
    for (comp, e) in sub.components() {
        if e < comp.len() + 1 {
            return Err(SampleError::Contract(
                "core has a component with fewer than two independent cycles".into(),
            ));
        }
    }
    let forest = sample_forest(q, vc, rng)?;
    let mut edges: Vec<(Vertex, Vertex)> = core.edges().to_vec();
    edges.extend_from_slice(forest.graph.edges());
    Ok(Graph::new(q, edges).expect("forest edges avoid the core edges"))
}

/// Uniform core with kernel `kernel` on `v(kernel) + extra` vertices.
///
/// The `extra` labelled subdivision vertices are assigned to kernel edges as
/// ordered sequences by sequential uniform gap insertion (vertex i goes into
/// one of `e(K) + i - 1` gaps); outcomes whose subdivided graph is not simple
/// are rejected. Kernel vertex j keeps label j; subdivision vertex i gets
/// label `v(kernel) + i`.
pub fn sample_core_given_kernel(
    kernel: &MultiGraph,
    extra: usize,
    max_tries: u64,
    rng: &mut RngState,
) -> Result<Graph, SampleError> {
    if kernel.n() == 0 || kernel.m() == 0 {
        return Err(SampleError::Contract("kernel must be non-empty".into()));
    }
    if kernel.min_degree() < 3 {
        return Err(SampleError::Contract(format!(
            "kernel min degree {} < 3 (loops count two)",
            kernel.min_degree()
        )));
    }
    let e = kernel.m();
    let vk = kernel.n();
    for _ in 0..max_tries {
        // sequences of subdivision labels per kernel edge
        let mut seqs: Vec<Vec<Vertex>> = vec![Vec::new(); e];
        for i in 0..extra {
            let label = vk + i + 1;
            let mut gap = rng.gen_range(0..(e + i) as u64) as usize;
            for seq in seqs.iter_mut() {
                if gap <= seq.len() {
                    seq.insert(gap, label);
                    break;
                }
                gap -= seq.len() + 1;
            }
        }
        if let Some(g) = subdivide_if_simple(kernel, &seqs) {
            return Ok(g);
        }
    }
    Err(SampleError::BudgetExhausted { tries: max_tries })
}

/// Builds the subdivided graph, or `None` when it would have a loop or a
/// parallel pair (a loop subdivided fewer than twice, or a parallel class
/// with two unsubdivided members).
fn subdivide_if_simple(kernel: &MultiGraph, seqs: &[Vec<Vertex>]) -> Option<Graph> {
    let n = kernel.n() + seqs.iter().map(|s| s.len()).sum::<usize>();
    let mut edges = Vec::with_capacity(kernel.m() + 2 * seqs.iter().map(|s| s.len()).sum::<usize>());
    for (id, &(u, v)) in kernel.edges().iter().enumerate() {
        let seq = &seqs[id];
        if seq.is_empty() && u == v {
            return None; // unsubdivided loop
        }
        let mut prev = u;
        for &w in seq {
            edges.push((prev.min(w), prev.max(w)));
            prev = w;
        }
        if prev == v {
            return None; // loop subdivided once: parallel pair
        }
        edges.push((prev.min(v), prev.max(v)));
    }
    edges.sort_unstable();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return None; // two parallel kernel edges both unsubdivided
    }
    Some(Graph::new(n, edges).expect("checked simple"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanarMethod {
    /// Exact: G(n,m) conditioned on planarity.
    Rejection,
    /// Approximate edge-swap chain; see [`PlanarChain`].
    Mcmc,
}

#[derive(Debug, Clone)]
pub struct PlanarSample {
    pub graph: Graph,
    /// True for chain output: the stationary law is uniform but mixing is
    /// not proven, so treat it as diagnostic-grade.
    pub approximate: bool,
}

/// Largest edge count a planar graph on n vertices can have.
pub fn max_planar_edges(n: usize) -> u64 {
    match n {
        0 => 0,
        1 => 0,
        2 => 1,
        _ => 3 * n as u64 - 6,
    }
}

/// Uniform (rejection) or approximate (edge-swap chain) planar graph with m
/// edges. `budget` counts rejection tries or chain proposals.
pub fn sample_planar(
    n: usize,
    m: usize,
    method: PlanarMethod,
    budget: u64,
    rng: &mut RngState,
) -> Result<PlanarSample, SampleError> {
    if m as u64 > pair_count(n) {
        return Err(SampleError::Contract(format!(
            "m = {m} exceeds the {} possible edges",
            pair_count(n)
        )));
    }
    if m as u64 > max_planar_edges(n) {
        return Err(SampleError::EmptyClass(format!(
            "no planar graph on {n} vertices has {m} edges"
        )));
    }
    match method {
        PlanarMethod::Rejection => {
            for _ in 0..budget {
                let g = sample_gnm(n, m, rng)?;
                if g.is_planar() {
                    return Ok(PlanarSample {
                        graph: g,
                        approximate: false,
                    });
                }
            }
            Err(SampleError::BudgetExhausted { tries: budget })
        }
        PlanarMethod::Mcmc => {
            let mut chain = PlanarChain::new(n, m)?;
            for _ in 0..budget {
                chain.step(rng);
            }
            Ok(PlanarSample {
                graph: chain.graph(),
                approximate: true,
            })
        }
    }
}

/// Edge-swap Markov chain on planar graphs with a fixed edge count: propose
/// removing a uniform edge and adding a uniform non-edge, accept iff the
/// result stays planar. The proposal is symmetric, so the uniform law is
/// stationary; irreducibility is unproven, which keeps this diagnostic-grade.
pub struct PlanarChain {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    // reusable scratch for the per-proposal planarity check
    stamp: Vec<u64>,
    dead: Vec<u64>,
    idx: Vec<u32>,
    deg: Vec<u32>,
    comp: Vec<Vertex>,
    queue: Vec<Vertex>,
    tick: u64,
}

impl PlanarChain {
    /// Starts from a deterministic planar graph: the first m edges of a
    /// double-fan triangulation (every prefix of a planar graph is planar).
    pub fn new(n: usize, m: usize) -> Result<Self, SampleError> {
        if m as u64 > max_planar_edges(n) {
            return Err(SampleError::EmptyClass(format!(
                "no planar graph on {n} vertices has {m} edges"
            )));
        }
        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(3 * n);
        for i in 2..=n {
            edges.push((1, i));
        }
        for i in 3..=n {
            edges.push((2, i));
        }
        for i in 3..n {
            edges.push((i, i + 1));
        }
        edges.truncate(m);
        let mut adj = vec![Vec::new(); n + 1];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(PlanarChain {
            n,
            edges,
            adj,
            stamp: vec![0; n + 1],
            dead: vec![0; n + 1],
            idx: vec![0; n + 1],
            deg: vec![0; n + 1],
            comp: Vec::with_capacity(n),
            queue: Vec::with_capacity(n),
            tick: 0,
        })
    }

    pub fn graph(&self) -> Graph {
        Graph::new(self.n, self.edges.clone()).expect("chain state is simple")
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(&v)
    }

    fn remove_adj(&mut self, u: Vertex, v: Vertex) {
        let pos = self.adj[u].iter().position(|&x| x == v).expect("edge present");
        self.adj[u].swap_remove(pos);
        let pos = self.adj[v].iter().position(|&x| x == u).expect("edge present");
        self.adj[v].swap_remove(pos);
    }

    /// One proposal; returns whether it was accepted.
    pub fn step(&mut self, rng: &mut RngState) -> bool {
        if self.edges.is_empty() || self.edges.len() as u64 == pair_count(self.n) {
            return false; // nothing to swap
        }
        let ei = rng.gen_range(0..self.edges.len());
        let old = self.edges[ei];
        // uniform non-edge by rejection over the pair universe
        let new = loop {
            let idx = rng.gen_range(0..pair_count(self.n));
            let (u, v) = unrank_pair(self.n, idx);
            if !self.has_edge(u, v) {
                break (u, v);
            }
        };
        // tentatively apply
        self.remove_adj(old.0, old.1);
        self.adj[new.0].push(new.1);
        self.adj[new.1].push(new.0);
        if self.component_planar(new.0) {
            self.edges[ei] = new;
            true
        } else {
            self.remove_adj(new.0, new.1);
            self.adj[old.0].push(old.1);
            self.adj[old.1].push(old.0);
            false
        }
    }

    /// Planarity of the component containing `v` only; other components are
    /// untouched by a swap and were planar before. Pendant trees are pruned
    /// first (they never affect planarity) and components with cycle-space
    /// dimension at most two are planar outright, so the left-right test
    /// runs only on small 2-cores.
    fn component_planar(&mut self, v: Vertex) -> bool {
        self.tick += 1;
        let tick = self.tick;
        self.comp.clear();
        self.comp.push(v);
        self.stamp[v] = tick;
        let mut head = 0;
        while head < self.comp.len() {
            let x = self.comp[head];
            head += 1;
            for &y in &self.adj[x] {
                if self.stamp[y] != tick {
                    self.stamp[y] = tick;
                    self.comp.push(y);
                }
            }
        }
        let e2: usize = self.comp.iter().map(|&x| self.adj[x].len()).sum();
        let e = e2 / 2;
        // excess <= 2: no subgraph can reach the excess of a K3,3 (3) or K5
        // (5) subdivision, so the component is planar outright
        if e <= self.comp.len() + 2 {
            return true;
        }
        // 2-core by iterated leaf removal, stamped as dead
        self.queue.clear();
        for &x in &self.comp {
            self.deg[x] = self.adj[x].len() as u32;
            if self.deg[x] <= 1 {
                self.queue.push(x);
            }
        }
        while let Some(x) = self.queue.pop() {
            if self.dead[x] == tick || self.deg[x] > 1 {
                continue;
            }
            self.dead[x] = tick;
            for &y in &self.adj[x] {
                if self.dead[y] != tick {
                    self.deg[y] -= 1;
                    if self.deg[y] <= 1 {
                        self.queue.push(y);
                    }
                }
            }
        }
        let mut core_size = 0u32;
        for &x in &self.comp {
            if self.dead[x] != tick {
                core_size += 1;
                self.idx[x] = core_size;
            }
        }
        if core_size == 0 {
            return true;
        }
        let mut edges = Vec::with_capacity(e);
        for &x in &self.comp {
            if self.dead[x] == tick {
                continue;
            }
            for &y in &self.adj[x] {
                if self.dead[y] != tick && self.idx[x] < self.idx[y] {
                    edges.push((self.idx[x] as Vertex, self.idx[y] as Vertex));
                }
            }
        }
        Graph::new(core_size as usize, edges)
            .expect("2-core is simple")
            .is_planar()
    }
}
