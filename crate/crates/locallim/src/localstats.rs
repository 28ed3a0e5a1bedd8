//! Canonical codes for rooted balls, plane-tree codes, the vertex census,
//! root policies, empirical ball distributions, and total-variation distance.
//!
//! Two encodings coexist on purpose. Plane codes keep the label-order of
//! children and feed the census; ball codes are canonical up to
//! root-preserving isomorphism (AHU form for trees, a minimal canonical
//! serialization with degree/depth refinement for the rare non-tree balls)
//! and feed the limit comparisons.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose;
use crate::graph::{BallScanner, Graph, RootedBall, Vertex};
use crate::limits::{LimitDist, PlaneTree};
use crate::rng::RngState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("ball has {size} vertices, over the {limit}-vertex code limit")]
    Oversize { size: usize, limit: usize },
    #[error("ball contains a cycle; plane codes need a tree")]
    NotATree,
    #[error("empty distribution: all {skipped} samples were skipped")]
    EmptyDistribution { skipped: u64 },
    #[error("total-variation distance needs a non-empty distribution")]
    ZeroTotal,
}

/// Largest ball for which exact canonical codes are computed.
pub const CODE_SIZE_LIMIT: usize = 64;

const TAG_TREE: u8 = b'T';
const TAG_GENERAL: u8 = b'G';
const TAG_OVERSIZE: u8 = b'O';

/// Canonical byte string for a rooted graph up to root-preserving
/// isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BallCode(Vec<u8>);

impl BallCode {
    pub fn is_tree(&self) -> bool {
        self.0.first() == Some(&TAG_TREE)
    }

    /// Bucket code for balls over the size limit.
    pub fn oversize() -> Self {
        BallCode(vec![TAG_OVERSIZE])
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }
}

/// AHU canonical form of a rooted tree given children lists (0-based ids).
/// Children orderings do not matter; subtree codes are sorted.
pub fn ahu_code_from_children(children: &[Vec<usize>], root: usize) -> BallCode {
    fn enc(v: usize, children: &[Vec<usize>], out: &mut Vec<u8>) {
        let mut subs: Vec<Vec<u8>> = children[v]
            .iter()
            .map(|&c| {
                let mut s = Vec::new();
                enc(c, children, &mut s);
                s
            })
            .collect();
        subs.sort_unstable();
        out.push(b'(');
        for s in subs {
            out.extend_from_slice(&s);
        }
        out.push(b')');
    }
    let mut bytes = vec![TAG_TREE];
    enc(root, children, &mut bytes);
    BallCode(bytes)
}

/// Canonical code of a rooted ball; exact up to root-preserving isomorphism.
pub fn ball_code(b: &RootedBall) -> Result<BallCode, StatsError> {
    ball_code_with_limit(b, CODE_SIZE_LIMIT)
}

pub fn ball_code_with_limit(b: &RootedBall, limit: usize) -> Result<BallCode, StatsError> {
    if b.size() > limit {
        return Err(StatsError::Oversize {
            size: b.size(),
            limit,
        });
    }
    Ok(ball_code_unbounded(b))
}

/// As [`ball_code`] but without the size guard (used for references whose
/// balls are grown rather than extracted).
pub fn ball_code_unbounded(b: &RootedBall) -> BallCode {
    if b.is_tree() {
        let n = b.size();
        let adj = b.graph.adjacency();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 1..=n {
            for &w in &adj[v] {
                if b.depth[w] == b.depth[v] + 1 {
                    children[v - 1].push(w - 1);
                }
            }
        }
        ahu_code_from_children(&children, 0)
    } else {
        canonical_general(b)
    }
}

/// Minimal adjacency serialization over root-preserving orderings compatible
/// with an iterated (depth, degree) colour refinement. The refinement only
/// restricts candidate positions, never merges distinguishable vertices, so
/// equal codes coincide exactly with root-preserving isomorphism.
fn canonical_general(b: &RootedBall) -> BallCode {
    let n = b.size();
    let adj = b.graph.adjacency();
    // colour refinement; initial colour (depth, degree), root first
    let mut colors: Vec<u64> = vec![0; n + 1];
    {
        let mut keys: Vec<(usize, usize)> = (1..=n).map(|v| (b.depth[v], adj[v].len())).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        sorted.dedup();
        for v in 1..=n {
            colors[v] = sorted.binary_search(&keys[v - 1]).unwrap() as u64;
        }
        keys.clear();
        loop {
            let mut sig: Vec<(u64, Vec<u64>)> = Vec::with_capacity(n);
            for v in 1..=n {
                let mut nb: Vec<u64> = adj[v].iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                sig.push((colors[v], nb));
            }
            let mut uniq = sig.clone();
            uniq.sort_unstable();
            uniq.dedup();
            let mut next = vec![0u64; n + 1];
            for v in 1..=n {
                next[v] = uniq.binary_search(&sig[v - 1]).unwrap() as u64;
            }
            if next == colors {
                break;
            }
            colors = next;
        }
    }
    // order = colour blocks ascending; root is alone at depth 0 so its block
    // comes first automatically
    let mut best: Option<Vec<u8>> = None;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    let mut rows: Vec<u8> = Vec::new();
    search(
        n, adj, &colors, &mut order, &mut used, &mut rows, &mut best,
    );

    fn search(
        n: usize,
        adj: &[Vec<Vertex>],
        colors: &[u64],
        order: &mut Vec<usize>,
        used: &mut Vec<bool>,
        rows: &mut Vec<u8>,
        best: &mut Option<Vec<u8>>,
    ) {
        if order.len() == n {
            if best.as_ref().is_none_or(|b| rows[..] < b[..]) {
                *best = Some(rows.clone());
            }
            return;
        }
        // next colour class: smallest colour among unused vertices
        let color = (1..=n)
            .filter(|&v| !used[v])
            .map(|v| colors[v])
            .min()
            .unwrap();
        let row_len = order.len().div_ceil(8).max(1);
        for v in 1..=n {
            if used[v] || colors[v] != color {
                continue;
            }
            // row bits of v against already-placed vertices
            let mut row = vec![0u8; row_len];
            for (j, &w) in order.iter().enumerate() {
                if adj[v].contains(&w) {
                    row[j / 8] |= 1 << (j % 8);
                }
            }
            let pos = rows.len();
            rows.extend_from_slice(&row);
            // prune: compare against the best prefix
            let keep = match best {
                Some(b) => rows[..] <= b[..rows.len().min(b.len())],
                None => true,
            };
            if keep {
                used[v] = true;
                order.push(v);
                search(n, adj, colors, order, used, rows, best);
                order.pop();
                used[v] = false;
            }
            rows.truncate(pos);
        }
    }

    let mut bytes = vec![TAG_GENERAL, n as u8];
    bytes.extend_from_slice(&best.expect("search places all vertices"));
    BallCode(bytes)
}

/// Plane code of a tree ball: BFS child counts with children visited in
/// ascending original-label order; counts recorded for vertices at depth
/// strictly inside the radius.
pub fn plane_code(b: &RootedBall) -> Result<PlaneTree, StatsError> {
    if !b.is_tree() {
        return Err(StatsError::NotATree);
    }
    let adj = b.graph.adjacency();
    let mut counts = Vec::new();
    let mut queue = vec![b.root];
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        if b.depth[v] == b.radius {
            continue; // boundary vertex: children unrecorded
        }
        let mut kids: Vec<Vertex> = adj[v]
            .iter()
            .copied()
            .filter(|&w| b.depth[w] == b.depth[v] + 1)
            .collect();
        kids.sort_unstable_by_key(|&w| b.orig[w]);
        counts.push(kids.len());
        queue.extend_from_slice(&kids);
    }
    Ok(PlaneTree::new(b.radius, counts).expect("ball BFS emits a consistent plane tree"))
}

/// Number of vertices whose radius-`radius` ball is a tree with plane code
/// equal to `t`.
pub fn census(g: &Graph, radius: usize, t: &PlaneTree) -> usize {
    if t.radius() != radius {
        return 0;
    }
    let mut scanner = BallScanner::new(g.n());
    let mut count = 0;
    for v in 1..=g.n() {
        let ball = scanner.ball(g, v, radius);
        if !ball.is_tree() {
            continue;
        }
        if plane_code(&ball).expect("tree ball") == *t {
            count += 1;
        }
    }
    count
}

/// Plane-code counts of every vertex's ball in one pass; non-tree balls are
/// tallied separately.
pub fn census_all(g: &Graph, radius: usize) -> (BTreeMap<PlaneTree, usize>, usize) {
    let mut scanner = BallScanner::new(g.n());
    let mut counts: BTreeMap<PlaneTree, usize> = BTreeMap::new();
    let mut non_tree = 0usize;
    for v in 1..=g.n() {
        let ball = scanner.ball(g, v, radius);
        if !ball.is_tree() {
            non_tree += 1;
            continue;
        }
        *counts.entry(plane_code(&ball).expect("tree ball")).or_insert(0) += 1;
    }
    (counts, non_tree)
}

/// Which vertex set the root is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootPolicy {
    Uniform,
    LargestComponent,
    Rest,
    ComplexPart,
    NonComplexPart,
    Core,
    Kernel,
}

impl RootPolicy {
    pub const ALL: [RootPolicy; 7] = [
        RootPolicy::Uniform,
        RootPolicy::LargestComponent,
        RootPolicy::Rest,
        RootPolicy::ComplexPart,
        RootPolicy::NonComplexPart,
        RootPolicy::Core,
        RootPolicy::Kernel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RootPolicy::Uniform => "uniform",
            RootPolicy::LargestComponent => "largest-component",
            RootPolicy::Rest => "rest",
            RootPolicy::ComplexPart => "complex-part",
            RootPolicy::NonComplexPart => "non-complex-part",
            RootPolicy::Core => "core",
            RootPolicy::Kernel => "kernel",
        }
    }

    pub fn parse(s: &str) -> Option<RootPolicy> {
        Self::ALL.iter().copied().find(|p| p.name() == s)
    }

    /// The target vertex set (original labels, sorted). May be empty; the
    /// caller decides whether that is a skip or an error.
    pub fn targets(&self, g: &Graph) -> Vec<Vertex> {
        match self {
            RootPolicy::Uniform => (1..=g.n()).collect(),
            RootPolicy::LargestComponent => {
                if g.n() == 0 {
                    Vec::new()
                } else {
                    g.largest_component()
                }
            }
            RootPolicy::Rest => {
                if g.n() == 0 {
                    return Vec::new();
                }
                let largest: std::collections::BTreeSet<Vertex> =
                    g.largest_component().into_iter().collect();
                (1..=g.n()).filter(|v| !largest.contains(v)).collect()
            }
            RootPolicy::ComplexPart => decompose::split_complex(g).0.vertices,
            RootPolicy::NonComplexPart => decompose::split_complex(g).1.vertices,
            RootPolicy::Core => {
                let (q, _) = decompose::split_complex(g);
                if q.v() == 0 {
                    Vec::new()
                } else {
                    decompose::core_of(&q).expect("complex part is complex").vertices
                }
            }
            RootPolicy::Kernel => {
                let (q, _) = decompose::split_complex(g);
                if q.v() == 0 {
                    return Vec::new();
                }
                let core = decompose::core_of(&q).expect("complex part is complex");
                let (_, map, _, _) = decompose::kernel_of(&core).expect("core has a kernel");
                let mut v = map[1..].to_vec();
                v.sort_unstable();
                v
            }
        }
    }
}

/// Sampler/parameter provenance of an empirical distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub sampler: String,
    pub params: String,
    pub seed: u64,
    pub policy: String,
    pub radius: usize,
}

/// Observed ball-code counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDist {
    counts: BTreeMap<BallCode, u64>,
    total: u64,
    skipped: u64,
    pub provenance: Provenance,
}

pub enum RecordOutcome {
    Recorded,
    Skipped,
}

impl EmpiricalDist {
    pub fn new(provenance: Provenance) -> Self {
        EmpiricalDist {
            counts: BTreeMap::new(),
            total: 0,
            skipped: 0,
            provenance,
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    pub fn counts(&self) -> &BTreeMap<BallCode, u64> {
        &self.counts
    }

    pub fn freq(&self, code: &BallCode) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        *self.counts.get(code).unwrap_or(&0) as f64 / self.total as f64
    }

    /// Draw one root uniformly from the policy target set and record its ball
    /// code; empty target sets are tallied as skips, oversize balls bucketed.
    pub fn record(
        &mut self,
        g: &Graph,
        policy: RootPolicy,
        radius: usize,
        rng: &mut RngState,
    ) -> RecordOutcome {
        use rand::Rng;
        let targets = policy.targets(g);
        if targets.is_empty() {
            self.skipped += 1;
            return RecordOutcome::Skipped;
        }
        let root = targets[rng.gen_range(0..targets.len())];
        debug_assert!(targets.contains(&root));
        let ball = g.ball(root, radius);
        let code = ball_code(&ball).unwrap_or_else(|_| BallCode::oversize());
        *self.counts.entry(code).or_insert(0) += 1;
        self.total += 1;
        RecordOutcome::Recorded
    }

    /// Record the ball code of every vertex in the policy target set (the
    /// exhaustive-root pooling used when few samples carry many vertices).
    pub fn record_all_roots(&mut self, g: &Graph, policy: RootPolicy, radius: usize) -> usize {
        let targets = policy.targets(g);
        if targets.is_empty() {
            self.skipped += 1;
            return 0;
        }
        let mut scanner = BallScanner::new(g.n());
        for &root in &targets {
            let ball = scanner.ball(g, root, radius);
            let code = ball_code(&ball).unwrap_or_else(|_| BallCode::oversize());
            *self.counts.entry(code).or_insert(0) += 1;
            self.total += 1;
        }
        targets.len()
    }

    /// Order-insensitive merge.
    pub fn merge(&mut self, other: &EmpiricalDist) {
        for (code, k) in &other.counts {
            *self.counts.entry(code.clone()).or_insert(0) += k;
        }
        self.total += other.total;
        self.skipped += other.skipped;
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut entries: Vec<(&BallCode, u64)> = self.counts.iter().map(|(c, &k)| (c, k)).collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        serde_json::json!({
            "origin": {"Empirical": {"provenance": self.provenance}},
            "leftover": 0.0,
            "total": self.total,
            "skipped": self.skipped,
            "entries": entries
                .iter()
                .map(|(c, k)| serde_json::json!({
                    "code": c.to_hex(),
                    "count": k,
                    "prob": *k as f64 / self.total as f64,
                }))
                .collect::<Vec<_>>(),
        })
    }

    /// CSV lines `code,count,frequency`.
    pub fn to_csv(&self) -> String {
        let mut entries: Vec<(&BallCode, u64)> = self.counts.iter().map(|(c, &k)| (c, k)).collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let mut out = String::from("code,count,frequency\n");
        for (c, k) in entries {
            out.push_str(&format!(
                "{},{},{}\n",
                c.to_hex(),
                k,
                crate::experiment::format_sig(k as f64 / self.total as f64)
            ));
        }
        out
    }
}

/// Pools one root draw per sample.
pub fn empirical_dist<I: IntoIterator<Item = Graph>>(
    samples: I,
    policy: RootPolicy,
    radius: usize,
    rng: &mut RngState,
    provenance: Provenance,
) -> Result<EmpiricalDist, StatsError> {
    let mut dist = EmpiricalDist::new(provenance);
    for g in samples {
        dist.record(&g, policy, radius, rng);
    }
    if dist.total == 0 {
        return Err(StatsError::EmptyDistribution {
            skipped: dist.skipped,
        });
    }
    Ok(dist)
}

/// Either side of a total-variation comparison.
#[derive(Clone, Copy)]
pub enum DistRef<'a> {
    Empirical(&'a EmpiricalDist),
    Limit(&'a LimitDist),
}

impl<'a> DistRef<'a> {
    fn prob(&self, code: &BallCode) -> f64 {
        match self {
            DistRef::Empirical(d) => d.freq(code),
            DistRef::Limit(d) => *d.mass.get(code).unwrap_or(&0.0),
        }
    }

    fn leftover(&self) -> f64 {
        match self {
            DistRef::Empirical(_) => 0.0,
            DistRef::Limit(d) => d.leftover,
        }
    }

    fn codes(&self) -> Vec<&'a BallCode> {
        match self {
            DistRef::Empirical(d) => d.counts.keys().collect(),
            DistRef::Limit(d) => d.mass.keys().collect(),
        }
    }
}

impl<'a> From<&'a EmpiricalDist> for DistRef<'a> {
    fn from(d: &'a EmpiricalDist) -> Self {
        DistRef::Empirical(d)
    }
}
impl<'a> From<&'a LimitDist> for DistRef<'a> {
    fn from(d: &'a LimitDist) -> Self {
        DistRef::Limit(d)
    }
}

/// Total-variation distance with leftover handling: half the sum of absolute
/// probability gaps over the union of supports plus half the leftover gap.
pub fn tv_distance<'a, A, B>(a: A, b: B) -> Result<f64, StatsError>
where
    A: Into<DistRef<'a>>,
    B: Into<DistRef<'a>>,
{
    let (a, b) = (a.into(), b.into());
    for d in [&a, &b] {
        if let DistRef::Empirical(e) = d {
            if e.total == 0 {
                return Err(StatsError::ZeroTotal);
            }
        }
    }
    let mut codes: Vec<&BallCode> = a.codes();
    codes.extend(b.codes());
    codes.sort_unstable();
    codes.dedup();
    let sum: f64 = codes.iter().map(|c| (a.prob(c) - b.prob(c)).abs()).sum();
    Ok(0.5 * sum + 0.5 * (a.leftover() - b.leftover()).abs())
}
