//! Analytic and Monte Carlo reference laws for ball distributions: plane-tree
//! ball probabilities of Galton-Watson trees, the Borel total-progeny pmf,
//! enumerated Galton-Watson ball references, sampled Skeleton-tree references,
//! mixtures, and the map from edge-count regimes to their predicted limits.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localstats::{ahu_code_from_children, BallCode, RootPolicy};
use crate::rng::RngState;
use crate::samplers;

#[derive(Debug, Error, PartialEq)]
pub enum LimitsError {
    #[error("invalid plane tree: {0}")]
    InvalidPlaneTree(String),
    #[error("borel pmf needs k >= 1")]
    BorelDomain,
    #[error("mass_tol must lie in (0,1)")]
    MassTol,
    #[error("enumeration budget exceeded; achieved leftover {achieved_leftover}")]
    Budget { achieved_leftover: f64 },
    #[error("no limit law covers regime {regime:?} with root policy {policy:?}")]
    Unsupported { regime: RegimeTag, policy: RootPolicy },
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
}

/// An ordered rooted tree recorded as the breadth-first child counts of its
/// non-boundary vertices (those at depth < radius). The list determines the
/// tree: vertex i of the BFS order has `child_counts[i]` children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaneTree {
    radius: usize,
    child_counts: Vec<usize>,
}

impl PlaneTree {
    pub fn new(radius: usize, child_counts: Vec<usize>) -> Result<Self, LimitsError> {
        // replay the BFS level structure and check consistency
        let mut level = 1usize; // vertices at current depth
        let mut consumed = 0usize;
        let mut depth = 0usize;
        while depth < radius && level > 0 {
            if consumed + level > child_counts.len() {
                return Err(LimitsError::InvalidPlaneTree(format!(
                    "need counts for {} vertices at depth {depth}, have {}",
                    level,
                    child_counts.len() - consumed
                )));
            }
            let next: usize = child_counts[consumed..consumed + level].iter().sum();
            consumed += level;
            level = next;
            depth += 1;
        }
        if consumed != child_counts.len() {
            return Err(LimitsError::InvalidPlaneTree(format!(
                "{} extra child counts beyond the boundary",
                child_counts.len() - consumed
            )));
        }
        Ok(PlaneTree {
            radius,
            child_counts,
        })
    }

    pub fn single_root(radius: usize) -> Self {
        let counts = if radius == 0 { vec![] } else { vec![0] };
        PlaneTree {
            radius,
            child_counts: counts,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Child counts of the non-boundary vertices in BFS order.
    pub fn child_counts(&self) -> &[usize] {
        &self.child_counts
    }

    /// Number of non-boundary vertices (those whose children are recorded).
    pub fn interior_count(&self) -> usize {
        self.child_counts.len()
    }

    pub fn size(&self) -> usize {
        1 + self.child_counts.iter().sum::<usize>()
    }

    /// Children lists per BFS index (boundary vertices get empty lists).
    pub fn child_lists(&self) -> Vec<Vec<usize>> {
        let size = self.size();
        let mut lists = vec![Vec::new(); size];
        let mut next = 1usize;
        for (i, &d) in self.child_counts.iter().enumerate() {
            for _ in 0..d {
                lists[i].push(next);
                next += 1;
            }
        }
        lists
    }

    /// The unlabeled rooted-tree code of this plane tree.
    pub fn unlabeled_code(&self) -> BallCode {
        ahu_code_from_children(&self.child_lists(), 0)
    }

    /// Compact text form `radius:d1,d2,...` used by the CLI.
    pub fn to_compact(&self) -> String {
        let counts: Vec<String> = self.child_counts.iter().map(|d| d.to_string()).collect();
        format!("{}:{}", self.radius, counts.join(","))
    }

    pub fn from_compact(s: &str) -> Result<Self, LimitsError> {
        let (r, rest) = s
            .split_once(':')
            .ok_or_else(|| LimitsError::InvalidPlaneTree("expected radius:d1,d2,...".into()))?;
        let radius: usize = r
            .parse()
            .map_err(|_| LimitsError::InvalidPlaneTree(format!("bad radius {r:?}")))?;
        let counts: Vec<usize> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|t| {
                    t.parse()
                        .map_err(|_| LimitsError::InvalidPlaneTree(format!("bad count {t:?}")))
                })
                .collect::<Result<_, _>>()?
        };
        PlaneTree::new(radius, counts)
    }
}

fn ln_factorial(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; 100_001];
        for i in 1..t.len() {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    });
    if k < table.len() {
        table[k]
    } else {
        // Stirling with correction terms; only reached far beyond any pinned use
        let x = k as f64;
        x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
    }
}

/// Probability that the radius-`t.radius()` ball of a Galton-Watson tree with
/// Poisson(c) offspring equals `t` as a plane tree: the product over
/// non-boundary vertices of `e^{-c} c^{d_i} / d_i!`.
pub fn gw_plane_prob(c: f64, t: &PlaneTree) -> f64 {
    assert!(c >= 0.0, "offspring mean must be non-negative");
    if c == 0.0 {
        return if t.size() == 1 { 1.0 } else { 0.0 };
    }
    let k = t.interior_count() as f64;
    let ln_c = c.ln();
    let mut ln_p = -c * k;
    for &d in t.child_counts() {
        ln_p += d as f64 * ln_c - ln_factorial(d);
    }
    ln_p.exp()
}

/// Borel pmf `e^{-k} k^{k-1} / k!`: the law of the total progeny of a
/// critical Poisson branching process.
pub fn borel_pmf(k: u64) -> Result<f64, LimitsError> {
    if k < 1 {
        return Err(LimitsError::BorelDomain);
    }
    let kf = k as f64;
    Ok((-kf + (kf - 1.0) * kf.ln() - ln_factorial(k as usize)).exp())
}

/// Where a reference distribution came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DistOrigin {
    Analytic { description: String },
    MonteCarlo { n: u64, seed: u64, stream: u64 },
    Mixture { a: f64 },
}

/// A probability mass over ball codes with explicit leftover mass.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitDist {
    pub mass: BTreeMap<BallCode, f64>,
    pub leftover: f64,
    pub origin: DistOrigin,
}

impl LimitDist {
    /// Total mass plus leftover; must be 1 within 1e-9.
    pub fn total_mass(&self) -> f64 {
        self.mass.values().sum::<f64>() + self.leftover
    }

    pub fn check_normalised(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= 1e-9
    }

    /// JSON with hex-encoded codes, entries ordered by descending probability
    /// then code bytes.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries: Vec<(&BallCode, f64)> = self.mass.iter().map(|(k, &v)| (k, v)).collect();
        entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
        serde_json::json!({
            "origin": self.origin,
            "leftover": self.leftover,
            "entries": entries
                .iter()
                .map(|(c, p)| serde_json::json!({"code": c.to_hex(), "prob": p}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Enumerates plane trees of radius <= `radius` in increasing size
/// (lexicographic BFS child-count lists within a size), aggregates
/// Galton-Watson masses by unlabeled code, and stops once the leftover mass
/// drops below `mass_tol`.
pub fn gw_ball_reference(c: f64, radius: usize, mass_tol: f64) -> Result<LimitDist, LimitsError> {
    gw_ball_reference_budgeted(c, radius, mass_tol, 50_000_000)
}

pub fn gw_ball_reference_budgeted(
    c: f64,
    radius: usize,
    mass_tol: f64,
    max_trees: u64,
) -> Result<LimitDist, LimitsError> {
    if !(mass_tol > 0.0 && mass_tol < 1.0) {
        return Err(LimitsError::MassTol);
    }
    assert!(c >= 0.0);
    let mut mass: BTreeMap<BallCode, f64> = BTreeMap::new();
    let mut covered = 0.0f64;
    let mut enumerated: u64 = 0;
    let mut size = 1usize;
    const MAX_SIZE: usize = 400;
    while 1.0 - covered >= mass_tol {
        if size > MAX_SIZE {
            return Err(LimitsError::Budget {
                achieved_leftover: 1.0 - covered,
            });
        }
        let mut overflow = false;
        for_each_plane_tree(radius, size, &mut |t| {
            enumerated += 1;
            if enumerated > max_trees {
                overflow = true;
                return;
            }
            let p = gw_plane_prob(c, t);
            covered += p;
            *mass.entry(t.unlabeled_code()).or_insert(0.0) += p;
        });
        if overflow {
            return Err(LimitsError::Budget {
                achieved_leftover: 1.0 - covered,
            });
        }
        size += 1;
    }
    Ok(LimitDist {
        mass,
        leftover: 1.0 - covered,
        origin: DistOrigin::Analytic {
            description: format!("gw-ball c={c} radius={radius} mass_tol={mass_tol}"),
        },
    })
}

/// Calls `visit` for every plane tree of exactly `size` vertices whose depth
/// is at most `radius`, ordered by the BFS child-count list.
pub fn for_each_plane_tree(radius: usize, size: usize, visit: &mut dyn FnMut(&PlaneTree)) {
    if size == 0 {
        return;
    }
    if size == 1 {
        let t = PlaneTree::single_root(radius);
        visit(&t);
        return;
    }
    if radius == 0 {
        return; // the radius-0 ball is always the single root
    }
    let mut counts: Vec<usize> = Vec::new();
    level(radius, 1, 0, size - 1, &mut counts, visit);

    /// `width` vertices at `depth` still need child counts; `below` vertices
    /// remain to be placed strictly deeper.
    fn level(
        radius: usize,
        width: usize,
        depth: usize,
        below: usize,
        counts: &mut Vec<usize>,
        visit: &mut dyn FnMut(&PlaneTree),
    ) {
        if width == 0 || depth == radius {
            if below == 0 {
                let t =
                    PlaneTree::new(radius, counts.clone()).expect("enumerator emits valid trees");
                visit(&t);
            }
            return;
        }
        for next in 0..=below {
            if next == 0 && below > 0 {
                continue; // an empty level cannot have vertices beneath it
            }
            slots(radius, width, depth, below - next, next, next, counts, visit);
        }
    }

    /// Distribute `left` children over `remaining` vertices of this level.
    #[allow(clippy::too_many_arguments)]
    fn slots(
        radius: usize,
        remaining: usize,
        depth: usize,
        below: usize,
        left: usize,
        next_width: usize,
        counts: &mut Vec<usize>,
        visit: &mut dyn FnMut(&PlaneTree),
    ) {
        if remaining == 0 {
            debug_assert_eq!(left, 0);
            level(radius, next_width, depth + 1, below, counts, visit);
            return;
        }
        let lo = if remaining == 1 { left } else { 0 };
        for d in lo..=left {
            counts.push(d);
            slots(radius, remaining - 1, depth, below, left - d, next_width, counts, visit);
            counts.pop();
        }
    }
}

/// Monte Carlo reference for the radius-`radius` ball of the Skeleton tree
/// with `k` rays, from `n` draws of the constructive sampler.
pub fn sk_ball_reference(k: usize, radius: usize, n: u64, rng: &mut RngState) -> LimitDist {
    let mut counts: BTreeMap<BallCode, u64> = BTreeMap::new();
    for _ in 0..n {
        let ball = samplers::sample_skeleton_ball(k, radius, rng);
        let code = crate::localstats::ball_code_unbounded(&ball);
        *counts.entry(code).or_insert(0) += 1;
    }
    let mass = counts
        .into_iter()
        .map(|(c, k)| (c, k as f64 / n as f64))
        .collect();
    LimitDist {
        mass,
        leftover: 0.0,
        origin: DistOrigin::MonteCarlo {
            n,
            seed: rng.seed(),
            stream: rng.stream(),
        },
    }
}

/// Pointwise mixture `a * d1 + (1 - a) * d2`; leftover combines likewise.
pub fn mixture(a: f64, d1: &LimitDist, d2: &LimitDist) -> LimitDist {
    assert!((0.0..=1.0).contains(&a), "mixture weight must be in [0,1]");
    let mut mass: BTreeMap<BallCode, f64> = BTreeMap::new();
    for (code, &p) in &d1.mass {
        *mass.entry(code.clone()).or_insert(0.0) += a * p;
    }
    for (code, &p) in &d2.mass {
        *mass.entry(code.clone()).or_insert(0.0) += (1.0 - a) * p;
    }
    LimitDist {
        mass,
        leftover: a * d1.leftover + (1.0 - a) * d2.leftover,
        origin: DistOrigin::Mixture { a },
    }
}

/// The four sparse edge-count regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeTag {
    /// m <= n/2 + O(n^{2/3}); limiting average degree c in [0,1]
    I,
    /// m = n/2 + s with s = o(n), s^3 n^{-2} -> infinity; c = 1
    II,
    /// m = alpha n / 2 with alpha -> c in (1,2)
    III,
    /// m = n + o(n (log n)^{-2/3}); c = 2
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub tag: RegimeTag,
    /// Limiting average degree.
    pub c: f64,
}

impl RegimeSpec {
    pub fn new(tag: RegimeTag, c: f64) -> Result<Self, LimitsError> {
        match tag {
            RegimeTag::I => {
                if !(0.0..=1.0).contains(&c) {
                    return Err(LimitsError::InvalidRegime(format!(
                        "regime I needs c in [0,1], got {c}"
                    )));
                }
            }
            RegimeTag::II => {
                if (c - 1.0).abs() > 1e-12 {
                    return Err(LimitsError::InvalidRegime(format!(
                        "regime II forces c = 1, got {c}"
                    )));
                }
            }
            RegimeTag::III => {
                if !(c > 1.0 && c < 2.0) {
                    return Err(LimitsError::InvalidRegime(format!(
                        "regime III needs c in (1,2), got {c}"
                    )));
                }
            }
            RegimeTag::IV => {
                if (c - 2.0).abs() > 1e-12 {
                    return Err(LimitsError::InvalidRegime(format!(
                        "regime IV forces c = 2, got {c}"
                    )));
                }
            }
        }
        Ok(RegimeSpec { tag, c })
    }

    /// Concrete edge count for a given n: regime I and III use m = c n / 2,
    /// regime II uses m = n/2 + n^{3/4} (so s = o(n) and s^3 n^{-2} grows),
    /// regime IV uses m = n.
    pub fn edge_count(&self, n: usize) -> usize {
        match self.tag {
            RegimeTag::I | RegimeTag::III => (self.c * n as f64 / 2.0).round() as usize,
            RegimeTag::II => n / 2 + (n as f64).powf(0.75).round() as usize,
            RegimeTag::IV => n,
        }
    }
}

/// A symbolic limit law that can be instantiated into a reference
/// distribution at a chosen radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LimitLaw {
    Gw { c: f64 },
    Sk { rays: usize },
    Mixture { a: f64, left: Box<LimitLaw>, right: Box<LimitLaw> },
}

impl LimitLaw {
    /// Instantiates the law: Galton-Watson components analytically at
    /// `mass_tol`, Skeleton components by Monte Carlo with `mc_draws` draws
    /// from `rng`.
    pub fn instantiate(
        &self,
        radius: usize,
        mass_tol: f64,
        mc_draws: u64,
        rng: &mut RngState,
    ) -> Result<LimitDist, LimitsError> {
        match self {
            LimitLaw::Gw { c } => gw_ball_reference(*c, radius, mass_tol),
            LimitLaw::Sk { rays } => Ok(sk_ball_reference(*rays, radius, mc_draws, rng)),
            LimitLaw::Mixture { a, left, right } => {
                let l = left.instantiate(radius, mass_tol, mc_draws, rng)?;
                let r = right.instantiate(radius, mass_tol, mc_draws, rng)?;
                Ok(mixture(*a, &l, &r))
            }
        }
    }
}

/// The predicted local limit for a regime and root policy.
pub fn predicted_limit(regime: &RegimeSpec, policy: RootPolicy) -> Result<LimitLaw, LimitsError> {
    use RegimeTag::*;
    use RootPolicy::*;
    let unsupported = || LimitsError::Unsupported {
        regime: regime.tag,
        policy,
    };
    match (regime.tag, policy) {
        (I, Uniform) => Ok(LimitLaw::Gw { c: regime.c }),
        (I, _) => Err(unsupported()),
        (II, Uniform) => Ok(LimitLaw::Gw { c: 1.0 }),
        (III, Uniform) => Ok(LimitLaw::Mixture {
            a: regime.c - 1.0,
            left: Box::new(LimitLaw::Sk { rays: 1 }),
            right: Box::new(LimitLaw::Gw { c: 1.0 }),
        }),
        (IV, Uniform) => Ok(LimitLaw::Sk { rays: 1 }),
        (II | III | IV, LargestComponent) => Ok(LimitLaw::Sk { rays: 1 }),
        (II | III | IV, Rest) => Ok(LimitLaw::Gw { c: 1.0 }),
        (II | III | IV, ComplexPart) => Ok(LimitLaw::Sk { rays: 1 }),
        (II | III | IV, NonComplexPart) => Ok(LimitLaw::Gw { c: 1.0 }),
        (II | III | IV, Core) => Ok(LimitLaw::Sk { rays: 2 }),
        (II | III | IV, Kernel) => Ok(LimitLaw::Sk { rays: 3 }),
    }
}
