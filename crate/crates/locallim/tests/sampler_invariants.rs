//! Per-draw sampler invariants and the max per-outcome frequency check
//! against the enumeration oracles at 1e5 draws.

use std::collections::BTreeMap;

use locallim::decompose;
use locallim::enumerate;
use locallim::graph::{Graph, MultiGraph};
use locallim::rng::RngState;
use locallim::samplers::{self, PlanarMethod};

#[allow(clippy::mutable_key_type)] // Graph's cached adjacency never affects its ordering
fn max_outcome_gap<F>(oracle: &[Graph], draws: u64, seed: u64, mut sample: F) -> f64
where
    F: FnMut(&mut RngState) -> Graph,
{
    let mut rng = RngState::derive(seed, 0);
    let mut counts: BTreeMap<Graph, u64> = BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(sample(&mut rng)).or_insert(0) += 1;
    }
    let in_class: u64 = oracle.iter().map(|g| counts.get(g).copied().unwrap_or(0)).sum();
    assert_eq!(in_class, draws, "some samples fell outside the enumerated class");
    let p = 1.0 / oracle.len() as f64;
    oracle
        .iter()
        .map(|g| (counts.get(g).copied().unwrap_or(0) as f64 / draws as f64 - p).abs())
        .fold(0.0, f64::max)
}

type SamplerCase = (&'static str, Vec<Graph>, Box<dyn FnMut(&mut RngState) -> Graph>);

#[test]
fn per_outcome_frequency_error_below_one_percent() {
    const N: u64 = 100_000;
    let k4 = Graph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
    let theta = MultiGraph::new(2, vec![(1, 2), (1, 2), (1, 2)]).unwrap();

    let cases: Vec<SamplerCase> = vec![
        (
            "trees-n5",
            enumerate::all_trees(5),
            Box::new(|r: &mut RngState| samplers::sample_cayley_tree(5, r).unwrap()),
        ),
        (
            "forests-n5-t2",
            enumerate::all_forests(5, 2),
            Box::new(|r: &mut RngState| samplers::sample_forest(5, 2, r).unwrap().graph),
        ),
        (
            "forests-n5-t3",
            enumerate::all_forests(5, 3),
            Box::new(|r: &mut RngState| samplers::sample_forest(5, 3, r).unwrap().graph),
        ),
        (
            "gnm-4-2",
            enumerate::all_gnm(4, 2),
            Box::new(|r: &mut RngState| samplers::sample_gnm(4, 2, r).unwrap()),
        ),
        (
            "noncomplex-4-4",
            enumerate::all_noncomplex(4, 4),
            Box::new(|r: &mut RngState| samplers::sample_noncomplex(4, 4, 100, r).unwrap()),
        ),
        (
            "complexpart-k4-6",
            enumerate::all_complexparts(&k4, 6),
            Box::new({
                let k4 = k4.clone();
                move |r: &mut RngState| samplers::sample_complexpart(&k4, 6, r).unwrap()
            }),
        ),
        (
            "core-theta-2",
            enumerate::all_cores_with_kernel(&theta, 2),
            Box::new({
                let theta = theta.clone();
                move |r: &mut RngState| {
                    samplers::sample_core_given_kernel(&theta, 2, 1000, r).unwrap()
                }
            }),
        ),
        (
            "planar-5-5",
            enumerate::all_planar_small(5, 5),
            Box::new(|r: &mut RngState| {
                samplers::sample_planar(5, 5, PlanarMethod::Rejection, 100, r)
                    .unwrap()
                    .graph
            }),
        ),
    ];
    for (name, oracle, mut sample) in cases {
        let gap = max_outcome_gap(&oracle, N, 0xacc, &mut sample);
        println!("{name}: classes={} max-gap={gap:.5}", oracle.len());
        assert!(gap < 0.01, "{name}: max per-outcome gap {gap}");
    }
}

#[test]
fn complexpart_core_is_recovered_on_every_draw() {
    let mut rng = RngState::derive(11, 0);
    let core = {
        // figure-eight core with labels 1..=5
        Graph::new(5, vec![(1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5)]).unwrap()
    };
    for _ in 0..300 {
        let g = samplers::sample_complexpart(&core, 40, &mut rng).unwrap();
        let (q, u) = decompose::split_complex(&g);
        assert_eq!(u.v(), 0, "complex-part sample must be fully complex");
        let got = decompose::core_of(&q).unwrap();
        assert_eq!(got.vertices, vec![1, 2, 3, 4, 5]);
        assert_eq!(got.edges.len(), core.m());
        for &(a, b) in core.edges() {
            assert!(got.edges.binary_search(&(a, b)).is_ok());
        }
    }
}

#[test]
fn core_sampler_reproduces_kernel_and_subdivision_total() {
    let mut rng = RngState::derive(12, 0);
    let kernels = [
        MultiGraph::new(2, vec![(1, 2), (1, 2), (1, 2)]).unwrap(),
        MultiGraph::new(2, vec![(1, 1), (1, 2), (2, 2)]).unwrap(),
        MultiGraph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap(),
        MultiGraph::new(1, vec![(1, 1), (1, 1)]).unwrap(),
    ];
    for kernel in &kernels {
        for k in [6usize, 13] {
            for _ in 0..50 {
                let core =
                    samplers::sample_core_given_kernel(kernel, k, 10_000, &mut rng).unwrap();
                assert_eq!(core.n(), kernel.n() + k);
                let sub = decompose::LabelledSubgraph::from_graph(&core);
                let (got, map, _, sdiv) = decompose::kernel_of(&sub).unwrap();
                // kernel vertices keep their labels
                assert_eq!(map[1..].to_vec(), (1..=kernel.n()).collect::<Vec<_>>());
                let mut want = kernel.edges().to_vec();
                want.sort_unstable();
                let mut have = got.edges().to_vec();
                have.sort_unstable();
                assert_eq!(have, want);
                assert_eq!(sdiv.iter().sum::<usize>(), k);
            }
        }
    }
}

#[test]
fn gw_total_distribution_matches_borel_at_scale() {
    // total-variation over the head of the distribution (k <= 200, ~94% of
    // the mass) at 1e6 draws; individual outcomes further out carry expected
    // counts near zero and would only measure Poisson noise
    use locallim::limits::borel_pmf;
    use locallim::samplers::GwTotal;
    let mut rng = RngState::derive(13, 0);
    const N: u64 = 1_000_000;
    const CAP: u64 = 100_000;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut capped = 0u64;
    for _ in 0..N {
        match samplers::sample_gw_total(1.0, CAP, &mut rng).unwrap() {
            GwTotal::Size(k) => *counts.entry(k).or_insert(0) += 1,
            GwTotal::Capped => capped += 1,
        }
    }
    let kept = (N - capped) as f64;
    let tv: f64 = (1..=200u64)
        .map(|k| {
            let freq = *counts.get(&k).unwrap_or(&0) as f64 / kept;
            (freq - borel_pmf(k).unwrap()).abs()
        })
        .sum::<f64>()
        * 0.5;
    println!("borel tv over k<=200: {tv:.5}, capped fraction {}", capped as f64 / N as f64);
    assert!(tv < 0.005);
    assert!((capped as f64 / N as f64) < 0.01);
}

#[test]
fn skeleton_k0_matches_gw1_reference() {
    // SK(0) = GW(1): Monte Carlo ball law vs the analytic reference
    use locallim::limits::{gw_ball_reference, sk_ball_reference};
    use locallim::localstats::tv_distance;
    let mut rng = RngState::derive(14, 0);
    let mc = sk_ball_reference(0, 2, 200_000, &mut rng);
    let exact = gw_ball_reference(1.0, 2, 1e-6).unwrap();
    let tv = tv_distance(&mc, &exact).unwrap();
    println!("sk(0) vs gw(1) tv: {tv:.5}");
    assert!(tv < 0.01);
}

#[test]
fn skeleton_root_degree_law() {
    // root degree of SK(2) at radius 1 is 2 + Poisson(1)
    let mut rng = RngState::derive(15, 0);
    const N: u64 = 100_000;
    let mut deg2 = 0u64;
    for _ in 0..N {
        let b = samplers::sample_skeleton_ball(2, 1, &mut rng);
        if b.graph.degree(1) == 2 {
            deg2 += 1;
        }
    }
    let freq = deg2 as f64 / N as f64;
    let expect = (-1.0f64).exp();
    assert!(
        (freq - expect).abs() < 0.01,
        "P(root degree 2) = {freq}, expected {expect}"
    );
}

#[test]
#[allow(clippy::mutable_key_type)] // Graph's cached adjacency never affects its ordering
fn mcmc_planar_small_class_coverage() {
    // at n=4, m=3 the chain should reach all 20 graphs and stay roughly flat
    let mut rng = RngState::derive(16, 0);
    let mut chain = samplers::PlanarChain::new(4, 3).unwrap();
    let mut counts: BTreeMap<Graph, u64> = BTreeMap::new();
    const STEPS: u64 = 200_000;
    for _ in 0..STEPS {
        chain.step(&mut rng);
        *counts.entry(chain.graph()).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 20, "chain must reach every 3-edge graph on 4 vertices");
    let max_freq = counts.values().map(|&k| k as f64 / STEPS as f64).fold(0.0, f64::max);
    assert!((max_freq - 0.05).abs() < 0.02, "max frequency {max_freq}");
}
