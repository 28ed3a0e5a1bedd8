//! Exhaustive cross-check of the left-right planarity test against a
//! Wagner-theorem brute force on every graph with at most six vertices, plus
//! monotonicity spot-checks on random corpora.

use locallim::graph::Graph;
use locallim::rng::RngState;
use locallim::samplers;
use rand::Rng;

/// Brute-force planarity for n <= 6 via Wagner's theorem: a graph is planar
/// iff it has no K5 minor and no K3,3 minor. With at most six vertices the
/// only branch-set profiles are singletons plus at most one adjacent pair
/// (K5), or six singletons (K3,3), so enumeration is complete.
fn planar_oracle(n: usize, edges: &[(usize, usize)]) -> bool {
    assert!(n <= 6);
    if n < 5 {
        return true;
    }
    let has = |u: usize, v: usize| edges.contains(&(u.min(v), u.max(v)));
    let blocks_adjacent = |a: &[usize], b: &[usize]| {
        a.iter().any(|&x| b.iter().any(|&y| has(x, y)))
    };
    // K5 minor, all-singleton branch sets over any 5 of the n vertices
    let verts: Vec<usize> = (1..=n).collect();
    let mut choose5: Vec<Vec<usize>> = Vec::new();
    if n == 5 {
        choose5.push(verts.clone());
    } else {
        for skip in 1..=n {
            choose5.push(verts.iter().copied().filter(|&v| v != skip).collect());
        }
    }
    for set in &choose5 {
        if set
            .iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| has(u, v)))
        {
            return false;
        }
    }
    if n == 6 {
        // K5 minor with one merged adjacent pair and four singletons
        for &(a, b) in edges {
            let rest: Vec<usize> = (1..=6).filter(|&v| v != a && v != b).collect();
            let pair = [a, b];
            let all_pairs_joined = rest
                .iter()
                .enumerate()
                .all(|(i, &u)| rest[i + 1..].iter().all(|&v| has(u, v)))
                && rest.iter().all(|&u| blocks_adjacent(&pair, &[u]));
            if all_pairs_joined {
                return false;
            }
        }
        // K3,3 minor: six singleton branch sets, so a spanning K3,3 subgraph
        for b in 2..=5usize {
            for c in b + 1..=6usize {
                let left = [1, b, c];
                let right: Vec<usize> = (2..=6).filter(|v| !left.contains(v)).collect();
                if left
                    .iter()
                    .all(|&u| right.iter().all(|&v| has(u, v)))
                {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn exhaustive_agreement_up_to_six_vertices() {
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        let total: u64 = 1 << pairs.len();
        let mut nonplanar = 0u64;
        for mask in 0..total {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, edges.clone()).unwrap();
            let expect = planar_oracle(n, g.edges());
            assert_eq!(
                g.is_planar(),
                expect,
                "disagreement at n={n}, edges={edges:?}"
            );
            if !expect {
                nonplanar += 1;
            }
        }
        // spot counts: the only non-planar 5-vertex graph is K5
        if n == 5 {
            assert_eq!(nonplanar, 1);
        }
        if n < 5 {
            assert_eq!(nonplanar, 0);
        }
    }
}

#[test]
fn planarity_is_monotone_under_edge_deletion() {
    let mut rng = RngState::derive(0x91a7, 0);
    // sparse graphs via exact rejection
    for trial in 0..60 {
        let n = 6 + (trial % 8);
        let m = n;
        let s = samplers::sample_planar(n, m, samplers::PlanarMethod::Rejection, 100_000, &mut rng)
            .expect("sparse planar sampling succeeds");
        let mut edges: Vec<(usize, usize)> = s.graph.edges().to_vec();
        let k = rng.gen_range(0..edges.len());
        edges.swap_remove(k);
        assert!(Graph::new(n, edges).unwrap().is_planar());
    }
    // dense planar graphs via the edge-swap chain, which keeps planarity
    for &(n, m) in &[(8usize, 16usize), (15, 30), (24, 60), (30, 3 * 30 - 6)] {
        let mut chain = samplers::PlanarChain::new(n, m).unwrap();
        for _ in 0..500 {
            chain.step(&mut rng);
        }
        let g = chain.graph();
        assert!(g.is_planar());
        for _ in 0..20 {
            let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
            let k = rng.gen_range(0..edges.len());
            edges.swap_remove(k);
            assert!(Graph::new(n, edges).unwrap().is_planar());
        }
    }
}

#[test]
fn nonplanar_stays_nonplanar_under_edge_addition() {
    // start from K5 / K3,3 embedded in bigger vertex sets and add edges
    let mut rng = RngState::derive(0xadd, 0);
    for _ in 0..100 {
        let n = 9;
        let mut edges: Vec<(usize, usize)> = (1..=5)
            .flat_map(|u| (u + 1..=5).map(move |v| (u, v)))
            .collect();
        for _ in 0..rng.gen_range(0..8) {
            let u = rng.gen_range(1..=n);
            let v = rng.gen_range(1..=n);
            if u != v {
                let e = (u.min(v), u.max(v));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        assert!(!Graph::new(n, edges).unwrap().is_planar());
    }
}
