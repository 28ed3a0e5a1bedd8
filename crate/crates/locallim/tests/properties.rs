//! Property tests for the structural invariants: component partitions,
//! distance metric laws, decomposition conservation laws and round trips,
//! serialization, and the total-variation metric.

use proptest::prelude::*;

use locallim::decompose::{core_of, decompose, kernel_of, rebuild_core, split_complex};
use locallim::graph::Graph;
use locallim::limits::{DistOrigin, LimitDist};
use locallim::localstats::{ball_code, tv_distance, BallCode};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&e, _)| e)
                .collect();
            Graph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn components_partition_the_vertices(g in arb_graph(12)) {
        let comps = g.components();
        let mut seen = vec![false; g.n() + 1];
        for c in &comps {
            for &v in c {
                prop_assert!(!seen[v], "vertex {v} in two components");
                seen[v] = true;
            }
        }
        prop_assert!(seen[1..].iter().all(|&s| s));
        // ordering: size descending, then smallest label
        for w in comps.windows(2) {
            prop_assert!(w[0].len() > w[1].len()
                || (w[0].len() == w[1].len() && w[0][0] < w[1][0]));
        }
    }

    #[test]
    fn distance_is_a_metric(g in arb_graph(10)) {
        let n = g.n();
        for u in 1..=n {
            prop_assert_eq!(g.distance(u, u), Some(0));
            for v in u + 1..=n {
                prop_assert_eq!(g.distance(u, v), g.distance(v, u));
            }
        }
        // triangle inequality where defined
        for u in 1..=n {
            for v in 1..=n {
                for w in 1..=n {
                    if let (Some(a), Some(b), Some(c)) =
                        (g.distance(u, w), g.distance(u, v), g.distance(v, w))
                    {
                        prop_assert!(a <= b + c);
                    }
                }
            }
        }
    }

    #[test]
    fn ball_matches_distance_filter(g in arb_graph(10), root in 1usize..=10, r in 0usize..4) {
        let root = (root - 1) % g.n() + 1;
        let b = g.ball(root, r);
        let mut expect: Vec<usize> = (1..=g.n())
            .filter(|&w| g.distance(root, w).is_some_and(|d| d <= r))
            .collect();
        expect.sort_unstable();
        let mut got: Vec<usize> = b.orig[1..].to_vec();
        got.sort_unstable();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn split_complex_agrees_with_cycle_space_dimension(g in arb_graph(12)) {
        let (complex, other) = split_complex(&g);
        // independent check: per component, cycle space dim = e - v + 1 >= 2
        for comp in g.components() {
            let inside: std::collections::HashSet<usize> = comp.iter().copied().collect();
            let e = g.edges().iter().filter(|(u, v)| inside.contains(u) && inside.contains(v)).count();
            let dim = e as i64 - comp.len() as i64 + 1;
            let in_complex = comp.iter().all(|v| complex.vertices.binary_search(v).is_ok());
            let in_other = comp.iter().all(|v| other.vertices.binary_search(v).is_ok());
            prop_assert!(in_complex != in_other);
            prop_assert_eq!(in_complex, dim >= 2);
        }
    }

    #[test]
    fn decomposition_conservation_laws(g in arb_graph(14)) {
        let d = decompose(&g);
        // vertex partition
        prop_assert_eq!(d.complex_part.v() + d.non_complex_part.v(), g.n());
        // excess conservation across complex part, core, kernel
        let ex_q = d.complex_part.e() as i64 - d.complex_part.v() as i64;
        let ex_c = d.core.e() as i64 - d.core.v() as i64;
        let ex_k = d.kernel.m() as i64 - d.kernel.n() as i64;
        if d.complex_part.v() > 0 {
            prop_assert_eq!(ex_q, ex_c);
            prop_assert_eq!(ex_c, ex_k);
            // kernel min degree >= 3 and subdivision sum
            prop_assert!(d.kernel.min_degree() >= 3);
            let sum: usize = d.subdivision.iter().sum();
            prop_assert_eq!(sum, d.core.v() - d.kernel.n());
            // core idempotent
            let again = core_of(&d.core).unwrap();
            prop_assert_eq!(&again, &d.core);
            // exact round trip
            let rebuilt = rebuild_core(&d.kernel, &d.edge_paths, &d.kernel_vertex_map).unwrap();
            prop_assert_eq!(&rebuilt, &d.core);
            // kernel_of of the rebuilt core reproduces the kernel
            let (k2, _, _, sub2) = kernel_of(&rebuilt).unwrap();
            prop_assert_eq!(k2.edges(), d.kernel.edges());
            prop_assert_eq!(&sub2, &d.subdivision);
        } else {
            prop_assert_eq!(d.core.v(), 0);
            prop_assert_eq!(d.kernel.n(), 0);
        }
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(12)) {
        let text = g.to_edge_list();
        let back = Graph::parse(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_edge_list(), text);
    }

    #[test]
    fn tv_is_a_metric_on_random_distributions(
        masses in proptest::collection::vec((0u8..4, 1u32..100), 1..6)
    ) {
        // build three distributions over a small shared code set
        let codes: Vec<BallCode> = {
            let path = Graph::new(4, vec![(1, 2), (2, 3), (3, 4)]).unwrap();
            (1..=4).map(|v| ball_code(&path.ball(v, 3)).unwrap()).collect()
        };
        let build = |entries: &[(u8, u32)], shift: u32| {
            let mut mass = std::collections::BTreeMap::new();
            let total: f64 = entries.iter().map(|&(_, w)| (w + shift) as f64).sum();
            for &(c, w) in entries {
                *mass.entry(codes[c as usize % codes.len()].clone()).or_insert(0.0)
                    += (w + shift) as f64 / total;
            }
            LimitDist { mass, leftover: 0.0, origin: DistOrigin::Analytic { description: "p".into() } }
        };
        let a = build(&masses, 0);
        let b = build(&masses, 7);
        let c = build(&masses, 23);
        let dab = tv_distance(&a, &b).unwrap();
        let dba = tv_distance(&b, &a).unwrap();
        prop_assert!((dab - dba).abs() < 1e-15);
        prop_assert!(tv_distance(&a, &a).unwrap() == 0.0);
        let dac = tv_distance(&a, &c).unwrap();
        let dbc = tv_distance(&b, &c).unwrap();
        prop_assert!(dac <= dab + dbc + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&dab));
    }
}
