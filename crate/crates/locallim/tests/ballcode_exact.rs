//! Ball-code exactness: code equality must coincide with root-preserving
//! isomorphism. Checked exhaustively on all connected rooted graphs with up
//! to six vertices against a factorial brute force, and on a random corpus
//! of seven-vertex rooted graphs.

use std::collections::HashMap;

use locallim::graph::Graph;
use locallim::localstats::ball_code;
use locallim::rng::RngState;
use rand::seq::SliceRandom;
use rand::Rng;

/// Brute-force canonical form of a rooted graph: the minimum adjacency
/// bitstring over all orderings that put the root first.
fn brute_canonical(n: usize, edges: &[(usize, usize)], root: usize) -> Vec<u8> {
    let has = |u: usize, v: usize| edges.contains(&(u.min(v), u.max(v)));
    let mut others: Vec<usize> = (1..=n).filter(|&v| v != root).collect();
    let mut best: Option<Vec<u8>> = None;
    permute(&mut others, 0, &mut |perm: &[usize]| {
        let order: Vec<usize> = std::iter::once(root).chain(perm.iter().copied()).collect();
        let mut bits = Vec::with_capacity(n * n);
        for i in 1..n {
            for j in 0..i {
                bits.push(has(order[i], order[j]) as u8);
            }
        }
        if best.as_ref().is_none_or(|b| bits < *b) {
            best = Some(bits);
        }
    });
    return best.unwrap();

    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }
}

fn check_partitions(rooted: Vec<(Graph, usize)>) {
    // group by production code and by brute canonical form; the two
    // partitions must coincide
    let mut by_code: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    let mut by_brute: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    for (idx, (g, root)) in rooted.iter().enumerate() {
        let ball = g.ball(*root, g.n());
        let code = ball_code(&ball).unwrap().bytes().to_vec();
        let brute = brute_canonical(g.n(), g.edges(), *root);
        by_code.entry(code.clone()).or_default().push(idx);
        by_brute.entry(brute.clone()).or_default().push(idx);
        // cross-map: every member of this code class must share the brute form
        let peers = &by_code[&code];
        let first = peers[0];
        let first_brute = brute_canonical(
            rooted[first].0.n(),
            rooted[first].0.edges(),
            rooted[first].1,
        );
        assert_eq!(
            brute, first_brute,
            "code collision between non-isomorphic rooted graphs"
        );
    }
    assert_eq!(
        by_code.len(),
        by_brute.len(),
        "code classes and isomorphism classes disagree in number"
    );
}

#[test]
fn exhaustive_connected_up_to_six() {
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        let mut rooted = Vec::new();
        for mask in 0u64..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, edges).unwrap();
            if g.components().len() != 1 {
                continue;
            }
            for root in 1..=n {
                rooted.push((g.clone(), root));
            }
        }
        check_partitions(rooted);
    }
}

#[test]
fn random_seven_vertex_corpus() {
    let mut rng = RngState::derive(0x7777, 0);
    let n = 7;
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    let mut rooted = Vec::new();
    while rooted.len() < 1500 {
        let m = rng.gen_range(6..=14);
        let mut chosen = pairs.clone();
        chosen.shuffle(&mut rng);
        chosen.truncate(m);
        let g = Graph::new(n, chosen).unwrap();
        if g.components().len() != 1 {
            continue;
        }
        let root = rng.gen_range(1..=n);
        rooted.push((g, root));
    }
    check_partitions(rooted);
}

#[test]
fn code_is_invariant_under_relabelling() {
    // random (graph, relabelling) pairs; codes must agree
    let mut rng = RngState::derive(0x1abe1, 0);
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=9usize);
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.gen_bool(0.35) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges.clone()).unwrap();
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        let relabel: Vec<usize> = {
            let mut map = vec![0; n + 1];
            for (i, &p) in perm.iter().enumerate() {
                map[i + 1] = p;
            }
            map
        };
        let h = Graph::new(
            n,
            edges.iter().map(|&(u, v)| (relabel[u], relabel[v])).collect(),
        )
        .unwrap();
        let root = rng.gen_range(1..=n);
        let r = rng.gen_range(0..=3usize);
        let ca = ball_code(&g.ball(root, r)).unwrap();
        let cb = ball_code(&h.ball(relabel[root], r)).unwrap();
        assert_eq!(ca, cb);
    }
}
