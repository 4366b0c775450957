//! Seeded generator of valid closed-mode hypergraphs: products and
//! disjoint unions of catalog graphs, relabeled and shuffled.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::OrbitHypergraph;

const MAX_VERTICES: usize = 160;

fn numbered_labels(n: usize, off: usize) -> Vec<String> {
    (0..n).map(|i| format!("a{}", off + i + 1)).collect()
}

/// Random vertex order, fresh ids, random label names order and edge order.
pub fn shuffle(g: &OrbitHypergraph, rng: &mut impl Rng) -> OrbitHypergraph {
    let n = g.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut inverse = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    let mut out = g.clone();
    out.vertices = perm
        .iter()
        .enumerate()
        .map(|(k, &old)| crate::hypergraph::Vertex {
            id: format!("x{k}"),
            rank: g.vertices[old].rank,
        })
        .collect();
    let mut lperm: Vec<usize> = (0..g.labels.len()).collect();
    lperm.shuffle(rng);
    for e in &mut out.edges {
        e.members = e.members.iter().map(|&m| inverse[m]).collect();
        e.members.sort_unstable();
        e.label = lperm[e.label];
    }
    out.edges.shuffle(rng);
    out
}

/// One random graph built from `pool` (closed-mode graphs).
pub fn random_closed_graph(pool: &[OrbitHypergraph], rng: &mut impl Rng) -> OrbitHypergraph {
    assert!(!pool.is_empty());
    let factors = rng.random_range(1..=3);
    let mut g: Option<OrbitHypergraph> = None;
    for _ in 0..factors {
        let pick = &pool[rng.random_range(0..pool.len())];
        g = Some(match g {
            None => pick.with_labels(numbered_labels(pick.labels.len(), 0)).expect("fresh labels"),
            Some(a) if a.len() * pick.len() <= MAX_VERTICES => {
                let b = pick
                    .with_labels(numbered_labels(pick.labels.len(), a.labels.len()))
                    .expect("fresh labels");
                a.product(&b).expect("product of valid graphs")
            }
            Some(a) => a,
        });
    }
    let mut g = g.expect("at least one factor");
    if rng.random_bool(0.5) && 2 * g.len() <= MAX_VERTICES {
        let other = shuffle(&g, rng);
        g = g.disjoint_union(&other, ("l", "r")).expect("same labels");
    }
    let g = shuffle(&g, rng);
    g.validate().expect("generator keeps the axioms");
    g
}

/// `count` graphs from a fixed seed.
pub fn random_closed_graphs(pool: &[OrbitHypergraph], seed: u64, count: usize) -> Vec<OrbitHypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_closed_graph(pool, &mut rng)).collect()
}
