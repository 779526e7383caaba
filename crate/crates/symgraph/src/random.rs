//! Seeded graph and set sampling for benchmarks and the test corpora.
//! Every function is deterministic in its seed across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Graph, VertexSet};

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) digraph: every ordered pair, self-loops included, is an edge
/// independently with probability `p`.
pub fn digraph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng_for(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("sampled edges are in range")
}

/// Strongly connected digraph: a Hamiltonian cycle plus `chords` random
/// extra edges.
pub fn strongly_connected(n: usize, chords: usize, seed: u64) -> Graph {
    let mut rng = rng_for(seed);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    for _ in 0..chords {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    Graph::new(n, &edges).expect("sampled edges are in range")
}

/// Random vertex subset with independent membership probability `p`.
pub fn subset(n: usize, p: f64, seed: u64) -> VertexSet {
    let mut rng = rng_for(seed);
    VertexSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(p.clamp(0.0, 1.0))))
}
