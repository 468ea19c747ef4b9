#![allow(dead_code)]

use std::path::PathBuf;

use maxcov::{BipartiteGraph, CoverInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small instance with random degrees: `n_x <= max_x`, `n_y <= max_y`,
/// weights on `{1..10}` and `K = ceil(0.4 * sum c)`.
pub fn small_instance(seed: u64, max_x: usize, max_y: usize) -> CoverInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_x = rng.gen_range(1..=max_x);
    let n_y = rng.gen_range(1..=max_y);
    let density = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for x in 0..n_x {
        for y in 0..n_y {
            if rng.gen_bool(density) {
                edges.push((x, y));
            }
        }
    }
    let c: Vec<f64> = (0..n_x).map(|_| rng.gen_range(1..=10) as f64).collect();
    let w: Vec<f64> = (0..n_y).map(|_| rng.gen_range(1..=10) as f64).collect();
    let budget = (0.4 * c.iter().sum::<f64>()).ceil();
    CoverInstance::new(BipartiteGraph::new(c, w, edges).unwrap(), budget).unwrap()
}

/// Best feasible coverage by enumerating every subset.
pub fn brute_force(inst: &CoverInstance) -> f64 {
    let g = &inst.graph;
    let n = g.n_x();
    assert!(n <= 20);
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let sel: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if g.selection_cost(&sel).unwrap() <= inst.budget {
            best = best.max(g.covered_weight(&sel).unwrap());
        }
    }
    best
}

/// c = (2, 2), w = (3, 1, 2), edges x0-{y0,y1}, x1-{y1,y2}.
pub fn fixture() -> BipartiteGraph {
    BipartiteGraph::new(
        vec![2.0, 2.0],
        vec![3.0, 1.0, 2.0],
        [(0, 0), (0, 1), (1, 1), (1, 2)],
    )
    .unwrap()
}

pub fn toy_corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/toy_corpus")
}
