//! Synthetic and bundled graphs for experiments and tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Seeded RNG used across the crate so results do not depend on platform.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stochastic block model: nodes are laid out block by block and every pair
/// `(i, j)` is linked independently with probability `probs[block(i)][block(j)]`.
pub fn stochastic_block_model(sizes: &[usize], probs: &[Vec<f64>], seed: u64) -> Result<Graph> {
    let k = sizes.len();
    if probs.len() != k || probs.iter().any(|row| row.len() != k) {
        return Err(Error::input("sbm: probability matrix must be k x k"));
    }
    for a in 0..k {
        for b in 0..k {
            let p = probs[a][b];
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::input(format!("sbm: probability {p} outside [0, 1]")));
            }
            if p != probs[b][a] {
                return Err(Error::input("sbm: probability matrix must be symmetric"));
            }
        }
    }
    let block: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let n = block.len();
    let mut rng = seeded_rng(seed);
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < probs[block[i]][block[j]] {
                edges.insert((i, j));
            }
        }
    }
    Ok(Graph::from_canonical(n, edges))
}

/// Two equal blocks of `n/2` nodes (the first block takes the extra node when
/// `n` is odd) with in-block probability `p_in` and cross probability `p_out`.
pub fn two_block_sbm(n: usize, p_in: f64, p_out: f64, seed: u64) -> Result<Graph> {
    let first = n - n / 2;
    stochastic_block_model(
        &[first, n / 2],
        &[vec![p_in, p_out], vec![p_out, p_in]],
        seed,
    )
}

/// Block index of every node in a [`two_block_sbm`] graph.
pub fn two_block_labels(n: usize) -> Vec<usize> {
    let first = n - n / 2;
    (0..n).map(|i| usize::from(i >= first)).collect()
}

/// Adds `count` uniformly chosen pairs that join different blocks and are not
/// edges yet. Returns the new graph and the injected edges in draw order.
pub fn inject_cross_block_noise(
    g: &Graph,
    labels: &[usize],
    count: usize,
    seed: u64,
) -> Result<(Graph, Vec<Edge>)> {
    if labels.len() != g.node_count() {
        return Err(Error::input("noise injection: one label per node required"));
    }
    let mut pool: Vec<Edge> = g
        .non_edges()
        .into_iter()
        .filter(|&(i, j)| labels[i] != labels[j])
        .collect();
    if count > pool.len() {
        return Err(Error::input(format!(
            "noise injection: {count} edges requested, only {} cross-block non-edges",
            pool.len()
        )));
    }
    let mut rng = seeded_rng(seed);
    let (chosen, _) = pool.partial_shuffle(&mut rng, count);
    let added = chosen.to_vec();
    let mut edges = g.edge_set().clone();
    edges.extend(added.iter().copied());
    Ok((Graph::from_canonical(g.node_count(), edges), added))
}

/// Zachary's karate club (34 nodes, 78 edges), 0-based.
pub fn karate_club() -> Graph {
    const EDGES: [(usize, usize); 78] = [
        (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10), (0, 11),
        (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2), (1, 3), (1, 7), (1, 13),
        (1, 17), (1, 19), (1, 21), (1, 30), (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27),
        (2, 28), (2, 32), (3, 7), (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16),
        (6, 16), (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33), (15, 32),
        (15, 33), (18, 32), (18, 33), (19, 33), (20, 32), (20, 33), (22, 32), (22, 33),
        (23, 25), (23, 27), (23, 29), (23, 32), (23, 33), (24, 25), (24, 27), (24, 31),
        (25, 31), (26, 29), (26, 33), (27, 33), (28, 31), (28, 33), (29, 32), (29, 33),
        (30, 32), (30, 33), (31, 32), (31, 33), (32, 33),
    ];
    Graph::from_canonical(34, EDGES.iter().copied().collect())
}
