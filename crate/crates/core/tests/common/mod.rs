#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use regnet::generators::{inject_cross_block_noise, seeded_rng, stochastic_block_model};
use regnet::{Graph, Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    seeded_rng(seed)
}

/// Entries uniform in `[-scale, scale]`.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..=scale))
}

pub fn nuclear_norm(m: &Matrix) -> f64 {
    m.clone().singular_values().sum()
}

pub fn l21_norm(m: &Matrix) -> f64 {
    m.column_iter().map(|c| c.norm()).sum()
}

/// Largest amount by which `objective(candidate + δ)` undercuts
/// `objective(candidate)` over `trials` random δ of mixed magnitude.
/// Nonpositive when no sampled perturbation improves on the candidate.
pub fn best_perturbation_gain(
    rng: &mut ChaCha8Rng,
    candidate: &Matrix,
    trials: usize,
    objective: impl Fn(&Matrix) -> f64,
) -> f64 {
    let base = objective(candidate);
    let scales = [1e-6, 1e-4, 1e-2, 1e-1, 1.0];
    let mut worst = f64::NEG_INFINITY;
    for t in 0..trials {
        let scale = scales[t % scales.len()];
        let delta = random_matrix(rng, candidate.nrows(), candidate.ncols(), scale);
        worst = worst.max(base - objective(&(candidate + delta)));
    }
    worst
}

/// Numerical rank from singular values, relative to the largest one.
pub fn svd_rank(m: &Matrix, tol: f64) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Equal blocks of `block` nodes, no cross edges, then `noise` fraction of
/// the edge count added as random cross-block edges.
pub fn modular_graph(blocks: usize, block: usize, p_in: f64, noise: f64, seed: u64) -> (Graph, Vec<(usize, usize)>) {
    let probs: Vec<Vec<f64>> = (0..blocks)
        .map(|a| (0..blocks).map(|b| if a == b { p_in } else { 0.0 }).collect())
        .collect();
    let base = stochastic_block_model(&vec![block; blocks], &probs, seed).unwrap();
    let labels: Vec<usize> = (0..blocks * block).map(|i| i / block).collect();
    let count = (noise * base.edge_count() as f64).round() as usize;
    inject_cross_block_noise(&base, &labels, count, seed + 1).unwrap()
}

/// Relabels nodes by `perm` (node `i` becomes `perm[i]`).
pub fn permute_graph(g: &Graph, perm: &[usize]) -> Graph {
    let pairs: Vec<(i64, i64)> = g
        .edges()
        .map(|(i, j)| (perm[i] as i64, perm[j] as i64))
        .collect();
    regnet::build_graph(&pairs, Some(g.node_count())).unwrap()
}
