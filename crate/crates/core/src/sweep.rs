//! Perturbation sweeps: remove a growing fraction of links chosen by some
//! strategy and track regularity and reconstruction accuracy of the result.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{evaluate_split, make_observed, mean_std, score_graph, AucMode, Method, Task};
use crate::generators::seeded_rng;
use crate::graph::{Edge, EdgeRole, EdgeSet, Graph};
use crate::regularity::{irregular_link_ranking, regularity_sigma, DEFAULT_RREF_TOL};
use crate::solver::{solve, SolverConfig, SolverKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum RemovalStrategy {
    /// Lowest link importance first.
    Irregular,
    /// Highest link importance first.
    Regular,
    /// Uniformly shuffled.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Fractions of the original edge count to remove, e.g. `0.01..=0.12`.
    pub fractions: Vec<f64>,
    /// Solver whose representation ranks links by importance.
    pub importance_solver: SolverKind,
    /// Solver used for σ_r on each variant; `None` skips regularity.
    pub regularity_solver: Option<SolverKind>,
    /// Methods whose missing-link accuracy is averaged.
    pub methods: Vec<Method>,
    pub miss_fraction: f64,
    pub split_seeds: Vec<u64>,
    pub solver: SolverConfig<f64>,
}

impl SweepConfig {
    /// `1%, 2%, …, 12%`.
    pub fn percent_grid() -> Vec<f64> {
        (1..=12).map(|p| p as f64 / 100.0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub fraction: f64,
    pub removed: usize,
    #[serde(with = "crate::io::float_or_inf")]
    pub sigma_r: f64,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
}

/// Edge order for a removal strategy.
pub fn removal_order(
    g: &Graph,
    strategy: RemovalStrategy,
    importance_solver: SolverKind,
    cfg: &SolverConfig<f64>,
) -> Result<Vec<Edge>> {
    Ok(match strategy {
        RemovalStrategy::Irregular => irregular_link_ranking(g, importance_solver, cfg)?
            .into_iter()
            .map(|(e, _)| e)
            .collect(),
        RemovalStrategy::Regular => irregular_link_ranking(g, importance_solver, cfg)?
            .into_iter()
            .rev()
            .map(|(e, _)| e)
            .collect(),
        RemovalStrategy::Random { seed } => {
            let mut edges: Vec<Edge> = g.edges().collect();
            edges.shuffle(&mut seeded_rng(seed));
            edges
        }
    })
}

/// Removes the first `count` edges of `order`.
pub fn remove_prefix(g: &Graph, order: &[Edge], count: usize) -> Result<Graph> {
    if count > order.len() {
        return Err(Error::input("removal count exceeds the ordering"));
    }
    let remove = EdgeSet::from_pairs(EdgeRole::Regulation, order[..count].iter().copied());
    g.perturb(&remove, &EdgeSet::new(EdgeRole::Regulation))
}

/// Mean top-L accuracy of the missing-link task over methods and split seeds.
pub fn reconstruction_accuracy(
    g: &Graph,
    methods: &[Method],
    miss_fraction: f64,
    split_seeds: &[u64],
    solver: &SolverConfig<f64>,
) -> Result<(f64, f64)> {
    let values: Vec<f64> = split_seeds
        .par_iter()
        .map(|&seed| -> Result<Vec<f64>> {
            let split = make_observed(g, miss_fraction, 0.0, seed)?;
            methods
                .iter()
                .map(|&m| {
                    let scored = score_graph(&split.observed, m, solver)?;
                    let (_, acc) = evaluate_split(g, &split, Task::Missing, &scored, AucMode::Exhaustive)?;
                    Ok(acc.accuracy)
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(mean_std(&values))
}

/// σ_r of a graph from a fresh solve; `+∞` for full rank or non-convergence.
pub fn graph_regularity(g: &Graph, kind: SolverKind, cfg: &SolverConfig<f64>) -> Result<f64> {
    let res = solve(&g.adjacency_matrix::<f64>(), cfg, kind)?;
    if !res.converged {
        return Ok(f64::INFINITY);
    }
    match regularity_sigma(&res.z_star, DEFAULT_RREF_TOL) {
        Ok(r) => Ok(r.sigma_r),
        Err(Error::Degenerate(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Baseline point (nothing removed) followed by one point per fraction.
pub fn removal_sweep(g: &Graph, strategy: RemovalStrategy, cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    let order = removal_order(g, strategy, cfg.importance_solver, &cfg.solver)?;
    let m = g.edge_count();
    let mut fractions = vec![0.0];
    fractions.extend(cfg.fractions.iter().copied());
    fractions
        .iter()
        .map(|&fraction| {
            if !(0.0..1.0).contains(&fraction) {
                return Err(Error::input(format!("removal fraction {fraction} outside [0, 1)")));
            }
            let removed = (fraction * m as f64).round() as usize;
            let variant = remove_prefix(g, &order, removed)?;
            let sigma_r = match cfg.regularity_solver {
                Some(kind) => graph_regularity(&variant, kind, &cfg.solver)?,
                None => f64::NAN,
            };
            let (accuracy_mean, accuracy_std) =
                reconstruction_accuracy(&variant, &cfg.methods, cfg.miss_fraction, &cfg.split_seeds, &cfg.solver)?;
            Ok(SweepPoint {
                fraction,
                removed,
                sigma_r,
                accuracy_mean,
                accuracy_std,
            })
        })
        .collect()
}

/// Pearson correlation coefficient; `NaN` when either side is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "pearson needs paired samples");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn pearson_basics() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_nan());
    }

    #[test]
    fn prefix_removal() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3)], None).unwrap();
        let order = vec![(1, 2), (0, 1), (2, 3)];
        let h = remove_prefix(&g, &order, 2).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(2, 3)]);
        assert!(remove_prefix(&g, &order, 4).is_err());
    }

    #[test]
    fn random_order_is_a_seeded_permutation() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3), (0, 3)], None).unwrap();
        let cfg = SolverConfig::default();
        let a = removal_order(&g, RemovalStrategy::Random { seed: 3 }, SolverKind::Lfnr, &cfg).unwrap();
        let b = removal_order(&g, RemovalStrategy::Random { seed: 3 }, SolverKind::Lfnr, &cfg).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(sorted, g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn regular_is_reverse_of_irregular() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (3, 4)], None).unwrap();
        let cfg = SolverConfig::default();
        let irr = removal_order(&g, RemovalStrategy::Irregular, SolverKind::Lfnr, &cfg).unwrap();
        let mut reg = removal_order(&g, RemovalStrategy::Regular, SolverKind::Lfnr, &cfg).unwrap();
        reg.reverse();
        assert_eq!(irr, reg);
    }
}
