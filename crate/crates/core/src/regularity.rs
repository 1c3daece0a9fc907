//! Structural regularity of a network, reconstruction importance of nodes
//! and links, and regulation by removing low-importance links.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeRole, EdgeSet, Graph};
use crate::kernels::rref_stats;
use crate::scalar::{DenseMatrix, Real};
use crate::solver::{solve, SolverConfig, SolverKind, SolverResult};

/// Default relative tolerance for counting rank and nonzeros.
pub const DEFAULT_RREF_TOL: f64 = 1e-6;

/// `σ_r = 1 / (√((n-r)/n) · √(a/(n·r)))`; smaller means more regular.
///
/// `sigma_r` is `+∞` when `Z*` has full rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    #[serde(with = "crate::io::float_or_inf")]
    pub sigma_r: f64,
    pub n: usize,
    pub r: usize,
    pub a: usize,
}

impl RegularityReport {
    pub fn from_counts(n: usize, r: usize, a: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Degenerate("regularity of a rank-0 representation".into()));
        }
        if r > n || a < r {
            return Err(Error::input(format!("inconsistent counts n={n} r={r} a={a}")));
        }
        let (nf, rf, af) = (n as f64, r as f64, a as f64);
        let sigma_r = if r == n {
            f64::INFINITY
        } else {
            1.0 / (((nf - rf) / nf).sqrt() * (af / (nf * rf)).sqrt())
        };
        Ok(RegularityReport { sigma_r, n, r, a })
    }
}

pub fn regularity_sigma<T: Real>(z_star: &DenseMatrix<T>, tol: T) -> Result<RegularityReport> {
    if !z_star.is_square() {
        return Err(Error::input("regularity: Z* must be square"));
    }
    let stats = rref_stats(z_star, tol)?;
    RegularityReport::from_counts(z_star.nrows(), stats.rank, stats.nnz)
}

/// Per-node reconstruction importance: mean absolute value of each row of `Z*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceVector<T> {
    pub rc: Vec<T>,
}

pub fn node_importance<T: Real>(z_star: &DenseMatrix<T>) -> ImportanceVector<T> {
    let n = T::from_usize(z_star.ncols()).expect("dimension fits the scalar type");
    let rc = z_star
        .row_iter()
        .map(|row| {
            if z_star.ncols() == 0 {
                T::zero()
            } else {
                row.iter().fold(T::zero(), |acc, v| acc + v.abs()) / n
            }
        })
        .collect();
    ImportanceVector { rc }
}

/// `U_ij = RC(i)·RC(j)` for every edge of the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkImportanceMap<T> {
    pub values: BTreeMap<Edge, T>,
}

impl<T: Real> LinkImportanceMap<T> {
    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        self.values.get(&crate::graph::canonical(i, j)).copied()
    }

    /// Edges from least to most important; ties in pair order.
    pub fn ascending(&self) -> Vec<(Edge, T)> {
        let mut v: Vec<(Edge, T)> = self.values.iter().map(|(&e, &u)| (e, u)).collect();
        v.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.0.cmp(&b.0))
        });
        v
    }
}

pub fn link_importance<T: Real>(rc: &ImportanceVector<T>, g: &Graph) -> Result<LinkImportanceMap<T>> {
    if rc.rc.len() != g.node_count() {
        return Err(Error::input(format!(
            "importance vector has {} entries for {} nodes",
            rc.rc.len(),
            g.node_count()
        )));
    }
    let values = g.edges().map(|(i, j)| ((i, j), rc.rc[i] * rc.rc[j])).collect();
    Ok(LinkImportanceMap { values })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegulationConfig<T> {
    /// Solver whose `Z*` ranks the links (once, on the input graph).
    pub importance_solver: SolverKind,
    /// Solver used to re-evaluate regularity after each removal batch.
    /// The Frobenius solver yields a full-rank `Z*`, so its σ_r is `+∞`.
    pub solver: SolverKind,
    pub batch_fraction: f64,
    pub max_remove_fraction: f64,
    pub solver_config: SolverConfig<T>,
    pub tol: T,
}

impl<T: Real> Default for RegulationConfig<T> {
    fn default() -> Self {
        RegulationConfig {
            importance_solver: SolverKind::Lrnr,
            solver: SolverKind::Lrnr,
            batch_fraction: 0.01,
            max_remove_fraction: 0.12,
            solver_config: SolverConfig::default(),
            tol: T::lit(DEFAULT_RREF_TOL),
        }
    }
}

impl<T: Real> RegulationConfig<T> {
    fn validate(&self) -> Result<()> {
        let (b, m) = (self.batch_fraction, self.max_remove_fraction);
        if !(b > 0.0 && b <= m && m < 1.0) {
            return Err(Error::input(format!(
                "regulation needs 0 < batch_fraction ({b}) <= max_remove_fraction ({m}) < 1"
            )));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::input("regulation tolerance must be positive"));
        }
        self.solver_config.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegulationStep {
    pub step: usize,
    /// Edges removed by this step (empty for the initial evaluation).
    pub removed: Vec<Edge>,
    #[serde(with = "crate::io::float_or_inf")]
    pub sigma_r: f64,
    pub converged: bool,
    /// Whether the removal improved regularity and was kept.
    pub accepted: bool,
    /// Step index of the graph this evaluation was made on.
    pub graph_id: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegulationTrajectory {
    pub steps: Vec<RegulationStep>,
    pub final_graph: Graph,
    pub final_graph_id: usize,
}

impl RegulationTrajectory {
    pub fn removed_edges(&self) -> Vec<Edge> {
        self.steps
            .iter()
            .filter(|s| s.accepted)
            .flat_map(|s| s.removed.iter().copied())
            .collect()
    }

    pub fn initial_sigma(&self) -> f64 {
        self.steps[0].sigma_r
    }

    pub fn final_sigma(&self) -> f64 {
        self.steps
            .iter()
            .rev()
            .find(|s| s.accepted)
            .map_or(self.steps[0].sigma_r, |s| s.sigma_r)
    }
}

fn solve_graph<T: Real>(g: &Graph, kind: SolverKind, cfg: &SolverConfig<T>) -> Result<SolverResult<T>> {
    solve(&g.adjacency_matrix::<T>(), cfg, kind)
}

/// Observed edges ordered from least to most reconstruction-important,
/// computed from one solve on `g`.
pub fn irregular_link_ranking<T: Real>(
    g: &Graph,
    kind: SolverKind,
    cfg: &SolverConfig<T>,
) -> Result<Vec<(Edge, T)>> {
    let res = solve_graph(g, kind, cfg)?;
    let rc = node_importance(&res.z_star);
    Ok(link_importance(&rc, g)?.ascending())
}

/// Removes the lowest-importance links in batches while regularity keeps
/// improving (σ_r strictly decreasing), up to the removal cap.
///
/// Importances come from a single solve on the input graph; σ_r is
/// re-evaluated with a fresh solve after each batch. A rejected or
/// non-converged batch is recorded and ends the loop without being applied.
pub fn regulate<T: Real>(g: &Graph, cfg: &RegulationConfig<T>) -> Result<RegulationTrajectory> {
    cfg.validate()?;
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::input("cannot regulate a graph without edges"));
    }

    let initial = solve_graph(g, cfg.solver, &cfg.solver_config)?;
    let initial_report = regularity_sigma(&initial.z_star, cfg.tol)?;
    let importance_z = if cfg.importance_solver == cfg.solver {
        initial.z_star.clone()
    } else {
        solve_graph(g, cfg.importance_solver, &cfg.solver_config)?.z_star
    };
    let order = link_importance(&node_importance(&importance_z), g)?.ascending();

    let batch = ((cfg.batch_fraction * m as f64).round() as usize).max(1);
    let cap = ((cfg.max_remove_fraction * m as f64).round() as usize).clamp(batch, m);

    let mut steps = vec![RegulationStep {
        step: 0,
        removed: Vec::new(),
        sigma_r: initial_report.sigma_r,
        converged: initial.converged,
        accepted: true,
        graph_id: 0,
    }];
    let mut current = g.clone();
    let mut current_id = 0;
    let mut best = initial_report.sigma_r;
    let mut taken = 0;

    while taken < cap && initial.converged {
        let take = batch.min(cap - taken);
        let removed: Vec<Edge> = order[taken..taken + take].iter().map(|&(e, _)| e).collect();
        let remove_set = EdgeSet::from_pairs(EdgeRole::Regulation, removed.iter().copied());
        let candidate = current.perturb(&remove_set, &EdgeSet::new(EdgeRole::Regulation))?;
        let step = steps.len();
        let res = solve_graph(&candidate, cfg.solver, &cfg.solver_config)?;
        let sigma = if res.converged {
            match regularity_sigma(&res.z_star, cfg.tol) {
                Ok(report) => report.sigma_r,
                Err(Error::Degenerate(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            }
        } else {
            f64::INFINITY
        };
        let accepted = res.converged && sigma < best;
        steps.push(RegulationStep {
            step,
            removed,
            sigma_r: sigma,
            converged: res.converged,
            accepted,
            graph_id: step,
        });
        log::debug!("regulation step {step}: sigma_r={sigma} accepted={accepted}");
        if !accepted {
            break;
        }
        current = candidate;
        current_id = step;
        best = sigma;
        taken += take;
    }

    Ok(RegulationTrajectory {
        steps,
        final_graph: current,
        final_graph_id: current_id,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    #[test]
    fn sigma_formula_examples() {
        let r = RegularityReport::from_counts(4, 2, 4).unwrap();
        assert!((r.sigma_r - 2.0).abs() < 1e-12);
        let r = RegularityReport::from_counts(10, 5, 10).unwrap();
        assert!((r.sigma_r - 1.0 / (0.5f64.sqrt() * 0.2f64.sqrt())).abs() < 1e-12);
        assert!((r.sigma_r - 3.1623).abs() < 1e-4);
        assert_eq!(RegularityReport::from_counts(3, 3, 3).unwrap().sigma_r, f64::INFINITY);
        assert!(matches!(
            RegularityReport::from_counts(3, 0, 0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn sigma_from_matrices() {
        let full = DenseMatrix::<f64>::identity(3, 3);
        assert_eq!(regularity_sigma(&full, 1e-6).unwrap().sigma_r, f64::INFINITY);
        let dup = dmatrix![1.0, 1.0, 0.0; 1.0, 1.0, 0.0; 0.0, 0.0, 1.0];
        let rep = regularity_sigma(&dup, 1e-6).unwrap();
        assert_eq!((rep.n, rep.r, rep.a), (3, 2, 3));
        assert!(rep.sigma_r.is_finite());
        assert!(regularity_sigma(&DenseMatrix::<f64>::zeros(3, 3), 1e-6).is_err());
    }

    #[test]
    fn node_importance_examples() {
        let z = dmatrix![0.5, -0.5, 0.0, 1.0; 0.0, 0.0, 0.0, 0.0; 1.0, 1.0, 1.0, 1.0; 0.0, 0.0, 0.0, 0.0];
        let rc = node_importance(&z);
        assert_eq!(rc.rc, vec![0.5, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn link_importance_examples() {
        let g = build_graph(&[(0, 1)], None).unwrap();
        let u = link_importance(&ImportanceVector { rc: vec![0.2f64, 0.5] }, &g).unwrap();
        assert!((u.get(1, 0).unwrap() - 0.1).abs() < 1e-15);

        let tri = build_graph(&[(0, 1), (1, 2), (0, 2)], None).unwrap();
        let u = link_importance(&ImportanceVector { rc: vec![1.0, 2.0, 3.0] }, &tri).unwrap();
        let order: Vec<Edge> = u.ascending().into_iter().map(|(e, _)| e).collect();
        assert_eq!(order, vec![(0, 1), (0, 2), (1, 2)]);

        let u = link_importance(&ImportanceVector { rc: vec![0.0, 2.0, 3.0] }, &tri).unwrap();
        assert_eq!(u.get(0, 1), Some(0.0));
        assert_eq!(u.get(0, 2), Some(0.0));

        assert!(link_importance(&ImportanceVector { rc: vec![1.0] }, &tri).is_err());
    }

    #[test]
    fn regulate_rejects_bad_fractions() {
        let g = build_graph(&[(0, 1), (1, 2)], None).unwrap();
        let cfg = RegulationConfig::<f64> {
            batch_fraction: 0.2,
            max_remove_fraction: 0.1,
            ..Default::default()
        };
        assert!(regulate(&g, &cfg).is_err());
    }

    proptest! {
        #[test]
        fn node_importance_is_permutation_equivariant(
            vals in prop::collection::vec(-2.0f64..2.0, 25),
            perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
        ) {
            let z = DenseMatrix::from_vec(5, 5, vals);
            let pz = DenseMatrix::from_fn(5, 5, |i, j| z[(perm[i], perm[j])]);
            let rc = node_importance(&z).rc;
            let prc = node_importance(&pz).rc;
            for i in 0..5 {
                prop_assert!((prc[i] - rc[perm[i]]).abs() < 1e-12);
            }
        }

        #[test]
        fn link_importance_nonnegative(rc in prop::collection::vec(0.0f64..3.0, 6), pairs in prop::collection::vec((0i64..6, 0i64..6), 0..15)) {
            let g = build_graph(&pairs, Some(6)).unwrap();
            let u = link_importance(&ImportanceVector { rc }, &g).unwrap();
            for (&(i, j), &v) in &u.values {
                prop_assert!(v >= 0.0);
                prop_assert_eq!(u.get(j, i), Some(v));
            }
        }
    }
}
