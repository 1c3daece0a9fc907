//! Probe splits, AUC and top-L accuracy, and the repeated-split experiment
//! driver.

use std::cmp::Ordering;
use std::fmt;
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{baseline_scores, BaselineMethod, BaselineSpec};
use crate::error::{Error, Result};
use crate::generators::seeded_rng;
use crate::graph::{Edge, EdgeRole, EdgeSet, Graph};
use crate::reconstruct::{rank_missing, rank_spurious, score_matrix, RankedLinks, ScoreMatrix, ScoreSource};
use crate::scalar::Real;
use crate::solver::{solve, SolverConfig, SolverKind};

/// Observed network `G^T` together with the links hidden from it and the
/// links injected into it.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSplit {
    pub observed: Graph,
    pub missing: EdgeSet,
    pub spurious: EdgeSet,
    pub seed: u64,
}

impl EvalSplit {
    /// Every hidden or injected link.
    pub fn probe(&self) -> EdgeSet {
        EdgeSet::from_pairs(
            EdgeRole::Probe,
            self.missing.iter().chain(self.spurious.iter()).copied(),
        )
    }
}

fn check_fraction(name: &str, f: f64) -> Result<()> {
    if !(0.0..1.0).contains(&f) {
        return Err(Error::input(format!("{name} must lie in [0, 1), got {f}")));
    }
    Ok(())
}

/// Hides `round(miss_fraction·|E|)` uniformly chosen edges and injects
/// `round(spur_fraction·|E|)` uniformly chosen non-edges.
pub fn make_observed(g: &Graph, miss_fraction: f64, spur_fraction: f64, seed: u64) -> Result<EvalSplit> {
    check_fraction("miss_fraction", miss_fraction)?;
    check_fraction("spur_fraction", spur_fraction)?;
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::input("cannot split a graph without edges"));
    }
    let n_miss = (miss_fraction * m as f64).round() as usize;
    let n_spur = (spur_fraction * m as f64).round() as usize;
    let non_edges = g.non_edges();
    if n_spur > non_edges.len() {
        return Err(Error::input(format!(
            "{n_spur} spurious links requested but only {} non-edges exist",
            non_edges.len()
        )));
    }
    let mut rng = seeded_rng(seed);
    let edges: Vec<Edge> = g.edges().collect();
    let missing = EdgeSet::from_pairs(
        EdgeRole::Missing,
        sample(&mut rng, m, n_miss).into_iter().map(|k| edges[k]),
    );
    let spurious = EdgeSet::from_pairs(
        EdgeRole::Spurious,
        sample(&mut rng, non_edges.len(), n_spur)
            .into_iter()
            .map(|k| non_edges[k]),
    );
    let observed = g.perturb(&missing, &spurious)?;
    Ok(EvalSplit {
        observed,
        missing,
        spurious,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AucMode {
    /// Every positive against every negative.
    Exhaustive,
    /// `n` independent uniformly drawn (positive, negative) comparisons.
    Sampled { n: usize, seed: u64 },
}

/// Which way a positive has to beat a negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AucDirection {
    /// Positives should score higher (missing links vs non-existent links).
    Higher,
    /// Positives should score lower (spurious links vs genuine links).
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AucResult {
    pub auc: f64,
    pub n_comparisons: u64,
    /// Comparisons won by the positive.
    pub n_wins: u64,
    pub n_ties: u64,
    pub mode: AucMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyResult {
    pub accuracy: f64,
    /// Probe links among the top `l`.
    pub hits: usize,
    pub l: usize,
}

/// `(n' + 0.5·n'') / n` over positive/negative comparisons.
pub fn auc<T: Real>(
    scores: &ScoreMatrix<T>,
    positives: &EdgeSet,
    negatives: &EdgeSet,
    direction: AucDirection,
    mode: AucMode,
) -> Result<AucResult> {
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::input("AUC needs at least one positive and one negative"));
    }
    if let Some(&(i, j)) = positives.iter().find(|&&(i, j)| negatives.contains(i, j)) {
        return Err(Error::input(format!("pair ({i}, {j}) is both positive and negative")));
    }
    let dim = scores.dim();
    if positives.iter().chain(negatives.iter()).any(|&(_, j)| j >= dim) {
        return Err(Error::input("AUC pair outside the score matrix"));
    }
    let sign = match direction {
        AucDirection::Higher => 1.0,
        AucDirection::Lower => -1.0,
    };
    let pos: Vec<f64> = positives.iter().map(|&e| sign * scores.score(e).as_f64()).collect();
    let neg: Vec<f64> = negatives.iter().map(|&e| sign * scores.score(e).as_f64()).collect();
    let (wins, ties, n) = match mode {
        AucMode::Exhaustive => {
            let mut sorted = neg;
            sorted.sort_by(f64::total_cmp);
            let mut wins = 0u64;
            let mut ties = 0u64;
            for p in &pos {
                let below = sorted.partition_point(|v| v < p);
                let up_to = sorted.partition_point(|v| v <= p);
                wins += below as u64;
                ties += (up_to - below) as u64;
            }
            (wins, ties, (pos.len() * sorted.len()) as u64)
        }
        AucMode::Sampled { n, seed } => {
            if n == 0 {
                return Err(Error::input("sampled AUC needs n > 0"));
            }
            let mut rng = seeded_rng(seed);
            let mut wins = 0u64;
            let mut ties = 0u64;
            for _ in 0..n {
                let p = pos[rng.random_range(0..pos.len())];
                let q = neg[rng.random_range(0..neg.len())];
                match p.partial_cmp(&q) {
                    Some(Ordering::Greater) => wins += 1,
                    Some(Ordering::Equal) => ties += 1,
                    _ => {}
                }
            }
            (wins, ties, n as u64)
        }
    };
    Ok(AucResult {
        auc: (wins as f64 + 0.5 * ties as f64) / n as f64,
        n_comparisons: n,
        n_wins: wins,
        n_ties: ties,
        mode,
    })
}

/// Fraction of probe links among the first `l` ranked links.
pub fn accuracy_at_l<T: Real>(ranked: &RankedLinks<T>, probe: &EdgeSet, l: usize) -> Result<AccuracyResult> {
    if l == 0 {
        return Err(Error::input("accuracy needs l >= 1"));
    }
    if l > ranked.len() {
        return Err(Error::input(format!(
            "accuracy at l={l} but only {} ranked links",
            ranked.len()
        )));
    }
    let hits = ranked.links[..l]
        .iter()
        .filter(|link| probe.contains(link.edge.0, link.edge.1))
        .count();
    Ok(AccuracyResult {
        accuracy: hits as f64 / l as f64,
        hits,
        l,
    })
}

/// A scoring method evaluated by the driver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Method {
    Solver { solver: SolverKind, lambda: f64 },
    Baseline { method: BaselineMethod, epsilon: f64 },
}

impl Method {
    pub fn lfnr(lambda: f64) -> Self {
        Method::Solver {
            solver: SolverKind::Lfnr,
            lambda,
        }
    }

    pub fn lrnr(lambda: f64) -> Self {
        Method::Solver {
            solver: SolverKind::Lrnr,
            lambda,
        }
    }

    pub fn baseline(method: BaselineMethod) -> Self {
        Method::Baseline {
            method,
            epsilon: BaselineSpec::DEFAULT_LP_EPSILON,
        }
    }

    fn source(self) -> ScoreSource {
        match self {
            Method::Solver { solver, lambda } => ScoreSource::Solver { solver, lambda },
            Method::Baseline { method, epsilon } => ScoreSource::Baseline { method, epsilon },
        }
    }

    pub fn label(self) -> String {
        self.source().to_string()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Scores of one method on one observed graph.
#[derive(Debug, Clone)]
pub struct Scored {
    pub scores: ScoreMatrix<f64>,
    pub converged: bool,
    pub iterations: Option<usize>,
    pub seconds: f64,
}

pub fn score_graph(g: &Graph, method: Method, base: &SolverConfig<f64>) -> Result<Scored> {
    let start = Instant::now();
    let (scores, converged, iterations) = match method {
        Method::Solver { solver, lambda } => {
            let x = g.adjacency_matrix::<f64>();
            let res = solve(&x, &base.with_lambda(lambda), solver)?;
            let sm = score_matrix(&x, &res.z_star, method.source())?;
            (sm, res.converged, Some(res.iterations))
        }
        Method::Baseline { method, epsilon } => {
            let sm = baseline_scores(g, &BaselineSpec { method, epsilon })?;
            (sm, true, None)
        }
    };
    Ok(Scored {
        scores,
        converged,
        iterations,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Missing,
    Spurious,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Missing => "missing",
            Task::Spurious => "spurious",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AucModeKind {
    Exhaustive,
    /// Sampled with this many comparisons, seeded from the run seed.
    Sampled(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub miss_fraction: f64,
    pub spur_fraction: f64,
    /// One seed per run.
    pub seeds: Vec<u64>,
    pub solver: SolverConfig<f64>,
    pub auc_mode: AucModeKind,
    /// Record wall-clock per solve. Timings make reports non-reproducible.
    pub record_timing: bool,
}

impl ExperimentConfig {
    /// Consecutive seeds `base, base+1, ...`.
    pub fn seeds_from(base: u64, runs: usize) -> Vec<u64> {
        (0..runs as u64).map(|k| base.wrapping_add(k)).collect()
    }

    /// Expands solver methods over a λ grid; baselines pass through unchanged.
    pub fn expand_lambda_grid(methods: &[Method], lambdas: &[f64]) -> Vec<Method> {
        let mut out = Vec::new();
        for &m in methods {
            match m {
                Method::Solver { solver, .. } if !lambdas.is_empty() => {
                    out.extend(lambdas.iter().map(|&lambda| Method::Solver { solver, lambda }))
                }
                other => out.push(other),
            }
        }
        out
    }

    /// λ values `10⁻³, 10⁻², …, 10¹`.
    pub fn default_lambda_grid() -> Vec<f64> {
        vec![1e-3, 1e-2, 1e-1, 1.0, 10.0]
    }
}

/// One (method, task, run) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: String,
    pub task: Task,
    pub run: usize,
    pub seed: u64,
    pub auc: f64,
    pub accuracy: f64,
    pub n_comparisons: u64,
    pub converged: bool,
    pub iterations: Option<usize>,
    pub runtime_s: Option<f64>,
}

/// Mean and sample standard deviation over the converged runs of a
/// (method, task) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub method: String,
    pub task: Task,
    pub fraction: f64,
    pub runs: usize,
    pub non_converged: usize,
    pub auc_mean: f64,
    pub auc_std: f64,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub runtime_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
}

impl ExperimentReport {
    pub fn aggregate(&self, method: &str, task: Task) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.method == method && a.task == task)
    }
}

/// Mean and sample standard deviation (zero for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Evaluates one method on one split for one task.
pub fn evaluate_split(
    g: &Graph,
    split: &EvalSplit,
    task: Task,
    scored: &Scored,
    auc_mode: AucMode,
) -> Result<(AucResult, AccuracyResult)> {
    let x = split.observed.adjacency_matrix::<f64>();
    match task {
        Task::Missing => {
            let probe = &split.missing;
            let negatives = EdgeSet::from_pairs(
                EdgeRole::Training,
                split
                    .observed
                    .non_edges()
                    .into_iter()
                    .filter(|&(i, j)| !probe.contains(i, j)),
            );
            let a = auc(&scored.scores, probe, &negatives, AucDirection::Higher, auc_mode)?;
            let ranked = rank_missing(&scored.scores, &x)?;
            let acc = accuracy_at_l(&ranked, probe, probe.len())?;
            Ok((a, acc))
        }
        Task::Spurious => {
            let probe = &split.spurious;
            let genuine = EdgeSet::from_pairs(
                EdgeRole::Training,
                split.observed.edges().filter(|&(i, j)| g.has_edge(i, j)),
            );
            let a = auc(&scored.scores, probe, &genuine, AucDirection::Lower, auc_mode)?;
            let ranked = rank_spurious(&scored.scores, &x)?;
            let acc = accuracy_at_l(&ranked, probe, probe.len())?;
            Ok((a, acc))
        }
    }
}

/// Runs every method on every seeded split for each task with a nonzero
/// fraction. Runs execute in parallel; output order is fixed.
pub fn run_experiment(g: &Graph, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.seeds.is_empty() {
        return Err(Error::input("experiment needs at least one run"));
    }
    if cfg.methods.is_empty() {
        return Err(Error::input("experiment needs at least one method"));
    }
    check_fraction("miss_fraction", cfg.miss_fraction)?;
    check_fraction("spur_fraction", cfg.spur_fraction)?;
    let mut tasks = Vec::new();
    if cfg.miss_fraction > 0.0 {
        tasks.push((Task::Missing, cfg.miss_fraction));
    }
    if cfg.spur_fraction > 0.0 {
        tasks.push((Task::Spurious, cfg.spur_fraction));
    }
    if tasks.is_empty() {
        return Err(Error::input("both probe fractions are zero; nothing to evaluate"));
    }

    let mut methods: Vec<Method> = Vec::new();
    for &m in &cfg.methods {
        if !methods.iter().any(|k| k.label() == m.label()) {
            methods.push(m);
        }
    }

    let mut jobs = Vec::new();
    for &(task, fraction) in &tasks {
        for (run, &seed) in cfg.seeds.iter().enumerate() {
            jobs.push((task, fraction, run, seed));
        }
    }

    let per_job: Vec<Vec<RunRecord>> = jobs
        .par_iter()
        .map(|&(task, fraction, run, seed)| -> Result<Vec<RunRecord>> {
            let split = match task {
                Task::Missing => make_observed(g, fraction, 0.0, seed)?,
                Task::Spurious => make_observed(g, 0.0, fraction, seed)?,
            };
            let auc_mode = match cfg.auc_mode {
                AucModeKind::Exhaustive => AucMode::Exhaustive,
                AucModeKind::Sampled(n) => AucMode::Sampled { n, seed },
            };
            methods
                .iter()
                .map(|&method| {
                    let scored = score_graph(&split.observed, method, &cfg.solver)?;
                    let (a, acc) = evaluate_split(g, &split, task, &scored, auc_mode)?;
                    Ok(RunRecord {
                        method: method.label(),
                        task,
                        run,
                        seed,
                        auc: a.auc,
                        accuracy: acc.accuracy,
                        n_comparisons: a.n_comparisons,
                        converged: scored.converged,
                        iterations: scored.iterations,
                        runtime_s: cfg.record_timing.then_some(scored.seconds),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    // Method in configured order, then task, then run.
    let mut records: Vec<RunRecord> = Vec::new();
    for k in 0..methods.len() {
        records.extend(per_job.iter().map(|job| job[k].clone()));
    }
    records.sort_by_key(|r| (methods.iter().position(|m| m.label() == r.method), r.task, r.run));

    let mut aggregates = Vec::new();
    for method in &methods {
        let label = method.label();
        for &(task, fraction) in &tasks {
            let cell: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.method == label && r.task == task)
                .collect();
            let ok: Vec<&&RunRecord> = cell.iter().filter(|r| r.converged).collect();
            let (auc_mean, auc_std) = mean_std(&ok.iter().map(|r| r.auc).collect::<Vec<_>>());
            let (accuracy_mean, accuracy_std) =
                mean_std(&ok.iter().map(|r| r.accuracy).collect::<Vec<_>>());
            let runtime_s = cfg.record_timing.then(|| {
                cell.iter().filter_map(|r| r.runtime_s).sum::<f64>() / cell.len() as f64
            });
            aggregates.push(Aggregate {
                method: label.clone(),
                task,
                fraction,
                runs: cell.len(),
                non_converged: cell.len() - ok.len(),
                auc_mean,
                auc_std,
                accuracy_mean,
                accuracy_std,
                runtime_s,
            });
        }
    }

    Ok(ExperimentReport {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        records,
        aggregates,
    })
}
