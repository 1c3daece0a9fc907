use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use regnet::baselines::{baseline_scores, BaselineMethod, BaselineSpec};
use regnet::eval::{run_experiment, AucModeKind, ExperimentConfig, Method};
use regnet::io::{
    format_edge_list, read_edge_list, write_report, write_text, render, Delimiter, EdgeListFormat,
    RankedLinksReport, ReconstructionReport, RegularitySummary, Report, ReportFormat, SweepReport,
};
use regnet::reconstruct::{rank_missing, rank_spurious, score_matrix, ScoreSource};
use regnet::regularity::{
    link_importance, node_importance, regulate, regularity_sigma, RegulationConfig, DEFAULT_RREF_TOL,
};
use regnet::solver::{solve, SolverConfig, SolverKind};
use regnet::sweep::{removal_sweep, RemovalStrategy, SweepConfig};
use regnet::{Error, Graph, Result};

#[derive(Parser)]
#[command(name = "regnet", version, about = "Low-rank network reconstruction and regularity analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for Z* and rank missing and spurious link candidates.
    Reconstruct(ReconstructArgs),
    /// Regularity σ_r with node and link importances.
    Regularity(RegularityArgs),
    /// Remove irregular links while regularity improves.
    Regulate(RegulateArgs),
    /// Missing/spurious link experiments over seeded runs.
    Evaluate(EvaluateArgs),
    /// Rank link candidates with a neighborhood baseline.
    Baseline(BaselineArgs),
    /// Accuracy and regularity as links are removed by a strategy.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge list, one `a b [weight]` per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Whitespace)]
    format: FormatArg,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    index_base: u8,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    /// Convergence tolerance on both residuals.
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
}

#[derive(Args)]
struct OutputArgs {
    /// Destination file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormatArg::Csv)]
    out_format: OutFormatArg,
}

#[derive(Args)]
struct ReconstructArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Lfnr)]
    method: MethodArg,
    /// Weight on length-3 paths for `lp`.
    #[arg(long, default_value_t = BaselineSpec::DEFAULT_LP_EPSILON)]
    epsilon: f64,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = BaselineArg::Cn)]
    method: BaselineArg,
    #[arg(long, default_value_t = BaselineSpec::DEFAULT_LP_EPSILON)]
    epsilon: f64,
}

#[derive(Args)]
struct RegularityArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value_t = SolverArg::Lrnr)]
    method: SolverArg,
}

#[derive(Args)]
struct RegulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Solver for the per-step regularity re-evaluation.
    #[arg(long, value_enum, default_value_t = SolverArg::Lrnr)]
    method: SolverArg,
    #[arg(long, default_value_t = 0.01)]
    batch_fraction: f64,
    #[arg(long, default_value_t = 0.12)]
    max_remove_fraction: f64,
    /// Also write the regulated graph as an edge list.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = MethodArg::all())]
    method: Vec<MethodArg>,
    /// Evaluate solver methods at each of these λ instead of `--lambda`.
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    miss_fraction: f64,
    #[arg(long, default_value_t = 0.1)]
    spur_fraction: f64,
    #[arg(long, default_value_t = 20)]
    runs: usize,
    /// Seed of the first run; run k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled AUC with this many comparisons instead of exhaustive.
    #[arg(long)]
    auc_samples: Option<usize>,
    /// Record per-solve wall-clock time (output is then not reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Methods whose missing-link accuracy is averaged.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Lfnr, MethodArg::Lrnr])]
    method: Vec<MethodArg>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [StrategyArg::Irregular, StrategyArg::Regular, StrategyArg::Random])]
    strategy: Vec<StrategyArg>,
    /// Largest removal fraction; the sweep steps by 1% up to it.
    #[arg(long, default_value_t = 0.12)]
    max_remove_fraction: f64,
    /// λ for the importance and regularity solves.
    #[arg(long, default_value_t = 0.1)]
    regularity_lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    miss_fraction: f64,
    #[arg(long, default_value_t = 20)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Whitespace,
    Comma,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Lrnr,
    Lfnr,
    Cn,
    Ra,
    Lp,
}

impl MethodArg {
    fn all() -> [MethodArg; 5] {
        [MethodArg::Lfnr, MethodArg::Lrnr, MethodArg::Cn, MethodArg::Ra, MethodArg::Lp]
    }

    fn to_method(self, lambda: f64, epsilon: f64) -> Method {
        match self {
            MethodArg::Lrnr => Method::lrnr(lambda),
            MethodArg::Lfnr => Method::lfnr(lambda),
            MethodArg::Cn => Method::baseline(BaselineMethod::Cn),
            MethodArg::Ra => Method::baseline(BaselineMethod::Ra),
            MethodArg::Lp => Method::Baseline {
                method: BaselineMethod::Lp,
                epsilon,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineArg {
    Cn,
    Ra,
    Lp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Lrnr,
    Lfnr,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Lrnr => SolverKind::Lrnr,
            SolverArg::Lfnr => SolverKind::Lfnr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Irregular,
    Regular,
    Random,
}

impl InputArgs {
    fn format(&self) -> EdgeListFormat {
        EdgeListFormat {
            delimiter: match self.format {
                FormatArg::Whitespace => Delimiter::Whitespace,
                FormatArg::Comma => Delimiter::Comma,
            },
            index_base: self.index_base,
            ..EdgeListFormat::default()
        }
    }

    fn load(&self) -> Result<Graph> {
        let parsed = read_edge_list(&self.input, &self.format())?;
        info!(
            "loaded {} nodes, {} edges from {}",
            parsed.graph.node_count(),
            parsed.graph.edge_count(),
            self.input.display()
        );
        Ok(parsed.graph)
    }
}

impl SolverArgs {
    fn config(&self) -> SolverConfig<f64> {
        SolverConfig {
            lambda: self.lambda,
            eps: self.eps,
            max_iter: self.max_iter,
            ..SolverConfig::default()
        }
    }
}

impl OutputArgs {
    fn format(&self) -> ReportFormat {
        match self.out_format {
            OutFormatArg::Json => ReportFormat::Json,
            OutFormatArg::Csv => ReportFormat::Csv,
        }
    }

    /// Writes the report, plus a label sidecar when input labels are 1-based.
    fn emit(&self, report: &dyn Report, input: &InputArgs, g: &Graph) -> Result<()> {
        match &self.out {
            Some(path) => {
                write_report(report, path, self.format())?;
                if input.index_base == 1 {
                    write_text(&labels_path(path), &label_table(g.node_count()))?;
                }
            }
            None => print!("{}", render(report, self.format())?),
        }
        Ok(())
    }
}

fn labels_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".labels.csv");
    out.with_file_name(name)
}

/// Internal 0-based index to the label used in the input file.
fn label_table(n: usize) -> String {
    let mut s = String::from("index,label\n");
    for k in 0..n {
        s.push_str(&format!("{k},{}\n", k + 1));
    }
    s
}

fn warn_unconverged(converged: bool, what: &str) {
    if !converged {
        warn!("{what} hit the iteration cap before converging");
    }
}

fn reconstruct(args: &ReconstructArgs) -> Result<()> {
    let g = args.input.load()?;
    let x = g.adjacency_matrix::<f64>();
    let (sm, converged) = match args.method {
        MethodArg::Lrnr | MethodArg::Lfnr => {
            let kind = if args.method == MethodArg::Lrnr {
                SolverKind::Lrnr
            } else {
                SolverKind::Lfnr
            };
            let res = solve(&x, &args.solver.config(), kind)?;
            info!("{} finished after {} iterations", kind.name(), res.iterations);
            warn_unconverged(res.converged, kind.name());
            let source = ScoreSource::Solver {
                solver: kind,
                lambda: args.solver.lambda,
            };
            (score_matrix(&x, &res.z_star, source)?, res.converged)
        }
        MethodArg::Cn | MethodArg::Ra | MethodArg::Lp => {
            let Method::Baseline { method, epsilon } = args.method.to_method(args.solver.lambda, args.epsilon)
            else {
                unreachable!("baseline arm")
            };
            (baseline_scores(&g, &BaselineSpec { method, epsilon })?, true)
        }
    };
    let report = ReconstructionReport {
        source: sm.source().to_string(),
        converged,
        missing: RankedLinksReport::new(&rank_missing(&sm, &x)?, 0),
        spurious: RankedLinksReport::new(&rank_spurious(&sm, &x)?, 0),
    };
    args.output.emit(&report, &args.input, &g)
}

fn baseline(args: &BaselineArgs) -> Result<()> {
    let g = args.input.load()?;
    let x = g.adjacency_matrix::<f64>();
    let method = match args.method {
        BaselineArg::Cn => BaselineMethod::Cn,
        BaselineArg::Ra => BaselineMethod::Ra,
        BaselineArg::Lp => BaselineMethod::Lp,
    };
    let sm = baseline_scores::<f64>(&g, &BaselineSpec {
        method,
        epsilon: args.epsilon,
    })?;
    let report = ReconstructionReport {
        source: sm.source().to_string(),
        converged: true,
        missing: RankedLinksReport::new(&rank_missing(&sm, &x)?, 0),
        spurious: RankedLinksReport::new(&rank_spurious(&sm, &x)?, 0),
    };
    args.output.emit(&report, &args.input, &g)
}

fn regularity(args: &RegularityArgs) -> Result<()> {
    let g = args.input.load()?;
    let kind = SolverKind::from(args.method);
    let res = solve(&g.adjacency_matrix::<f64>(), &args.solver.config(), kind)?;
    warn_unconverged(res.converged, kind.name());
    let report = regularity_sigma(&res.z_star, DEFAULT_RREF_TOL)?;
    let rc = node_importance(&res.z_star);
    let links = link_importance(&rc, &g)?;
    let summary = RegularitySummary {
        regularity: report,
        link_importance: links.ascending().into_iter().map(|((i, j), u)| (i, j, u)).collect(),
        node_importance: rc.rc,
        converged: res.converged,
    };
    args.output.emit(&summary, &args.input, &g)
}

fn regulate_cmd(args: &RegulateArgs) -> Result<()> {
    let g = args.input.load()?;
    let kind = SolverKind::from(args.method);
    let cfg = RegulationConfig {
        solver: kind,
        batch_fraction: args.batch_fraction,
        max_remove_fraction: args.max_remove_fraction,
        solver_config: args.solver.config(),
        ..RegulationConfig::default()
    };
    let trajectory = regulate(&g, &cfg)?;
    info!(
        "σ_r {} -> {} after removing {} links",
        trajectory.initial_sigma(),
        trajectory.final_sigma(),
        trajectory.removed_edges().len()
    );
    if let Some(path) = &args.graph_out {
        let fmt = args.input.format();
        write_text(path, &format_edge_list(&trajectory.final_graph, &fmt))?;
    }
    args.output.emit(&trajectory, &args.input, &g)
}

fn dedup_methods(methods: &[MethodArg]) -> Vec<MethodArg> {
    let mut out: Vec<MethodArg> = Vec::new();
    for &m in methods {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    if args.runs == 0 {
        return Err(Error::Input("--runs must be at least 1".into()));
    }
    let g = args.input.load()?;
    let methods: Vec<Method> = dedup_methods(&args.method)
        .into_iter()
        .map(|m| m.to_method(args.solver.lambda, BaselineSpec::DEFAULT_LP_EPSILON))
        .collect();
    let cfg = ExperimentConfig {
        methods: ExperimentConfig::expand_lambda_grid(&methods, &args.lambda_grid),
        miss_fraction: args.miss_fraction,
        spur_fraction: args.spur_fraction,
        seeds: ExperimentConfig::seeds_from(args.seed, args.runs),
        solver: args.solver.config(),
        auc_mode: args.auc_samples.map_or(AucModeKind::Exhaustive, AucModeKind::Sampled),
        record_timing: args.timings,
    };
    let report = run_experiment(&g, &cfg)?;
    args.output.emit(&report, &args.input, &g)
}

fn sweep(args: &SweepArgs) -> Result<()> {
    if args.runs == 0 {
        return Err(Error::Input("--runs must be at least 1".into()));
    }
    let g = args.input.load()?;
    let steps = (args.max_remove_fraction * 100.0).round() as usize;
    let cfg = SweepConfig {
        fractions: (1..=steps).map(|p| p as f64 / 100.0).collect(),
        importance_solver: SolverKind::Lrnr,
        regularity_solver: Some(SolverKind::Lrnr),
        methods: dedup_methods(&args.method)
            .into_iter()
            .map(|m| m.to_method(args.solver.lambda, BaselineSpec::DEFAULT_LP_EPSILON))
            .collect(),
        miss_fraction: args.miss_fraction,
        split_seeds: ExperimentConfig::seeds_from(args.seed, args.runs),
        solver: args.solver.config().with_lambda(args.regularity_lambda),
    };
    let sweeps = args
        .strategy
        .iter()
        .map(|s| {
            let strategy = match s {
                StrategyArg::Irregular => RemovalStrategy::Irregular,
                StrategyArg::Regular => RemovalStrategy::Regular,
                StrategyArg::Random => RemovalStrategy::Random { seed: args.seed },
            };
            removal_sweep(&g, strategy, &cfg).map(|points| (strategy, points))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = SweepReport {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        sweeps,
    };
    args.output.emit(&report, &args.input, &g)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Reconstruct(a) => reconstruct(a),
        Command::Regularity(a) => regularity(a),
        Command::Regulate(a) => regulate_cmd(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Baseline(a) => baseline(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("regnet: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
