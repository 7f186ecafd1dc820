mod config;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use ostrowski::bounds::BoundError;
use ostrowski::norms::NormError;
use ostrowski::quad::QuadError;
use ostrowski::{bounds, means, BoundMode, BoundRequest, BoundStatus, ExprAst, FunctionModel};

use config::{JobConfig, NormSection, OutputFormat};

#[derive(Parser)]
#[command(
    name = "ostrowski",
    version,
    about = "Certified error bounds for |f(p) - integral mean of f|"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One bound report at a point, checked against the integration oracle
    Bound(JobArgs),
    /// Bound reports over a uniform grid of interior points
    Sweep(JobArgs),
    /// Classical means of a pair and the refined gap inequalities
    Means(MeansArgs),
    /// Run the bundled property suites on this build
    Selftest,
}

#[derive(Args, Clone, Debug, Default)]
struct JobArgs {
    /// Expression in x, e.g. "exp(x) - 2*abs(x - 0.5)"
    #[arg(long)]
    expr: Option<String>,

    /// Left endpoint of the interval
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,

    /// Right endpoint of the interval
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,

    /// Evaluation point, strictly inside (a, b)
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,

    /// Comma-separated points where the derivative is undefined
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    breakpoints: Option<Vec<f64>>,

    /// classical | refined | piecewise | at-breakpoint (default refined)
    #[arg(long)]
    mode: Option<String>,

    /// Number of interior grid points for sweep (at least 2)
    #[arg(long)]
    grid: Option<usize>,

    /// json | csv (bound defaults to json, sweep to csv)
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// JSON file with the same keys; inline flags override it
    #[arg(long)]
    config: Option<PathBuf>,

    /// Relative stabilization tolerance for derivative sup-norm sampling
    #[arg(long)]
    norm_tol: Option<f64>,

    /// Grid size cap for derivative sup-norm sampling
    #[arg(long)]
    norm_max_samples: Option<usize>,
}

#[derive(Args, Clone, Debug)]
struct MeansArgs {
    /// Smaller value of the pair, must be positive
    #[arg(long, allow_hyphen_values = true)]
    a: f64,

    /// Larger value of the pair
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
}

/// A failure with the exit code it maps to: 64 for configs the job
/// rejects before computing, 1 for evaluation problems at runtime.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 64, message: message.into() }
}

fn runtime(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Means(args) => cmd_means(args),
        Command::Selftest => Ok(cmd_selftest()),
    };

    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn resolve(args: JobArgs) -> Result<JobConfig, Failure> {
    let base = match &args.config {
        Some(path) => JobConfig::load(path).map_err(usage)?,
        None => JobConfig::default(),
    };
    let norm = if args.norm_tol.is_some() || args.norm_max_samples.is_some() {
        Some(NormSection { tol: args.norm_tol, max_samples: args.norm_max_samples })
    } else {
        None
    };
    let flags = JobConfig {
        expression: args.expr,
        a: args.a,
        b: args.b,
        breakpoints: args.breakpoints,
        p: args.p,
        grid: args.grid,
        mode: args.mode,
        format: args.format,
        norm,
    };
    Ok(base.merged_with(flags))
}

fn build_model(cfg: &JobConfig) -> Result<FunctionModel, Failure> {
    let text = cfg
        .expression
        .as_deref()
        .ok_or_else(|| usage("missing expression: pass --expr or set it in the config file"))?;
    let ast = ExprAst::parse(text).map_err(|e| usage(format!("cannot parse {text:?}: {e}")))?;
    let a = cfg.a.ok_or_else(|| usage("missing left endpoint --a"))?;
    let b = cfg.b.ok_or_else(|| usage("missing right endpoint --b"))?;
    let breakpoints = cfg.breakpoints.clone().unwrap_or_default();
    FunctionModel::with_breakpoints(ast, a, b, breakpoints).map_err(|e| usage(e.to_string()))
}

fn parse_mode(cfg: &JobConfig) -> Result<BoundMode, Failure> {
    cfg.mode
        .as_deref()
        .unwrap_or("refined")
        .parse()
        .map_err(|e: BoundError| usage(e.to_string()))
}

/// Everything a bound computation rejects up front is a config problem;
/// only failures to evaluate the function itself are runtime errors.
fn classify(err: BoundError) -> Failure {
    match &err {
        BoundError::Evaluation { .. }
        | BoundError::Norm(NormError::Derivative { .. })
        | BoundError::Quad(QuadError::Evaluation { .. })
        | BoundError::Quad(QuadError::NonConvergence { .. }) => runtime(err.to_string()),
        _ => usage(err.to_string()),
    }
}

fn status_code(status: BoundStatus) -> u8 {
    match status {
        BoundStatus::Holds => 0,
        BoundStatus::ViolatedObserved => 2,
        BoundStatus::Inconclusive => 1,
    }
}

fn cmd_bound(args: JobArgs) -> Result<u8, Failure> {
    let cfg = resolve(args)?;
    let model = build_model(&cfg)?;
    let p = cfg.p.ok_or_else(|| usage("missing evaluation point --p"))?;
    let mode = parse_mode(&cfg)?;
    let req = BoundRequest::new(&model, p, mode).with_norm_config(cfg.norm_config());
    let report = bounds::bound_report(&req).map_err(classify)?;
    match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => print!("{}", output::bound_json(&report)),
        OutputFormat::Csv => print!("{}", output::bound_csv(p, &report)),
    }
    Ok(status_code(report.status))
}

fn cmd_sweep(args: JobArgs) -> Result<u8, Failure> {
    let cfg = resolve(args)?;
    let model = build_model(&cfg)?;
    let grid = cfg.grid.ok_or_else(|| usage("missing --grid (number of interior points)"))?;
    let mode = parse_mode(&cfg)?;
    let entries = bounds::sweep(&model, grid, mode, cfg.norm_config()).map_err(classify)?;
    match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => print!("{}", output::sweep_json(&entries)),
        OutputFormat::Csv => print!("{}", output::sweep_csv(&entries)),
    }
    let statuses: Vec<BoundStatus> = entries.iter().map(|e| e.report.status).collect();
    if statuses.contains(&BoundStatus::ViolatedObserved) {
        Ok(2)
    } else if statuses.contains(&BoundStatus::Inconclusive) {
        Ok(1)
    } else {
        Ok(0)
    }
}

fn cmd_means(args: MeansArgs) -> Result<u8, Failure> {
    let report = means::refined_mean_bounds(args.a, args.b).map_err(|e| usage(e.to_string()))?;
    print!("{}", output::means_json(&report));
    Ok(if report.all_hold() { 0 } else { 2 })
}

fn cmd_selftest() -> u8 {
    let mutation = std::env::var(selftest::MUTATION_ENV).ok();
    let outcomes = selftest::run_all(mutation.as_deref());
    for outcome in &outcomes {
        println!("{}", outcome.summary_line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed == 0 {
        println!("selftest: all {} suites passed", outcomes.len());
        0
    } else {
        println!("selftest: {failed} of {} suites failed", outcomes.len());
        3
    }
}
