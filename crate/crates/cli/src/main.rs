use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dyadcov::simulate::{run_sweep, write_sweep_csv, SimConfig, SweepParameter};
use dyadcov::EstimatorKind;

mod report;

#[derive(Parser, Debug)]
#[command(
    name = "dyadcov",
    version,
    about = "Dyadic regression inference under ordered-node dependence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit OLS and report standard errors, t statistics and p-values per estimator.
    Fit(FitArgs),
    /// Run the bandwidth selector on the node scores of an OLS fit.
    Bandwidth(DataArgs),
    /// Monte Carlo rejection frequencies, optionally swept over one parameter.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Dyad CSV with header node_i,node_j,y,x1,...,xK
    #[arg(long)]
    pub data: PathBuf,
    /// Ordering CSV with header node,order_value
    #[arg(long)]
    pub order: PathBuf,
    /// Append node indicator columns (first-ranked node dropped).
    #[arg(long)]
    pub fixed_effects: bool,
    /// Do not prepend an intercept column.
    #[arg(long)]
    pub no_intercept: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Use this bandwidth instead of the data-driven choice.
    #[arg(long)]
    pub bandwidth: Option<usize>,
    /// Scale the selected bandwidth by this factor.
    #[arg(long, default_value_t = 1.0)]
    pub sigma_l: f64,
    /// Comma-separated estimator list, or `all`.
    #[arg(long, default_value = "all")]
    pub estimators: String,
    /// Coefficient to test, by regressor name or 1-based column index. Repeatable.
    #[arg(long)]
    pub contrast: Vec<String>,
    /// Null value for every contrast.
    #[arg(long = "null", default_value_t = 0.0)]
    pub null_value: f64,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    /// Clip negative meat eigenvalues before sandwiching.
    #[arg(long)]
    pub psd_fix: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Heteroskedasticity scale.
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 5000)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_l: f64,
    #[arg(long, default_value = "all")]
    estimators: String,
    /// Parameter to sweep: rho, omega, n, k, gamma, sigma_l.
    #[arg(long, requires = "values")]
    sweep: Option<String>,
    /// Comma-separated values for the swept parameter.
    #[arg(long, requires = "sweep")]
    values: Option<String>,
    #[arg(long)]
    psd_fix: bool,
    /// Worker threads for replications.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_values(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("bad sweep value `{t}`"))
        })
        .collect()
}

fn simulate(args: SimulateArgs) -> Result<()> {
    if args.threads == 0 {
        bail!("--threads must be at least 1");
    }
    let base = SimConfig {
        n: args.n,
        k: args.k,
        rho: args.rho,
        omega: args.omega,
        gamma_het: args.gamma,
        reps: args.reps,
        seed: args.seed,
        level: args.level,
        estimators: EstimatorKind::parse_list(&args.estimators)?,
        sigma_l: args.sigma_l,
        psd_fix: args.psd_fix,
    };
    base.validate()?;
    let (param, values) = match (&args.sweep, &args.values) {
        (Some(p), Some(v)) => (p.parse::<SweepParameter>()?, parse_values(v)?),
        _ => (SweepParameter::Rho, vec![base.rho]),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .context("cannot start worker threads")?;
    let points = pool.install(|| run_sweep(&base, param, &values))?;
    let mut out = output(args.out.as_deref())?;
    write_sweep_csv(&points, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(args) => {
            let rep = report::fit_report(&args)?;
            let mut out = output(args.data.out.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &rep)?;
            writeln!(out)?;
            out.flush()?;
        }
        Command::Bandwidth(args) => {
            let sel = report::bandwidth_report(&args)?;
            let mut out = output(args.out.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &sel)?;
            writeln!(out)?;
            out.flush()?;
        }
        Command::Simulate(args) => simulate(args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
