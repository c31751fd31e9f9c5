mod commands;
mod grid;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twistlab::{Budget, Convention, LSeriesInstance};

use commands::{CertifyArgs, CoeffRequest, EvalArgs, OscArgs, OscMode, TransformArgs, TwistArgs};
use output::{write_atomic, Format, Table};

const BUDGET_ENV: &str = "TWISTLAB_BUDGET";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] twistlab::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Compute(twistlab::Error::Config(_)) => 1,
            CliError::Compute(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "twistlab", version, about = "Smoothed L-function evaluation, resonance transforms and additive-twist certificates")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ignore the work budget.
    #[arg(long, global = true)]
    override_budget: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InstanceArgs {
    /// Built-in instance name.
    #[arg(long)]
    preset: Option<String>,
    /// TOML instance description.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    OracleCalibrated,
    PaperPrinted,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::OracleCalibrated => Convention::OracleCalibrated,
            ConventionArg::PaperPrinted => Convention::PaperPrinted,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derived constants of an instance.
    Describe {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Index used for the resonant frequency and kappa.
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Dirichlet coefficients.
    Coeffs {
        #[command(flatten)]
        instance: InstanceArgs,
        /// A single coefficient a_n.
        #[arg(long, conflicts_with = "bulk", required_unless_present = "bulk")]
        n: Option<u64>,
        /// All coefficients a_1..a_N.
        #[arg(long)]
        bulk: Option<u64>,
    },
    /// Smoothed evaluation of F(sigma + it).
    Eval {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        /// Heights: a value or a grid.
        #[arg(long)]
        t: String,
        /// Smoothing length; defaults to max(1e3, 10 (t/2pi)^d) per point.
        #[arg(long = "X")]
        cutoff: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Exact against asymptotic gamma-factor ratio.
    GammaCheck {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        #[arg(long = "t-grid")]
        t_grid: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::OracleCalibrated)]
        convention: ConventionArg,
    },
    /// Oscillatory integrals I_n(T) by quadrature and stationary phase.
    Osc {
        #[arg(long)]
        d: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "T")]
        t: f64,
        /// N1:N2:step
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value_t = OscMode::Both)]
        mode: OscMode,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::OracleCalibrated)]
        convention: ConventionArg,
    },
    /// The resonance transform H(T) by up to three routes.
    Transform {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// 'auto' for the frequency resonant with a_m.
        #[arg(long, default_value = "auto")]
        alpha: String,
        #[arg(long = "T-grid")]
        t_grid: Option<String>,
        #[arg(long, default_value = "direct,sum,fe")]
        routes: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::OracleCalibrated)]
        convention: ConventionArg,
        /// Relative quadrature tolerance (scaled by alpha T).
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        /// Print printed-versus-calibrated constants instead of values.
        #[arg(long)]
        ledger: bool,
    },
    /// Additive twists over dyadic blocks (T, 4T).
    TwistScan {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value = "auto")]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long = "T-grid")]
        t_grid: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
    },
    /// Partial sums of |a_n| and their growth exponent.
    Summatory {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long = "X-grid")]
        x_grid: String,
    },
    /// Omega certificate: |twist(T)| against the predicted main term.
    Certify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value = "auto")]
        alpha: String,
        #[arg(long = "T-grid")]
        t_grid: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::OracleCalibrated)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Exit with status 3 if any asserted row fails.
        #[arg(long)]
        strict: bool,
    },
}

fn load(args: &InstanceArgs) -> Result<(LSeriesInstance, (String, String)), CliError> {
    match (&args.preset, &args.config) {
        (Some(name), None) => {
            let instance = twistlab::preset(name).map_err(|_| {
                CliError::Usage(format!(
                    "unknown preset '{name}'; available: {}",
                    twistlab::PRESET_NAMES.join(", ")
                ))
            })?;
            Ok((instance, ("preset".into(), name.clone())))
        }
        (None, Some(path)) => {
            let instance = twistlab::config::load_instance(path)?;
            Ok((instance, ("config".into(), path.display().to_string())))
        }
        _ => Err(CliError::Usage("exactly one of --preset or --config is required".into())),
    }
}

fn budget(env: Option<String>, override_budget: bool) -> Result<Budget, CliError> {
    let mut budget = Budget::default();
    if let Some(raw) = env {
        let ops: f64 = raw
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| *v > 0.0)
            .ok_or_else(|| CliError::Usage(format!("{BUDGET_ENV} must be a positive number, got '{raw}'")))?;
        budget.max_ops = ops;
    }
    budget.enforce = !override_budget;
    Ok(budget)
}

fn with_instance(
    args: &InstanceArgs,
    run: impl FnOnce(&LSeriesInstance) -> Result<Table, CliError>,
) -> Result<Table, CliError> {
    let (instance, source) = load(args)?;
    let mut table = run(&instance)?;
    table.params.insert(0, source);
    Ok(table)
}

/// Runs the command; the flag is set when a strict certificate failed.
fn run(cli: &Cli, budget: Budget) -> Result<(Table, bool), CliError> {
    let mut failed = false;
    let table = match &cli.command {
        Command::Describe { instance, m } => with_instance(instance, |l| commands::describe(l, *m))?,
        Command::Coeffs { instance, n, bulk } => with_instance(instance, |l| {
            let request = match (n, bulk) {
                (Some(n), _) => CoeffRequest::Single(*n),
                (None, Some(b)) => CoeffRequest::Bulk(*b),
                (None, None) => return Err(CliError::Usage("one of --n or --bulk is required".into())),
            };
            commands::coeffs(l, request, &budget)
        })?,
        Command::Eval { instance, sigma, t, cutoff, p } => with_instance(instance, |l| {
            let args = EvalArgs { sigma: *sigma, t, cutoff: *cutoff, p: *p };
            commands::eval(l, &args, &budget)
        })?,
        Command::GammaCheck { instance, x, t_grid, convention } => {
            with_instance(instance, |l| commands::gamma_check(l, *x, t_grid, (*convention).into()))?
        }
        Command::Osc { d, alpha, t, n, mode, tol, convention } => commands::osc(&OscArgs {
            d: *d,
            alpha: *alpha,
            t: *t,
            n,
            mode: *mode,
            tol: *tol,
            convention: (*convention).into(),
        })?,
        Command::Transform { instance, m, alpha, t_grid, routes, convention, tol, p, rho, ledger } => {
            with_instance(instance, |l| {
                let args = TransformArgs {
                    m: *m,
                    alpha,
                    t_grid: t_grid.as_deref(),
                    routes,
                    convention: (*convention).into(),
                    tol: *tol,
                    p: *p,
                    rho: *rho,
                    ledger: *ledger,
                };
                commands::transform(l, &args, &budget)
            })?
        }
        Command::TwistScan { instance, alpha, m, t_grid, p, rho } => with_instance(instance, |l| {
            let args = TwistArgs { alpha, m: *m, t_grid, p: *p, rho: *rho };
            commands::twist(l, &args, &budget)
        })?,
        Command::Summatory { instance, x_grid } => {
            with_instance(instance, |l| commands::summatory(l, x_grid, &budget))?
        }
        Command::Certify { instance, m, alpha, t_grid, convention, p, rho, strict } => {
            with_instance(instance, |l| {
                let args = CertifyArgs {
                    m: *m,
                    alpha,
                    t_grid,
                    convention: (*convention).into(),
                    p: *p,
                    rho: *rho,
                    strict: *strict,
                };
                let (table, strict_failure) = commands::certify(l, &args, &budget)?;
                failed = strict_failure;
                Ok(table)
            })?
        }
    };
    Ok((table, failed))
}

fn emit(cli: &Cli, table: &Table) -> Result<(), CliError> {
    let text = table.render(cli.format);
    match &cli.out {
        Some(path) => write_atomic(path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = budget(std::env::var(BUDGET_ENV).ok(), cli.override_budget)
        .and_then(|b| run(&cli, b))
        .and_then(|(table, failed)| emit(&cli, &table).map(|_| failed));
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("twistlab: certificate failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("twistlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
