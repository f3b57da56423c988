use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use yukawa_ss::analytic::{ResidualForm, SolveOptions};
use yukawa_ss::model::{ParamSet, PhysicalParams};
use yukawa_ss::numeric::{FdOptions, Scheme};
use yukawa_ss::report::{Method, SolveConfig};

mod commands;

const QUANTUM_NUMBERS_HELP: &str = "\
Quantum numbers: n counts the radial nodes and starts at 0. The published \
tables list n = 1, 2, ... with the same convention, so the nodeless n = 0 \
state exists but is not tabulated.";

#[derive(Parser, Debug)]
#[command(
    name = "yukawa-ss",
    version,
    about = "Bound states of two spinless particles in a Yukawa potential",
    after_help = QUANTUM_NUMBERS_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one state and print it as key=value lines.
    #[command(after_help = QUANTUM_NUMBERS_HELP)]
    Solve(SolveArgs),
    /// Regenerate a published table and compare it with the embedded copy.
    Table(TableArgs),
    /// Approximate and numerical wavefunctions of one state as CSV.
    Wavefunction(WavefunctionArgs),
    /// Yukawa potential and its exponential approximant as CSV.
    Potential(PotentialArgs),
    /// Print an embedded table as CSV.
    DumpGolden(DumpArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct ParamArgs {
    /// key=value file with any of m1, m2, V0, a, hbar; flags take precedence.
    #[arg(long)]
    params: Option<PathBuf>,
    /// First constituent mass [fm^-1].
    #[arg(long)]
    m1: Option<f64>,
    /// Second constituent mass [fm^-1].
    #[arg(long)]
    m2: Option<f64>,
    /// Coupling strength.
    #[arg(long = "V0")]
    v0: Option<f64>,
    /// Screening parameter [fm^-1].
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self, defaults: PhysicalParams) -> anyhow::Result<PhysicalParams> {
        let file = match &self.params {
            Some(path) => ParamSet::read(path)?,
            None => ParamSet::default(),
        };
        let flags = ParamSet {
            m1: self.m1,
            m2: self.m2,
            v0: self.v0,
            a: self.a,
            hbar: self.hbar,
        };
        Ok(file.overridden_by(flags).resolve(defaults)?)
    }
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Outer radius of the finite-difference box [fm]; defaults to sixty
    /// hydrogen-like radii of the level (at least 40).
    #[arg(long)]
    rmax: Option<f64>,
    /// Interior grid points.
    #[arg(long, default_value_t = 20_000)]
    points: usize,
    /// Finite-difference discretization: auto, plain or sqrt-r.
    #[arg(long, default_value = "auto")]
    scheme: Scheme,
    /// Root tolerance of the transcendental energy equation, relative to n + nu + 1/2.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Use the variant of the energy equation with (V0 + E/2m~) in the second radical.
    #[arg(long = "printed-14a")]
    printed_14a: bool,
}

impl SolverArgs {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            analytic: SolveOptions {
                tol: self.tol,
                form: if self.printed_14a {
                    ResidualForm::Printed
                } else {
                    ResidualForm::Consistent
                },
            },
            fd: FdOptions {
                r_max: self.rmax,
                points: self.points,
                scheme: self.scheme,
            },
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Radial quantum number (number of nodes).
    #[arg(long)]
    n: u32,
    /// Orbital quantum number.
    #[arg(long)]
    l: u32,
    /// ss-analytic, ss-numeric, nr-analytic, nr-numeric or coulomb.
    #[arg(long, default_value = "ss-analytic")]
    method: Method,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// 1 (semirelativistic) or 2 (Schrödinger).
    which: u32,
    /// Masses, coupling and hbar; the screening runs over the table's columns.
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct WavefunctionArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    l: u32,
    /// Equation family: any ss-* method selects the semirelativistic pair,
    /// nr-* the Schrödinger pair.
    #[arg(long, default_value = "ss-analytic")]
    method: Method,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct PotentialArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Smallest radius [fm].
    #[arg(long, default_value_t = 0.1)]
    rmin: f64,
    /// Largest radius [fm].
    #[arg(long, default_value_t = 300.0)]
    rmax: f64,
    /// Number of rows.
    #[arg(long, default_value_t = 1000)]
    points: usize,
}

#[derive(Args, Debug)]
struct DumpArgs {
    /// 1 or 2.
    which: u32,
}

/// A comparison that ran but fell outside its tolerance.
#[derive(Debug)]
struct ComparisonFailure(String);

impl std::fmt::Display for ComparisonFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ComparisonFailure {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Table(args) => commands::table(args),
        Command::Wavefunction(args) => commands::wavefunction(args),
        Command::Potential(args) => commands::potential(args),
        Command::DumpGolden(args) => commands::dump_golden(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<ComparisonFailure>() => {
            eprintln!("comparison failed: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
