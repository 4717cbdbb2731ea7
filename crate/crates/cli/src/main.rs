use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use uncert_core::spectral::SolveOptions;
use uncert_core::{MetricT, MetricZ};

mod bounds;
mod curve;
mod transport;
mod verify;

/// Sharp number-angle uncertainty tradeoff curves.
#[derive(Parser)]
#[command(name = "uncert", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep t and write the tradeoff curve with its ground states.
    Curve(curve::CurveArgs),
    /// Evaluate analytic lower bounds against the sweep curve.
    Bounds(bounds::BoundsArgs),
    /// Run a suite of numerical checks and write a JSON report.
    Verify(verify::VerifyArgs),
    /// Transport distance between two distributions given as JSON files.
    Transport(transport::TransportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ZArg {
    Std,
    Disc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TArg {
    Arc,
    Cho,
}

impl From<ZArg> for MetricZ {
    fn from(z: ZArg) -> Self {
        match z {
            ZArg::Std => MetricZ::Std,
            ZArg::Disc => MetricZ::Disc,
        }
    }
}

impl From<TArg> for MetricT {
    fn from(t: TArg) -> Self {
        match t {
            TArg::Arc => MetricT::Arc,
            TArg::Cho => MetricT::Cho,
        }
    }
}

/// Truncation flags shared by the commands that solve `H(t)`.
#[derive(Args, Clone, Debug)]
pub struct SolverArgs {
    /// Starting truncation; doubled until the tail certificate holds.
    #[arg(long, default_value_t = 80)]
    nmax: usize,
    /// Accept results at the escalation cap without a tail certificate.
    #[arg(long)]
    no_certificate: bool,
}

impl SolverArgs {
    pub fn options(&self) -> Result<SolveOptions, Failure> {
        if self.nmax < 8 {
            return Err(Failure::Usage(format!("--nmax must be at least 8, got {}", self.nmax)));
        }
        let mut o = SolveOptions { n_max: self.nmax, require_certificate: !self.no_certificate, ..SolveOptions::default() };
        if let Ok(v) = std::env::var("UNCERT_NMAX_CAP") {
            let cap: usize =
                v.trim().parse().map_err(|_| Failure::Usage(format!("UNCERT_NMAX_CAP is not an integer: {v:?}")))?;
            o.cap = cap;
            o.banded_cap = cap;
        }
        Ok(o)
    }
}

/// Output directory flag.
#[derive(Args, Clone, Debug)]
pub struct OutArgs {
    /// Directory for output files (created if missing).
    #[arg(long)]
    out: PathBuf,
}

/// Why a command stopped; each maps to an exit code.
#[derive(Debug)]
pub enum Failure {
    /// 1: `verify` ran but a check failed.
    ChecksFailed(usize),
    /// 2: bad flags or input files.
    Usage(String),
    /// 3, 4, 5 by error kind.
    Core(uncert_core::Error),
}

impl From<uncert_core::Error> for Failure {
    fn from(e: uncert_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        use uncert_core::Error as E;
        match self {
            Failure::ChecksFailed(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Core(E::InvalidArgument(_) | E::OutOfRange { .. } | E::GridMismatch { .. }) => 2,
            Failure::Core(E::TruncationCapExceeded { .. }) => 4,
            Failure::Core(E::Infeasible(_)) => 5,
            Failure::Core(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Curve(a) => curve::run(a),
        Command::Bounds(a) => bounds::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Transport(a) => transport::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("uncert: {e}");
            ExitCode::from(e.code())
        }
    }
}
