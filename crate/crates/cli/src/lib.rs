//! `lwquad` command-line driver.
//!
//! Exit codes: 0 success, 1 a check failed, 2 CFL pair rejected, 64 usage
//! error, 65 bad input data, 73 output file cannot be created.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod audit;
pub mod converge;
pub mod output;
pub mod simulate;
pub mod sweep;

pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const CFL_REJECTED: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const DATA: i32 = 65;
    pub const CANT_CREATE: i32 = 73;
}

/// A command that stopped early, with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(exit::USAGE, message)
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self::new(exit::DATA, message)
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::new(exit::CANT_CREATE, format!("cannot write {}: {err}", path.display()))
    }

    pub fn report(err: std::io::Error) -> Self {
        Self::new(exit::CANT_CREATE, format!("cannot write report: {err}"))
    }
}

impl From<lwquad::Error> for Failure {
    fn from(e: lwquad::Error) -> Self {
        use lwquad::Error as E;
        let code = match e {
            E::CflRejected { .. } => exit::CFL_REJECTED,
            E::GridTooSmall { .. } | E::InvalidGrid { .. } => exit::USAGE,
            _ => exit::DATA,
        };
        Self::new(code, e.to_string())
    }
}

pub type CmdResult = Result<i32, Failure>;

#[derive(Debug, Parser)]
#[command(name = "lwquad", version, about = "Lax-Wendroff on the quarter plane: energy audits and CFL region maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the 2D scheme and write a per-step energy CSV.
    Simulate(SimulateArgs),
    /// Check the energy identities and inequalities on random fields.
    Audit(AuditArgs),
    /// Classify the (lambda|a|, mu|b|) plane and write CSV and PGM maps.
    Sweep(SweepArgs),
    /// Grid refinement study against the exact translated solution.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    Explore,
}

impl From<Mode> for lwquad::CflMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => lwquad::CflMode::Strict,
            Mode::Explore => lwquad::CflMode::Explore,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialCondition {
    Zero,
    Gaussian,
    Spike,
    File,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 64)]
    pub nx: usize,
    #[arg(long, default_value_t = 64)]
    pub ny: usize,
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub dx: f64,
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub dy: f64,
    #[arg(long, default_value_t = 0.1 / 64.0)]
    pub dt: f64,
    /// Speed in x; must be negative.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub a: f64,
    /// Speed in y; must be negative.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// `file` reads `--ic-path`: nx*ny whitespace-separated numbers, row by
    /// row (k = 0 first), j fastest within a row.
    #[arg(long, value_enum, default_value_t = InitialCondition::Gaussian)]
    pub ic: InitialCondition,
    #[arg(long)]
    pub ic_path: Option<PathBuf>,
    /// Gaussian centre as fractions of the domain.
    #[arg(long, default_value_t = 0.15)]
    pub center_x: f64,
    #[arg(long, default_value_t = 0.15)]
    pub center_y: f64,
    /// Gaussian width as a fraction of the shorter side; cut off at four widths.
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
    #[arg(long, default_value_t = 2)]
    pub spike_j: usize,
    #[arg(long, default_value_t = 2)]
    pub spike_k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    pub mode: Mode,
    /// Comparability constant for strict mode.
    #[arg(long, default_value_t = lwquad::grid::DEFAULT_BOUND_M)]
    pub m: f64,
    /// Radius bound on alpha^2 + beta^2 for strict mode.
    #[arg(long, default_value_t = lwquad::grid::DEFAULT_RADIUS_EPS)]
    pub eps: f64,
    /// Constant of the stability estimate.
    #[arg(long, default_value_t = lwquad::energy::DEFAULT_THEOREM_C)]
    pub c: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = -0.3, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
    pub beta: f64,
    /// Use the fixed set (-0.1,-0.1), (-0.3,-0.2), (-0.2,-0.3), (-0.4,-0.4)
    /// instead of --alpha/--beta.
    #[arg(long)]
    pub sweep_cfl: bool,
    /// Interior cells per direction.
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long, hide = true)]
    pub corrupt_ghosts: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Corner,
    Reduced,
    Boundary,
}

impl From<Which> for lwquad::regions::RegionKind {
    fn from(w: Which) -> Self {
        use lwquad::regions::RegionKind as K;
        match w {
            Which::Corner => K::Corner,
            Which::Reduced => K::Reduced,
            Which::Boundary => K::Boundary,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, default_value_t = 256)]
    pub res: usize,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_pgm: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    /// Bump that stays clear of every boundary.
    Interior,
    /// Bump that leaves through the outflow corner.
    Corner,
    /// Vanishing data.
    Zero,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Cells per direction on the coarsest level.
    #[arg(long, default_value_t = 32)]
    pub coarse: usize,
    #[arg(long, value_enum, default_value_t = Case::Interior)]
    pub case: Case,
    /// dt/dx = dt/dy.
    #[arg(long, default_value_t = 0.2)]
    pub lambda: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub b: f64,
    /// Steps on the coarsest level (doubled per level); default depends on
    /// the case.
    #[arg(long)]
    pub coarse_steps: Option<usize>,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

/// Parses `args` and runs the chosen subcommand; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == exit::OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(&a, out),
        Command::Audit(a) => audit::run(&a, out),
        Command::Sweep(a) => sweep::run(&a, out),
        Command::Converge(a) => converge::run(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "lwquad: {}", f.message);
            f.code
        }
    }
}
