//! Command-line surface used by the `qbessel` binary.
//!
//! Subcommands: `field` (sampled mode fields), `verify` (relation suites),
//! `expect` (coherent-state expectations), `expand` (spherical-wave
//! coefficient table). Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; every relation passed or failed as expected |
//! | 1 | a relation failed unexpectedly |
//! | 2 | usage or configuration error; no output file is written |
//! | 3 | a quadrature result was inconclusive |

mod commands;
mod config;
mod format;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_expand, cmd_expect, cmd_field, cmd_verify, Amplitude, CommandOutput};
pub use config::{
    parse_nodes, parse_range, Format, PacketConfig, RunConfig, SphericalConfig, CONFIG_ENV,
};
pub use format::{field_columns, fmt_num, Grid, Plane, Quantity};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qbessel",
    version,
    about = "Quantized electromagnetic Bessel beams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample E and B (or M and N, or A) of one mode on a planar grid.
    Field(FieldArgs),
    /// Run relation suites and write a JSON report.
    Verify(VerifyArgs),
    /// Expectation values of the observables in a coherent state.
    Expect(ExpectArgs),
    /// Spherical-wave expansion coefficients of one mode.
    Expand(ExpandArgs),
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Configuration file (default: the file named by QBESSEL_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Output file (default: `output.path` from the config, else standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Lattice flags; each overrides the matching config key.
#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    /// Azimuthal range `lo..hi`, e.g. `--m-range=-3..3`.
    #[arg(long, allow_hyphen_values = true)]
    pub m_range: Option<String>,
    /// `k_perp` nodes, comma separated, each `value` or `value:weight`.
    #[arg(long)]
    pub kperp: Option<String>,
    /// `k_z` nodes, same syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub kz: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Tm,
    Te,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i32,
    #[arg(long)]
    pub kperp: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub kz: f64,
    /// Sampling plane: `z=<v>`, `y=<v>` or `x=<v>`.
    #[arg(long, default_value = "z=0", allow_hyphen_values = true)]
    pub plane: String,
    /// Points along the two in-plane axes, `NxM`.
    #[arg(long, default_value = "64x64")]
    pub grid: String,
    /// Half-width of the square sampling window.
    #[arg(long, default_value_t = 8.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, value_enum, default_value = "fields")]
    pub quantity: Quantity,
    /// Amplitude rule: photon-normalized or unit.
    #[arg(long, value_enum, default_value = "physical")]
    pub amplitude: AmplitudeArg,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmplitudeArg {
    Physical,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Commutators,
    Basis,
    Quadrature,
    Spherical,
    All,
}

impl Suite {
    pub fn label(self) -> &'static str {
        match self {
            Suite::Commutators => "commutators",
            Suite::Basis => "basis",
            Suite::Quadrature => "quadrature",
            Suite::Spherical => "spherical",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Algebraic tolerance of the lattice relations.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest `j` of the spherical-wave sums.
    #[arg(long)]
    pub j_max: Option<u32>,
    /// Additional relation names allowed to fail (repeatable).
    #[arg(long)]
    pub expected_fail: Vec<String>,
    /// Drop the configured expected-fail list.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    /// TM and TE modes.
    Natural,
    /// `a_+- = (a_TM +- i a_TE)/sqrt 2`; `tm` in `--amp` names `+`, `te` names `-`.
    Pm,
}

#[derive(Debug, Clone, Args)]
pub struct ExpectArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// `FAMILY:M:IP:IZ=RE[,IM]`, the continuum amplitude on node `(IP, IZ)` (repeatable).
    #[arg(long = "amp", allow_hyphen_values = true)]
    pub amps: Vec<String>,
    #[arg(long, value_enum, default_value = "natural")]
    pub basis: BasisArg,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ExpandArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i32>,
    #[arg(long)]
    pub kperp: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub kz: Option<f64>,
    #[arg(long)]
    pub j_max: Option<u32>,
    /// Sample radius for the error column (default `0.5 / kperp`).
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub common: Common,
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(Error::from)
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Field(a) => cmd_field(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Expect(a) => cmd_expect(a),
        Command::Expand(a) => cmd_expand(a),
    };
    match result {
        Ok(o) => {
            for line in &o.log {
                eprintln!("{line}");
            }
            if let Err(e) = write_output(&o.out, &o.text) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            o.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
