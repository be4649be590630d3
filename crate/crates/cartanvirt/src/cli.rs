//! Argument parsing and dispatch for the `cartanvirt` binary.

use cartanvirt_core::FDConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, Format, Options, Outcome};
use crate::error::{CliError, EXIT_CONFIG};

#[derive(Debug, Parser)]
#[command(name = "cartanvirt", version, about = "Numerical checks of the canonical virtual immersion of symmetric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog factor kinds with default lambda and dimensions
    List {
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Run every identity check and print the report
    Verify(RunArgs),
    /// Sectional curvatures of coordinate planes, via II and via finite differences
    Curvature(RunArgs),
    /// Recover a seeded random isometry iota from Omega_0 and iota Omega_0
    Uniqueness(RunArgs),
    /// Residual of Omega(d gamma v) = Omega(v) for the isometry in a space file
    Invariance(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Catalog shorthand (sphere:2, sl_so:3, sphere:2,euclidean:1, classical:sphere:2), `catalog`, or a JSON space file
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub tol_algebraic: Option<f64>,
    #[arg(long)]
    pub tol_fd: Option<f64>,
    #[arg(long)]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, env = "CARTANVIRT_SEED")]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Per-factor lambda overrides, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lambda: Option<Vec<f64>>,
}

impl RunArgs {
    pub fn options(&self) -> Options {
        let d = FDConfig::default();
        Options {
            space: self.space.clone(),
            lambda: self.lambda.clone(),
            config: FDConfig {
                h: self.fd_step.unwrap_or(d.h),
                samples: self.samples.unwrap_or(d.samples),
                seed: self.seed.unwrap_or(d.seed),
                tol_algebraic: self.tol_algebraic.unwrap_or(d.tol_algebraic),
                tol_fd: self.tol_fd.unwrap_or(d.tol_fd),
                ..d
            },
            format: self.format.into(),
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::List { format } => Ok(commands::list((*format).into())),
        Command::Verify(a) => commands::verify(&a.options()),
        Command::Curvature(a) => commands::curvature(&a.options()),
        Command::Uniqueness(a) => commands::uniqueness(&a.options()),
        Command::Invariance(a) => commands::invariance(&a.options()),
    }
}

/// Parses `std::env::args`, runs the command and returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
