//! The `fatsep` command line: argument parsing, commands and reports.

pub mod commands;
pub mod fixtures;
pub mod report;
pub mod suites;

use clap::{Parser, Subcommand};
use fatsep_core::cischeme::CIType;
use fatsep_core::exactlin::FieldSpec;

pub use report::{Check, RunReport};
pub use suites::Suite;

#[derive(Debug, Parser)]
#[command(name = "fatsep", version, about = "Separators and last syzygies of fat point schemes")]
pub struct Cli {
    /// Print the report as canonical JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// `rational`, `prime` or `prime:<p>`; overrides the field of a scheme file.
    #[arg(long, global = true)]
    pub field: Option<FieldSpec>,

    /// Seed for linear forms and random cases.
    #[arg(long, global = true, env = "FATSEP_SEED", default_value_t = 42)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert function table, degree and regularity index.
    Hilbert {
        /// Scheme JSON file, `-` for stdin, or `@name` for a bundled fixture.
        scheme: String,
    },
    /// Degrees of the minimal separators of one point.
    Separators {
        scheme: String,
        /// Point index, starting at 1.
        #[arg(long)]
        point: usize,
        /// Also print explicit separators.
        #[arg(long)]
        forms: bool,
        /// Also print the profiles of every multiplicity level.
        #[arg(long)]
        levels: bool,
    },
    /// Shifts of the last syzygy module, read off the socle of an artinian reduction.
    BettiTail {
        scheme: String,
        /// Socle-vector lengths to list (comma separated).
        #[arg(long, value_delimiter = ',')]
        nu: Vec<usize>,
    },
    /// Formulas and grid schemes for powers of complete intersections.
    Ci {
        /// Degrees of the complete intersection, e.g. `2,3,4`.
        #[arg(long = "type")]
        ci_type: CIType,
        /// Multiplicity of every point.
        #[arg(long)]
        mult: u32,
        /// Grid axes, e.g. `1,2;1,2,3`; defaults to `1..=delta_i`.
        #[arg(long)]
        axes: Option<String>,
        /// Print the shifts of the last syzygy module.
        #[arg(long)]
        shifts: bool,
        /// Print the forced separator profile.
        #[arg(long)]
        profile: bool,
        /// Print the grid scheme as scheme JSON.
        #[arg(long)]
        emit_scheme: bool,
    },
    /// Run a verification suite over seeded random cases or the fixtures.
    Verify {
        suite: Suite,
        /// Number of random cases.
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
}

/// What the process prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    match commands::execute(cli) {
        Ok(out) => {
            let stdout = if cli.json { out.report.to_json() } else { out.text };
            Outcome {
                stdout,
                stderr: String::new(),
                code: out.report.exit_code(),
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: commands::error_code(&e),
        },
    }
}
