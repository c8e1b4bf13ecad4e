//! Command-line front end for `ualg-core`.
//!
//! Exit statuses: 0 when a property holds or a term is found, 2 for a sound
//! negative answer or a counterexample, 3 when the answer is inconclusive
//! under the budget, 1 for usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub mod builtins;
mod commands;
mod error;
mod reproduce;

pub use error::{CliError, CliResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ualg", version, about = "Finite universal algebra toolkit")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Report elapsed wall-clock time.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Algebras named on the command line: files first, then builtins.
#[derive(Args, Debug, Clone, Default)]
pub struct Inputs {
    /// Algebra files (several algebras per file are allowed).
    pub files: Vec<PathBuf>,
    /// Builtin algebra, e.g. `Gnu:3`, `Njm:3,5`, `Nhalf:4`, `Lattice2`.
    #[arg(long = "builtin", value_name = "NAME[:PARAMS]")]
    pub builtins: Vec<String>,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct Budget {
    /// Maximum argument tuples evaluated by closure computations.
    #[arg(long)]
    pub tuple_budget: Option<u64>,
    /// Maximum elements kept by closure computations.
    #[arg(long)]
    pub element_budget: Option<usize>,
    /// Run kernels on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a named suite or explicit equations on algebras.
    Check {
        #[command(flatten)]
        inputs: Inputs,
        /// Named suite, e.g. `half_nu:3`, `jonsson:3`, `pixley`.
        #[arg(long)]
        suite: Option<String>,
        /// Equation in functional syntax, e.g. `u(x,x,z,z,z)=x`.
        #[arg(long = "eq")]
        equations: Vec<String>,
        /// File with one equation per line, optionally prefixed by `name:`.
        #[arg(long)]
        eq_file: Option<PathBuf>,
        /// Placeholder binding `NAME=TERM` or `NAME=@builtin:ALG.OP`.
        #[arg(long = "bind")]
        bindings: Vec<String>,
    },
    /// Decide a linear term condition.
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        /// n-ary near-unanimity term.
        #[arg(long, value_name = "N", group = "condition")]
        nu: Option<usize>,
        /// Half near-unanimity term of arity N+2.
        #[arg(long, value_name = "N", group = "condition")]
        half_nu: Option<usize>,
        /// Skew-edge term of arity N+2.
        #[arg(long, value_name = "N", group = "condition")]
        skew_edge: Option<usize>,
        /// Pixley term.
        #[arg(long, group = "condition")]
        pixley: bool,
        /// Maltsev term.
        #[arg(long, group = "condition")]
        maltsev: bool,
        /// Condition file (`unknown NAME ARITY` then `eq LHS = RHS` lines).
        #[arg(long, group = "condition")]
        spec: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Compute a distributivity, directed or modularity level.
    Level {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum)]
        kind: LevelKindArg,
        /// Largest chain length searched.
        #[arg(long)]
        max_k: Option<usize>,
        /// A known upper bound on the level.
        #[arg(long)]
        upper_bound: Option<usize>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Build a free algebra and list its elements with witness terms.
    Free {
        #[command(flatten)]
        inputs: Inputs,
        /// Number of free generators.
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Print the free algebra in the algebra file format instead.
        #[arg(long)]
        as_algebra: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// List the congruence lattice of a single algebra.
    Con {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Search for a failure of a congruence identity.
    Identity {
        #[command(flatten)]
        inputs: Inputs,
        /// Catalog identity, e.g. `distributivity:2`, `blbl:1,2`.
        #[arg(long, group = "identity_source")]
        name: Option<String>,
        /// Identity `LHS <= RHS`, e.g. `a(b o g) <= ab o ag`.
        #[arg(long, group = "identity_source")]
        expr: Option<String>,
        /// File of identities, one per line.
        #[arg(long, group = "identity_source")]
        file: Option<PathBuf>,
        /// Maximum number of congruence bindings examined.
        #[arg(long)]
        max_bindings: Option<u64>,
    },
    /// Print builtin algebras in the algebra file format.
    Build {
        /// Builtin names.
        names: Vec<String>,
        /// List the available builtins.
        #[arg(long)]
        list: bool,
    },
    /// Run the half near-unanimity claims for one value of n.
    Reproduce {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Optional extra claims: `day-level`, `directed`, `diamond`.
        #[arg(long = "include", value_name = "CLAIM")]
        include: Vec<String>,
        /// Seed for sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelKindArg {
    Distributivity,
    Modularity,
    Directed,
}

/// Result of a command: human text, a JSON value and an exit status.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

/// Parses `args` (including the program name), runs the command and writes
/// its report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let start = Instant::now();
    match commands::dispatch(&cli) {
        Ok(mut output) => {
            if cli.timings {
                let secs = start.elapsed().as_secs_f64();
                output.text.push_str(&format!("elapsed: {secs:.3}s\n"));
                if let Value::Object(map) = &mut output.json {
                    map.insert("elapsed_seconds".into(), secs.into());
                }
            }
            let written = match cli.format {
                Format::Text => write!(out, "{}", output.text),
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&output.json).expect("JSON values serialize")
                ),
            };
            if written.is_err() {
                return EXIT_ERROR;
            }
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CliError::Core(ualg_core::Error::BudgetExceeded(_)) => EXIT_INCONCLUSIVE,
                _ => EXIT_ERROR,
            }
        }
    }
}
