//! The `gptp` command line: argument parsing, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 property failure, 2 invalid theory, 3 resource
//! bound exceeded, 4 usage error. Errors are written to stderr as JSON.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::catalog::{load_builtin, BuiltinParams, Theory};
use crate::error::{Error, Result};
use crate::gpt::DEFAULT_MAX_GROUP_SIZE;
use crate::orbits::PureStateOption;
use crate::report::{self, RunOptions};
use crate::theory_file;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "gptp", version, about = "Particle types in general probabilistic theories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbits of symmetric pure states under the swap-preserving subgroup.
    Orbits {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, value_enum, default_value = "I")]
        option: OptionArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Split and refine the symmetrisation idempotent into sectors.
    Split {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a built-in or loaded theory in the interchange format.
    Export {
        #[command(flatten)]
        theory: TheoryArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TheoryArgs {
    /// Built-in theory: classical, boxworld, spekkens or qubit.
    #[arg(long, conflicts_with = "theory", required_unless_present = "theory")]
    pub builtin: Option<String>,
    /// Theory file (JSON, schema version 1).
    #[arg(long)]
    pub theory: Option<std::path::PathBuf>,
    /// Local dimension (classical).
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of parties.
    #[arg(long)]
    pub parties: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::quantum::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, env = "GPTP_MAX_GROUP_SIZE", default_value_t = DEFAULT_MAX_GROUP_SIZE)]
    pub max_group_size: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Md,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    Ii,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Biproduct,
    Catalog,
}

/// Everything a run writes, so callers can test without a subprocess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_json(kind: &str, message: &str, code: i32) -> String {
    report::to_json(&json!({ "error": { "kind": kind, "message": message, "exit_code": code } }))
}

fn failure(e: &Error) -> Outcome {
    let code = e.exit_code();
    Outcome { code, stdout: String::new(), stderr: error_json(e.kind(), &e.to_string(), code) }
}

fn load_theory(args: &TheoryArgs) -> Result<Theory> {
    match (&args.builtin, &args.theory) {
        (Some(name), _) => load_builtin(name, &BuiltinParams { d: args.d, parties: args.parties }),
        (None, Some(path)) => {
            if args.d.is_some() || args.parties.is_some() {
                return Err(Error::BadParams("--d and --parties apply to built-in theories only".into()));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::BadParams(format!("cannot read {}: {e}", path.display())))?;
            let f = theory_file::from_json(&text)?;
            Ok(Theory::Polytopal(Box::new(theory_file::load(&f)?)))
        }
        (None, None) => Err(Error::BadParams("one of --builtin or --theory is required".into())),
    }
}

fn options(c: &CommonArgs) -> Result<RunOptions> {
    if !(c.tolerance.is_finite() && c.tolerance > 0.0) {
        return Err(Error::BadParams("tolerance must be a positive number".into()));
    }
    Ok(RunOptions { seed: c.seed, tolerance: c.tolerance, max_group_size: c.max_group_size })
}

fn render(v: &serde_json::Value, format: Format) -> String {
    match format {
        Format::Json => report::to_json(v),
        Format::Md => report::to_markdown(v),
    }
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let ok = |stdout: String| Outcome { code: EXIT_OK, stdout, stderr: String::new() };
    match cli.command {
        Command::Orbits { theory, option, common } => {
            let opts = options(&common)?;
            let t = load_theory(&theory)?;
            let option = match option {
                OptionArg::I => PureStateOption::ExtremalSymmetric,
                OptionArg::Ii => PureStateOption::SymmetricExtremal,
            };
            Ok(ok(render(&report::orbits_report(&t, option, &opts)?, common.format)))
        }
        Command::Split { theory, common } => {
            let opts = options(&common)?;
            let t = load_theory(&theory)?;
            Ok(ok(render(&report::split_report(&t, &opts)?, common.format)))
        }
        Command::Verify { suite, trials, common } => {
            let opts = options(&common)?;
            let result = match suite {
                Suite::Lemma1 => crate::verify::lemma1_suite(opts.seed, trials, opts.tolerance),
                Suite::Biproduct => crate::verify::biproduct_suite(opts.seed, opts.tolerance)?,
                Suite::Catalog => crate::verify::catalog_suite(opts.tolerance)?,
            };
            let code = if result.ok() { EXIT_OK } else { EXIT_PROPERTY };
            let stdout = render(&report::verify_report(&result, &opts), common.format);
            Ok(Outcome { code, stdout, stderr: String::new() })
        }
        Command::Export { theory } => match load_theory(&theory)? {
            Theory::Polytopal(t) => Ok(ok(theory_file::to_canonical_json(&theory_file::export(&t)))),
            Theory::Quantum(_) => Err(Error::BadParams("quantum theories have no polytopal export".into())),
        },
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: error_json("usage", e.to_string().trim_end(), EXIT_USAGE),
                },
            };
        }
    };
    dispatch(cli).unwrap_or_else(|e| failure(&e))
}
