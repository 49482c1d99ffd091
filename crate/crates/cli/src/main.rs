use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pcc_core::scenarios::{
    execute, library, library_from_dir, parse_scenario, render_report, render_suite, run_suite, Format, RunOptions,
    Scenario,
};
use pcc_core::{Observable, Tolerance};

#[derive(Parser)]
#[command(name = "pcc", version, about = "Perfect conditional correlation scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
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

#[derive(Subcommand)]
enum Command {
    /// Parse a scenario and check its observables without running queries.
    Validate { file: PathBuf },
    /// Run every query of a scenario and report the results.
    Run {
        file: PathBuf,
        /// Absolute tolerance for this run (relative tolerance stays 1e-12).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in example scenarios against their expected outcomes.
    PaperSuite {
        /// Only scenarios whose name matches this glob.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Load scenarios from this directory instead of the built-in set.
        #[arg(long, hide = true)]
        library_dir: Option<PathBuf>,
    },
}

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(USAGE)
}

fn load(path: &Path) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn describe(name: &str, o: &Observable) -> String {
    let outcomes: Vec<String> = o
        .outcomes()
        .iter()
        .map(|x| format!("{} (rank {})", x.value(), x.rank()))
        .collect();
    format!("observable {name}: dim {}, outcomes {}", o.dim(), outcomes.join(", "))
}

fn validate(file: &Path) -> ExitCode {
    let s = match load(file) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    println!("scenario {}: dimension {}", s.name(), s.dim);
    for (name, o) in &s.locals {
        println!("local {}", describe(name, o));
    }
    for (name, o) in &s.observables {
        println!("{}", describe(name, o));
    }
    println!("{} states, {} queries: ok", s.states.len(), s.doc.queries.len());
    ExitCode::from(OK)
}

fn run(file: &Path, tol: Option<f64>, seed: Option<u64>, format: Format, out: Option<&Path>) -> ExitCode {
    let s = match load(file) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let tolerance = match tol.map(|t| Tolerance::new(t, Tolerance::default().rel)).transpose() {
        Ok(t) => t,
        Err(e) => return fail(format!("--tol: {e}")),
    };
    let report = execute(&s, RunOptions { tolerance, seed });
    let text = render_report(&report, format);
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                return fail(format!("{}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if report.success() { OK } else { FAILED })
}

fn builtin_suite(filter: Option<&str>, format: Format, dir: Option<&Path>) -> ExitCode {
    let pattern = match filter.map(glob::Pattern::new).transpose() {
        Ok(p) => p,
        Err(e) => return fail(format!("--filter: {e}")),
    };
    let scenarios = match dir {
        Some(d) => library_from_dir(d),
        None => library(),
    };
    let scenarios = match scenarios {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let suite = run_suite(&scenarios, |name| pattern.as_ref().is_none_or(|p| p.matches(name)));
    print!("{}", render_suite(&suite, format));
    ExitCode::from(if suite.success() { OK } else { FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Run {
            file,
            tol,
            seed,
            format,
            out,
        } => run(&file, tol, seed, format.into(), out.as_deref()),
        Command::PaperSuite {
            filter,
            format,
            library_dir,
        } => builtin_suite(filter.as_deref(), format.into(), library_dir.as_deref()),
    }
}
