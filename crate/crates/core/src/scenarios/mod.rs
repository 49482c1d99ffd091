//! Scenario documents: parsing, execution, built-in examples and reports.

mod build;
mod document;
mod execute;
mod library;
mod report;

pub use build::{build_scenario, parse_scenario, Scenario};
pub use document::{
    render_document, vector_value, ComplexLit, EventDoc, Expect, ObservableDoc, QueryDoc, QueryKind, Scalar,
    ScenarioDoc, ToleranceDoc,
};
pub use execute::{check_expectation, execute, RunOptions, DEFAULT_TRIALS};
pub use library::{fixture_texts, library, library_from_dir, render_suite, run_suite, SuiteReport, SuiteRow};
pub use report::{
    amplitude, canonical_basis, canonical_vector, format_number, ket, parse_report, render_report, Amplitude,
    BlockResult, ExclusivityResult, ExpectationCheck, Format, ForwardResult, Outcome, QueryReport, QueryResult, Report,
    ReverseResult, SharedResult, SpaceResult, ToleranceEcho, ZERO_CUTOFF,
};

/// Failure to load a scenario.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {message}")]
    Validation { context: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
