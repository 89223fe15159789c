//! Problem files, reports and the command line.

pub mod cli;
pub mod parse;
pub mod report;

pub use cli::{build_report, run};
pub use parse::{
    parse_polynomial, parse_problem, parse_problem_source, parse_rational_function, render_problem, ProblemSource,
};
pub use report::{parse_minimal_polynomial, parse_stored_result, Certificates, Report, StoredResult};
