pub mod bihelly;
pub mod complex;
pub mod coxeter;
pub mod diagram;
pub mod normalform;
pub mod poset;
pub mod taxonomy;

use crate::report::{run_cases, CaseSpec, Ctx, SuiteReport};

pub const SUITES: [&str; 8] = ["diagram", "taxonomy", "coxeter", "complex", "poset", "bihelly", "normalform", "all"];

#[derive(thiserror::Error, Debug)]
#[error("unknown suite {0:?}; expected one of {SUITES:?}")]
pub struct UnknownSuite(pub String);

pub fn cases(suite: &str) -> Result<Vec<CaseSpec>, UnknownSuite> {
    Ok(match suite {
        "diagram" => diagram::cases(),
        "taxonomy" => taxonomy::cases(),
        "coxeter" => coxeter::cases(),
        "complex" => complex::cases(),
        "poset" => poset::cases(),
        "bihelly" => bihelly::cases(),
        "normalform" => normalform::cases(),
        "all" => SUITES[..SUITES.len() - 1].iter().flat_map(|s| cases(s).unwrap()).collect(),
        _ => return Err(UnknownSuite(suite.into())),
    })
}

pub fn run(suite: &str, ctx: Ctx, workers: Option<usize>, timings: bool) -> Result<SuiteReport, UnknownSuite> {
    Ok(run_cases(suite, cases(suite)?, ctx, workers, timings))
}
