//! Fixture registry, suite runner and report types behind the `artin-lab`
//! command.

pub mod report;
pub mod suites;
