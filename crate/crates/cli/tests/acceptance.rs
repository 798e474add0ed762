//! Runs every registered case and prints one line per acceptance criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use artin_lab_cli::report::{Case, Ctx, Outcome, DEFAULT_SEED};
use artin_lab_cli::suites;

const CRITERIA: [(u8, &str, &str); 10] = [
    (1, "family identifications", "exact"),
    (2, "C~-elementary routes agree on trees <= 7 vertices", "100%, exact"),
    (3, "group orders match closed forms", "exact, each < 10 s"),
    (4, "A_3 complex and its D_3 subdivision counts", "exact"),
    (5, "Coxeter shadows: bowtie-free, flag, centers, hexagon control", "exact"),
    (6, "poset criteria agree with oracles on 200 posets each", "100%"),
    (7, "bi-Helly trees, C_6 witness, directed geodesics, local-to-global", "exact"),
    (8, "normal forms on gated boxes", "100%, exhaustive"),
    (9, "extremal subgraph bi-Helly and isometric", "exact"),
    (10, "reduction certificates", "exact"),
];

/// Criteria that fail by analysis, with their failing cases; see the README.
const EXPECTED_FAILURES: [u8; 1] = [7];
const EXPECTED_FAILING_CASES: [&str; 2] = ["bihelly/geodesics/box-2-extremal", "bihelly/geodesics/box-3-extremal"];

fn main() -> ExitCode {
    let start = Instant::now();
    let report = suites::run("all", Ctx { seed: DEFAULT_SEED, cap: None }, None, false).expect("known suite");
    let mut failed = BTreeSet::new();
    for (k, name, tolerance) in CRITERIA {
        let cases: Vec<&Case> = report.cases.iter().filter(|c| c.criterion == Some(k)).collect();
        let count = |o: Outcome| cases.iter().filter(|c| c.verdict == o).count();
        let bad: Vec<&str> = cases.iter().filter(|c| c.verdict.is_bad()).map(|c| c.id.as_str()).collect();
        let pass = count(Outcome::Pass) > 0 && bad.is_empty() && count(Outcome::CapLimited) == 0;
        if !pass {
            failed.insert(k);
        }
        let mut line = format!(
            "criterion {k:>2}: {} {name} [{tolerance}] ({} pass",
            if pass { "PASS" } else { "FAIL" },
            count(Outcome::Pass)
        );
        for (o, label) in [(Outcome::GateFailed, "gate-failed"), (Outcome::CapLimited, "cap-limited")] {
            if count(o) > 0 {
                line += &format!(", {} {label}", count(o));
            }
        }
        if !bad.is_empty() {
            line += &format!(", failing: {}", bad.join(" "));
        }
        println!("{line})");
    }
    let untagged_bad: Vec<&str> =
        report.cases.iter().filter(|c| c.criterion.is_none() && c.verdict.is_bad()).map(|c| c.id.as_str()).collect();
    println!("other cases: {} run, failing: {:?}", report.cases.iter().filter(|c| c.criterion.is_none()).count(), untagged_bad);
    println!("total {} cases in {:.1?}", report.cases.len(), start.elapsed());
    let expected: BTreeSet<u8> = EXPECTED_FAILURES.into_iter().collect();
    let bad_cases: BTreeSet<&str> = report.cases.iter().filter(|c| c.verdict.is_bad()).map(|c| c.id.as_str()).collect();
    let expected_cases: BTreeSet<&str> = EXPECTED_FAILING_CASES.into_iter().collect();
    if failed != expected || bad_cases != expected_cases {
        println!("unexpected outcome: failing criteria {failed:?}, expected {expected:?}; failing cases {bad_cases:?}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
