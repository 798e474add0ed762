use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "artin-lab.suite-report/1";
pub const DEFAULT_SEED: u64 = 7;
pub const WORKERS_ENV: &str = "ARTIN_LAB_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    CapLimited,
    GateFailed,
    Error,
}

impl Outcome {
    pub const ALL: [Outcome; 5] = [Outcome::Pass, Outcome::Fail, Outcome::CapLimited, Outcome::GateFailed, Outcome::Error];

    pub fn is_bad(self) -> bool {
        matches!(self, Outcome::Fail | Outcome::Error)
    }
}

/// What a case body returns.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Value,
}

impl Verdict {
    pub fn pass(witness: Value) -> Self {
        Verdict { outcome: Outcome::Pass, witness }
    }

    pub fn fail(witness: Value) -> Self {
        Verdict { outcome: Outcome::Fail, witness }
    }

    pub fn check(ok: bool, witness: Value) -> Self {
        Verdict { outcome: if ok { Outcome::Pass } else { Outcome::Fail }, witness }
    }

    pub fn of(outcome: Outcome, witness: Value) -> Self {
        Verdict { outcome, witness }
    }
}

/// Turns an error from the case body into an `error` verdict.
pub fn guard(f: impl FnOnce() -> anyhow::Result<Verdict>) -> Verdict {
    f().unwrap_or_else(|e| Verdict::of(Outcome::Error, Value::String(format!("{e:#}"))))
}

/// Run parameters shared by every case.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub cap: Option<usize>,
}

type Body = Box<dyn Fn(&Ctx) -> Verdict + Send + Sync>;

pub struct CaseSpec {
    pub id: String,
    pub fixture: String,
    pub operation: String,
    /// Acceptance criterion this case contributes to.
    pub criterion: Option<u8>,
    pub body: Body,
}

impl CaseSpec {
    pub fn new(
        id: impl Into<String>,
        fixture: impl Into<String>,
        operation: impl Into<String>,
        criterion: Option<u8>,
        body: impl Fn(&Ctx) -> Verdict + Send + Sync + 'static,
    ) -> Self {
        CaseSpec { id: id.into(), fixture: fixture.into(), operation: operation.into(), criterion, body: Box::new(body) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub fixture: String,
    pub operation: String,
    pub criterion: Option<u8>,
    pub verdict: Outcome,
    pub witness: Value,
    /// Milliseconds; only recorded on request so reports stay byte-stable.
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub version: String,
    pub seed: u64,
    pub cap: Option<usize>,
    pub cases: Vec<Case>,
    pub summary: BTreeMap<Outcome, usize>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.cases.iter().all(|c| !c.verdict.is_bad())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Worker count from the environment, if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn panic_text(e: Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

/// Runs the cases on `workers` threads and sorts them by id.
pub fn run_cases(suite: &str, specs: Vec<CaseSpec>, ctx: Ctx, workers: Option<usize>, timings: bool) -> SuiteReport {
    let run_one = |s: &CaseSpec| {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(|| (s.body)(&ctx)))
            .unwrap_or_else(|e| Verdict::of(Outcome::Error, Value::String(panic_text(e))));
        Case {
            id: s.id.clone(),
            fixture: s.fixture.clone(),
            operation: s.operation.clone(),
            criterion: s.criterion,
            verdict: v.outcome,
            witness: v.witness,
            wall_ms: timings.then(|| start.elapsed().as_millis() as u64),
        }
    };
    let mut cases: Vec<Case> = match rayon::ThreadPoolBuilder::new().num_threads(workers.unwrap_or(0)).build() {
        Ok(pool) => pool.install(|| specs.par_iter().map(run_one).collect()),
        Err(_) => specs.iter().map(run_one).collect(),
    };
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    let mut summary: BTreeMap<Outcome, usize> = Outcome::ALL.iter().map(|&o| (o, 0)).collect();
    for c in &cases {
        *summary.get_mut(&c.verdict).unwrap() += 1;
    }
    SuiteReport {
        schema: SCHEMA.into(),
        suite: suite.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: ctx.seed,
        cap: ctx.cap,
        cases,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specs() -> Vec<CaseSpec> {
        vec![
            CaseSpec::new("b", "f", "op", None, |_| Verdict::pass(Value::Null)),
            CaseSpec::new("a", "f", "op", Some(1), |c| Verdict::check(c.seed == 3, Value::from(c.seed))),
            CaseSpec::new("c", "f", "op", None, |_| panic!("boom")),
        ]
    }

    #[test]
    fn cases_are_sorted_and_counted() {
        let r = run_cases("t", specs(), Ctx { seed: 3, cap: None }, Some(2), false);
        let ids: Vec<&str> = r.cases.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(r.cases[2].verdict, Outcome::Error);
        assert_eq!(r.cases[2].witness, Value::String("boom".into()));
        assert_eq!(r.summary.values().sum::<usize>(), 3);
        assert_eq!(r.summary[&Outcome::Pass], 2);
        assert!(!r.ok());
    }

    #[test]
    fn reports_are_byte_stable() {
        let a = run_cases("t", specs(), Ctx { seed: 3, cap: None }, Some(1), false).to_json();
        let b = run_cases("t", specs(), Ctx { seed: 3, cap: None }, Some(4), false).to_json();
        assert_eq!(a, b);
        let back: SuiteReport = serde_json::from_str(&a).unwrap();
        assert_eq!(back.schema, SCHEMA);
        assert!(a.contains("\"cap-limited\": 0"));
    }
}
