use std::time::{Duration, Instant};

use artin_lab::coxeter::{CoxeterError, GroupTable, DEFAULT_CAP};
use artin_lab::diagram::FamilyTag;
use serde_json::json;

use crate::report::{CaseSpec, Outcome, Verdict};

pub const TIME_LIMIT: Duration = Duration::from_secs(10);

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Groups with their orders from the closed forms.
pub fn closed_forms() -> Vec<(FamilyTag, usize)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push((FamilyTag::A(n), factorial(n + 1)));
    }
    for n in 2..=4 {
        out.push((FamilyTag::B(n), (1 << n) * factorial(n)));
    }
    out.push((FamilyTag::D(4), 8 * factorial(4)));
    for m in 3..=8 {
        out.push((FamilyTag::I2(m), 2 * m as usize));
    }
    out.push((FamilyTag::H3, 120));
    out.push((FamilyTag::F4, 1152));
    out
}

pub fn cases() -> Vec<CaseSpec> {
    closed_forms()
        .into_iter()
        .map(|(tag, expected)| {
            CaseSpec::new(format!("coxeter/order/{tag}"), tag.to_string(), "enumerate", Some(3), move |ctx| {
                let d = tag.diagram().expect("standard diagram");
                let start = Instant::now();
                match GroupTable::enumerate(&d, ctx.cap.unwrap_or(DEFAULT_CAP)) {
                    Ok(g) => {
                        let fast = start.elapsed() < TIME_LIMIT;
                        Verdict::check(g.order() == expected && fast, json!({ "order": g.order(), "expected": expected, "within_limit": fast }))
                    }
                    Err(e @ CoxeterError::CapExceeded { .. }) => Verdict::of(Outcome::CapLimited, json!(e.to_string())),
                    Err(e) => Verdict::of(Outcome::Error, json!(e.to_string())),
                }
            })
        })
        .collect()
}
