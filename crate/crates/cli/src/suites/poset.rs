use artin_lab::poset::{criterion, criterion_corpus, Criterion};
use serde_json::json;

use crate::report::{CaseSpec, Outcome, Verdict};

pub const CORPUS_SIZE: usize = 200;

pub fn cases() -> Vec<CaseSpec> {
    Criterion::ALL
        .into_iter()
        .map(|which| {
            let id = format!("poset/criterion/{}", which.name());
            CaseSpec::new(id, format!("{CORPUS_SIZE} random r-saturated posets"), "criterion", Some(6), move |ctx| {
                let corpus = criterion_corpus(which, ctx.seed, CORPUS_SIZE);
                let mut positive = 0;
                for (seed, p) in &corpus {
                    match criterion(p, which) {
                        Ok(r) if r.agreement => positive += usize::from(r.oracle.holds),
                        Ok(r) => return Verdict::fail(json!({ "seed": seed, "report": r, "poset": p.to_value() })),
                        Err(e) => return Verdict::of(Outcome::Error, json!({ "seed": seed, "error": e.to_string() })),
                    }
                }
                let seeds: Vec<u64> = corpus.iter().map(|c| c.0).collect();
                Verdict::pass(json!({ "posets": corpus.len(), "oracle_holds": positive, "seeds": [seeds.first(), seeds.last()] }))
            })
        })
        .collect()
}
