use artin_lab::diagram::{is_ABI, labeled_trees, CoxeterDiagram, FamilyTag};
use artin_lab::taxonomy::*;
use serde_json::json;

use crate::report::{CaseSpec, Verdict};

fn elementary_agreement(n: usize) -> CaseSpec {
    CaseSpec::new(format!("taxonomy/elementary-routes/n{n}"), format!("labeled trees, {n} vertices, labels 3..6"), "is_ctilde_elementary", Some(2), move |_| {
        let trees = labeled_trees(n, &[3, 4, 5, 6]);
        let mut positive = 0;
        for d in &trees {
            match (is_ctilde_elementary(d), is_ctilde_elementary_by_shape(d)) {
                (Ok(a), Ok(b)) if a == b => positive += usize::from(a),
                (a, b) => {
                    return Verdict::fail(json!({ "diagram": d.to_value(), "domination": format!("{a:?}"), "shape": format!("{b:?}") }))
                }
            }
        }
        Verdict::pass(json!({ "trees": trees.len(), "elementary": positive }))
    })
}

fn abi_settled(n: usize) -> CaseSpec {
    CaseSpec::new(format!("taxonomy/abi-settled/n{n}"), format!("ABI trees, {n} vertices, labels 3..5"), "reduction_certificate", Some(10), move |_| {
        let mut count = 0;
        for d in labeled_trees(n, &[3, 4, 5]) {
            if !is_ABI(&d).holds {
                continue;
            }
            count += 1;
            match reduction_certificate(&d) {
                Ok(c) if c.verdict == "settled" => {}
                other => return Verdict::fail(json!({ "diagram": d.to_value(), "certificate": format!("{other:?}") })),
            }
        }
        Verdict::pass(json!({ "abi_trees": count }))
    })
}

fn obligations(name: &str, d: CoxeterDiagram, expected: &'static [&'static str]) -> CaseSpec {
    CaseSpec::new(format!("taxonomy/obligations/{name}"), d.to_json(), "reduction_certificate", Some(10), move |_| {
        let c = match reduction_certificate(&d) {
            Ok(c) => c,
            Err(e) => return Verdict::fail(json!(e.to_string())),
        };
        let mut got = c.obligations.clone();
        got.sort();
        let verdict = if expected.is_empty() { "settled" } else { "open" };
        Verdict::check(got == expected && c.verdict == verdict, json!({ "obligations": got, "verdict": c.verdict }))
    })
}

fn cores(labels: &'static [u32], n: usize) -> CaseSpec {
    CaseSpec::new(format!("taxonomy/robust-cores/n{n}-l{}", labels.len()), format!("trees up to {n} vertices, labels {labels:?}"), "find_robust_core", None, move |_| {
        let mut found = 0;
        for k in 1..=n {
            for d in labeled_trees(k, labels) {
                let all_cores: Vec<Vec<usize>> =
                    enumerate_like(&d, LikeQuery::CTildeCore).iter().map(|c| c.vertex_set()).collect();
                let mut subs = enumerate_like(&d, LikeQuery::B);
                subs.extend(enumerate_like(&d, LikeQuery::D));
                for sub in subs {
                    if atomicity(&d, &sub) != Ok(Atomicity::Atomic) {
                        continue;
                    }
                    match find_robust_core(&d, &sub) {
                        Err(TaxonomyError::NoCore) if all_cores.is_empty() => {}
                        Ok(c) if all_cores.contains(&c.core.vertex_set()) => found += 1,
                        other => return Verdict::fail(json!({ "diagram": d.to_value(), "sub": sub.vertices, "result": format!("{other:?}") })),
                    }
                }
            }
        }
        Verdict::pass(json!({ "cores": found }))
    })
}

pub fn cases() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for n in 1..=7 {
        out.push(elementary_agreement(n));
        out.push(abi_settled(n));
    }
    let tag = |t: FamilyTag| t.diagram().expect("standard diagram");
    out.push(obligations("D_4", tag(FamilyTag::D(4)), &["E_{1,1,1}"]));
    out.push(obligations("D_5", tag(FamilyTag::D(5)), &["E_{1,1,1}", "E_{2,1,1}"]));
    out.push(obligations("E_6", tag(FamilyTag::E6), &["E_{1,1,1}", "E_{2,1,1}", "E_{2,2,1}"]));
    out.push(obligations("F_4", tag(FamilyTag::F4), &["F_{1,1}"]));
    out.push(obligations("H_3", tag(FamilyTag::H3), &["H_{0,0}", "H_{1,0}"]));
    out.push(obligations("H_4", tag(FamilyTag::H4), &["H_{0,0}", "H_{1,0}", "H_{2,0}"]));
    out.push(obligations("linear-6-3", CoxeterDiagram::linear(&[6, 3]), &[]));
    out.push(cores(&[3, 4], 6));
    out.push(cores(&[3, 4, 5], 5));
    out
}
