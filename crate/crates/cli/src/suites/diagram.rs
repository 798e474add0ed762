use artin_lab::diagram::{classify_family, tripod_diagram, CoxeterDiagram, FamilyTag};
use serde_json::json;

use crate::report::{CaseSpec, Verdict};

fn identification(name: &str, d: CoxeterDiagram, family: FamilyTag, alias: FamilyTag) -> CaseSpec {
    CaseSpec::new(format!("diagram/family/{name}"), d.to_json(), "classify", Some(1), move |_| {
        let c = classify_family(&d);
        let tags: Vec<String> = c.tags.iter().map(|t| t.to_string()).collect();
        Verdict::check(c.contains(family) && c.contains(alias), json!({ "tags": tags }))
    })
}

fn standard_tags() -> Vec<FamilyTag> {
    let mut tags = Vec::new();
    for n in 1..=7 {
        tags.push(FamilyTag::A(n));
    }
    for n in 2..=7 {
        tags.push(FamilyTag::B(n));
    }
    for n in 4..=7 {
        tags.push(FamilyTag::D(n));
    }
    for m in 5..=8 {
        tags.push(FamilyTag::I2(m));
    }
    tags.extend([FamilyTag::E6, FamilyTag::E7, FamilyTag::E8, FamilyTag::F4, FamilyTag::H3, FamilyTag::H4]);
    for n in 2..=6 {
        tags.push(FamilyTag::CTilde(n));
        tags.push(FamilyTag::ATilde(n));
    }
    for n in 3..=6 {
        tags.push(FamilyTag::BTilde(n));
    }
    for n in 4..=6 {
        tags.push(FamilyTag::DTilde(n));
    }
    tags.extend([FamilyTag::E6Tilde, FamilyTag::E7Tilde, FamilyTag::E8Tilde, FamilyTag::F4Tilde, FamilyTag::G2Tilde]);
    tags
}

pub fn cases() -> Vec<CaseSpec> {
    let line = CoxeterDiagram::linear;
    let mut out = vec![
        identification("F_{1,1}", line(&[3, 4, 3]), FamilyTag::f(1, 1), FamilyTag::F4),
        identification("F_{1,2}", line(&[3, 4, 3, 3]), FamilyTag::f(1, 2), FamilyTag::F4Tilde),
        identification("H_{1,0}", line(&[3, 5]), FamilyTag::h(1, 0), FamilyTag::H3),
        identification("H_{2,0}", line(&[3, 3, 5]), FamilyTag::h(2, 0), FamilyTag::H4),
        identification("E_{2,2,1}", tripod_diagram(&[vec![3, 3], vec![3, 3], vec![3]]), FamilyTag::e(2, 2, 1), FamilyTag::E6),
        identification("E_{2,1,1}", tripod_diagram(&[vec![3, 3], vec![3], vec![3]]), FamilyTag::e(2, 1, 1), FamilyTag::D(5)),
    ];
    out.push(CaseSpec::new("diagram/standard-names", "standard types", "classify", None, |_| {
        let missed: Vec<String> = standard_tags()
            .into_iter()
            .filter(|t| !t.diagram().is_some_and(|d| classify_family(&d).contains(*t)))
            .map(|t| t.to_string())
            .collect();
        Verdict::check(missed.is_empty(), json!({ "missed": missed }))
    }));
    out.push(CaseSpec::new("diagram/json-round-trip", "standard types", "parse", None, |_| {
        let bad: Vec<String> = standard_tags()
            .into_iter()
            .filter_map(|t| t.diagram())
            .filter(|d| CoxeterDiagram::parse(&d.to_json()).ok().as_ref() != Some(d))
            .map(|d| d.to_json())
            .collect();
        Verdict::check(bad.is_empty(), json!({ "mismatched": bad }))
    }));
    out
}
