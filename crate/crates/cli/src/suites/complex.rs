use artin_lab::complex::{build_coxeter_complex, CycleKind, Special6Source, TypedComplex};
use artin_lab::coxeter::{GroupTable, DEFAULT_CAP};
use artin_lab::diagram::FamilyTag;
use artin_lab::poset::Property;
use serde_json::json;

use crate::report::{guard, CaseSpec, Verdict};

pub fn coxeter_complex(tag: FamilyTag) -> anyhow::Result<TypedComplex> {
    let d = tag.diagram().ok_or_else(|| anyhow::anyhow!("no standard diagram for {tag}"))?;
    Ok(build_coxeter_complex(&GroupTable::enumerate(&d, DEFAULT_CAP)?)?)
}

fn relative_bowtie(n: usize) -> CaseSpec {
    let tag = FamilyTag::A(n);
    CaseSpec::new(format!("complex/relative-bowtie-free/{tag}"), tag.to_string(), "relative_complex+order_relation", Some(5), move |_| {
        guard(|| {
            let c = coxeter_complex(tag)?;
            let mut checked = 0;
            for i in 0..n {
                for j in i..n {
                    let keep: Vec<usize> = (i..=j).collect();
                    let r = c.relative_complex(&keep)?;
                    let fwd: Vec<usize> = (0..keep.len()).collect();
                    let bwd: Vec<usize> = fwd.iter().rev().copied().collect();
                    for order in [fwd, bwd] {
                        let v = r.order_relation(&order)?.poset()?.check(Property::BowtieFree);
                        if !v.holds {
                            return Ok(Verdict::fail(json!({ "keep": keep, "order": order, "witness": v.witness })));
                        }
                        checked += 1;
                    }
                }
            }
            Ok(Verdict::pass(json!({ "orders": checked })))
        })
    })
}

fn special4(tag: FamilyTag) -> CaseSpec {
    CaseSpec::new(format!("complex/special-4-cycles/{tag}"), tag.to_string(), "special_cycles", Some(5), move |_| {
        guard(|| {
            let cycles = coxeter_complex(tag)?.special_cycles(CycleKind::Special4)?;
            let bad: Vec<&Vec<usize>> = cycles.iter().filter(|c| c.center.is_none()).map(|c| &c.vertices).collect();
            Ok(Verdict::check(!cycles.is_empty() && bad.is_empty(), json!({ "cycles": cycles.len(), "without_center": bad })))
        })
    })
}

fn four_cycle_routes(tag: FamilyTag) -> CaseSpec {
    CaseSpec::new(format!("complex/labeled-4-cycles/{tag}"), tag.to_string(), "labeled_4cycle_check", None, move |_| {
        guard(|| {
            let r = coxeter_complex(tag)?.labeled_4cycle_check()?;
            Ok(Verdict::check(r.agreement, serde_json::to_value(&r)?))
        })
    })
}

pub fn cases() -> Vec<CaseSpec> {
    let mut out = vec![
        CaseSpec::new("complex/counts/A_3", "A_3", "build_coxeter_complex", Some(4), |_| {
            guard(|| {
                let c = coxeter_complex(FamilyTag::A(3))?;
                let got = (c.len(), c.chambers().len());
                Ok(Verdict::check(got == (14, 24), json!({ "vertices": got.0, "chambers": got.1 })))
            })
        }),
        CaseSpec::new("complex/counts/A_3-as-D_3-subdivision", "A_3 with layout (s1,s3,s2)", "subdivide_b", Some(4), |_| {
            guard(|| {
                let s = coxeter_complex(FamilyTag::A(3))?.subdivide_b(&[0, 2, 1])?;
                let got = (s.complex.len(), s.complex.chambers().len());
                Ok(Verdict::check(got == (26, 48), json!({ "vertices": got.0, "chambers": got.1, "fake": s.fake.len() })))
            })
        }),
        CaseSpec::new("complex/upward-flag/B_3", "B_3 with s1<s2<s3", "ctilde_hypotheses", Some(5), |_| {
            guard(|| {
                let rep = coxeter_complex(FamilyTag::B(3))?.order_relation(&[0, 1, 2])?.ctilde_hypotheses(None);
                let v = rep.upward_flag.clone();
                Ok(Verdict::check(v.as_ref().is_some_and(|v| v.holds), json!({ "upward_flag": v })))
            })
        }),
        CaseSpec::new("complex/hexagon-without-center/A_2", "A_2", "special_cycles", Some(5), |_| {
            guard(|| {
                let cycles = coxeter_complex(FamilyTag::A(2))?.special_cycles(CycleKind::Special6(Special6Source::Braid))?;
                let ok = cycles.len() == 1 && cycles[0].center.is_none();
                Ok(Verdict::check(ok, json!({ "cycles": cycles.len(), "center": cycles.first().map(|c| c.center) })))
            })
        }),
    ];
    for n in 1..=4 {
        out.push(relative_bowtie(n));
    }
    out.push(special4(FamilyTag::A(3)));
    out.push(special4(FamilyTag::A(4)));
    for tag in [FamilyTag::A(3), FamilyTag::B(3), FamilyTag::D(4), FamilyTag::H3] {
        out.push(four_cycle_routes(tag));
    }
    out
}
