use std::collections::BTreeMap;
use std::sync::Arc;

use artin_lab::bihelly::{BipartiteGraph, HellyStatus, Reach, DEFAULT_CLIQUE_CAP};
use artin_lab::complex::ctilde_box;
use artin_lab::diagram::unlabeled_trees;
use artin_lab::graph::Graph;
use serde_json::json;

use crate::report::{guard, CaseSpec, Ctx, Outcome, Verdict};

pub const MAX_SEQUENCE: usize = 5;

/// All near-cliques, each sorted, in lexicographic order.
pub fn near_cliques(g: &BipartiteGraph) -> Vec<Vec<usize>> {
    fn grow(g: &BipartiteGraph, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for v in cur[cur.len() - 1] + 1..g.len() {
            if cur.iter().all(|&u| g.distance(u, v) == 2) {
                cur.push(v);
                grow(g, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..g.len() {
        grow(g, &mut vec![v], &mut out);
    }
    out
}

/// Calls `f` on every sequence of at least three near-cliques with at most
/// `max_len` of them, consecutive ones completely joined.
pub fn joined_sequences(g: &BipartiteGraph, ncs: &[Vec<usize>], max_len: usize, f: &mut impl FnMut(&[Vec<usize>])) {
    let next: Vec<Vec<usize>> =
        ncs.iter().map(|a| (0..ncs.len()).filter(|&j| g.uniform_distance(a, &ncs[j]) == Some(1)).collect()).collect();
    fn walk(
        ncs: &[Vec<usize>],
        next: &[Vec<usize>],
        max_len: usize,
        idx: &mut Vec<usize>,
        seq: &mut Vec<Vec<usize>>,
        f: &mut impl FnMut(&[Vec<usize>]),
    ) {
        if seq.len() >= 3 {
            f(seq);
        }
        if seq.len() == max_len {
            return;
        }
        for &j in &next[*idx.last().unwrap()] {
            idx.push(j);
            seq.push(ncs[j].clone());
            walk(ncs, next, max_len, idx, seq, f);
            seq.pop();
            idx.pop();
        }
    }
    for i in 0..ncs.len() {
        walk(ncs, &next, max_len, &mut vec![i], &mut vec![ncs[i].clone()], f);
    }
}

/// Every path picking one vertex from each step is a geodesic.
pub fn selections_are_geodesics(g: &BipartiteGraph, seq: &[Vec<usize>]) -> bool {
    let mut frontier: Vec<(usize, usize)> = seq[0].iter().map(|&v| (v, v)).collect();
    for step in &seq[1..] {
        frontier = frontier
            .iter()
            .flat_map(|&(s, v)| step.iter().filter(move |&&w| g.distance(v, w) == 1).map(move |&w| (s, w)))
            .collect();
    }
    frontier.iter().all(|&(s, e)| g.distance(s, e) as usize == seq.len() - 1)
}

/// Extremal subgraph of the square box with `cells` cells per side.
pub fn box_gamma(cells: usize) -> anyhow::Result<BipartiteGraph> {
    let (gamma, _) = ctilde_box(2, cells)?.order_relation(&[0, 1, 2])?.extremal_subgraph()?;
    Ok(BipartiteGraph::new(gamma)?)
}

fn bipartite(n: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
    BipartiteGraph::new(Graph::from_edges(n, edges)).expect("bipartite fixture")
}

/// The bi-Helly fixtures for directed geodesics, by name.
pub fn fixtures() -> anyhow::Result<Vec<(String, Vec<BipartiteGraph>)>> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("trees-{n}"), unlabeled_trees(n).iter().map(|e| bipartite(n, e)).collect()));
    }
    let k33: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    out.push(("K_3,3".into(), vec![bipartite(6, &k33)]));
    out.push(("C_4".into(), vec![bipartite(4, &Graph::cycle(4).edges())]));
    for cells in 1..=3 {
        out.push((format!("box-{cells}-extremal"), vec![box_gamma(cells)?]));
    }
    Ok(out)
}

fn status_outcome(s: HellyStatus) -> Outcome {
    match s {
        HellyStatus::Holds => Outcome::Pass,
        HellyStatus::Fails => Outcome::Fail,
        HellyStatus::CapLimited => Outcome::CapLimited,
    }
}

fn trees_case(n: usize) -> CaseSpec {
    CaseSpec::new(format!("bihelly/trees/n{n:02}"), format!("trees with {n} vertices"), "is_bi_helly", Some(7), move |ctx| {
        let trees = unlabeled_trees(n);
        let mut outcome = Outcome::Pass;
        for edges in &trees {
            let v = bipartite(n, edges).is_bi_helly(None, ctx.cap.unwrap_or(DEFAULT_CLIQUE_CAP));
            match status_outcome(v.status) {
                Outcome::Fail => return Verdict::fail(json!({ "edges": edges, "witness": v.witness })),
                Outcome::CapLimited => outcome = Outcome::CapLimited,
                _ => {}
            }
        }
        Verdict::of(outcome, json!({ "trees": trees.len() }))
    })
}

fn geodesic_case(name: String, graphs: Arc<Vec<BipartiteGraph>>) -> CaseSpec {
    CaseSpec::new(format!("bihelly/geodesics/{name}"), name, "directed_geodesic", Some(7), move |ctx| {
        guard(|| {
            let mut pairs = 0;
            for g in graphs.iter() {
                let v = g.is_bi_helly(None, ctx.cap.unwrap_or(DEFAULT_CLIQUE_CAP));
                if v.status != HellyStatus::Holds {
                    return Ok(Verdict::of(status_outcome(v.status), json!({ "graph": g.to_value(), "bi_helly": v })));
                }
                let ncs = near_cliques(g);
                for a in &ncs {
                    for b in &ncs {
                        if !g.uniform_distance(a, b).is_some_and(|n| n >= 2) {
                            continue;
                        }
                        let found = g.directed_geodesic(a, b, Reach::Any);
                        if !found.as_ref().is_ok_and(|seq| selections_are_geodesics(g, seq)) {
                            let common = g.directed_geodesic(a, b, Reach::All).ok();
                            return Ok(Verdict::fail(json!({
                                "graph": g.to_value(), "from": a, "to": b,
                                "error": found.err().map(|e| e.to_string()), "common_reading": common,
                            })));
                        }
                        pairs += 1;
                    }
                }
            }
            Ok(Verdict::pass(json!({ "graphs": graphs.len(), "pairs": pairs })))
        })
    })
}

/// Local-to-global agreement, and uniqueness among all enumerated
/// sequences: every directed geodesic found equals the computed one.
fn local_global_case(name: String, graphs: Arc<Vec<BipartiteGraph>>) -> CaseSpec {
    CaseSpec::new(format!("bihelly/local-to-global/{name}"), name, "local_check", Some(7), move |_| {
        guard(|| {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for g in graphs.iter() {
                let ncs = near_cliques(g);
                let mut bad: Option<serde_json::Value> = None;
                joined_sequences(g, &ncs, MAX_SEQUENCE, &mut |seq| {
                    if bad.is_some() {
                        return;
                    }
                    *counts.entry("sequences").or_default() += 1;
                    match g.local_check(seq, Reach::Any) {
                        Ok(c) if c.agreement => {
                            if c.direct {
                                *counts.entry("geodesics").or_default() += 1;
                                let unique = g.directed_geodesic(&seq[0], &seq[seq.len() - 1], Reach::Any).ok();
                                if unique.as_deref() != Some(seq) {
                                    bad = Some(json!({ "graph": g.to_value(), "second_geodesic": seq }));
                                }
                            }
                        }
                        other => bad = Some(json!({ "graph": g.to_value(), "sequence": seq, "check": format!("{other:?}") })),
                    }
                    if g.local_check(seq, Reach::All).is_ok_and(|c| !c.agreement) {
                        *counts.entry("common_reading_disagreements").or_default() += 1;
                    }
                });
                if let Some(w) = bad {
                    return Ok(Verdict::fail(w));
                }
            }
            Ok(Verdict::pass(json!(counts)))
        })
    })
}

pub fn cases() -> Vec<CaseSpec> {
    let mut out: Vec<CaseSpec> = (1..=15).map(trees_case).collect();
    out.push(CaseSpec::new("bihelly/hexagon", "C_6", "is_bi_helly", Some(7), |ctx: &Ctx| {
        let g = BipartiteGraph::new(Graph::cycle(6)).expect("even cycle");
        let v = g.is_bi_helly(None, ctx.cap.unwrap_or(DEFAULT_CLIQUE_CAP));
        let sets: Vec<Vec<usize>> = v.witness.iter().flatten().map(|b| g.half_ball(b.center, b.radius)).collect();
        let pairwise = sets.iter().all(|a| sets.iter().all(|b| a.iter().any(|x| b.contains(x))));
        let empty = (0..6).all(|x| !sets.iter().all(|s| s.contains(&x)));
        let ok = v.status == HellyStatus::Fails && !sets.is_empty() && pairwise && empty;
        Verdict::check(ok, json!({ "status": v.status, "witness": v.witness, "half_balls": sets }))
    }));
    match fixtures() {
        Ok(fx) => {
            for (name, graphs) in fx {
                let graphs = Arc::new(graphs);
                out.push(geodesic_case(name.clone(), graphs.clone()));
                out.push(local_global_case(name, graphs));
            }
        }
        Err(e) => {
            let msg = e.to_string();
            out.push(CaseSpec::new("bihelly/fixtures", "fixtures", "build", Some(7), move |_| {
                Verdict::of(Outcome::Error, json!(msg))
            }));
        }
    }
    out
}
