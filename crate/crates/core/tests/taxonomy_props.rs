use std::collections::{BTreeSet, VecDeque};

use artin_lab::diagram::{connected_subsets, is_ABI, labeled_trees, CoxeterDiagram, FamilyTag};
use artin_lab::taxonomy::*;

fn trees_upto(n: usize, labels: &[u32]) -> Vec<CoxeterDiagram> {
    (1..=n).flat_map(|k| labeled_trees(k, labels)).collect()
}

/// Closest core vertex by plain BFS, and whether it is a leaf of the core.
fn closest_is_leaf(d: &CoxeterDiagram, core: &BTreeSet<usize>, s: usize) -> bool {
    let mut dist = vec![usize::MAX; d.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    let mut best: Option<usize> = None;
    while let Some(u) = q.pop_front() {
        if core.contains(&u) {
            if best.map_or(true, |b| dist[u] < dist[b] || (dist[u] == dist[b] && u < b)) {
                best = Some(u);
            }
            continue;
        }
        for v in d.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    let t = best.unwrap();
    core.iter().filter(|&&c| d.adjacent(c, t)).count() == 1
}

/// Union-find over the core edges leaving `sub`.
fn edge_complement_connected(d: &CoxeterDiagram, core: &BTreeSet<usize>, sub: &BTreeSet<usize>) -> bool {
    let mut parent: Vec<usize> = (0..d.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut touched: BTreeSet<usize> = core.difference(sub).copied().collect();
    for (a, b, _) in d.edges() {
        if core.contains(&a) && core.contains(&b) && !(sub.contains(&a) && sub.contains(&b)) {
            touched.insert(a);
            touched.insert(b);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let roots: BTreeSet<usize> = touched.iter().map(|&v| find(&mut parent, v)).collect();
    roots.len() == 1
}

#[test]
fn trees_are_admissible_everywhere() {
    for d in trees_upto(6, &[3, 4]) {
        for vs in connected_subsets(&d) {
            assert!(is_admissible(&d, &vs).unwrap().holds);
        }
    }
}

#[test]
fn elementary_routes_agree_up_to_six() {
    for d in trees_upto(6, &[3, 4, 5, 6]) {
        assert_eq!(is_ctilde_elementary(&d).unwrap(), is_ctilde_elementary_by_shape(&d).unwrap(), "{}", d.to_json());
    }
}

fn atomic_subs(d: &CoxeterDiagram) -> Vec<LikeSubdiagram> {
    let mut subs = enumerate_like(d, LikeQuery::B);
    subs.extend(enumerate_like(d, LikeQuery::D));
    subs.into_iter().filter(|s| atomicity(d, s).unwrap() == Atomicity::Atomic).collect()
}

fn check_cores(labels: &[u32], n: usize) -> usize {
    let mut checked = 0;
    for d in trees_upto(n, labels) {
        let has_core = !enumerate_like(&d, LikeQuery::CTildeCore).is_empty();
        let cores: Vec<Vec<usize>> =
            enumerate_like(&d, LikeQuery::CTildeCore).iter().map(|c| c.vertex_set()).collect();
        for sub in atomic_subs(&d) {
            let res = find_robust_core(&d, &sub);
            if !has_core {
                assert_eq!(res, Err(TaxonomyError::NoCore));
                continue;
            }
            let c = res.unwrap_or_else(|e| panic!("{e} on {} with {:?}", d.to_json(), sub));
            checked += 1;
            let core_set: BTreeSet<usize> = c.core.vertices.iter().copied().collect();
            assert!(cores.contains(&c.core.vertex_set()));
            let sub_set: BTreeSet<usize> = sub.vertices.iter().copied().collect();
            // cores that extend sub on both sides of b3 cannot be connected outside it
            let two_sided = matches!(c.config_label, ConfigLabel::Figure(15..=19));
            let connected = edge_complement_connected(&d, &core_set, &sub_set);
            assert!(connected || two_sided, "{} {:?} {:?}", d.to_json(), sub, c);
            let reported = c.side_conditions.iter().find(|x| x.0 == "core_minus_sub_connected").unwrap().1;
            assert_eq!(reported, connected);
            for &s in sub_set.difference(&core_set) {
                assert!(closest_is_leaf(&d, &core_set, s), "{} {:?} {:?}", d.to_json(), sub, c);
            }
            assert_eq!(c.sub_contained, sub_set.is_subset(&core_set));
            if let ConfigLabel::Figure(k) = c.config_label {
                assert_eq!(c.sub_contained, k >= 11, "{} {:?} {:?}", d.to_json(), sub, c);
            }
        }
    }
    checked
}

#[test]
fn robust_cores_satisfy_postconditions() {
    assert!(check_cores(&[3, 4], 7) > 1000);
    assert!(check_cores(&[3, 4, 5], 6) > 500);
}

#[test]
fn tripod_with_far_big_edge() {
    // center s1 with leaves s2, s3 and arm s1-s4-s5, extra edge s5-s6 labeled 4
    let d = CoxeterDiagram::new(
        artin_lab::diagram::default_names(6),
        &[(0, 1, 3), (0, 2, 3), (0, 3, 3), (3, 4, 3), (4, 5, 4)],
    )
    .unwrap();
    let sub = LikeSubdiagram { kind: LikeKind::D, vertices: vec![1, 2, 0], base_vertex: Some(0) };
    let c = find_robust_core(&d, &sub).unwrap();
    assert_eq!(c.core.kind, LikeKind::BTilde);
    assert_eq!(c.config_label, ConfigLabel::Figure(15));
    let sub = LikeSubdiagram { kind: LikeKind::D, vertices: vec![0, 4, 3], base_vertex: Some(3) };
    let c = find_robust_core(&d, &sub).unwrap();
    assert_eq!(c.config_label, ConfigLabel::Figure(18));
}

#[test]
fn atomicity_survives_edges_at_exempt_vertices() {
    for d in trees_upto(6, &[3, 4]) {
        for sub in atomic_subs(&d) {
            let v = &sub.vertices;
            let m = v.len();
            let exempt: Vec<usize> = match sub.kind {
                LikeKind::B if m >= 3 => vec![v[1], v[m - 2]],
                LikeKind::D => vec![v[2], v[m - 2]],
                _ => vec![],
            };
            for &x in &exempt {
                let mut edges = d.edges();
                edges.push((x, d.len(), 3));
                let bigger = CoxeterDiagram::new(artin_lab::diagram::default_names(d.len() + 1), &edges).unwrap();
                assert_eq!(atomicity(&bigger, &sub).unwrap(), Atomicity::Atomic);
            }
        }
    }
}

#[test]
fn abi_trees_are_settled_up_to_six() {
    for d in trees_upto(6, &[3, 4, 5]) {
        if is_ABI(&d).holds {
            assert_eq!(reduction_certificate(&d).unwrap().verdict, "settled", "{}", d.to_json());
        }
    }
}

#[test]
fn family_obligations() {
    let cases = [
        (FamilyTag::D(4), vec!["E_{1,1,1}"]),
        (FamilyTag::E6, vec!["E_{1,1,1}", "E_{2,1,1}", "E_{2,2,1}"]),
        (FamilyTag::F4, vec!["F_{1,1}"]),
        (FamilyTag::H4, vec!["H_{0,0}", "H_{1,0}", "H_{2,0}"]),
    ];
    for (tag, expected) in cases {
        let c = reduction_certificate(&tag.diagram().unwrap()).unwrap();
        let mut got = c.obligations.clone();
        got.sort();
        assert_eq!(got, expected, "{tag}");
        assert_eq!(c.verdict, "open");
    }
    let c = reduction_certificate(&CoxeterDiagram::linear(&[6, 3])).unwrap();
    assert!(c.obligations.is_empty());
    assert!(c.elementary_leaves.iter().any(|l| l.status == LeafStatus::SettledLargeLabel));
}
