//! Subdiagram taxonomy: admissibility, B/D-like and affine-like
//! subdiagrams, atomicity, C̃-elementary detection, robust core search and
//! reduction certificates.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::diagram::{classify_family, dominates, is_ABI, CoxeterDiagram, FamilyTag};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("subdiagram is not connected")]
    NotConnected,
    #[error("diagram is not a tree")]
    NotTree,
    #[error("diagram is not a forest")]
    NotForest,
    #[error("diagram has no C~-core")]
    NoCore,
    #[error("subdiagram is not atomic")]
    NotAtomic,
    #[error("invalid subdiagram: {0}")]
    Invalid(String),
    #[error("vertex index {0} out of range")]
    UnknownVertex(usize),
}

/// Result of the admissibility test, with a witness `(s, s1, s2)` on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub holds: bool,
    pub witness: Option<(usize, usize, usize)>,
}

/// For every `s` in `sub`, vertices in different components of `sub - s`
/// must lie in different components of `d - s`.
pub fn is_admissible(d: &CoxeterDiagram, sub: &[usize]) -> Result<Admissibility, TaxonomyError> {
    if !d.subset_connected(sub) {
        return Err(TaxonomyError::NotConnected);
    }
    let n = d.len();
    let mut sub: Vec<usize> = sub.to_vec();
    sub.sort_unstable();
    for &s in &sub {
        let mut in_sub = vec![false; n];
        for &v in &sub {
            in_sub[v] = v != s;
        }
        let mut all = vec![true; n];
        all[s] = false;
        let local = component_ids(d, &in_sub);
        let global = component_ids(d, &all);
        for (i, &a) in sub.iter().enumerate() {
            for &b in &sub[i + 1..] {
                if a == s || b == s {
                    continue;
                }
                if local[a] != local[b] && global[a] == global[b] {
                    return Ok(Admissibility { holds: false, witness: Some((s, a, b)) });
                }
            }
        }
    }
    Ok(Admissibility { holds: true, witness: None })
}

fn component_ids(d: &CoxeterDiagram, mask: &[bool]) -> Vec<usize> {
    let mut id = vec![usize::MAX; d.len()];
    for (k, comp) in d.components_within(mask).iter().enumerate() {
        for &v in comp {
            id[v] = k;
        }
    }
    id
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LikeKind {
    B,
    D,
    CTilde,
    BTilde,
    DTilde,
}

/// Which family [`enumerate_like`] should return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LikeQuery {
    B,
    D,
    CTilde,
    BTilde,
    DTilde,
    CTildeCore,
}

/// An induced subdiagram with its canonical vertex labeling.
///
/// * `B`: `s_1 .. s_n`, with `m(s_{n-1}, s_n) >= 4`.
/// * `D` and `BTilde`: `b_1, b_2, b_3, .., b_{n+1}`; `b_1, b_2` are the two
///   leaves at `b_3`.
/// * `CTilde`: `s_1 .. s_{n+1}`.
/// * `DTilde`: `a_1, a_2, b_1 .. b_k, c_1, c_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LikeSubdiagram {
    pub kind: LikeKind,
    pub vertices: Vec<usize>,
    pub base_vertex: Option<usize>,
}

impl LikeSubdiagram {
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// The subscript of the kind: `B_n`, `D_n`, `C~_n`, `B~_n`, `D~_n`.
    pub fn index(&self) -> usize {
        let len = self.vertices.len();
        match self.kind {
            LikeKind::B | LikeKind::D => len,
            _ => len - 1,
        }
    }

    pub fn is_core(&self) -> bool {
        matches!(self.kind, LikeKind::CTilde | LikeKind::BTilde | LikeKind::DTilde)
    }

    /// The τ value of a vertex of the subdiagram.
    pub fn tau(&self, v: usize) -> Option<usize> {
        let pos = self.vertices.iter().position(|&x| x == v)?;
        Some(match self.kind {
            LikeKind::B | LikeKind::CTilde => pos + 1,
            LikeKind::D | LikeKind::BTilde => {
                if pos < 2 {
                    1
                } else {
                    pos + 1
                }
            }
            LikeKind::DTilde => {
                let len = self.vertices.len();
                if pos < 2 {
                    1
                } else if pos >= len - 2 {
                    len
                } else {
                    pos + 1
                }
            }
        })
    }

    pub fn max_tau(&self) -> usize {
        self.vertices.iter().filter_map(|&v| self.tau(v)).max().unwrap_or(0)
    }

    pub fn name(&self) -> String {
        let k = self.index();
        match self.kind {
            LikeKind::B => format!("B_{k}-like"),
            LikeKind::D => format!("D_{k}-like"),
            LikeKind::CTilde => format!("C~_{k}-like"),
            LikeKind::BTilde => format!("B~_{k}-like"),
            LikeKind::DTilde => format!("D~_{k}-like"),
        }
    }
}

/// Connected vertex subsets inducing trees, by size then lexicographically.
fn connected_tree_subsets(d: &CoxeterDiagram, min: usize) -> Vec<Vec<usize>> {
    crate::diagram::connected_subsets(d)
        .into_iter()
        .filter(|vs| vs.len() >= min && d.induced(vs).shape().is_tree)
        .collect()
}

/// Path order of a linear vertex set (starting at its smaller leaf).
fn linear_path(d: &CoxeterDiagram, vs: &[usize]) -> Option<Vec<usize>> {
    let sub = d.induced(vs);
    let order = sub.linear_order()?;
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    Some(order.into_iter().map(|i| sorted[i]).collect())
}

/// Recognizes the D_{n+1} tree shape on a vertex set: returns all labelings
/// `[b1, b2, b3, ..]` (several for the star on four vertices).
fn d_labelings(d: &CoxeterDiagram, vs: &[usize]) -> Vec<Vec<usize>> {
    let sub = d.induced(vs);
    let shape = sub.shape();
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    let g = |i: usize| sorted[i];
    if !shape.is_tree {
        return Vec::new();
    }
    if vs.len() == 3 && shape.is_linear {
        let order = sub.linear_order().expect("linear");
        let (a, c) = (g(order[0]), g(order[2]));
        return vec![vec![a.min(c), a.max(c), g(order[1])]];
    }
    if !shape.is_tripod {
        return Vec::new();
    }
    let center = (0..sub.len()).find(|&i| shape.valence[i] == 3).expect("center");
    let arms = crate::diagram::tripod_arms(&sub, center);
    let lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
    if lens[1] != 1 || lens[2] != 1 {
        return Vec::new();
    }
    if lens[0] == 1 {
        // star: each leaf may serve as b4
        let leaves: Vec<usize> = arms.iter().map(|a| g(a[0])).collect();
        let mut out = Vec::new();
        let mut sorted_leaves = leaves.clone();
        sorted_leaves.sort_unstable();
        for &b4 in &sorted_leaves {
            let rest: Vec<usize> = sorted_leaves.iter().copied().filter(|&x| x != b4).collect();
            out.push(vec![rest[0], rest[1], g(center), b4]);
        }
        return out;
    }
    let (x, y) = (g(arms[1][0]), g(arms[2][0]));
    let mut lab = vec![x.min(y), x.max(y), g(center)];
    lab.extend(arms[0].iter().map(|&i| g(i)));
    vec![lab]
}

/// Recognizes the D̃ tree shape; returns the canonical labeling.
fn dtilde_labeling(d: &CoxeterDiagram, vs: &[usize]) -> Option<Vec<usize>> {
    let sub = d.induced(vs);
    let shape = sub.shape();
    if !shape.is_tree || vs.len() < 5 {
        return None;
    }
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    let g = |i: usize| sorted[i];
    let n = sub.len();
    if n == 5 {
        let center = (0..n).find(|&i| shape.valence[i] == 4)?;
        let mut leaves: Vec<usize> = (0..n).filter(|&i| i != center).map(g).collect();
        leaves.sort_unstable();
        return Some(vec![leaves[0], leaves[1], g(center), leaves[2], leaves[3]]);
    }
    let branch: Vec<usize> = (0..n).filter(|&i| shape.valence[i] >= 3).collect();
    if branch.len() != 2 || shape.valence.iter().any(|&v| v > 3) {
        return None;
    }
    let leafs_at = |b: usize| -> Vec<usize> { sub.neighbors(b).filter(|&u| shape.valence[u] == 1).collect() };
    let (l0, l1) = (leafs_at(branch[0]), leafs_at(branch[1]));
    if l0.len() != 2 || l1.len() != 2 {
        return None;
    }
    let path = sub.path_between(branch[0], branch[1])?;
    if path.len() + 4 != n {
        return None;
    }
    let mut a: Vec<usize> = l0.iter().map(|&i| g(i)).collect();
    let mut c: Vec<usize> = l1.iter().map(|&i| g(i)).collect();
    a.sort_unstable();
    c.sort_unstable();
    let mut mid: Vec<usize> = path.iter().map(|&i| g(i)).collect();
    // orient so the a-side holds the smaller leaf
    if c[0] < a[0] {
        std::mem::swap(&mut a, &mut c);
        mid.reverse();
    }
    let mut lab = a;
    lab.extend(mid);
    lab.extend(c);
    Some(lab)
}

/// All induced subdiagrams of the requested kind.
pub fn enumerate_like(d: &CoxeterDiagram, query: LikeQuery) -> Vec<LikeSubdiagram> {
    let mut out = Vec::new();
    let subsets = connected_tree_subsets(d, 2);
    let wants = |k: LikeKind| match query {
        LikeQuery::B => k == LikeKind::B,
        LikeQuery::D => k == LikeKind::D,
        LikeQuery::CTilde => k == LikeKind::CTilde,
        LikeQuery::BTilde => k == LikeKind::BTilde,
        LikeQuery::DTilde => k == LikeKind::DTilde,
        LikeQuery::CTildeCore => matches!(k, LikeKind::CTilde | LikeKind::BTilde | LikeKind::DTilde),
    };
    for vs in &subsets {
        if let Some(path) = linear_path(d, vs) {
            let labels = d.labels_along(&path);
            let first = labels[0] >= 4;
            let last = *labels.last().expect("edge") >= 4;
            if wants(LikeKind::B) && (first || last) {
                let mut p = path.clone();
                if !last {
                    p.reverse();
                }
                let base = if p.len() >= 3 { Some(p[0]) } else { None };
                out.push(LikeSubdiagram { kind: LikeKind::B, vertices: p, base_vertex: base });
            }
            if wants(LikeKind::CTilde) && path.len() >= 3 && first && last {
                out.push(LikeSubdiagram { kind: LikeKind::CTilde, vertices: path.clone(), base_vertex: None });
            }
        }
        if vs.len() >= 3 && (wants(LikeKind::D) || wants(LikeKind::BTilde)) {
            for lab in d_labelings(d, vs) {
                if wants(LikeKind::D) {
                    let base = d_base_vertex(d, &lab);
                    out.push(LikeSubdiagram { kind: LikeKind::D, vertices: lab.clone(), base_vertex: base });
                }
                let m = lab.len();
                if wants(LikeKind::BTilde) && m >= 4 && d.label(lab[m - 2], lab[m - 1]) >= 4 {
                    out.push(LikeSubdiagram { kind: LikeKind::BTilde, vertices: lab, base_vertex: None });
                }
            }
        }
        if wants(LikeKind::DTilde) {
            if let Some(lab) = dtilde_labeling(d, vs) {
                out.push(LikeSubdiagram { kind: LikeKind::DTilde, vertices: lab, base_vertex: None });
            }
        }
    }
    out
}

/// Base vertex of a D-like labeling: the interior vertex for D_3, the far
/// leaf for D_n with n >= 5, free (none) for D_4.
fn d_base_vertex(_d: &CoxeterDiagram, lab: &[usize]) -> Option<usize> {
    match lab.len() {
        3 => Some(lab[2]),
        4 => None,
        _ => lab.last().copied(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Atomicity {
    Atomic,
    WeaklyAtomic,
    None,
}

/// Atomicity of a B-like or D-like subdiagram inside `d`.
pub fn atomicity(d: &CoxeterDiagram, sub: &LikeSubdiagram) -> Result<Atomicity, TaxonomyError> {
    validate_like(d, sub)?;
    let v = &sub.vertices;
    let m = v.len();
    match sub.kind {
        LikeKind::B => {
            let labels_ok = (0..m - 1).all(|i| i == m - 2 || d.label(v[i], v[i + 1]) == 3);
            // interior s_2..s_{m-1}; exempt s_2 and s_{m-1}
            let valence_ok = (2..m.saturating_sub(2)).all(|i| d.degree(v[i]) == 2);
            Ok(if labels_ok && valence_ok { Atomicity::Atomic } else { Atomicity::None })
        }
        LikeKind::D => {
            // interior b_3..b_{m-1}; exempt b_3 and b_{m-1}
            let valence_ok = (3..m.saturating_sub(2)).all(|i| d.degree(v[i]) == 2);
            let tail_ok = (2..m - 1).all(|i| d.label(v[i], v[i + 1]) == 3);
            let l1 = d.label(v[0], v[2]);
            let l2 = d.label(v[1], v[2]);
            if !valence_ok || !tail_ok {
                return Ok(Atomicity::None);
            }
            if l1 == 3 && l2 == 3 {
                Ok(Atomicity::Atomic)
            } else if l1 == 3 || l2 == 3 {
                Ok(Atomicity::WeaklyAtomic)
            } else {
                Ok(Atomicity::None)
            }
        }
        _ => Err(TaxonomyError::Invalid("atomicity applies to B-like and D-like subdiagrams".into())),
    }
}

/// Checks that `sub` really is an induced subdiagram of its kind in `d`.
pub fn validate_like(d: &CoxeterDiagram, sub: &LikeSubdiagram) -> Result<(), TaxonomyError> {
    if let Some(&bad) = sub.vertices.iter().find(|&&x| x >= d.len()) {
        return Err(TaxonomyError::UnknownVertex(bad));
    }
    let query = match sub.kind {
        LikeKind::B => LikeQuery::B,
        LikeKind::D => LikeQuery::D,
        LikeKind::CTilde => LikeQuery::CTilde,
        LikeKind::BTilde => LikeQuery::BTilde,
        LikeKind::DTilde => LikeQuery::DTilde,
    };
    let vs = sub.vertex_set();
    let ok = like_on_set(d, &vs, query).iter().any(|l| same_structure(l, sub));
    if ok {
        Ok(())
    } else {
        Err(TaxonomyError::Invalid(format!("{:?} is not {}", sub.vertices, sub.name())))
    }
}

fn same_structure(a: &LikeSubdiagram, b: &LikeSubdiagram) -> bool {
    if a.kind != b.kind {
        return false;
    }
    if a.vertices == b.vertices {
        return true;
    }
    let rev: Vec<usize> = b.vertices.iter().rev().copied().collect();
    match a.kind {
        LikeKind::B => false,
        LikeKind::CTilde => a.vertices == rev,
        LikeKind::D | LikeKind::BTilde => {
            let mut sw = b.vertices.clone();
            sw.swap(0, 1);
            a.vertices == sw
        }
        LikeKind::DTilde => a.vertex_set() == b.vertex_set(),
    }
}

/// Like-subdiagrams supported exactly on `vs`.
fn like_on_set(d: &CoxeterDiagram, vs: &[usize], query: LikeQuery) -> Vec<LikeSubdiagram> {
    let sub = d.induced(vs);
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    enumerate_like(&sub, query)
        .into_iter()
        .filter(|l| l.vertices.len() == sorted.len())
        .map(|mut l| {
            l.vertices = l.vertices.iter().map(|&i| sorted[i]).collect();
            l.base_vertex = l.base_vertex.map(|i| sorted[i]);
            l
        })
        .collect()
}

/// C̃-elementary test through domination: no induced subdiagram dominates
/// C̃_n (n >= 2), B̃_n (n >= 3) or D̃_n (n >= 4).
pub fn is_ctilde_elementary(d: &CoxeterDiagram) -> Result<bool, TaxonomyError> {
    if !d.shape().is_tree {
        return Err(TaxonomyError::NotTree);
    }
    for vs in crate::diagram::connected_subsets(d) {
        let k = vs.len();
        if k < 3 {
            continue;
        }
        let sub = d.induced(&vs);
        let mut targets = vec![FamilyTag::CTilde(k - 1)];
        if k >= 4 {
            targets.push(FamilyTag::BTilde(k - 1));
        }
        if k >= 5 {
            targets.push(FamilyTag::DTilde(k - 1));
        }
        for t in targets {
            let model = t.diagram().expect("affine model");
            if dominates(&sub, &model).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// C̃-elementary test through shape: linear with at most one label >= 4,
/// or a tripod with all labels 3.
pub fn is_ctilde_elementary_by_shape(d: &CoxeterDiagram) -> Result<bool, TaxonomyError> {
    let shape = d.shape();
    if !shape.is_tree {
        return Err(TaxonomyError::NotTree);
    }
    let big = d.edges().iter().filter(|e| e.2 >= 4).count();
    Ok((shape.is_linear && big <= 1) || (shape.is_tripod && big == 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtremalClass {
    ExtremalMin,
    ExtremalMax,
    ExtremalOther,
    NotExtremal,
}

/// Classifies `s` by the core vertex closest to it.
pub fn extremal_class(
    d: &CoxeterDiagram,
    core: &LikeSubdiagram,
    s: usize,
) -> Result<ExtremalClass, TaxonomyError> {
    if s >= d.len() {
        return Err(TaxonomyError::UnknownVertex(s));
    }
    let dist = d.distances_from(s);
    let t = core
        .vertices
        .iter()
        .copied()
        .filter(|&v| dist[v] != usize::MAX)
        .min_by_key(|&v| (dist[v], v))
        .ok_or_else(|| TaxonomyError::Invalid("core not reachable".into()))?;
    let core_sub = d.induced(&core.vertex_set());
    let pos = core.vertex_set().binary_search(&t).expect("core vertex");
    if core_sub.degree(pos) != 1 {
        return Ok(ExtremalClass::NotExtremal);
    }
    let tau = core.tau(t).expect("core vertex");
    let taus: Vec<usize> = core.vertices.iter().filter_map(|&v| core.tau(v)).collect();
    let (lo, hi) = (*taus.iter().min().unwrap(), *taus.iter().max().unwrap());
    Ok(if tau == lo {
        ExtremalClass::ExtremalMin
    } else if tau == hi {
        ExtremalClass::ExtremalMax
    } else {
        ExtremalClass::ExtremalOther
    })
}

/// Configuration label of a robust core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConfigLabel {
    Figure(u8),
    Degenerate(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreConfig {
    pub core: LikeSubdiagram,
    pub config_label: ConfigLabel,
    /// Structural side conditions `(name, holds)`.
    pub side_conditions: Vec<(String, bool)>,
    pub sub_contained: bool,
    /// Set when an arbitrary choice among equivalent edges was made.
    pub flagged_choice: Option<String>,
    /// Robustness of the core is not finitely checkable; always "asserted".
    pub robustness: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Feature {
    Edge(usize, usize),
    Vertex(usize),
}

impl Feature {
    fn dist(&self, dist: &[usize]) -> usize {
        match *self {
            Feature::Edge(a, b) => dist[a].min(dist[b]),
            Feature::Vertex(v) => dist[v],
        }
    }

    fn key(&self, dist: &[usize]) -> (usize, u8, usize, usize) {
        match *self {
            Feature::Edge(a, b) => (self.dist(dist), 0, a, b),
            Feature::Vertex(v) => (self.dist(dist), 1, v, 0),
        }
    }

    /// Endpoint closest to the source, then the other.
    fn near_far(&self, dist: &[usize]) -> (usize, usize) {
        match *self {
            Feature::Edge(a, b) => {
                if dist[a] <= dist[b] {
                    (a, b)
                } else {
                    (b, a)
                }
            }
            Feature::Vertex(v) => (v, v),
        }
    }
}

/// Multi-source BFS distance from a set.
fn dist_from_set(d: &CoxeterDiagram, src: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; d.len()];
    let mut queue = std::collections::VecDeque::new();
    for &s in src {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for v in d.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Smallest subtree containing all given vertices (in a tree).
fn subtree_span(d: &CoxeterDiagram, vs: &[usize]) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = BTreeSet::new();
    if vs.is_empty() {
        return out;
    }
    out.insert(vs[0]);
    for &v in &vs[1..] {
        if let Some(p) = d.path_between(vs[0], v) {
            out.extend(p);
        }
    }
    out
}

/// Edges at `v` leading to vertices outside `exclude`, least first.
fn extra_edges(d: &CoxeterDiagram, v: usize, exclude: &BTreeSet<usize>) -> Vec<usize> {
    d.neighbors(v).filter(|u| !exclude.contains(u)).collect()
}

struct Builder<'a> {
    d: &'a CoxeterDiagram,
    flagged: Option<String>,
}

impl Builder<'_> {
    /// The set for "path from `src` to feature plus a fork at a vertex
    /// feature".
    fn extend_with_fork(&mut self, set: &mut BTreeSet<usize>, v: usize, count: usize) -> Result<(), TaxonomyError> {
        let extra = extra_edges(self.d, v, set);
        if extra.len() < count {
            return Err(TaxonomyError::NoCore);
        }
        if extra.len() > count {
            self.flagged = Some(format!(
                "chose edges at {} towards {:?} among {:?} by vertex order",
                self.d.name(v),
                extra[..count].iter().map(|&u| self.d.name(u)).collect::<Vec<_>>(),
                extra.iter().map(|&u| self.d.name(u)).collect::<Vec<_>>()
            ));
        }
        set.extend(extra[..count].iter().copied());
        Ok(())
    }
}

/// Finds a core following the constructive case analysis for atomic B-like
/// and D-like subdiagrams of a tree.
pub fn find_robust_core(d: &CoxeterDiagram, sub: &LikeSubdiagram) -> Result<CoreConfig, TaxonomyError> {
    if !d.shape().is_tree {
        return Err(TaxonomyError::NotTree);
    }
    if enumerate_like(d, LikeQuery::CTildeCore).is_empty() {
        return Err(TaxonomyError::NoCore);
    }
    if atomicity(d, sub)? != Atomicity::Atomic {
        return Err(TaxonomyError::NotAtomic);
    }
    let mut b = Builder { d, flagged: None };
    let (set, label) = match sub.kind {
        LikeKind::B => core_for_b(&mut b, &sub.vertices)?,
        LikeKind::D if sub.vertices.len() == 3 => core_for_d3(&mut b, &sub.vertices)?,
        LikeKind::D => core_for_d(&mut b, &sub.vertices)?,
        _ => return Err(TaxonomyError::Invalid("sub must be B-like or D-like".into())),
    };
    let vs: Vec<usize> = set.iter().copied().collect();
    let core = like_on_set(d, &vs, LikeQuery::CTildeCore)
        .into_iter()
        .next()
        .ok_or_else(|| TaxonomyError::Invalid(format!("constructed set {vs:?} is not a core")))?;
    let sub_set: BTreeSet<usize> = sub.vertices.iter().copied().collect();
    let sub_contained = sub_set.is_subset(&set);
    let label = match label {
        Label::Fixed(n) => ConfigLabel::Figure(n),
        Label::ByContainment { outside, inside } => {
            ConfigLabel::Figure(if sub_contained { inside } else { outside })
        }
        Label::Tag(t) => ConfigLabel::Degenerate(t.to_string()),
    };
    let side_conditions = side_conditions(d, sub, &core, &label, sub_contained);
    Ok(CoreConfig {
        core,
        config_label: label,
        side_conditions,
        sub_contained,
        flagged_choice: b.flagged,
        robustness: "asserted".into(),
    })
}

enum Label {
    Fixed(u8),
    ByContainment { outside: u8, inside: u8 },
    Tag(&'static str),
}

fn features(d: &CoxeterDiagram, skip_edge: Option<(usize, usize)>, skip_vertex: Option<usize>, min_valence: usize) -> Vec<Feature> {
    let mut out = Vec::new();
    for (a, b, l) in d.edges() {
        if l >= 4 && Some((a, b)) != skip_edge && Some((b, a)) != skip_edge {
            out.push(Feature::Edge(a, b));
        }
    }
    for v in 0..d.len() {
        if Some(v) != skip_vertex && d.degree(v) >= min_valence {
            out.push(Feature::Vertex(v));
        }
    }
    out
}

fn nearest(features: &[Feature], dist: &[usize]) -> Option<Feature> {
    features
        .iter()
        .copied()
        .filter(|f| f.dist(dist) != usize::MAX)
        .min_by_key(|f| f.key(dist))
}

fn core_for_b(b: &mut Builder, s: &[usize]) -> Result<(BTreeSet<usize>, Label), TaxonomyError> {
    let d = b.d;
    let m = s.len();
    let sub_set: BTreeSet<usize> = s.iter().copied().collect();
    if m >= 3 && d.degree(s[1]) > 2 {
        let mut set = sub_set.clone();
        b.extend_with_fork(&mut set, s[1], 1)?;
        return Ok((set, Label::Fixed(12)));
    }
    if m >= 3 && d.degree(s[m - 2]) > 2 {
        let mut set: BTreeSet<usize> = [s[m - 3], s[m - 2], s[m - 1]].into_iter().collect();
        b.extend_with_fork(&mut set, s[m - 2], 1)?;
        return Ok((set, Label::Fixed(5)));
    }
    let fs = features(d, Some((s[m - 2], s[m - 1])), None, 3);
    let dist = dist_from_set(d, &[s[m - 2], s[m - 1]]);
    let phi = nearest(&fs, &dist).ok_or(TaxonomyError::NoCore)?;
    match phi {
        Feature::Edge(..) => {
            let (_, far) = phi.near_far(&dist);
            let set = subtree_span(d, &[s[m - 2], s[m - 1], far]);
            Ok((set, Label::ByContainment { outside: 2, inside: 11 }))
        }
        Feature::Vertex(v) => {
            let mut set = subtree_span(d, &[s[m - 2], s[m - 1], v]);
            b.extend_with_fork(&mut set, v, 2)?;
            Ok((set, Label::ByContainment { outside: 1, inside: 12 }))
        }
    }
}

fn core_for_d(b: &mut Builder, v: &[usize]) -> Result<(BTreeSet<usize>, Label), TaxonomyError> {
    let d = b.d;
    let m = v.len();
    let b3 = v[2];
    let star: BTreeSet<usize> = [v[0], v[1], v[2], v[3]].into_iter().collect();
    if d.degree(b3) > 3 {
        let mut set = star.clone();
        b.extend_with_fork(&mut set, b3, 1)?;
        return Ok((set, Label::ByContainment { outside: 3, inside: 16 }));
    }
    let bm1 = v[m - 2];
    if bm1 != b3 && d.degree(bm1) >= 3 {
        let mut set: BTreeSet<usize> = v.iter().copied().collect();
        b.extend_with_fork(&mut set, bm1, 1)?;
        return Ok((set, Label::Fixed(14)));
    }
    let fs = features(d, None, Some(b3), 3);
    let dist = d.distances_from(b3);
    let phi = nearest(&fs, &dist).ok_or(TaxonomyError::NoCore)?;
    let sub_set: BTreeSet<usize> = v.iter().copied().collect();
    match phi {
        Feature::Edge(..) => {
            let (_, far) = phi.near_far(&dist);
            let mut set = subtree_span(d, &[b3, far]);
            set.extend(star.iter().copied());
            let label = d_label(&set, &sub_set, &star, 4, 13, 15);
            Ok((set, label))
        }
        Feature::Vertex(u) => {
            let mut set = subtree_span(d, &[b3, u]);
            set.extend(star.iter().copied());
            b.extend_with_fork(&mut set, u, 2)?;
            let label = d_label(&set, &sub_set, &star, 3, 14, 16);
            Ok((set, label))
        }
    }
}

fn d_label(
    set: &BTreeSet<usize>,
    sub: &BTreeSet<usize>,
    star: &BTreeSet<usize>,
    outside: u8,
    inside: u8,
    in_star: u8,
) -> Label {
    if !sub.is_subset(set) {
        Label::Fixed(outside)
    } else if sub.is_subset(star) {
        Label::Fixed(in_star)
    } else {
        Label::Fixed(inside)
    }
}

fn core_for_d3(b: &mut Builder, v: &[usize]) -> Result<(BTreeSet<usize>, Label), TaxonomyError> {
    let d = b.d;
    let (b1, b2, b3) = (v[0], v[1], v[2]);
    let base: BTreeSet<usize> = [b1, b2, b3].into_iter().collect();
    if d.degree(b3) > 2 {
        let mut set = base.clone();
        if d.degree(b3) >= 4 {
            b.extend_with_fork(&mut set, b3, 2)?;
            return Ok((set, Label::Fixed(16)));
        }
        b.extend_with_fork(&mut set, b3, 1)?;
        let fs = features(d, None, Some(b3), 3);
        let dist = d.distances_from(b3);
        let phi = nearest(&fs, &dist).ok_or(TaxonomyError::NoCore)?;
        return match phi {
            Feature::Edge(..) => {
                let (_, far) = phi.near_far(&dist);
                set.extend(subtree_span(d, &[b3, far]));
                Ok((set, Label::Fixed(15)))
            }
            Feature::Vertex(u) => {
                set.extend(subtree_span(d, &[b3, u]));
                b.extend_with_fork(&mut set, u, 2)?;
                Ok((set, Label::Fixed(16)))
            }
        };
    }
    let dist = d.distances_from(b3);
    let mut mask = vec![true; d.len()];
    mask[b3] = false;
    let comp = component_ids(d, &mask);
    let all = features(d, None, None, 3);
    let side = |x: usize| -> Vec<Feature> {
        all.iter()
            .copied()
            .filter(|f| match *f {
                Feature::Edge(p, q) => p != b3 && q != b3 && comp[p] == comp[x],
                Feature::Vertex(u) => u != b3 && comp[u] == comp[x],
            })
            .collect()
    };
    let (phi1, phi2) = (side(b1), side(b2));
    if !phi1.is_empty() && !phi2.is_empty() {
        let f1 = nearest(&phi1, &dist).expect("non-empty");
        let f2 = nearest(&phi2, &dist).expect("non-empty");
        let mut set = base.clone();
        let mut vertices = 0;
        for f in [f1, f2] {
            match f {
                Feature::Edge(..) => {
                    let (_, far) = f.near_far(&dist);
                    set.extend(subtree_span(d, &[b3, far]));
                }
                Feature::Vertex(u) => {
                    set.extend(subtree_span(d, &[b3, u]));
                    vertices += 1;
                }
            }
        }
        for f in [f1, f2] {
            if let Feature::Vertex(u) = f {
                b.extend_with_fork(&mut set, u, 2)?;
            }
        }
        return Ok((set, Label::Fixed(17 + vertices)));
    }
    let phi = if phi1.is_empty() { phi2 } else { phi1 };
    if phi.is_empty() {
        return Err(TaxonomyError::NoCore);
    }
    let dmin = phi.iter().map(|f| f.dist(&dist)).min().expect("non-empty");
    let closest: Vec<Feature> = phi.iter().copied().filter(|f| f.dist(&dist) == dmin).collect();
    let vertex = closest.iter().find_map(|f| match f {
        Feature::Vertex(u) => Some(*u),
        _ => None,
    });
    let has_edge = closest.iter().any(|f| matches!(f, Feature::Edge(..)));
    if let (Some(u), true) = (vertex, has_edge) {
        // three edges at u: towards b3, the big edge(s), then least others
        let toward = d.path_between(u, b3).expect("tree")[1];
        let mut set: BTreeSet<usize> = [u, toward].into_iter().collect();
        for f in &closest {
            if let Feature::Edge(p, q) = *f {
                if set.len() < 4 {
                    set.insert(if p == u { q } else { p });
                }
            }
        }
        let need = 4 - set.len();
        b.extend_with_fork(&mut set, u, need)?;
        return Ok((set, Label::Fixed(10)));
    }
    if let Some(u) = vertex {
        let toward = d.path_between(u, b3).expect("tree")[1];
        if d.degree(u) >= 4 {
            let mut set: BTreeSet<usize> = [u, toward].into_iter().collect();
            b.extend_with_fork(&mut set, u, 3)?;
            return Ok((set, Label::Tag("d3-star")));
        }
        let rest: Vec<Feature> = phi.iter().copied().filter(|f| *f != Feature::Vertex(u)).collect();
        let next = nearest(&rest, &dist).ok_or(TaxonomyError::NoCore)?;
        let mut set: BTreeSet<usize> = d.neighbors(u).chain([u]).collect();
        return match next {
            Feature::Edge(..) => {
                let (_, far) = next.near_far(&dist);
                set.extend(subtree_span(d, &[u, far]));
                Ok((set, Label::Fixed(8)))
            }
            Feature::Vertex(w) => {
                set.extend(subtree_span(d, &[u, w]));
                b.extend_with_fork(&mut set, w, 2)?;
                Ok((set, Label::Fixed(9)))
            }
        };
    }
    // only an edge closest: pair it with the next closest element
    let f = closest[0];
    let (near, far) = f.near_far(&dist);
    let rest: Vec<Feature> = phi.iter().copied().filter(|g| *g != f).collect();
    let next = nearest(&rest, &dist).ok_or(TaxonomyError::NoCore)?;
    match next {
        Feature::Edge(..) => {
            let (_, far2) = next.near_far(&dist);
            Ok((subtree_span(d, &[near, far, far2]), Label::Fixed(6)))
        }
        Feature::Vertex(w) => {
            let mut set = subtree_span(d, &[near, far, w]);
            b.extend_with_fork(&mut set, w, 2)?;
            Ok((set, Label::Fixed(7)))
        }
    }
}


fn side_conditions(
    d: &CoxeterDiagram,
    sub: &LikeSubdiagram,
    core: &LikeSubdiagram,
    label: &ConfigLabel,
    sub_contained: bool,
) -> Vec<(String, bool)> {
    let core_set: BTreeSet<usize> = core.vertices.iter().copied().collect();
    let sub_set: BTreeSet<usize> = sub.vertices.iter().copied().collect();
    let mut out = Vec::new();
    out.push(("core_minus_sub_connected".to_string(), complement_connected(d, &core_set, &sub_set)));
    let extremal = sub_set
        .difference(&core_set)
        .all(|&s| extremal_class(d, core, s).map(|c| c != ExtremalClass::NotExtremal).unwrap_or(false));
    out.push(("sub_outside_core_extremal".to_string(), extremal));
    let valence_exceptions = |set: &BTreeSet<usize>| -> usize {
        let vs: Vec<usize> = set.iter().copied().collect();
        let induced = d.induced(&vs);
        (0..vs.len())
            .filter(|&i| induced.degree(i) >= 2 && induced.degree(i) != d.degree(vs[i]))
            .count()
    };
    let n = match label {
        ConfigLabel::Figure(n) => *n,
        ConfigLabel::Degenerate(_) => 0,
    };
    if !sub_contained {
        let mut both: Vec<usize> = core_set.union(&sub_set).copied().collect();
        both.sort_unstable();
        let theta = subtree_span(d, &both);
        out.push(("span_valence_exceptions_at_most_one".to_string(), valence_exceptions(&theta) <= 1));
        let theta_v: Vec<usize> = theta.iter().copied().collect();
        let plain = d
            .induced(&theta_v)
            .edges()
            .iter()
            .map(|&(a, b, l)| (theta_v[a], theta_v[b], l))
            .filter(|&(a, b, _)| !(core_set.contains(&a) && core_set.contains(&b)))
            .filter(|&(a, b, _)| !(sub_set.contains(&a) && sub_set.contains(&b)))
            .all(|(_, _, l)| l == 3);
        out.push(("span_edges_outside_core_plain".to_string(), plain));
    }
    if (11..=16).contains(&n) {
        out.push(("core_valence_exceptions_at_most_one".to_string(), valence_exceptions(&core_set) <= 1));
    }
    out
}

/// Whether the part of `core` outside `sub` is connected, read as the
/// subgraph spanned by the core edges not inside `sub` together with the
/// core vertices not in `sub`.
pub fn complement_connected(d: &CoxeterDiagram, core: &BTreeSet<usize>, sub: &BTreeSet<usize>) -> bool {
    let mut vs: BTreeSet<usize> = core.difference(sub).copied().collect();
    let edges: Vec<(usize, usize)> = d
        .edges()
        .into_iter()
        .filter(|&(a, b, _)| core.contains(&a) && core.contains(&b) && !(sub.contains(&a) && sub.contains(&b)))
        .map(|(a, b, _)| (a, b))
        .collect();
    for &(a, b) in &edges {
        vs.insert(a);
        vs.insert(b);
    }
    if vs.is_empty() {
        return false;
    }
    let vs: Vec<usize> = vs.into_iter().collect();
    let start = vs[0];
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &(a, b) in &edges {
            let other = if a == u { b } else if b == u { a } else { continue };
            if seen.insert(other) {
                stack.push(other);
            }
        }
    }
    seen.len() == vs.len()
}

/// Status of one C̃-elementary subdiagram in a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LeafStatus {
    /// Type A or B.
    SettledAB,
    /// Linear with one label >= 6.
    SettledLargeLabel,
    /// F, H or E family member: an open obligation.
    Obligation,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateLeaf {
    pub diagram: serde_json::Value,
    pub family_tag: String,
    pub status: LeafStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub elementary_leaves: Vec<CertificateLeaf>,
    pub obligations: Vec<String>,
    pub verdict: String,
    pub citations: Vec<String>,
}

/// Canonical code of a labeled tree up to label-preserving isomorphism.
pub fn labeled_tree_key(d: &CoxeterDiagram) -> String {
    let n = d.len();
    if n == 0 {
        return String::new();
    }
    let shape = d.shape();
    assert!(shape.is_tree, "labeled_tree_key expects a tree");
    // centers by repeated leaf removal
    let mut deg = shape.valence.clone();
    let mut removed = vec![false; n];
    let mut remaining = n;
    let mut layer: Vec<usize> = (0..n).filter(|&i| deg[i] <= 1).collect();
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for u in d.neighbors(v) {
                if !removed[u] {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    fn enc(d: &CoxeterDiagram, v: usize, p: usize) -> String {
        let mut kids: Vec<String> = d
            .neighbors(v)
            .filter(|&u| u != p)
            .map(|u| format!("{}{}", d.label(v, u), enc(d, u, v)))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    (0..n).filter(|&i| !removed[i]).map(|c| enc(d, c, usize::MAX)).min().unwrap_or_default()
}

/// Lists the C̃-elementary induced subdiagrams of a forest and decides
/// whether all reduction obligations are discharged.
pub fn reduction_certificate(d: &CoxeterDiagram) -> Result<Certificate, TaxonomyError> {
    let n = d.len();
    let edges = d.edges().len();
    let comps = d.components_within(&vec![true; n]).len();
    if n > 0 && edges + comps != n {
        return Err(TaxonomyError::NotForest);
    }
    let mut seen = BTreeSet::new();
    let mut leaves = Vec::new();
    let mut obligations = Vec::new();
    for vs in crate::diagram::connected_subsets(d) {
        let sub = d.induced(&vs);
        if !is_ctilde_elementary_by_shape(&sub)? {
            continue;
        }
        if !seen.insert(labeled_tree_key(&sub)) {
            continue;
        }
        let c = classify_family(&sub);
        let ab = c.tags.iter().any(|t| matches!(t, FamilyTag::A(_) | FamilyTag::B(_)));
        let big = sub.edges().iter().map(|e| e.2).max().unwrap_or(3);
        let status = if ab {
            LeafStatus::SettledAB
        } else if c.reduction_family().is_some() {
            LeafStatus::Obligation
        } else if big >= 6 {
            LeafStatus::SettledLargeLabel
        } else {
            LeafStatus::Obligation
        };
        let tag = c.reduction_family().unwrap_or_else(|| c.primary());
        if status == LeafStatus::Obligation {
            obligations.push(tag.to_string());
        }
        leaves.push(CertificateLeaf { diagram: sub.to_value(), family_tag: c.to_string(), status });
    }
    let max_label = d.edges().iter().map(|e| e.2).max().unwrap_or(3);
    let abi = is_ABI(d).holds && max_label <= 5;
    let mut citations = Vec::new();
    let verdict = if obligations.is_empty() {
        citations.push("no-family-obligations".to_string());
        "settled"
    } else if abi {
        citations.push("abi-type-labels-at-most-5".to_string());
        "settled"
    } else {
        citations.push("family-obligations-open".to_string());
        "open"
    };
    Ok(Certificate { elementary_leaves: leaves, obligations, verdict: verdict.to_string(), citations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(labels: &[u32]) -> CoxeterDiagram {
        CoxeterDiagram::linear(labels)
    }

    #[test]
    fn admissibility_examples() {
        let sq = FamilyTag::ATilde(3).diagram().unwrap();
        let r = is_admissible(&sq, &[0, 1, 2]).unwrap();
        assert_eq!(r.witness, Some((1, 0, 2)));
        assert!(is_admissible(&sq, &[0]).unwrap().holds);
        assert_eq!(is_admissible(&sq, &[0, 2]), Err(TaxonomyError::NotConnected));
        let t = FamilyTag::E(2, 1, 1).diagram().unwrap();
        assert!(is_admissible(&t, &[0, 1, 2]).unwrap().holds);
    }

    #[test]
    fn enumerate_examples() {
        let c = enumerate_like(&line(&[4, 3, 4]), LikeQuery::CTilde);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vertices, vec![0, 1, 2, 3]);
        let b = enumerate_like(&line(&[3, 4]), LikeQuery::B);
        let b2: Vec<_> = b.iter().filter(|l| l.vertices.len() == 2).collect();
        assert_eq!(b2.len(), 1);
        assert_eq!(b2[0].vertices, vec![1, 2]);
        assert_eq!(b2[0].base_vertex, None);
        // D_4 star plus one extra leaf at the center
        let star = crate::diagram::tripod_diagram(&[vec![3], vec![3], vec![3]]);
        let mut edges = star.edges();
        edges.push((0, 4, 3));
        let d = CoxeterDiagram::new(crate::diagram::default_names(5), &edges).unwrap();
        let dt = enumerate_like(&d, LikeQuery::DTilde);
        assert_eq!(dt.len(), 1);
        assert_eq!(dt[0].vertex_set(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn atomicity_examples() {
        let d = line(&[3, 3, 4]);
        let sub = LikeSubdiagram { kind: LikeKind::B, vertices: vec![0, 1, 2, 3], base_vertex: Some(0) };
        assert_eq!(atomicity(&d, &sub).unwrap(), Atomicity::Atomic);
        let d = line(&[4, 3]);
        let sub = LikeSubdiagram { kind: LikeKind::D, vertices: vec![0, 2, 1], base_vertex: Some(1) };
        assert_eq!(atomicity(&d, &sub).unwrap(), Atomicity::WeaklyAtomic);
        let d = line(&[4, 3, 4]);
        let sub = LikeSubdiagram { kind: LikeKind::B, vertices: vec![1, 2, 3], base_vertex: Some(1) };
        assert_eq!(atomicity(&d, &sub).unwrap(), Atomicity::Atomic);
    }

    #[test]
    fn elementary_examples() {
        let e6 = FamilyTag::E(2, 2, 1).diagram().unwrap();
        assert!(is_ctilde_elementary(&e6).unwrap());
        assert!(!is_ctilde_elementary(&line(&[4, 3, 3, 4])).unwrap());
        assert!(is_ctilde_elementary(&line(&[3, 4, 3])).unwrap());
        assert!(is_ctilde_elementary(&FamilyTag::ATilde(3).diagram().unwrap()).is_err());
    }

    #[test]
    fn robust_core_examples() {
        let d = line(&[4, 3, 4]);
        let sub = LikeSubdiagram { kind: LikeKind::B, vertices: vec![1, 2, 3], base_vertex: Some(1) };
        let c = find_robust_core(&d, &sub).unwrap();
        assert_eq!(c.core.kind, LikeKind::CTilde);
        assert_eq!(c.core.vertex_set(), vec![0, 1, 2, 3]);
        assert_eq!(c.config_label, ConfigLabel::Figure(11));
        let a3 = line(&[3, 3]);
        let sub = LikeSubdiagram { kind: LikeKind::D, vertices: vec![0, 2, 1], base_vertex: Some(1) };
        assert_eq!(find_robust_core(&a3, &sub), Err(TaxonomyError::NoCore));
    }

    #[test]
    fn extremal_examples() {
        let d = line(&[3, 4, 3, 4]);
        let core = LikeSubdiagram { kind: LikeKind::CTilde, vertices: vec![1, 2, 3, 4], base_vertex: None };
        assert_eq!(extremal_class(&d, &core, 1).unwrap(), ExtremalClass::ExtremalMin);
        assert_eq!(extremal_class(&d, &core, 0).unwrap(), ExtremalClass::ExtremalMin);
        assert_eq!(extremal_class(&d, &core, 4).unwrap(), ExtremalClass::ExtremalMax);
        assert_eq!(extremal_class(&d, &core, 2).unwrap(), ExtremalClass::NotExtremal);
    }

    #[test]
    fn certificate_examples() {
        let c = reduction_certificate(&line(&[3, 4])).unwrap();
        assert_eq!(c.verdict, "settled");
        let c = reduction_certificate(&line(&[3, 4, 3])).unwrap();
        assert_eq!(c.obligations, vec!["F_{1,1}".to_string()]);
        let d4 = FamilyTag::D(4).diagram().unwrap();
        let c = reduction_certificate(&d4).unwrap();
        assert_eq!(c.verdict, "open");
        assert!(c.obligations.contains(&"E_{1,1,1}".to_string()));
        let c = reduction_certificate(&CoxeterDiagram::discrete(1)).unwrap();
        assert_eq!(c.verdict, "settled");
    }
}
