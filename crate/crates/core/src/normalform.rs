//! Up-down paths, local and global normal forms, distance profiles, strip
//! comparison, local convexity and triple intersections on ordered
//! complexes that pass the hypothesis battery.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::bihelly::{BiHellyError, BipartiteGraph, LocalCheck, Reach};
use crate::complex::{box_point, ctilde_box, ComplexError, HypothesisReport, OrderedComplex, TypedComplex};
use crate::graph::UNREACHABLE;
use crate::poset::{RankedPoset, Verdict};

#[derive(thiserror::Error, Debug)]
pub enum NormalFormError {
    #[error("hypothesis gate failed: {0}")]
    Gate(String),
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("vertex {0} is not extremal")]
    NotExtremal(usize),
    #[error("vertices {0} and {1} are not connected")]
    Disconnected(usize, usize),
    #[error("vertex {0} lies outside the checked region")]
    OutOfRegion(usize),
    #[error("path is not {0}")]
    NotA(&'static str),
    #[error("near-clique {0} mixes extremal types")]
    MixedTypes(usize),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("theory violation: {0}")]
    Violation(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    BiHelly(#[from] BiHellyError),
}

type Result<T> = std::result::Result<T, NormalFormError>;

/// An ordered complex that passed the hypothesis battery. Local
/// determination is checked on `region` (all vertices if none is given).
/// Normal forms start inside the region, and the non-extremal vertices of
/// every path handled here must lie in it.
#[derive(Clone, Debug)]
pub struct Gated {
    oc: OrderedComplex,
    report: HypothesisReport,
    region: FixedBitSet,
    poset: RankedPoset,
    dist: Vec<Vec<u32>>,
    gamma: BipartiteGraph,
    gamma_vertices: Vec<usize>,
    gamma_index: Vec<usize>,
}

impl Gated {
    pub fn new(oc: OrderedComplex, region: Option<&[usize]>) -> Result<Self> {
        let n = oc.len();
        if let Some(&v) = region.and_then(|r| r.iter().find(|&&v| v >= n)) {
            return Err(NormalFormError::UnknownVertex(v));
        }
        let report = oc.ctilde_hypotheses(region);
        if !report.local_hypotheses_hold() {
            return Err(NormalFormError::Gate(gate_reason(&report)));
        }
        if report.connectivity.is_simply_connected() != Some(true) {
            return Err(NormalFormError::Gate("not known to be simply connected".into()));
        }
        let mut mask = FixedBitSet::with_capacity(n);
        match region {
            Some(r) => mask.extend(r.iter().copied()),
            None => mask.insert_range(..),
        }
        let poset = oc.poset()?;
        let dist = oc.base().graph().all_pairs();
        let (g, gamma_vertices) = oc.extremal_subgraph()?;
        let gamma = BipartiteGraph::new(g).map_err(|e| NormalFormError::Gate(format!("extremal subgraph: {e}")))?;
        let mut gamma_index = vec![usize::MAX; n];
        for (i, &v) in gamma_vertices.iter().enumerate() {
            gamma_index[v] = i;
        }
        Ok(Gated { oc, report, region: mask, poset, dist, gamma, gamma_vertices, gamma_index })
    }

    pub fn ordered(&self) -> &OrderedComplex {
        &self.oc
    }

    pub fn report(&self) -> &HypothesisReport {
        &self.report
    }

    pub fn region(&self) -> Vec<usize> {
        self.region.ones().collect()
    }

    pub fn in_region(&self, v: usize) -> bool {
        self.region.contains(v)
    }

    pub fn poset(&self) -> &RankedPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.oc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oc.is_empty()
    }

    /// Path distance in the 1-skeleton.
    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }

    /// The extremal subgraph with its vertex map.
    pub fn gamma(&self) -> (&BipartiteGraph, &[usize]) {
        (&self.gamma, &self.gamma_vertices)
    }

    pub fn extremal_vertices(&self) -> &[usize] {
        &self.gamma_vertices
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.len() {
            return Err(NormalFormError::UnknownVertex(v));
        }
        Ok(())
    }

    fn check_region(&self, path: &[usize]) -> Result<()> {
        match path.iter().find(|&&v| !self.in_region(v) && !self.oc.is_extremal(v)) {
            Some(&v) => Err(NormalFormError::OutOfRegion(v)),
            None => Ok(()),
        }
    }

    fn check_edge_path(&self, path: &[usize]) -> Result<()> {
        if path.is_empty() {
            return Err(NormalFormError::NotA("empty"));
        }
        for &v in path {
            self.check_vertex(v)?;
        }
        for w in path.windows(2) {
            if !self.oc.base().adjacent(w[0], w[1]) {
                return Err(NormalFormError::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(())
    }

    fn is_up_down(&self, path: &[usize]) -> bool {
        path.windows(3).all(|w| self.oc.lt(w[0], w[1]) != self.oc.lt(w[1], w[2]))
    }

    fn is_tight(&self, path: &[usize]) -> bool {
        path.windows(3).all(|w| {
            if self.oc.lt(w[0], w[1]) {
                self.poset.join(&[w[0], w[2]]) == Some(w[1])
            } else {
                self.poset.meet(&[w[0], w[2]]) == Some(w[1])
            }
        })
    }

    /// The local normal condition at the interior vertex `path[i]`.
    fn locally_normal_at(&self, path: &[usize], i: usize) -> bool {
        let (a1, x, a4) = (path[i - 1], path[i], path[i + 1]);
        if self.oc.lt(a1, x) {
            // a1 <= a2 >= a3 <= a4 in the lower link of x
            let link = self.oc.below(x);
            !link.ones().any(|a2| {
                self.oc.leq(a1, a2) && link.ones().any(|a3| self.oc.leq(a3, a2) && self.oc.leq(a3, a4))
            })
        } else {
            let link = self.oc.above(x);
            !link.ones().any(|a2| {
                self.oc.leq(a2, a1) && link.ones().any(|a3| self.oc.leq(a2, a3) && self.oc.leq(a4, a3))
            })
        }
    }

    fn is_locally_normal(&self, path: &[usize]) -> bool {
        self.is_up_down(path) && (1..path.len().saturating_sub(1)).all(|i| self.locally_normal_at(path, i))
    }

    fn is_geodesic(&self, path: &[usize]) -> bool {
        self.dist[path[0]][*path.last().unwrap()] as usize == path.len() - 1
    }

    fn is_normal(&self, path: &[usize]) -> bool {
        if !self.is_up_down(path) || !self.is_geodesic(path) {
            return false;
        }
        let n = path.len();
        let end = path[n - 1];
        (0..n - 1).all(|i| {
            let (xi, next) = (path[i], path[i + 1]);
            let want = (n - i - 2) as u32;
            self.oc.base().neighbors(xi).filter(|&y| self.dist[y][end] == want).all(|y| {
                if self.oc.lt(xi, next) {
                    self.oc.leq(next, y)
                } else {
                    self.oc.leq(y, next)
                }
            })
        })
    }

    /// Evaluates every predicate on an edge path.
    pub fn classify(&self, path: &[usize]) -> Result<PathFlags> {
        self.check_edge_path(path)?;
        self.check_region(path)?;
        let up_down = self.is_up_down(path);
        Ok(PathFlags {
            up_down,
            tight: up_down && self.is_tight(path),
            geodesic: self.is_geodesic(path),
            local_normal: up_down && self.is_locally_normal(path),
            normal: up_down && self.is_normal(path),
        })
    }

    /// `K_i`: the extremal vertices `>= x_i` when a path neighbor of `x_i`
    /// is below it, the extremal vertices `<= x_i` otherwise.
    pub fn k_sequence(&self, path: &[usize]) -> Result<Vec<Vec<usize>>> {
        self.check_edge_path(path)?;
        if path.len() < 2 {
            return Err(NormalFormError::NotA("an edge path of length >= 1"));
        }
        if !self.is_up_down(path) {
            return Err(NormalFormError::NotA("up-down"));
        }
        Ok((0..path.len())
            .map(|i| {
                let x = path[i];
                let nb = if i > 0 { path[i - 1] } else { path[1] };
                if self.oc.lt(nb, x) {
                    self.upper_extremal(x)
                } else {
                    self.lower_extremal(x)
                }
            })
            .collect())
    }

    fn upper_extremal(&self, x: usize) -> Vec<usize> {
        let mut k: Vec<usize> = self.oc.above(x).ones().filter(|&v| self.oc.is_max_type(v)).collect();
        if self.oc.is_max_type(x) {
            k.push(x);
            k.sort_unstable();
        }
        k
    }

    fn lower_extremal(&self, x: usize) -> Vec<usize> {
        let mut k: Vec<usize> = self.oc.below(x).ones().filter(|&v| self.oc.is_min_type(v)).collect();
        if self.oc.is_min_type(x) {
            k.push(x);
            k.sort_unstable();
        }
        k
    }

    /// Joins of minimal-type sets, meets of maximal-type sets.
    pub fn from_k_sequence(&self, ks: &[Vec<usize>]) -> Result<Vec<usize>> {
        ks.iter()
            .enumerate()
            .map(|(i, k)| {
                for &v in k {
                    self.check_vertex(v)?;
                }
                let r = if !k.is_empty() && k.iter().all(|&v| self.oc.is_min_type(v)) {
                    self.poset.join(k)
                } else if !k.is_empty() && k.iter().all(|&v| self.oc.is_max_type(v)) {
                    self.poset.meet(k)
                } else {
                    return Err(NormalFormError::MixedTypes(i));
                };
                r.ok_or_else(|| NormalFormError::Violation(format!("near-clique {i} has no join or meet")))
            })
            .collect()
    }

    fn to_gamma(&self, k: &[usize]) -> Vec<usize> {
        k.iter().map(|&v| self.gamma_index[v]).collect()
    }

    /// The triple condition on the K-sequence of `path`, evaluated in the
    /// extremal subgraph. `B(K_{i+1}, 1)` is the union neighborhood here:
    /// a vertex adjacent to all of `K_{i-1}` and to some vertex of
    /// `K_{i+1}` is what breaks local normality.
    pub fn k_sequence_check(&self, path: &[usize]) -> Result<LocalCheck> {
        self.k_sequence_check_with(path, Reach::Any)
    }

    pub fn k_sequence_check_with(&self, path: &[usize], reach: Reach) -> Result<LocalCheck> {
        let ks = self.k_sequence(path)?;
        let gk: Vec<Vec<usize>> = ks.iter().map(|k| self.to_gamma(k)).collect();
        Ok(self.gamma.local_check(&gk, reach)?)
    }

    /// The unique local normal form path from `x` to the extremal vertex
    /// `y`, built from the directed geodesic of K-sets in the extremal
    /// subgraph.
    pub fn normal_form(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if !self.in_region(x) {
            return Err(NormalFormError::OutOfRegion(x));
        }
        if !self.oc.is_extremal(y) {
            return Err(NormalFormError::NotExtremal(y));
        }
        let d = self.dist[x][y];
        if d == UNREACHABLE {
            return Err(NormalFormError::Disconnected(x, y));
        }
        let path = match d {
            0 => vec![x],
            1 => vec![x, y],
            _ => {
                let mut found = Vec::new();
                for start in [self.lower_extremal(x), self.upper_extremal(x)] {
                    if let Some(p) = self.translate(x, &start, y, d)? {
                        found.push(p);
                    }
                }
                match found.len() {
                    1 => found.pop().unwrap(),
                    0 => return Err(NormalFormError::Violation(format!("no directed geodesic from {x} to {y}"))),
                    _ => return Err(NormalFormError::Violation(format!("two normal forms from {x} to {y}"))),
                }
            }
        };
        self.check_region(&path)?;
        if !self.is_locally_normal(&path) {
            return Err(NormalFormError::Violation(format!("normal form from {x} to {y} is not locally normal")));
        }
        Ok(path)
    }

    fn translate(&self, x: usize, start: &[usize], y: usize, d: u32) -> Result<Option<Vec<usize>>> {
        let k0 = self.to_gamma(start);
        let ky = [self.gamma_index[y]];
        if self.gamma.uniform_distance(&k0, &ky) != Some(d) {
            return Ok(None);
        }
        let seq = self.gamma.directed_geodesic(&k0, &ky, Reach::Any)?;
        let ks: Vec<Vec<usize>> = seq.iter().map(|k| k.iter().map(|&i| self.gamma_vertices[i]).collect()).collect();
        let path = self.from_k_sequence(&ks)?;
        if path[0] != x {
            return Err(NormalFormError::Violation(format!("the K-set of {x} does not recover it")));
        }
        if path.windows(2).any(|w| !self.oc.base().adjacent(w[0], w[1])) || !self.is_up_down(&path) {
            return Err(NormalFormError::Violation("translated sequence is not an up-down path".into()));
        }
        Ok(Some(path))
    }

    /// Every locally normal path from `x` to `y` with at most `max_len`
    /// edges, by depth-first search.
    pub fn local_normal_paths(&self, x: usize, y: usize, max_len: usize) -> Result<Vec<Vec<usize>>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let mut out = Vec::new();
        let mut path = vec![x];
        self.search(y, max_len, &mut path, &mut out);
        Ok(out)
    }

    fn search(&self, y: usize, max_len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        let k = path.len();
        if k >= 3 && (self.oc.lt(path[k - 3], path[k - 2]) == self.oc.lt(path[k - 2], last) || !self.locally_normal_at(path, k - 2)) {
            return;
        }
        if last == y {
            out.push(path.clone());
        }
        let used = k - 1;
        if used == max_len {
            return;
        }
        for v in self.oc.base().neighbors(last).collect::<Vec<_>>() {
            if self.dist[v][y] as usize <= max_len - used - 1 {
                path.push(v);
                self.search(y, max_len, path, out);
                path.pop();
            }
        }
    }

    /// `f(i) = d(z, x_i)` along a locally normal path.
    pub fn bestvina_profile(&self, path: &[usize], z: usize) -> Result<BestvinaProfile> {
        self.check_edge_path(path)?;
        self.check_vertex(z)?;
        if !self.oc.is_extremal(z) {
            return Err(NormalFormError::NotExtremal(z));
        }
        self.check_region(path)?;
        if !self.is_locally_normal(path) {
            return Err(NormalFormError::NotA("locally normal"));
        }
        Ok(BestvinaProfile::new(path.iter().map(|&v| self.dist[z][v]).collect()))
    }

    /// Compares two normal form paths with a common extremal end and
    /// adjacent (or equal) starts, index by index from the end.
    pub fn strip_compare(&self, p1: &[usize], p2: &[usize]) -> Result<StripVerdict> {
        for p in [p1, p2] {
            self.check_edge_path(p)?;
            self.check_region(p)?;
            if !self.is_normal(p) {
                return Err(NormalFormError::NotA("in normal form"));
            }
        }
        let end = *p1.last().unwrap();
        if end != *p2.last().unwrap() || !self.oc.is_extremal(end) {
            return Err(NormalFormError::Precondition("paths must share an extremal end".into()));
        }
        if p1[0] != p2[0] && !self.oc.base().adjacent(p1[0], p2[0]) {
            return Err(NormalFormError::Precondition("starts must be adjacent".into()));
        }
        if p1.len() > p2.len() {
            return Err(NormalFormError::Precondition("first path must not be longer".into()));
        }
        let n = p1.len();
        let pairs = || (1..=n).map(|i| (p1[n - i], p2[p2.len() - i]));
        let below = pairs().all(|(a, b)| self.oc.leq(a, b));
        let above = pairs().all(|(a, b)| self.oc.leq(b, a));
        Ok(StripVerdict { below, above, violation: !below && !above })
    }

    /// The conditions on tight paths in the links of the vertices of `y`.
    /// The witness lists the link vertex followed by the offending path.
    pub fn local_convexity(&self, y: &[usize]) -> Result<Verdict> {
        let n = self.len();
        let mut inside = FixedBitSet::with_capacity(n);
        for &v in y {
            self.check_vertex(v)?;
            inside.insert(v);
        }
        let base = self.oc.base();
        for &v in y {
            let full_chamber =
                base.chambers_containing(v).iter().any(|&c| base.chambers()[c].iter().all(|&u| inside.contains(u)));
            if !full_chamber {
                return Err(NormalFormError::Precondition(format!("vertex {v} lies in no chamber of the subcomplex")));
            }
        }
        let fail = |w: Vec<usize>| Ok(Verdict { holds: false, witness: Some(w) });
        for v in inside.ones() {
            for (link, upper) in [(self.oc.above(v), true), (self.oc.below(v), false)] {
                let l: Vec<usize> = link.ones().collect();
                // paths of length 2, both shapes
                for &a1 in &l {
                    for &a3 in &l {
                        if a1 == a3 || !inside.contains(a1) || !inside.contains(a3) {
                            continue;
                        }
                        for a2 in [self.poset.join(&[a1, a3]), self.poset.meet(&[a1, a3])].into_iter().flatten() {
                            if link.contains(a2) && a2 != a1 && a2 != a3 && !inside.contains(a2) {
                                return fail(vec![v, a1, a2, a3]);
                            }
                        }
                    }
                }
                // length 3: a1 < a2 > a3 < a4 below v, a1 > a2 < a3 > a4 above v
                for &a1 in l.iter().filter(|&&a| inside.contains(a)) {
                    for &a4 in l.iter().filter(|&&a| inside.contains(a)) {
                        for &a2 in &l {
                            for &a3 in &l {
                                let shape = if upper {
                                    self.oc.lt(a2, a1) && self.oc.lt(a2, a3) && self.oc.lt(a4, a3)
                                } else {
                                    self.oc.lt(a1, a2) && self.oc.lt(a3, a2) && self.oc.lt(a3, a4)
                                };
                                if !shape || (inside.contains(a2) && inside.contains(a3)) {
                                    continue;
                                }
                                let p = [a1, a2, a3, a4];
                                if self.is_tight(&p) {
                                    return fail(vec![v, a1, a2, a3, a4]);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(Verdict { holds: true, witness: None })
    }

    /// Minimizes `d(u1,u2) + d(u2,u3) + d(u3,u1)` over extremal
    /// `u_i in X_i ∩ X_{i+1}` and reports the triple intersection.
    pub fn triple_intersection(&self, sets: [&[usize]; 3]) -> Result<TripleReport> {
        triple_intersection(&self.oc, &self.dist, sets)
    }
}

fn gate_reason(r: &HypothesisReport) -> String {
    let name = [
        ("upper sets", &r.upper_sets),
        ("lower sets", &r.lower_sets),
        ("locally determined", &r.locally_determined),
    ]
    .into_iter()
    .find(|(_, v)| !v.as_ref().is_some_and(|v| v.holds));
    match (r.partial_order, name) {
        (false, _) => "relation is not a partial order".into(),
        (true, Some((n, v))) => {
            format!("{n} fails at {:?}", v.as_ref().and_then(|v| v.witness.clone()).unwrap_or_default())
        }
        (true, None) => "unknown".into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PathFlags {
    pub up_down: bool,
    pub tight: bool,
    pub geodesic: bool,
    pub local_normal: bool,
    pub normal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BestvinaProfile {
    pub distances: Vec<u32>,
    /// Non-increasing up to `pivot`, strictly increasing after it.
    pub unimodal: bool,
    pub pivot: usize,
    /// The non-increasing part repeats a value.
    pub plateau: bool,
    /// Some `f(i-1) < f(i) > f(i+1)`.
    pub interior_peak: Option<usize>,
}

impl BestvinaProfile {
    pub fn new(distances: Vec<u32>) -> Self {
        let f = &distances;
        let pivot = (0..f.len().saturating_sub(1)).find(|&i| f[i] < f[i + 1]).unwrap_or(f.len().saturating_sub(1));
        let unimodal =
            f[..=pivot].windows(2).all(|w| w[0] >= w[1]) && f[pivot..].windows(2).all(|w| w[0] < w[1]);
        let plateau = f[..=pivot].windows(2).any(|w| w[0] == w[1]);
        let interior_peak = (1..f.len().saturating_sub(1)).find(|&i| f[i - 1] < f[i] && f[i] > f[i + 1]);
        BestvinaProfile { distances, unimodal, pivot, plateau, interior_peak }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StripVerdict {
    pub below: bool,
    pub above: bool,
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub min_sum: u32,
    pub minimizers: Vec<[usize; 3]>,
    /// A minimizer with two equal entries.
    pub degenerate: Option<[usize; 3]>,
    pub common: Vec<usize>,
}

impl TripleReport {
    pub fn nonempty(&self) -> bool {
        !self.common.is_empty()
    }
}

/// The triple experiment on any ordered complex, with 1-skeleton distances
/// `dist`.
pub fn triple_intersection(oc: &OrderedComplex, dist: &[Vec<u32>], sets: [&[usize]; 3]) -> Result<TripleReport> {
    let n = oc.len();
    let mut masks = Vec::new();
    for s in sets {
        let mut m = FixedBitSet::with_capacity(n);
        for &v in s {
            if v >= n {
                return Err(NormalFormError::UnknownVertex(v));
            }
            m.insert(v);
        }
        masks.push(m);
    }
    let pair = |i: usize| -> Vec<usize> {
        masks[i].intersection(&masks[(i + 1) % 3]).filter(|&v| oc.is_extremal(v)).collect()
    };
    let (z1, z2, z3) = (pair(0), pair(1), pair(2));
    if z1.is_empty() || z2.is_empty() || z3.is_empty() {
        return Err(NormalFormError::Precondition("a pairwise intersection has no extremal vertex".into()));
    }
    let mut min_sum = u32::MAX;
    let mut minimizers = Vec::new();
    for &a in &z1 {
        for &b in &z2 {
            for &c in &z3 {
                let s = dist[a][b].saturating_add(dist[b][c]).saturating_add(dist[c][a]);
                if s < min_sum {
                    min_sum = s;
                    minimizers.clear();
                }
                if s == min_sum {
                    minimizers.push([a, b, c]);
                }
            }
        }
    }
    let degenerate = minimizers.iter().copied().find(|m| m[0] == m[1] || m[1] == m[2] || m[0] == m[2]);
    let mut common = masks[0].clone();
    common.intersect_with(&masks[1]);
    common.intersect_with(&masks[2]);
    Ok(TripleReport { min_sum, minimizers, degenerate, common: common.ones().collect() })
}

/// Vertices of `ambient` with type in `keep` that are equal or adjacent to
/// `x`.
pub fn star_subcomplex(ambient: &TypedComplex, x: usize, keep: &[usize]) -> Result<Vec<usize>> {
    if x >= ambient.len() {
        return Err(NormalFormError::UnknownVertex(x));
    }
    Ok((0..ambient.len())
        .filter(|&v| keep.contains(&ambient.vertex_type(v)) && (v == x || ambient.adjacent(v, x)))
        .collect())
}

/// Vertices of the square box with every coordinate strictly inside.
pub fn box_interior(cells: usize) -> Vec<usize> {
    let side = 2 * cells + 1;
    (0..side * side)
        .filter(|&v| box_point(2, cells, v).iter().all(|&c| c > 0 && c < 2 * cells as i64))
        .collect()
}

/// The square box with order `t0 < t1 < t2`, gated on its interior.
pub fn gated_box(cells: usize) -> Result<Gated> {
    let oc = ctilde_box(2, cells)?.order_relation(&[0, 1, 2])?;
    Gated::new(oc, Some(&box_interior(cells)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(g: &Gated, label: &str) -> usize {
        (0..g.len()).find(|&i| g.ordered().base().label(i) == label).unwrap()
    }

    #[test]
    fn gate_rejects_whole_box_and_sphere() {
        let oc = ctilde_box(2, 2).unwrap().order_relation(&[0, 1, 2]).unwrap();
        assert!(matches!(Gated::new(oc, None), Err(NormalFormError::Gate(_))));
        assert!(gated_box(2).is_ok());
        assert_eq!(box_interior(2).len(), 9);
    }

    #[test]
    fn short_paths() {
        let g = gated_box(2).unwrap();
        let (a, b) = (v(&g, "(1,1)"), v(&g, "(1,2)"));
        let f = g.classify(&[a, b]).unwrap();
        assert!(f.local_normal && f.normal && f.geodesic && f.up_down);
        assert_eq!(g.normal_form(a, a).unwrap(), vec![a]);
        let c = v(&g, "(2,2)");
        assert_eq!(g.normal_form(v(&g, "(2,1)"), c).unwrap().len(), 2);
        // up and back down to the start
        let f = g.classify(&[a, b, a]).unwrap();
        assert!(f.up_down && !f.geodesic && !f.normal);
        assert!(matches!(g.classify(&[a, v(&g, "(3,3)")]), Err(NormalFormError::NotAdjacent(..))));
        assert!(matches!(g.normal_form(a, b), Err(NormalFormError::NotExtremal(_))));
        assert!(matches!(g.normal_form(v(&g, "(0,1)"), c), Err(NormalFormError::OutOfRegion(_))));
    }

    #[test]
    fn k_sets_contain_extremal_path_vertices() {
        let g = gated_box(2).unwrap();
        let p = g.normal_form(v(&g, "(1,2)"), v(&g, "(4,4)")).unwrap();
        let ks = g.k_sequence(&p).unwrap();
        for (x, k) in p.iter().zip(&ks) {
            if g.ordered().is_extremal(*x) {
                assert!(k.contains(x));
            }
        }
        assert_eq!(g.from_k_sequence(&ks).unwrap(), p);
        assert!(matches!(g.from_k_sequence(&[vec![v(&g, "(0,0)"), v(&g, "(1,1)")]]), Err(NormalFormError::MixedTypes(0))));
    }

    #[test]
    fn profiles() {
        let b = BestvinaProfile::new(vec![3, 2, 2, 1, 2, 3]);
        assert!(b.unimodal && b.plateau && b.interior_peak.is_none());
        assert_eq!(b.pivot, 3);
        let b = BestvinaProfile::new(vec![1, 2, 1]);
        assert!(!b.unimodal);
        assert_eq!(b.interior_peak, Some(1));
        assert!(BestvinaProfile::new(vec![0, 1, 2]).unimodal);
        assert!(!BestvinaProfile::new(vec![1, 2, 2]).unimodal);
    }

    #[test]
    fn profile_through_target() {
        let g = gated_box(3).unwrap();
        let z = v(&g, "(4,4)");
        let p = g.normal_form(v(&g, "(1,1)"), v(&g, "(6,6)")).unwrap();
        assert!(p.contains(&z));
        let b = g.bestvina_profile(&p, z).unwrap();
        let at = p.iter().position(|&x| x == z).unwrap();
        assert_eq!(b.distances[at], 0);
        assert!(b.unimodal && b.distances[at..].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn strip_with_itself_is_both() {
        let g = gated_box(2).unwrap();
        let p = g.normal_form(v(&g, "(1,1)"), v(&g, "(4,4)")).unwrap();
        let s = g.strip_compare(&p, &p).unwrap();
        assert!(s.below && s.above && !s.violation);
    }

    #[test]
    fn whole_complex_is_convex() {
        let g = gated_box(2).unwrap();
        let all: Vec<usize> = (0..g.len()).collect();
        assert!(g.local_convexity(&all).unwrap().holds);
        // a single chamber is not type complete around its neighbors but is
        // full; its links miss tight paths
        let ch = g.ordered().base().chambers()[0].clone();
        assert!(g.local_convexity(&ch).is_ok());
        assert!(matches!(g.local_convexity(&ch[..2]), Err(NormalFormError::Precondition(_))));
    }

    #[test]
    fn triple_of_equal_sets() {
        let g = gated_box(2).unwrap();
        let s = star_subcomplex(g.ordered().base(), v(&g, "(2,2)"), &[0, 1, 2]).unwrap();
        let r = g.triple_intersection([&s, &s, &s]).unwrap();
        assert!(r.nonempty());
        assert_eq!(r.min_sum, 0);
        assert!(r.degenerate.is_some());
    }
}
