//! Finite ranked posets: bowtie and flag properties, joins and meets, and
//! the reduced bowtie/flag criteria checked against exhaustive oracles.

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::Serialize;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation has a cycle through element {0}")]
    Cycle(usize),
    #[error("element index {0} out of range")]
    UnknownElement(usize),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

/// A finite poset with a rank function into `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedPoset {
    rank: Vec<u32>,
    n: u32,
    /// `up[x]` = `{y : x <= y}`.
    up: Vec<FixedBitSet>,
    /// `down[x]` = `{y : y <= x}`.
    down: Vec<FixedBitSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Property {
    WeaklyGraded,
    RSaturated,
    BowtieFree,
    UpwardFlag,
    DownwardFlag,
    WeaklyUpwardFlag,
    WeaklyDownwardFlag,
}

/// A verdict with the lexicographically least violating tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl Verdict {
    fn ok() -> Self {
        Verdict { holds: true, witness: None }
    }

    fn fail(w: Vec<usize>) -> Self {
        Verdict { holds: false, witness: Some(w) }
    }
}

impl RankedPoset {
    /// Builds the poset generated by the strict relations `a < b`. The top
    /// rank defaults to the largest rank present.
    pub fn from_relations(rank: Vec<u32>, less: &[(usize, usize)], n: Option<u32>) -> Result<Self, PosetError> {
        let m = rank.len();
        let mut up: Vec<FixedBitSet> = (0..m)
            .map(|i| {
                let mut b = FixedBitSet::with_capacity(m);
                b.insert(i);
                b
            })
            .collect();
        for &(a, b) in less {
            if a >= m {
                return Err(PosetError::UnknownElement(a));
            }
            if b >= m {
                return Err(PosetError::UnknownElement(b));
            }
            if a == b {
                return Err(PosetError::Cycle(a));
            }
            up[a].insert(b);
        }
        // Warshall closure
        for k in 0..m {
            let row = up[k].clone();
            for i in 0..m {
                if up[i].contains(k) {
                    up[i].union_with(&row);
                }
            }
        }
        for i in 0..m {
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(PosetError::Cycle(i));
                }
            }
        }
        let n = n.unwrap_or_else(|| rank.iter().copied().max().unwrap_or(0));
        Ok(Self::from_closure(rank, n, up))
    }

    fn from_closure(rank: Vec<u32>, n: u32, up: Vec<FixedBitSet>) -> Self {
        let m = rank.len();
        let mut down: Vec<FixedBitSet> = (0..m).map(|_| FixedBitSet::with_capacity(m)).collect();
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                down[j].insert(i);
            }
        }
        RankedPoset { rank, n, up, down }
    }

    /// A chain `0 < 1 < .. < len-1` with ranks `1..=len`.
    pub fn chain(len: usize) -> Self {
        let rels: Vec<(usize, usize)> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_relations((1..=len as u32).collect(), &rels, None).expect("chain")
    }

    /// Subsets of `{1..k}` ordered by inclusion. With `proper`, only the
    /// nonempty proper subsets, ranked by size, and element `i` is the subset
    /// with bitmask `i + 1`; otherwise all subsets, ranked by size + 1, and
    /// element `i` has bitmask `i`.
    pub fn boolean(k: usize, proper: bool) -> Self {
        let masks: Vec<u32> = if proper { (1..(1u32 << k) - 1).collect() } else { (0..1u32 << k).collect() };
        let shift = u32::from(!proper);
        let rank: Vec<u32> = masks.iter().map(|m| m.count_ones() + shift).collect();
        let mut rels = Vec::new();
        for (i, &a) in masks.iter().enumerate() {
            for (j, &b) in masks.iter().enumerate() {
                if a != b && a & b == a {
                    rels.push((i, j));
                }
            }
        }
        Self::from_relations(rank, &rels, None).expect("boolean")
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, x: usize) -> u32 {
        self.rank[x]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    pub fn top_rank(&self) -> u32 {
        self.n
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// `{y : x <= y}`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `{y : y <= x}`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    fn strict_up(&self, x: usize) -> FixedBitSet {
        let mut b = self.up[x].clone();
        b.set(x, false);
        b
    }

    fn strict_down(&self, x: usize) -> FixedBitSet {
        let mut b = self.down[x].clone();
        b.set(x, false);
        b
    }

    /// The poset with the order reversed and ranks `n + 1 - r`.
    pub fn dual(&self) -> Self {
        let rank = self.rank.iter().map(|&r| self.n + 1 - r).collect();
        RankedPoset { rank, n: self.n, up: self.down.clone(), down: self.up.clone() }
    }

    /// Induced subposet on `elems` (in the given order), keeping the top rank.
    pub fn restrict(&self, elems: &[usize]) -> Self {
        let m = elems.len();
        let rank = elems.iter().map(|&e| self.rank[e]).collect();
        let up = elems
            .iter()
            .map(|&a| {
                let mut b = FixedBitSet::with_capacity(m);
                for (j, &e) in elems.iter().enumerate() {
                    if self.up[a].contains(e) {
                        b.insert(j);
                    }
                }
                b
            })
            .collect();
        Self::from_closure(rank, self.n, up)
    }

    /// Cover relations `(a, b)` with `a < b` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.strict_up(a).ones() {
                let mut between = self.strict_up(a);
                between.intersect_with(&self.strict_down(b));
                if between.is_clear() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::json!({
            "elements": (0..self.len()).collect::<Vec<_>>(),
            "rank": self.rank,
            "hasse_edges": self.hasse_edges(),
        })
    }

    fn common_up(&self, xs: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.len());
        b.insert_range(..);
        for &x in xs {
            b.intersect_with(&self.up[x]);
        }
        b
    }

    fn common_down(&self, xs: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.len());
        b.insert_range(..);
        for &x in xs {
            b.intersect_with(&self.down[x]);
        }
        b
    }

    /// Least upper bound of `q`, if it exists.
    pub fn join(&self, q: &[usize]) -> Option<usize> {
        let ub = self.common_up(q);
        ub.ones().find(|&u| ub.is_subset(&self.up[u]))
    }

    /// Greatest lower bound of `q`, if it exists.
    pub fn meet(&self, q: &[usize]) -> Option<usize> {
        let lb = self.common_down(q);
        lb.ones().find(|&u| lb.is_subset(&self.down[u]))
    }

    pub fn check(&self, prop: Property) -> Verdict {
        match prop {
            Property::WeaklyGraded => self.check_weakly_graded(),
            Property::RSaturated => self.check_r_saturated(),
            Property::BowtieFree => self.check_bowtie(|_, _, _, _| true),
            Property::UpwardFlag => self.check_upward_flag(false, |_| true),
            Property::WeaklyUpwardFlag => self.check_upward_flag(true, |_| true),
            Property::DownwardFlag => self.dual().check_upward_flag(false, |_| true),
            Property::WeaklyDownwardFlag => self.dual().check_upward_flag(true, |_| true),
        }
    }

    fn check_weakly_graded(&self) -> Verdict {
        for x in 0..self.len() {
            if self.rank[x] < 1 || self.rank[x] > self.n {
                return Verdict::fail(vec![x]);
            }
            for y in self.strict_up(x).ones() {
                if self.rank[x] >= self.rank[y] {
                    return Verdict::fail(vec![x, y]);
                }
            }
        }
        Verdict::ok()
    }

    fn check_r_saturated(&self) -> Verdict {
        for p in 0..self.len() {
            let r = self.rank[p];
            let above: Vec<u32> = self.up[p].ones().map(|q| self.rank[q]).collect();
            let below: Vec<u32> = self.down[p].ones().map(|q| self.rank[q]).collect();
            for m in (r + 1)..=self.n {
                if !above.contains(&m) {
                    return Verdict::fail(vec![p, m as usize]);
                }
            }
            for m in 1..r {
                if !below.contains(&m) {
                    return Verdict::fail(vec![p, m as usize]);
                }
            }
        }
        Verdict::ok()
    }

    /// Quasi-bowties `(x1, y1, x2, y2)` with `x1 <= x2`, `y1 <= y2` passing
    /// `filter` must have a center.
    fn check_bowtie(&self, filter: impl Fn(usize, usize, usize, usize) -> bool) -> Verdict {
        let m = self.len();
        for x1 in 0..m {
            let up1 = self.strict_up(x1);
            for y1 in up1.ones() {
                for x2 in x1..m {
                    if !self.lt(x2, y1) {
                        continue;
                    }
                    let mut ys = up1.clone();
                    ys.intersect_with(&self.strict_up(x2));
                    for y2 in ys.ones().filter(|&y| y >= y1) {
                        if !filter(x1, y1, x2, y2) {
                            continue;
                        }
                        let mut c = self.common_up(&[x1, x2]);
                        c.intersect_with(&self.common_down(&[y1, y2]));
                        if c.is_clear() {
                            return Verdict::fail(vec![x1, y1, x2, y2]);
                        }
                    }
                }
            }
        }
        Verdict::ok()
    }

    /// Triples `a < b < c` passing `filter` that are pairwise upper bounded
    /// (by non-maximal bounds when `weak`) must have a common upper bound.
    fn check_upward_flag(&self, weak: bool, filter: impl Fn(&[usize; 3]) -> bool) -> Verdict {
        let m = self.len();
        let maximal: Vec<bool> = (0..m).map(|x| self.up[x].count_ones(..) == 1).collect();
        let bounded = |a: usize, b: usize| -> bool {
            let mut u = self.up[a].clone();
            u.intersect_with(&self.up[b]);
            if weak {
                u.ones().any(|z| !maximal[z])
            } else {
                !u.is_clear()
            }
        };
        for a in 0..m {
            for b in a + 1..m {
                if !bounded(a, b) {
                    continue;
                }
                for c in b + 1..m {
                    if !filter(&[a, b, c]) || !bounded(a, c) || !bounded(b, c) {
                        continue;
                    }
                    if self.common_up(&[a, b, c]).is_clear() {
                        return Verdict::fail(vec![a, b, c]);
                    }
                }
            }
        }
        Verdict::ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Criterion {
    /// Top-rank bowtie reduction with the `P_{<p}` condition.
    BowtieTop,
    /// Equal-rank quasi-bowtie reduction.
    BowtieEqualRank,
    /// Rank-1 triples plus flagness above every rank-1 element.
    FlagRankOne,
    /// Same-rank triples for every rank below the top.
    FlagEqualRank,
}

impl Criterion {
    pub const ALL: [Criterion; 4] =
        [Criterion::BowtieTop, Criterion::BowtieEqualRank, Criterion::FlagRankOne, Criterion::FlagEqualRank];

    pub fn name(&self) -> &'static str {
        match self {
            Criterion::BowtieTop => "bowtie-top",
            Criterion::BowtieEqualRank => "bowtie-equal-rank",
            Criterion::FlagRankOne => "flag-rank-one",
            Criterion::FlagEqualRank => "flag-equal-rank",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub reduced: Verdict,
    pub oracle: Verdict,
    pub agreement: bool,
}

/// Evaluates a criterion's reduced conditions and the exhaustive oracle.
///
/// The reduced conditions are all necessary as well as sufficient, so a
/// failing reduced condition concludes the negative verdict.
pub fn criterion(p: &RankedPoset, which: Criterion) -> Result<CriterionReport, PosetError> {
    if !p.check(Property::WeaklyGraded).holds {
        return Err(PosetError::Hypothesis("not weakly graded".into()));
    }
    if !p.check(Property::RSaturated).holds {
        return Err(PosetError::Hypothesis("not r-saturated".into()));
    }
    let n = p.top_rank();
    let (reduced, oracle) = match which {
        Criterion::BowtieTop => {
            let mut reduced = Verdict::ok();
            for top in (0..p.len()).filter(|&x| p.rank(x) == n) {
                let below: Vec<usize> = p.strict_down(top).ones().collect();
                let v = p.restrict(&below).check(Property::BowtieFree);
                if !v.holds {
                    let w = v.witness.unwrap().into_iter().map(|i| below[i]).collect();
                    reduced = Verdict::fail(w);
                    break;
                }
            }
            if reduced.holds {
                reduced = p.check_bowtie(|x1, y1, x2, y2| {
                    p.rank(x1) == p.rank(x2) && p.rank(y1) == n && p.rank(y2) == n
                });
            }
            (reduced, p.check(Property::BowtieFree))
        }
        Criterion::BowtieEqualRank => (
            p.check_bowtie(|x1, y1, x2, y2| p.rank(x1) == p.rank(x2) && p.rank(y1) == p.rank(y2)),
            p.check(Property::BowtieFree),
        ),
        Criterion::FlagRankOne => {
            require_bowtie_free(p)?;
            let mut reduced = Verdict::ok();
            for low in (0..p.len()).filter(|&x| p.rank(x) == 1) {
                let above: Vec<usize> = p.strict_up(low).ones().collect();
                let v = p.restrict(&above).check(Property::UpwardFlag);
                if !v.holds {
                    let w = v.witness.unwrap().into_iter().map(|i| above[i]).collect();
                    reduced = Verdict::fail(w);
                    break;
                }
            }
            if reduced.holds {
                reduced = p.check_upward_flag(false, |t| t.iter().all(|&x| p.rank(x) == 1));
            }
            (reduced, p.check(Property::UpwardFlag))
        }
        Criterion::FlagEqualRank => {
            require_bowtie_free(p)?;
            let reduced = p.check_upward_flag(false, |t| {
                let r = p.rank(t[0]);
                r < n && t.iter().all(|&x| p.rank(x) == r)
            });
            (reduced, p.check(Property::UpwardFlag))
        }
    };
    let agreement = reduced.holds == oracle.holds;
    Ok(CriterionReport { criterion: which, reduced, oracle, agreement })
}

fn require_bowtie_free(p: &RankedPoset) -> Result<(), PosetError> {
    if p.check(Property::BowtieFree).holds {
        Ok(())
    } else {
        Err(PosetError::Hypothesis("not bowtie free".into()))
    }
}

/// Parameters of the random layered poset generator.
#[derive(Clone, Copy, Debug)]
pub struct RandomPosetParams {
    pub max_elements: usize,
    pub max_rank: u32,
    pub max_width: usize,
    /// Probability of a relation between consecutive layers.
    pub density: f64,
    /// Probability of a relation skipping one layer.
    pub skip_density: f64,
}

impl Default for RandomPosetParams {
    fn default() -> Self {
        RandomPosetParams { max_elements: 40, max_rank: 5, max_width: 8, density: 0.35, skip_density: 0.05 }
    }
}

/// Random layered poset, closed and then pruned to r-saturation. Returns
/// `None` when pruning leaves fewer than two ranks.
pub fn random_r_saturated<R: Rng>(rng: &mut R, params: &RandomPosetParams) -> Option<RankedPoset> {
    let n = rng.random_range(2..=params.max_rank);
    let mut rank = Vec::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let per_layer = (params.max_elements / n as usize).max(1);
    for r in 1..=n {
        let w = rng.random_range(1..=params.max_width.min(per_layer));
        let layer: Vec<usize> = (0..w).map(|i| rank.len() + i).collect();
        rank.extend(std::iter::repeat_n(r, w));
        layers.push(layer);
    }
    let mut rels = Vec::new();
    for r in 0..layers.len() {
        for &a in &layers[r] {
            if r + 1 < layers.len() {
                for &b in &layers[r + 1] {
                    if rng.random_bool(params.density) {
                        rels.push((a, b));
                    }
                }
            }
            if r + 2 < layers.len() {
                for &b in &layers[r + 2] {
                    if rng.random_bool(params.skip_density) {
                        rels.push((a, b));
                    }
                }
            }
        }
    }
    let full = RankedPoset::from_relations(rank, &rels, Some(n)).expect("layered relations are acyclic");
    prune_to_saturation(&full)
}

/// Repeatedly removes elements violating r-saturation.
pub fn prune_to_saturation(p: &RankedPoset) -> Option<RankedPoset> {
    let mut alive: Vec<usize> = (0..p.len()).collect();
    loop {
        let q = p.restrict(&alive);
        let bad: Vec<usize> = (0..q.len())
            .filter(|&x| {
                let r = q.rank(x);
                let above: Vec<u32> = q.up_set(x).ones().map(|y| q.rank(y)).collect();
                let below: Vec<u32> = q.down_set(x).ones().map(|y| q.rank(y)).collect();
                ((r + 1)..=q.top_rank()).any(|m| !above.contains(&m)) || (1..r).any(|m| !below.contains(&m))
            })
            .collect();
        if bad.is_empty() {
            let distinct: std::collections::BTreeSet<u32> = q.ranks().iter().copied().collect();
            return if distinct.len() >= 2 { Some(q) } else { None };
        }
        alive = alive.iter().enumerate().filter(|(i, _)| !bad.contains(i)).map(|(_, &e)| e).collect();
        if alive.is_empty() {
            return None;
        }
    }
}

/// Face poset of a random pure simplicial complex: `facets` random
/// `facet_size`-subsets of `vertices` points, faces ranked by cardinality.
/// Returns `None` above `max_elements` faces.
pub fn random_face_poset<R: Rng>(
    rng: &mut R,
    vertices: usize,
    facet_size: usize,
    facets: usize,
    max_elements: usize,
) -> Option<RankedPoset> {
    let mut faces: std::collections::BTreeSet<u32> = std::collections::BTreeSet::new();
    for _ in 0..facets {
        let chosen = rand::seq::index::sample(rng, vertices, facet_size);
        let mask: u32 = chosen.iter().map(|v| 1u32 << v).sum();
        // all nonempty subfaces
        let mut sub = mask;
        while sub != 0 {
            faces.insert(sub);
            sub = (sub - 1) & mask;
        }
    }
    if faces.len() > max_elements {
        return None;
    }
    let faces: Vec<u32> = faces.into_iter().collect();
    let rank: Vec<u32> = faces.iter().map(|f| f.count_ones()).collect();
    let mut rels = Vec::new();
    for (i, &a) in faces.iter().enumerate() {
        for (j, &b) in faces.iter().enumerate() {
            if a != b && a & b == a && b.count_ones() == a.count_ones() + 1 {
                rels.push((i, j));
            }
        }
    }
    RankedPoset::from_relations(rank, &rels, Some(facet_size as u32)).ok()
}

/// Seeded corpus of r-saturated posets for a criterion: layered posets
/// alternate with face posets; flag criteria keep only bowtie-free ones.
/// Each entry carries the seed that regenerates it.
pub fn criterion_corpus(which: Criterion, base_seed: u64, count: usize) -> Vec<(u64, RankedPoset)> {
    use rand::SeedableRng;
    let needs_bowtie_free = matches!(which, Criterion::FlagRankOne | Criterion::FlagEqualRank);
    let mut out = Vec::with_capacity(count);
    let mut seed = base_seed;
    while out.len() < count {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = if seed % 2 == 0 {
            let density = rng.random_range(0.15..0.7);
            let params = RandomPosetParams { density, max_width: 10, ..Default::default() };
            random_r_saturated(&mut rng, &params)
        } else {
            let v = rng.random_range(4..=7);
            let k = rng.random_range(2..=4);
            let f = rng.random_range(2..=6);
            random_face_poset(&mut rng, v, k, f, 40)
        };
        if let Some(p) = p {
            if !needs_bowtie_free || p.check(Property::BowtieFree).holds {
                out.push((seed, p));
            }
        }
        seed += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> RankedPoset {
        RankedPoset::from_relations(vec![1, 1, 2, 2], &[(0, 2), (0, 3), (1, 2), (1, 3)], None).unwrap()
    }

    #[test]
    fn minimal_bowtie() {
        let v = bowtie().check(Property::BowtieFree);
        assert_eq!(v.witness, Some(vec![0, 2, 1, 3]));
        assert_eq!(bowtie().join(&[0, 1]), None);
    }

    #[test]
    fn boolean_lattice() {
        let b = RankedPoset::boolean(3, true);
        assert!(b.check(Property::BowtieFree).holds);
        // the singletons are pairwise bounded but only by the missing top
        assert_eq!(b.check(Property::UpwardFlag).witness, Some(vec![0, 1, 3]));
        let full = RankedPoset::boolean(3, false);
        assert!(full.check(Property::UpwardFlag).holds && full.check(Property::DownwardFlag).holds);
        // {1} is mask 1 (index 0), {2} is mask 2 (index 1), {1,2} is mask 3 (index 2)
        assert_eq!(b.join(&[0, 1]), Some(2));
        let r = criterion(&b, Criterion::BowtieTop).unwrap();
        assert!(r.reduced.holds && r.agreement);
    }

    #[test]
    fn chains() {
        let c = RankedPoset::chain(5);
        for p in [
            Property::WeaklyGraded,
            Property::RSaturated,
            Property::BowtieFree,
            Property::UpwardFlag,
            Property::DownwardFlag,
            Property::WeaklyUpwardFlag,
            Property::WeaklyDownwardFlag,
        ] {
            assert!(c.check(p).holds, "{p:?}");
        }
        assert_eq!(c.join(&[1, 3, 2]), Some(3));
        assert_eq!(c.meet(&[1, 3, 2]), Some(1));
    }

    #[test]
    fn unsaturated_is_error() {
        // rank-1 element with nothing above in a rank-2 poset
        let p = RankedPoset::from_relations(vec![1, 1, 2], &[(0, 2)], None).unwrap();
        assert!(matches!(criterion(&p, Criterion::BowtieEqualRank), Err(PosetError::Hypothesis(_))));
    }

    #[test]
    fn triangle_is_not_upward_flag() {
        let p = RankedPoset::from_relations(
            vec![1, 1, 1, 2, 2, 2],
            &[(0, 3), (1, 3), (1, 4), (2, 4), (2, 5), (0, 5)],
            None,
        )
        .unwrap();
        assert!(p.check(Property::BowtieFree).holds);
        assert_eq!(p.check(Property::UpwardFlag).witness, Some(vec![0, 1, 2]));
        // every pairwise bound is maximal
        assert!(p.check(Property::WeaklyUpwardFlag).holds);
        let r = criterion(&p, Criterion::FlagEqualRank).unwrap();
        assert!(!r.reduced.holds && r.agreement);
    }

    #[test]
    fn cycle_rejected() {
        assert_eq!(RankedPoset::from_relations(vec![1, 2], &[(0, 1), (1, 0)], None), Err(PosetError::Cycle(0)));
    }
}
