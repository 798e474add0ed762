use artin_lab::poset::*;
use proptest::prelude::*;

/// Direct reading of the definitions over boolean matrices.
struct Naive {
    le: Vec<Vec<bool>>,
}

impl Naive {
    fn new(p: &RankedPoset) -> Self {
        let n = p.len();
        Naive { le: (0..n).map(|i| (0..n).map(|j| p.leq(i, j)).collect()).collect() }
    }

    fn n(&self) -> usize {
        self.le.len()
    }

    fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le[a][b]
    }

    fn bowtie_free(&self) -> bool {
        let n = self.n();
        for x1 in 0..n {
            for x2 in 0..n {
                for y1 in 0..n {
                    for y2 in 0..n {
                        let quasi = self.lt(x1, y1) && self.lt(x1, y2) && self.lt(x2, y1) && self.lt(x2, y2);
                        if quasi
                            && !(0..n).any(|z| self.le[x1][z] && self.le[x2][z] && self.le[z][y1] && self.le[z][y2])
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn has_ub(&self, xs: &[usize], weak: bool) -> bool {
        let n = self.n();
        (0..n).any(|z| {
            xs.iter().all(|&x| self.le[x][z]) && (!weak || (0..n).any(|w| self.lt(z, w)))
        })
    }

    fn upward_flag(&self, weak: bool) -> bool {
        let n = self.n();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let pairwise = self.has_ub(&[a, b], weak) && self.has_ub(&[b, c], weak) && self.has_ub(&[a, c], weak);
                    if pairwise && !self.has_ub(&[a, b, c], false) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn join(&self, q: &[usize]) -> Option<usize> {
        let n = self.n();
        let ubs: Vec<usize> = (0..n).filter(|&z| q.iter().all(|&x| self.le[x][z])).collect();
        ubs.iter().copied().find(|&u| ubs.iter().all(|&v| self.le[u][v]))
    }
}

#[test]
fn oracles_match_naive_definitions() {
    for which in [Criterion::BowtieTop, Criterion::FlagRankOne] {
        for (seed, p) in criterion_corpus(which, 1000, 120) {
            let naive = Naive::new(&p);
            assert_eq!(p.check(Property::BowtieFree).holds, naive.bowtie_free(), "seed {seed}");
            assert_eq!(p.check(Property::UpwardFlag).holds, naive.upward_flag(false), "seed {seed}");
            assert_eq!(p.check(Property::WeaklyUpwardFlag).holds, naive.upward_flag(true), "seed {seed}");
            let dual = Naive::new(&p.dual());
            assert_eq!(p.check(Property::DownwardFlag).holds, dual.upward_flag(false), "seed {seed}");
        }
    }
}

#[test]
fn criteria_agree_with_oracles() {
    for which in Criterion::ALL {
        let corpus = criterion_corpus(which, 7, 200);
        let mut negatives = 0;
        for (seed, p) in &corpus {
            let r = criterion(p, which).unwrap();
            assert!(r.agreement, "{which:?} seed {seed}");
            negatives += usize::from(!r.oracle.holds);
        }
        // both verdicts occur in every corpus
        assert!(negatives > 10 && negatives < 190, "{which:?}: {negatives}");
    }
}

#[test]
fn joins_exist_in_bowtie_free_posets() {
    for (seed, p) in criterion_corpus(Criterion::BowtieTop, 3, 150) {
        let naive = Naive::new(&p);
        let bf = p.check(Property::BowtieFree).holds;
        for a in 0..p.len() {
            for b in 0..p.len() {
                let j = p.join(&[a, b]);
                assert_eq!(j, naive.join(&[a, b]), "seed {seed}");
                if bf && naive.has_ub(&[a, b], false) {
                    assert!(j.is_some(), "seed {seed}: pair ({a},{b}) bounded without join");
                }
                if bf && p.meet(&[a, b]).is_none() {
                    let dual = Naive::new(&p.dual());
                    assert!(!dual.has_ub(&[a, b], false), "seed {seed}");
                }
            }
        }
    }
}

#[test]
fn corpus_is_saturated_and_graded() {
    for (seed, p) in criterion_corpus(Criterion::BowtieEqualRank, 11, 100) {
        assert!(p.check(Property::RSaturated).holds, "seed {seed}");
        assert!(p.check(Property::WeaklyGraded).holds, "seed {seed}");
        assert!(p.len() <= 40);
    }
}

proptest! {
    #[test]
    fn join_is_least_upper_bound(seed in 0u64..5000, picks in proptest::collection::vec(0usize..40, 1..4)) {
        let (_, p) = criterion_corpus(Criterion::BowtieTop, seed, 1).remove(0);
        let q: Vec<usize> = picks.iter().map(|&i| i % p.len()).collect();
        if let Some(j) = p.join(&q) {
            for &x in &q {
                prop_assert!(p.leq(x, j));
            }
            for u in 0..p.len() {
                if q.iter().all(|&x| p.leq(x, u)) {
                    prop_assert!(p.leq(j, u));
                }
            }
        }
        if let Some(m) = p.meet(&q) {
            for u in 0..p.len() {
                if q.iter().all(|&x| p.leq(u, x)) {
                    prop_assert!(p.leq(u, m));
                }
            }
        }
    }

    #[test]
    fn dual_swaps_flag_directions(seed in 0u64..5000) {
        let (_, p) = criterion_corpus(Criterion::FlagEqualRank, seed, 1).remove(0);
        prop_assert_eq!(p.check(Property::DownwardFlag).holds, p.dual().check(Property::UpwardFlag).holds);
        prop_assert_eq!(p.check(Property::BowtieFree).holds, p.dual().check(Property::BowtieFree).holds);
    }
}
