//! Exact enumeration of finite Coxeter groups by coset enumeration over the
//! trivial subgroup, with word lengths and parabolic cosets.

use std::collections::VecDeque;

use serde::Serialize;

use crate::diagram::CoxeterDiagram;

pub const DEFAULT_CAP: usize = 2_000_000;

const NONE: u32 = u32::MAX;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("group order exceeds cap {cap} (at least {partial} elements seen)")]
    CapExceeded { cap: usize, partial: usize },
    #[error("diagram has no generators")]
    Empty,
}

/// A fully enumerated finite Coxeter group. Elements are indices with the
/// identity at 0, numbered in breadth-first order from the identity.
#[derive(Clone, Debug)]
pub struct GroupTable {
    diagram: CoxeterDiagram,
    /// `action[s][w]` is the index of `w * s`.
    action: Vec<Vec<u32>>,
    length: Vec<u32>,
    /// Generator `s` with `w = parent * s` on a shortest path, or `NONE` at
    /// the identity.
    last: Vec<u32>,
}

struct Enumerator {
    k: usize,
    table: Vec<u32>,
    p: Vec<u32>,
    live: usize,
    cap: usize,
    limit: usize,
}

impl Enumerator {
    fn get(&self, c: u32, s: usize) -> u32 {
        self.table[c as usize * self.k + s]
    }

    fn set(&mut self, c: u32, s: usize, d: u32) {
        self.table[c as usize * self.k + s] = d;
    }

    fn define(&mut self, c: u32, s: usize) -> Result<u32, CoxeterError> {
        if self.live >= self.cap || self.p.len() >= self.limit {
            return Err(CoxeterError::CapExceeded { cap: self.cap, partial: self.live });
        }
        let d = self.p.len() as u32;
        self.p.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.k));
        self.live += 1;
        self.set(c, s, d);
        self.set(d, s, c);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.p[r as usize] != r {
            r = self.p[r as usize];
        }
        let mut c = c;
        while self.p[c as usize] != r {
            let next = self.p[c as usize];
            self.p[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.p[hi as usize] = lo;
        self.live -= 1;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for s in 0..self.k {
                let f = self.get(e, s);
                if f == NONE {
                    continue;
                }
                if self.get(f, s) == e {
                    self.set(f, s, NONE);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let e1s = self.get(e1, s);
                let f1s = self.get(f1, s);
                if e1s != NONE {
                    self.merge(f1, e1s, &mut queue);
                } else if f1s != NONE {
                    self.merge(e1, f1s, &mut queue);
                } else {
                    self.set(e1, s, f1);
                    self.set(f1, s, e1);
                }
            }
        }
    }

    /// Scan-and-fill of relator `w` at coset `c`.
    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<(), CoxeterError> {
        loop {
            let mut f = c;
            let mut i = 0usize;
            let mut b = c;
            let mut j = w.len() as isize - 1;
            while (i as isize) <= j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize]) != NONE {
                b = self.get(b, w[j as usize]);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                let s = w[i];
                self.set(f, s, b);
                self.set(b, s, f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

impl GroupTable {
    /// Enumerates the Coxeter group of `d`, failing once more than `cap`
    /// elements are live.
    pub fn enumerate(d: &CoxeterDiagram, cap: usize) -> Result<GroupTable, CoxeterError> {
        let k = d.len();
        if k == 0 {
            return Err(CoxeterError::Empty);
        }
        let mut relators: Vec<Vec<usize>> = Vec::new();
        for s in 0..k {
            for t in s + 1..k {
                let m = d.label(s, t) as usize;
                let mut w = Vec::with_capacity(2 * m);
                for _ in 0..m {
                    w.push(s);
                    w.push(t);
                }
                relators.push(w);
            }
        }
        let mut e = Enumerator {
            k,
            table: vec![NONE; k],
            p: vec![0],
            live: 1,
            cap,
            limit: cap.saturating_mul(8).max(1024),
        };
        let mut c = 0u32;
        while (c as usize) < e.p.len() {
            if e.p[c as usize] == c {
                for r in &relators {
                    e.scan_and_fill(c, r)?;
                    if e.p[c as usize] != c {
                        break;
                    }
                }
                if e.p[c as usize] == c {
                    for s in 0..k {
                        if e.get(c, s) == NONE {
                            e.define(c, s)?;
                        }
                    }
                }
            }
            c += 1;
        }
        // renumber live cosets breadth-first from the identity coset
        let total = e.p.len();
        let mut index = vec![NONE; total];
        let mut order: Vec<u32> = vec![0];
        index[0] = 0;
        let mut length = vec![0u32];
        let mut last = vec![NONE];
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            for s in 0..k {
                let d = e.rep(e.get(c, s));
                if index[d as usize] == NONE {
                    index[d as usize] = order.len() as u32;
                    order.push(d);
                    length.push(length[head] + 1);
                    last.push(s as u32);
                }
            }
            head += 1;
        }
        let n = order.len();
        let mut action = vec![vec![0u32; n]; k];
        for (i, &c) in order.iter().enumerate() {
            for (s, row) in action.iter_mut().enumerate() {
                let d = e.rep(e.get(c, s));
                row[i] = index[d as usize];
            }
        }
        Ok(GroupTable { diagram: d.clone(), action, length, last })
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn order(&self) -> usize {
        self.length.len()
    }

    pub fn rank(&self) -> usize {
        self.action.len()
    }

    /// `w * s`.
    pub fn mul_gen(&self, w: usize, s: usize) -> usize {
        self.action[s][w] as usize
    }

    pub fn length(&self, w: usize) -> usize {
        self.length[w] as usize
    }

    /// A reduced word for `w`, read off the breadth-first tree.
    pub fn word(&self, w: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.length(w));
        let mut cur = w;
        while cur != 0 {
            let s = self.last[cur] as usize;
            out.push(s);
            cur = self.mul_gen(cur, s);
        }
        out.reverse();
        out
    }

    /// `w` multiplied on the right by the word `letters`.
    pub fn apply(&self, w: usize, letters: &[usize]) -> usize {
        letters.iter().fold(w, |acc, &s| self.mul_gen(acc, s))
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.apply(a, &self.word(b))
    }

    pub fn inverse(&self, a: usize) -> usize {
        let mut w = self.word(a);
        w.reverse();
        self.apply(0, &w)
    }

    /// The element with the given word.
    pub fn element(&self, letters: &[usize]) -> usize {
        self.apply(0, letters)
    }

    /// Greedy descent: right-multiply by the first `t` in `T` that shortens
    /// `w` until none does.
    pub fn min_coset_rep(&self, w: usize, parabolic: &[usize]) -> usize {
        let mut cur = w;
        'outer: loop {
            for &t in parabolic {
                let next = self.mul_gen(cur, t);
                if self.length[next] < self.length[cur] {
                    cur = next;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// The orbit `w * W_T`, sorted.
    pub fn coset_members(&self, w: usize, parabolic: &[usize]) -> Vec<usize> {
        let mut seen = std::collections::BTreeSet::from([w]);
        let mut queue = VecDeque::from([w]);
        while let Some(u) = queue.pop_front() {
            for &t in parabolic {
                let v = self.mul_gen(u, t);
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Order of the standard parabolic subgroup `W_T`.
    pub fn parabolic_order(&self, parabolic: &[usize]) -> usize {
        self.coset_members(0, parabolic).len()
    }

    /// Partition of the group into cosets `w * W_T`.
    pub fn cosets(&self, parabolic: &[usize]) -> CosetSystem {
        let n = self.order();
        let mut coset_of = vec![NONE; n];
        let mut reps = Vec::new();
        for w in 0..n {
            if coset_of[w] != NONE {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(w);
            coset_of[w] = id;
            let mut stack = vec![w];
            while let Some(u) = stack.pop() {
                for &t in parabolic {
                    let v = self.mul_gen(u, t);
                    if coset_of[v] == NONE {
                        coset_of[v] = id;
                        stack.push(v);
                    }
                }
            }
        }
        let mut parabolic = parabolic.to_vec();
        parabolic.sort_unstable();
        CosetSystem { parabolic, coset_of, reps }
    }

    /// Whether `w * W_T1` and `W_T2` are disjoint.
    pub fn coset_disjoint(&self, w: usize, t1: &[usize], t2: &[usize]) -> bool {
        let a = self.coset_members(w, t1);
        let b = self.coset_members(0, t2);
        a.iter().all(|x| b.binary_search(x).is_err())
    }

    /// JSON dump of the table.
    pub fn dump(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump<'a> {
            diagram: serde_json::Value,
            order: usize,
            length: &'a [u32],
            action: &'a [Vec<u32>],
        }
        serde_json::to_value(Dump {
            diagram: self.diagram.to_value(),
            order: self.order(),
            length: &self.length,
            action: &self.action,
        })
        .expect("serializable")
    }
}

/// The cosets of one standard parabolic subgroup.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub parabolic: Vec<usize>,
    /// Coset index of every element.
    pub coset_of: Vec<u32>,
    /// Minimal-length representative of every coset.
    pub reps: Vec<usize>,
}

/// One coset `w * W_T` by its minimal representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coset {
    pub parabolic: Vec<usize>,
    pub representative: usize,
}

impl CosetSystem {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn list(&self) -> Vec<Coset> {
        self.reps
            .iter()
            .map(|&r| Coset { parabolic: self.parabolic.clone(), representative: r })
            .collect()
    }
}

pub fn enumerate_group(d: &CoxeterDiagram, cap: usize) -> Result<GroupTable, CoxeterError> {
    GroupTable::enumerate(d, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::FamilyTag;

    fn table(t: FamilyTag) -> GroupTable {
        GroupTable::enumerate(&t.diagram().unwrap(), 100_000).unwrap()
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(table(FamilyTag::A(3)).order(), 24);
        assert_eq!(table(FamilyTag::H3).order(), 120);
        assert_eq!(table(FamilyTag::B(3)).order(), 48);
        assert_eq!(table(FamilyTag::I2(7)).order(), 14);
        assert_eq!(GroupTable::enumerate(&CoxeterDiagram::discrete(3), 100).unwrap().order(), 8);
    }

    #[test]
    fn affine_group_hits_cap() {
        let r = GroupTable::enumerate(&CoxeterDiagram::linear(&[4, 4]), 1000);
        assert!(matches!(r, Err(CoxeterError::CapExceeded { cap: 1000, .. })));
    }

    #[test]
    fn coset_rep_examples() {
        let a2 = table(FamilyTag::A(2));
        let st = a2.element(&[0, 1]);
        assert_eq!(a2.min_coset_rep(st, &[1]), a2.element(&[0]));
        assert_eq!(a2.min_coset_rep(0, &[0, 1]), 0);
        let sts = a2.element(&[0, 1, 0]);
        assert_eq!(a2.min_coset_rep(sts, &[0, 1]), 0);
    }

    #[test]
    fn coset_counts() {
        let a3 = table(FamilyTag::A(3));
        assert_eq!(a3.cosets(&[1, 2]).len(), 4);
        assert_eq!(a3.cosets(&[]).len(), 24);
        let b2 = table(FamilyTag::I2(4));
        assert_eq!(b2.cosets(&[0]).len(), 4);
    }

    #[test]
    fn coset_disjoint_examples() {
        let a2 = table(FamilyTag::A(2));
        let tr = a2.element(&[0, 1]);
        assert!(a2.coset_disjoint(tr, &[0], &[1]));
        assert!(!a2.coset_disjoint(0, &[0], &[1]));
        let a3 = table(FamilyTag::A(3));
        let w = a3.element(&[0, 1, 2]);
        assert!(a3.coset_disjoint(w, &[0, 1], &[1, 2]));
    }

    #[test]
    fn words_are_reduced_and_consistent() {
        let g = table(FamilyTag::H3);
        for w in 0..g.order() {
            let word = g.word(w);
            assert_eq!(word.len(), g.length(w));
            assert_eq!(g.element(&word), w);
            assert_eq!(g.multiply(w, g.inverse(w)), 0);
        }
    }
}
