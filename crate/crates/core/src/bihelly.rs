//! Bipartite graphs: half-balls, the bi-Helly property, near-cliques,
//! residues and directed geodesics.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

pub const DEFAULT_CLIQUE_CAP: usize = 5000;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum BiHellyError {
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("not a near-clique: {0:?}")]
    NotNearClique(Vec<usize>),
    #[error("near-cliques are not at uniform distance >= 2")]
    NotUniform,
    #[error("step {step} of the directed geodesic is {reason}")]
    Violation { step: usize, reason: String },
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// A connected bipartite graph with its distance matrix.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    graph: Graph,
    color: Vec<u8>,
    dist: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(graph: Graph) -> Result<Self, BiHellyError> {
        if graph.is_empty() {
            return Err(BiHellyError::Empty);
        }
        let color = graph.bipartition().ok_or(BiHellyError::NotBipartite)?;
        if !graph.is_connected() {
            return Err(BiHellyError::Disconnected);
        }
        let dist = graph.all_pairs();
        Ok(BipartiteGraph { graph, color, dist })
    }

    /// Parses `{vertices, edges}`.
    pub fn from_json(text: &str) -> Result<Self, BiHellyError> {
        let g: GraphJson = serde_json::from_str(text).map_err(|e| BiHellyError::Malformed(e.to_string()))?;
        if let Some(&(a, b)) = g.edges.iter().find(|&&(a, b)| a >= g.vertices || b >= g.vertices) {
            return Err(BiHellyError::UnknownVertex(a.max(b)));
        }
        Self::new(Graph::from_edges(g.vertices, &g.edges))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn color(&self, v: usize) -> u8 {
        self.color[v]
    }

    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }

    fn set(&self, vs: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.len());
        b.extend(vs);
        b
    }

    fn half_ball_set(&self, u: usize, n: u32) -> FixedBitSet {
        self.set((0..self.len()).filter(|&v| self.dist[u][v] <= n && self.dist[u][v] % 2 == n % 2))
    }

    /// `{v : d(v,u) <= n, d(v,u) = n mod 2}`, sorted.
    pub fn half_ball(&self, u: usize, n: u32) -> Vec<usize> {
        self.half_ball_set(u, n).ones().collect()
    }

    /// `B(S, n)`: vertices within distance `n` of some vertex of `s`.
    pub fn ball(&self, s: &[usize], n: u32) -> Vec<usize> {
        (0..self.len()).filter(|&v| s.iter().any(|&u| self.dist[u][v] <= n)).collect()
    }

    pub fn is_near_clique(&self, k: &[usize]) -> bool {
        !k.is_empty()
            && k.iter().all(|&v| v < self.len())
            && k.iter().enumerate().all(|(i, &a)| k[i + 1..].iter().all(|&b| self.dist[a][b] == 2))
    }

    fn check_near_clique(&self, k: &[usize]) -> Result<(), BiHellyError> {
        if let Some(&v) = k.iter().find(|&&v| v >= self.len()) {
            return Err(BiHellyError::UnknownVertex(v));
        }
        if !self.is_near_clique(k) {
            return Err(BiHellyError::NotNearClique(k.to_vec()));
        }
        Ok(())
    }

    /// Vertices within distance `n` of every vertex of `s`.
    pub fn common_ball(&self, s: &[usize], n: u32) -> Vec<usize> {
        (0..self.len()).filter(|&v| s.iter().all(|&u| self.dist[u][v] <= n)).collect()
    }

    fn reach(&self, s: &[usize], n: u32, reach: Reach) -> FixedBitSet {
        match reach {
            Reach::Any => self.set(self.ball(s, n)),
            Reach::All => self.set(self.common_ball(s, n)),
        }
    }

    /// Vertices adjacent to every vertex of `k`.
    pub fn residue(&self, k: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&v| k.iter().all(|&u| self.dist[u][v] == 1)).collect()
    }

    /// `n` if every cross distance equals `n`.
    pub fn uniform_distance(&self, k: &[usize], k2: &[usize]) -> Option<u32> {
        let first = self.dist[*k.first()?][*k2.first()?];
        k.iter().all(|&a| k2.iter().all(|&b| self.dist[a][b] == first)).then_some(first)
    }

    /// Distinct half-balls `(u, k)` with `k <= diameter`, first occurrence
    /// kept.
    pub fn half_balls(&self) -> Vec<(HalfBall, FixedBitSet)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for k in 0..=self.diameter() {
            for u in 0..self.len() {
                let s = self.half_ball_set(u, k);
                if seen.insert(s.clone()) {
                    out.push((HalfBall { center: u, radius: k }, s));
                }
            }
        }
        out
    }

    /// Checks every maximal pairwise-intersecting family of half-balls for a
    /// common vertex. `family_cap` limits the family size; `clique_cap`
    /// limits the number of maximal families visited.
    pub fn is_bi_helly(&self, family_cap: Option<usize>, clique_cap: usize) -> HellyVerdict {
        let balls = self.half_balls();
        let m = balls.len();
        let sets: Vec<&FixedBitSet> = balls.iter().map(|b| &b.1).collect();
        let mut meets = vec![FixedBitSet::with_capacity(m); m];
        for a in 0..m {
            for b in a + 1..m {
                if !sets[a].is_disjoint(sets[b]) {
                    meets[a].insert(b);
                    meets[b].insert(a);
                }
            }
        }
        // sets containing each vertex
        let mut containing = vec![FixedBitSet::with_capacity(m); self.len()];
        for (i, s) in sets.iter().enumerate() {
            for v in s.ones() {
                containing[v].insert(i);
            }
        }
        let mut search = CliqueSearch {
            sets: &sets,
            meets: &meets,
            containing: &containing,
            family_cap: family_cap.unwrap_or(usize::MAX),
            clique_cap,
            visited: 0,
            truncated: false,
            witness: None,
        };
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        let mut p = FixedBitSet::with_capacity(m);
        p.insert_range(..);
        search.expand(&mut Vec::new(), &all, p, FixedBitSet::with_capacity(m));
        let families = search.visited;
        let status = if search.witness.is_some() {
            HellyStatus::Fails
        } else if search.truncated {
            HellyStatus::CapLimited
        } else {
            HellyStatus::Holds
        };
        let witness = search.witness.map(|w| minimize(&sets, w).into_iter().map(|i| balls[i].0).collect());
        HellyVerdict { status, witness, half_balls: m, families }
    }

    /// `K_0 = k, .., K_n = k2` with `K_i = Res(K_{i-1}) ∩ B(K_n, n - i)`,
    /// the neighborhood of `K_n` taken according to `reach`.
    /// Each step is checked to be a near-clique.
    pub fn directed_geodesic(
        &self,
        k: &[usize],
        k2: &[usize],
        reach: Reach,
    ) -> Result<Vec<Vec<usize>>, BiHellyError> {
        self.check_near_clique(k)?;
        self.check_near_clique(k2)?;
        let n = match self.uniform_distance(k, k2) {
            Some(n) if n >= 2 => n,
            _ => return Err(BiHellyError::NotUniform),
        };
        let mut seq = vec![sorted(k)];
        for i in 1..n {
            let res = self.residue(seq.last().unwrap());
            let near = self.reach(k2, n - i, reach);
            let next: Vec<usize> = res.into_iter().filter(|&v| near.contains(v)).collect();
            if next.is_empty() {
                return Err(BiHellyError::Violation { step: i as usize, reason: "empty".into() });
            }
            if !self.is_near_clique(&next) {
                return Err(BiHellyError::Violation { step: i as usize, reason: "not a near-clique".into() });
            }
            seq.push(next);
        }
        seq.push(sorted(k2));
        let check = self.local_check(&seq, reach)?;
        if !check.direct {
            return Err(BiHellyError::Violation { step: n as usize, reason: "not a directed geodesic".into() });
        }
        Ok(seq)
    }

    /// The definition of a directed geodesic checked directly and through
    /// consecutive triples. Sequences of fewer than three near-cliques are
    /// vacuously accepted by both.
    pub fn local_check(&self, seq: &[Vec<usize>], reach: Reach) -> Result<LocalCheck, BiHellyError> {
        self.local_check_mixed(seq, reach, reach)
    }

    /// As [`local_check`](Self::local_check), with the direct check read
    /// through `global` and the triples through `local`.
    pub fn local_check_mixed(&self, seq: &[Vec<usize>], global: Reach, local: Reach) -> Result<LocalCheck, BiHellyError> {
        for k in seq {
            self.check_near_clique(k)?;
        }
        if seq.len() < 3 {
            return Ok(LocalCheck { direct: true, triples: true, first_bad_triple: None, agreement: true });
        }
        let n = seq.len() - 1;
        let last = &seq[n];
        let step = |i: usize, target: &[usize], radius: u32, reach: Reach| -> bool {
            let res = self.residue(&seq[i - 1]);
            let near = self.reach(target, radius, reach);
            let want: Vec<usize> = res.into_iter().filter(|&v| near.contains(v)).collect();
            want == sorted(&seq[i])
        };
        let direct = self.uniform_distance(&seq[0], last) == Some(n as u32)
            && (1..n).all(|i| step(i, last, (n - i) as u32, global));
        let first_bad_triple = (1..n).find(|&i| {
            self.uniform_distance(&seq[i - 1], &seq[i + 1]) != Some(2) || !step(i, &seq[i + 1], 1, local)
        });
        let triples = first_bad_triple.is_none();
        Ok(LocalCheck { direct, triples, first_bad_triple, agreement: direct == triples })
    }

    pub fn to_value(&self) -> serde_json::Value {
        self.graph.to_value()
    }
}

fn sorted(k: &[usize]) -> Vec<usize> {
    let mut v = k.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Drops members while the intersection stays empty.
fn minimize(sets: &[&FixedBitSet], mut fam: Vec<usize>) -> Vec<usize> {
    let empty = |f: &[usize]| {
        let mut it = f.iter();
        let Some(&first) = it.next() else { return false };
        let mut acc = sets[first].clone();
        for &i in it {
            acc.intersect_with(sets[i]);
        }
        acc.is_clear()
    };
    let mut i = fam.len();
    while i > 0 {
        i -= 1;
        let mut smaller = fam.clone();
        smaller.remove(i);
        if empty(&smaller) {
            fam = smaller;
        }
    }
    fam
}

struct CliqueSearch<'a> {
    sets: &'a [&'a FixedBitSet],
    meets: &'a [FixedBitSet],
    containing: &'a [FixedBitSet],
    family_cap: usize,
    clique_cap: usize,
    visited: usize,
    truncated: bool,
    witness: Option<Vec<usize>>,
}

impl CliqueSearch<'_> {
    fn count(&mut self) {
        self.visited += 1;
        if self.visited > self.clique_cap {
            self.truncated = true;
        }
    }

    /// Bron-Kerbosch with pivoting; `inter` is the intersection of the
    /// members of `r`.
    fn expand(&mut self, r: &mut Vec<usize>, inter: &FixedBitSet, mut p: FixedBitSet, mut x: FixedBitSet) {
        if self.witness.is_some() || self.truncated {
            return;
        }
        if p.is_clear() {
            if x.is_clear() {
                self.count();
            }
            return;
        }
        // every extension keeps a vertex common to all remaining candidates
        if inter.ones().any(|z| p.is_subset(&self.containing[z])) {
            self.count();
            return;
        }
        if r.len() >= self.family_cap {
            self.truncated = true;
            return;
        }
        let pivot = p.union(&x).max_by_key(|&u| p.intersection(&self.meets[u]).count()).expect("nonempty");
        let cands: Vec<usize> = p.difference(&self.meets[pivot]).collect();
        for v in cands {
            let mut next = inter.clone();
            next.intersect_with(self.sets[v]);
            r.push(v);
            if next.is_clear() {
                self.witness = Some(r.clone());
                return;
            }
            let np = p.intersection(&self.meets[v]).collect::<FixedBitSet>();
            let nx = x.intersection(&self.meets[v]).collect::<FixedBitSet>();
            self.expand(r, &next, grow(np, p.len()), grow(nx, x.len()));
            r.pop();
            if self.witness.is_some() || self.truncated {
                return;
            }
            p.set(v, false);
            x.insert(v);
        }
    }
}

fn grow(mut b: FixedBitSet, len: usize) -> FixedBitSet {
    b.grow(len);
    b
}

/// How `B(K, r)` is read for a near-clique `K` with several vertices.
/// The two agree when `K` is a single vertex.
///
/// Neither reading gives both existence and the triple characterization on
/// every bi-Helly graph: with `Any` some pairs have no directed geodesic,
/// with `All` some sequences pass every triple without being one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reach {
    /// Within `r` of some vertex of `K`.
    #[default]
    Any,
    /// Within `r` of every vertex of `K`.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HalfBall {
    pub center: usize,
    pub radius: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HellyStatus {
    Holds,
    Fails,
    CapLimited,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyVerdict {
    pub status: HellyStatus,
    /// A minimal pairwise-intersecting family with empty intersection.
    pub witness: Option<Vec<HalfBall>>,
    pub half_balls: usize,
    pub families: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCheck {
    pub direct: bool,
    pub triples: bool,
    pub first_bad_triple: Option<usize>,
    pub agreement: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bg(g: Graph) -> BipartiteGraph {
        BipartiteGraph::new(g).unwrap()
    }

    #[test]
    fn half_balls_on_small_graphs() {
        let p = bg(Graph::path(3));
        assert_eq!(p.half_ball(1, 1), vec![0, 2]);
        assert_eq!(p.half_ball(2, 0), vec![2]);
        let c = bg(Graph::cycle(6));
        assert_eq!(c.half_ball(0, 2), vec![0, 2, 4]);
    }

    #[test]
    fn hexagon_is_not_bi_helly() {
        let c = bg(Graph::cycle(6));
        let v = c.is_bi_helly(None, DEFAULT_CLIQUE_CAP);
        assert_eq!(v.status, HellyStatus::Fails);
        let w = v.witness.unwrap();
        let sets: Vec<Vec<usize>> = w.iter().map(|b| c.half_ball(b.center, b.radius)).collect();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                assert!(a.iter().any(|x| b.contains(x)));
            }
        }
        assert!(sets[0].iter().all(|x| !sets.iter().all(|s| s.contains(x))));
        assert_eq!(sets.len(), 3);
    }

    #[test]
    fn paths_and_complete_bipartite() {
        assert_eq!(bg(Graph::path(5)).is_bi_helly(None, DEFAULT_CLIQUE_CAP).status, HellyStatus::Holds);
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        assert_eq!(bg(Graph::from_edges(6, &edges)).is_bi_helly(None, DEFAULT_CLIQUE_CAP).status, HellyStatus::Holds);
    }

    #[test]
    fn residues_and_uniform_distance() {
        let p = bg(Graph::path(3));
        assert_eq!(p.residue(&[0, 2]), vec![1]);
        let p5 = bg(Graph::path(5));
        assert_eq!(p5.uniform_distance(&[0], &[4]), Some(4));
        let c = bg(Graph::cycle(6));
        assert_eq!(c.uniform_distance(&[1, 3], &[1, 5]), None);
    }

    #[test]
    fn path_geodesic() {
        let p5 = bg(Graph::path(5));
        let seq = p5.directed_geodesic(&[0], &[4], Reach::All).unwrap();
        assert_eq!(seq, vec![vec![0], vec![1], vec![2], vec![3], vec![4]]);
        let star = bg(Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]));
        let seq = star.directed_geodesic(&[1], &[2], Reach::All).unwrap();
        assert_eq!(seq, vec![vec![1], vec![0], vec![2]]);
        assert!(matches!(p5.directed_geodesic(&[0], &[1], Reach::All), Err(BiHellyError::NotUniform)));
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(BipartiteGraph::new(Graph::cycle(5)), Err(BiHellyError::NotBipartite)));
        assert!(matches!(BipartiteGraph::new(Graph::from_edges(4, &[(0, 1)])), Err(BiHellyError::Disconnected)));
        let g = BipartiteGraph::from_json(r#"{"vertices": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g.diameter(), 2);
    }
}
