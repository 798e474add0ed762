//! Coxeter diagrams: parsing, induced subdiagrams, shape predicates,
//! domination and family classification.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Errors raised while building or parsing a diagram.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("edge {0}-{1} has label {2}; labels must be integers >= 3")]
    LabelTooSmall(String, String, u32),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("loop at vertex {0:?}")]
    Loop(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
}

/// A finite simple graph with integer edge labels `m >= 3`. Absent edges
/// mean `m = 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoxeterDiagram {
    names: Vec<String>,
    m: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    vertices: Vec<String>,
    edges: Vec<(String, String, u32)>,
}

impl CoxeterDiagram {
    /// Builds a diagram from vertex names and index-based edges.
    pub fn new(
        names: Vec<String>,
        edges: &[(usize, usize, u32)],
    ) -> Result<Self, DiagramError> {
        let n = names.len();
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(DiagramError::DuplicateVertex(name.clone()));
            }
        }
        let mut m = vec![vec![2; n]; n];
        for &(a, b, label) in edges {
            if a >= n || b >= n {
                return Err(DiagramError::Malformed(format!("edge index {a}-{b} out of range")));
            }
            if a == b {
                return Err(DiagramError::Loop(names[a].clone()));
            }
            if label < 3 {
                return Err(DiagramError::LabelTooSmall(names[a].clone(), names[b].clone(), label));
            }
            if m[a][b] != 2 {
                return Err(DiagramError::DuplicateEdge(names[a].clone(), names[b].clone()));
            }
            m[a][b] = label;
            m[b][a] = label;
        }
        Ok(CoxeterDiagram { names, m })
    }

    /// Builds a diagram from names and name-based edges.
    pub fn from_named(
        names: &[&str],
        edges: &[(&str, &str, u32)],
    ) -> Result<Self, DiagramError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let find = |s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| DiagramError::UnknownVertex(s.to_string()))
        };
        let mut idx = Vec::with_capacity(edges.len());
        for &(a, b, l) in edges {
            idx.push((find(a)?, find(b)?, l));
        }
        Self::new(names, &idx)
    }

    /// Linear diagram `s1 - s2 - ... ` with the given consecutive labels.
    pub fn linear(labels: &[u32]) -> Self {
        let n = labels.len() + 1;
        let edges: Vec<_> = labels.iter().enumerate().map(|(i, &l)| (i, i + 1, l)).collect();
        Self::new(default_names(n), &edges).expect("valid linear diagram")
    }

    /// Diagram with the given number of vertices and no edges.
    pub fn discrete(n: usize) -> Self {
        Self::new(default_names(n), &[]).expect("valid")
    }

    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let file: DiagramFile =
            serde_json::from_str(text).map_err(|e| DiagramError::Malformed(e.to_string()))?;
        let names: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str, u32)> =
            file.edges.iter().map(|(a, b, l)| (a.as_str(), b.as_str(), *l)).collect();
        Self::from_named(&names, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("serializable")
    }

    pub fn to_value(&self) -> serde_json::Value {
        let file = DiagramFile {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b, l)| (self.names[a].clone(), self.names[b].clone(), l))
                .collect(),
        };
        serde_json::to_value(file).expect("serializable")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    /// The label `m(i, j)`; 2 for non-adjacent distinct vertices, 1 on the
    /// diagonal.
    pub fn label(&self, i: usize, j: usize) -> u32 {
        if i == j {
            1
        } else {
            self.m[i][j]
        }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.m[i][j] >= 3
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.adjacent(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Edges `(i, j, m)` with `i < j`, in index order.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.m[i][j] >= 3 {
                    out.push((i, j, self.m[i][j]));
                }
            }
        }
        out
    }

    /// Induced subdiagram on `vs`; vertices keep the order of `self`.
    pub fn induced(&self, vs: &[usize]) -> CoxeterDiagram {
        let mut vs: Vec<usize> = vs.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let names = vs.iter().map(|&i| self.names[i].clone()).collect();
        let mut edges = Vec::new();
        for (a, &i) in vs.iter().enumerate() {
            for (b, &j) in vs.iter().enumerate().skip(a + 1) {
                if self.adjacent(i, j) {
                    edges.push((a, b, self.m[i][j]));
                }
            }
        }
        CoxeterDiagram::new(names, &edges).expect("induced diagram is valid")
    }

    /// Induced subdiagram on named vertices.
    pub fn induced_named(&self, vs: &[&str]) -> Result<CoxeterDiagram, DiagramError> {
        let mut idx = Vec::with_capacity(vs.len());
        for v in vs {
            idx.push(self.index_of(v).ok_or_else(|| DiagramError::UnknownVertex(v.to_string()))?);
        }
        Ok(self.induced(&idx))
    }

    /// Connected components of the subgraph induced on `mask`, each sorted.
    pub fn components_within(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if !mask[start] || seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                k += 1;
                for v in self.neighbors(u) {
                    if mask[v] && !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.len() <= 1 || self.components_within(&vec![true; self.len()]).len() == 1
    }

    /// Whether the vertex subset induces a connected subdiagram.
    pub fn subset_connected(&self, vs: &[usize]) -> bool {
        if vs.is_empty() {
            return false;
        }
        let mut mask = vec![false; self.len()];
        for &v in vs {
            mask[v] = true;
        }
        self.components_within(&mask).len() == 1
    }

    /// Shortest path between two vertices as a vertex list.
    pub fn path_between(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let n = self.len();
        let mut prev = vec![usize::MAX; n];
        prev[a] = a;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for v in self.neighbors(u) {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[b] == usize::MAX {
            return None;
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Graph distances from `a` (usize::MAX when unreachable).
    pub fn distances_from(&self, a: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[a] = 0;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn shape(&self) -> Shape {
        let n = self.len();
        let valence: Vec<usize> = (0..n).map(|i| self.degree(i)).collect();
        let edge_count = valence.iter().sum::<usize>() / 2;
        let is_tree = n >= 1 && self.is_connected() && edge_count + 1 == n;
        let leaves: Vec<usize> = (0..n).filter(|&i| valence[i] == 1).collect();
        let is_linear = is_tree && (n <= 1 || leaves.len() == 2);
        let is_tripod = is_tree
            && valence.iter().filter(|&&v| v == 3).count() == 1
            && valence.iter().all(|&v| v <= 3);
        Shape { is_tree, is_linear, is_tripod, valence, leaves }
    }

    /// For a linear diagram, its vertices from one end to the other, starting
    /// at the lower-indexed leaf.
    pub fn linear_order(&self) -> Option<Vec<usize>> {
        let shape = self.shape();
        if !shape.is_linear {
            return None;
        }
        if self.len() == 1 {
            return Some(vec![0]);
        }
        self.path_between(shape.leaves[0], shape.leaves[1])
    }

    /// Edge labels along a linear order.
    pub fn labels_along(&self, order: &[usize]) -> Vec<u32> {
        order.windows(2).map(|w| self.label(w[0], w[1])).collect()
    }

    /// Classification tags; see [`classify_family`].
    pub fn classify(&self) -> Classification {
        classify_family(self)
    }
}

impl fmt::Debug for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

/// Shape predicates of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub is_tree: bool,
    pub is_linear: bool,
    pub is_tripod: bool,
    pub valence: Vec<usize>,
    pub leaves: Vec<usize>,
}

/// Returns the lexicographically least bijection `f` (as `f[i]` for vertex
/// `i` of `d`) that is a graph isomorphism onto `d2` with
/// `label(e) >= label(f(e))` on every edge.
pub fn dominates(d: &CoxeterDiagram, d2: &CoxeterDiagram) -> Option<Vec<usize>> {
    let n = d.len();
    if n != d2.len() || d.edges().len() != d2.edges().len() {
        return None;
    }
    let deg1: Vec<usize> = (0..n).map(|i| d.degree(i)).collect();
    let deg2: Vec<usize> = (0..n).map(|i| d2.degree(i)).collect();
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        i: usize,
        d: &CoxeterDiagram,
        d2: &CoxeterDiagram,
        deg1: &[usize],
        deg2: &[usize],
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == f.len() {
            return true;
        }
        for j in 0..f.len() {
            if used[j] || deg1[i] != deg2[j] {
                continue;
            }
            let ok = (0..i).all(|k| {
                let a = d.adjacent(i, k);
                let b = d2.adjacent(j, f[k]);
                a == b && (!a || d.label(i, k) >= d2.label(j, f[k]))
            });
            if !ok {
                continue;
            }
            f[i] = j;
            used[j] = true;
            if rec(i + 1, d, d2, deg1, deg2, f, used) {
                return true;
            }
            used[j] = false;
        }
        f[i] = usize::MAX;
        false
    }
    if rec(0, d, d2, &deg1, &deg2, &mut f, &mut used) {
        Some(f)
    } else {
        None
    }
}

/// Label-preserving isomorphism test.
pub fn isomorphic(d: &CoxeterDiagram, d2: &CoxeterDiagram) -> bool {
    d.len() == d2.len() && d.edges().len() == d2.edges().len() && exact_iso(d, d2)
}

fn exact_iso(d: &CoxeterDiagram, d2: &CoxeterDiagram) -> bool {
    let n = d.len();
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(i: usize, d: &CoxeterDiagram, d2: &CoxeterDiagram, f: &mut [usize], used: &mut [bool]) -> bool {
        if i == f.len() {
            return true;
        }
        for j in 0..f.len() {
            if used[j] || d.degree(i) != d2.degree(j) {
                continue;
            }
            if (0..i).all(|k| d.label(i, k) == d2.label(j, f[k])) {
                f[i] = j;
                used[j] = true;
                if rec(i + 1, d, d2, f, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    rec(0, d, d2, &mut f, &mut used)
}

/// Canonical string for a labeled diagram up to label-preserving
/// isomorphism (minimum over all vertex orderings of the label matrix).
/// Exponential; meant for diagrams with at most 8 vertices.
pub fn canonical_key(d: &CoxeterDiagram) -> Vec<u32> {
    let n = d.len();
    let mut best: Option<Vec<u32>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        d: &CoxeterDiagram,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        cur: &mut Vec<u32>,
        best: &mut Option<Vec<u32>>,
    ) {
        let n = d.len();
        if let Some(b) = best.as_ref() {
            if cur.as_slice() > &b[..cur.len()] {
                return;
            }
        }
        if perm.len() == n {
            if best.as_ref().is_none_or(|b| *cur < *b) {
                *best = Some(cur.clone());
            }
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let before = cur.len();
            for &u in perm.iter() {
                cur.push(d.label(u, v));
            }
            perm.push(v);
            used[v] = true;
            rec(d, perm, used, cur, best);
            used[v] = false;
            perm.pop();
            cur.truncate(before);
        }
    }
    let mut cur = vec![n as u32];
    rec(d, &mut perm, &mut used, &mut cur, &mut best);
    best.unwrap_or_default()
}

/// A family or type name for a connected diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyTag {
    A(usize),
    B(usize),
    D(usize),
    I2(u32),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    /// Linear, one edge labeled 4 with `r` and `s` label-3 edges on its two
    /// sides; stored with `r <= s`.
    F(usize, usize),
    /// Linear, one edge labeled 5; stored with `r >= s`.
    H(usize, usize),
    /// Tripod with arms of `r >= s >= t` edges, all labels 3.
    E(usize, usize, usize),
    CTilde(usize),
    BTilde(usize),
    DTilde(usize),
    ATilde(usize),
    E6Tilde,
    E7Tilde,
    E8Tilde,
    F4Tilde,
    G2Tilde,
    Other,
}

impl FamilyTag {
    pub fn f(r: usize, s: usize) -> Self {
        FamilyTag::F(r.min(s), r.max(s))
    }

    pub fn h(r: usize, s: usize) -> Self {
        FamilyTag::H(r.max(s), r.min(s))
    }

    pub fn e(r: usize, s: usize, t: usize) -> Self {
        let mut v = [r, s, t];
        v.sort_unstable_by(|a, b| b.cmp(a));
        FamilyTag::E(v[0], v[1], v[2])
    }

    /// True for the irreducible spherical types.
    pub fn is_spherical(&self) -> bool {
        matches!(
            self,
            FamilyTag::A(_)
                | FamilyTag::B(_)
                | FamilyTag::D(_)
                | FamilyTag::I2(_)
                | FamilyTag::E6
                | FamilyTag::E7
                | FamilyTag::E8
                | FamilyTag::F4
                | FamilyTag::H3
                | FamilyTag::H4
        )
    }

    pub fn is_reduction_family(&self) -> bool {
        matches!(self, FamilyTag::F(..) | FamilyTag::H(..) | FamilyTag::E(..))
    }

    /// The standard diagram of this tag, with vertices `s1, s2, ...`.
    pub fn diagram(&self) -> Option<CoxeterDiagram> {
        let line3 = |k: usize| vec![3u32; k];
        Some(match *self {
            FamilyTag::A(n) if n >= 1 => CoxeterDiagram::linear(&line3(n - 1)),
            FamilyTag::B(n) if n >= 2 => {
                let mut l = line3(n - 2);
                l.push(4);
                CoxeterDiagram::linear(&l)
            }
            FamilyTag::D(n) if n >= 4 => tripod_diagram(&[vec![3], vec![3], line3(n - 3)]),
            FamilyTag::I2(m) if m >= 3 => CoxeterDiagram::linear(&[m]),
            FamilyTag::E6 => return FamilyTag::E(2, 2, 1).diagram(),
            FamilyTag::E7 => return FamilyTag::E(3, 2, 1).diagram(),
            FamilyTag::E8 => return FamilyTag::E(4, 2, 1).diagram(),
            FamilyTag::F4 => CoxeterDiagram::linear(&[3, 4, 3]),
            FamilyTag::H3 => CoxeterDiagram::linear(&[5, 3]),
            FamilyTag::H4 => CoxeterDiagram::linear(&[5, 3, 3]),
            FamilyTag::F(r, s) => {
                let mut l = line3(r);
                l.push(4);
                l.extend(line3(s));
                CoxeterDiagram::linear(&l)
            }
            FamilyTag::H(r, s) => {
                let mut l = line3(r);
                l.push(5);
                l.extend(line3(s));
                CoxeterDiagram::linear(&l)
            }
            FamilyTag::E(r, s, t) if t >= 1 => tripod_diagram(&[line3(r), line3(s), line3(t)]),
            FamilyTag::CTilde(n) if n >= 2 => {
                let mut l = vec![4];
                l.extend(line3(n - 2));
                l.push(4);
                CoxeterDiagram::linear(&l)
            }
            FamilyTag::BTilde(n) if n >= 3 => {
                let mut arm = line3(n - 3);
                arm.push(4);
                tripod_diagram(&[vec![3], vec![3], arm])
            }
            FamilyTag::DTilde(n) if n >= 4 => dtilde_diagram(n),
            FamilyTag::ATilde(n) if n >= 2 => {
                let k = n + 1;
                let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k, 3)).collect();
                CoxeterDiagram::new(default_names(k), &edges).expect("cycle")
            }
            FamilyTag::E6Tilde => return FamilyTag::E(2, 2, 2).diagram(),
            FamilyTag::E7Tilde => return FamilyTag::E(3, 3, 1).diagram(),
            FamilyTag::E8Tilde => return FamilyTag::E(5, 2, 1).diagram(),
            FamilyTag::F4Tilde => CoxeterDiagram::linear(&[3, 3, 4, 3]),
            FamilyTag::G2Tilde => CoxeterDiagram::linear(&[6, 3]),
            _ => return None,
        })
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::A(n) => write!(f, "A_{n}"),
            FamilyTag::B(n) => write!(f, "B_{n}"),
            FamilyTag::D(n) => write!(f, "D_{n}"),
            FamilyTag::I2(m) => write!(f, "I_2({m})"),
            FamilyTag::E6 => write!(f, "E_6"),
            FamilyTag::E7 => write!(f, "E_7"),
            FamilyTag::E8 => write!(f, "E_8"),
            FamilyTag::F4 => write!(f, "F_4"),
            FamilyTag::H3 => write!(f, "H_3"),
            FamilyTag::H4 => write!(f, "H_4"),
            FamilyTag::F(r, s) => write!(f, "F_{{{r},{s}}}"),
            FamilyTag::H(r, s) => write!(f, "H_{{{r},{s}}}"),
            FamilyTag::E(r, s, t) => write!(f, "E_{{{r},{s},{t}}}"),
            FamilyTag::CTilde(n) => write!(f, "C~_{n}"),
            FamilyTag::BTilde(n) => write!(f, "B~_{n}"),
            FamilyTag::DTilde(n) => write!(f, "D~_{n}"),
            FamilyTag::ATilde(n) => write!(f, "A~_{n}"),
            FamilyTag::E6Tilde => write!(f, "E~_6"),
            FamilyTag::E7Tilde => write!(f, "E~_7"),
            FamilyTag::E8Tilde => write!(f, "E~_8"),
            FamilyTag::F4Tilde => write!(f, "F~_4"),
            FamilyTag::G2Tilde => write!(f, "G~_2"),
            FamilyTag::Other => write!(f, "other"),
        }
    }
}

/// Tripod with the given arms; each arm lists labels from the center
/// outwards. The center is `s1`.
pub fn tripod_diagram(arms: &[Vec<u32>]) -> CoxeterDiagram {
    let mut edges = Vec::new();
    let mut next = 1;
    for arm in arms {
        let mut prev = 0;
        for &l in arm {
            edges.push((prev, next, l));
            prev = next;
            next += 1;
        }
    }
    CoxeterDiagram::new(default_names(next), &edges).expect("tripod")
}

/// D̃_n with n+1 vertices: leaves a1,a2 at b1, path b1..bk, leaves c1,c2 at bk.
fn dtilde_diagram(n: usize) -> CoxeterDiagram {
    let k = n - 3;
    // order: a1, a2, b1..bk, c1, c2
    let total = k + 4;
    let mut edges = vec![(0, 2, 3), (1, 2, 3)];
    for i in 0..k - 1 {
        edges.push((2 + i, 3 + i, 3));
    }
    edges.push((1 + k, 2 + k, 3));
    edges.push((1 + k, 3 + k, 3));
    CoxeterDiagram::new(default_names(total), &edges).expect("dtilde")
}

/// All names under which a diagram is recognized; F, H and E families first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tags: Vec<FamilyTag>,
}

impl Classification {
    pub fn contains(&self, t: FamilyTag) -> bool {
        self.tags.contains(&t)
    }

    pub fn primary(&self) -> FamilyTag {
        self.tags[0]
    }

    pub fn is_spherical(&self) -> bool {
        self.tags.iter().any(FamilyTag::is_spherical)
    }

    pub fn reduction_family(&self) -> Option<FamilyTag> {
        self.tags.iter().copied().find(FamilyTag::is_reduction_family)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.tags.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", names.join(" = "))
    }
}

/// Recognizes the families and standard spherical/affine types.
pub fn classify_family(d: &CoxeterDiagram) -> Classification {
    let mut tags = classify_tags(d);
    if tags.is_empty() {
        tags.push(FamilyTag::Other);
    }
    Classification { tags }
}

fn classify_tags(d: &CoxeterDiagram) -> Vec<FamilyTag> {
    let n = d.len();
    let mut tags = Vec::new();
    if n == 0 || !d.is_connected() {
        return tags;
    }
    if n == 1 {
        tags.push(FamilyTag::A(1));
        return tags;
    }
    let shape = d.shape();
    if !shape.is_tree {
        let all3 = d.edges().iter().all(|e| e.2 == 3);
        if all3 && shape.valence.iter().all(|&v| v == 2) {
            tags.push(FamilyTag::ATilde(n - 1));
        }
        return tags;
    }
    if shape.is_linear {
        let order = d.linear_order().expect("linear");
        let labels = d.labels_along(&order);
        let big: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] >= 4).collect();
        if n == 2 {
            let m = labels[0];
            match m {
                4 => tags.push(FamilyTag::f(0, 0)),
                5 => tags.push(FamilyTag::h(0, 0)),
                _ => {}
            }
            if m == 3 {
                tags.push(FamilyTag::A(2));
            }
            if m == 4 {
                tags.push(FamilyTag::B(2));
            }
            tags.push(FamilyTag::I2(m));
            return tags;
        }
        match big.len() {
            0 => tags.push(FamilyTag::A(n)),
            1 => {
                let k = big[0];
                let (r, s) = (k, labels.len() - 1 - k);
                let (lo, hi) = (r.min(s), r.max(s));
                match labels[k] {
                    4 => {
                        tags.push(FamilyTag::f(r, s));
                        if lo == 0 {
                            tags.push(FamilyTag::B(n));
                        }
                        if (lo, hi) == (1, 1) {
                            tags.push(FamilyTag::F4);
                        }
                        if (lo, hi) == (1, 2) {
                            tags.push(FamilyTag::F4Tilde);
                        }
                    }
                    5 => {
                        tags.push(FamilyTag::h(r, s));
                        if (lo, hi) == (0, 1) {
                            tags.push(FamilyTag::H3);
                        }
                        if (lo, hi) == (0, 2) {
                            tags.push(FamilyTag::H4);
                        }
                    }
                    6 if (lo, hi) == (0, 1) => tags.push(FamilyTag::G2Tilde),
                    _ => {}
                }
            }
            2 => {
                let last = labels.len() - 1;
                if big == [0, last] && labels[0] == 4 && labels[last] == 4 {
                    tags.push(FamilyTag::CTilde(n - 1));
                }
            }
            _ => {}
        }
        return tags;
    }
    if shape.is_tripod {
        let center = (0..n).find(|&i| shape.valence[i] == 3).expect("tripod center");
        let arms = tripod_arms(d, center);
        let lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
        let labels: Vec<Vec<u32>> = arms
            .iter()
            .map(|a| {
                let mut prev = center;
                a.iter()
                    .map(|&v| {
                        let l = d.label(prev, v);
                        prev = v;
                        l
                    })
                    .collect()
            })
            .collect();
        let all3 = labels.iter().flatten().all(|&l| l == 3);
        if all3 {
            let tag = FamilyTag::e(lens[0], lens[1], lens[2]);
            tags.push(tag);
            if let FamilyTag::E(r, s, t) = tag {
                match (r, s, t) {
                    (r, 1, 1) => tags.push(FamilyTag::D(r + 3)),
                    (2, 2, 1) => tags.push(FamilyTag::E6),
                    (3, 2, 1) => tags.push(FamilyTag::E7),
                    (4, 2, 1) => tags.push(FamilyTag::E8),
                    (2, 2, 2) => tags.push(FamilyTag::E6Tilde),
                    (3, 3, 1) => tags.push(FamilyTag::E7Tilde),
                    (5, 2, 1) => tags.push(FamilyTag::E8Tilde),
                    _ => {}
                }
            }
        } else {
            // B̃_n: two arms of length 1, the remaining arm ends with a 4.
            let big: Vec<(usize, usize)> = labels
                .iter()
                .enumerate()
                .flat_map(|(a, ls)| ls.iter().enumerate().filter(|(_, &l)| l != 3).map(move |(i, _)| (a, i)))
                .collect();
            if big.len() == 1 {
                let (a, i) = big[0];
                let others_short = (0..3).filter(|&b| b != a).all(|b| lens[b] == 1);
                if labels[a][i] == 4 && i + 1 == lens[a] && others_short {
                    tags.push(FamilyTag::BTilde(lens[a] + 2));
                }
            }
        }
        return tags;
    }
    // D̃_n: exactly two branch vertices of valence 3 (or one of valence 4),
    // each carrying two leaves, all labels 3.
    let all3 = d.edges().iter().all(|e| e.2 == 3);
    if !all3 {
        return tags;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| shape.valence[i] >= 3).collect();
    let leaf_count = |v: usize| d.neighbors(v).filter(|&u| shape.valence[u] == 1).count();
    if branch.len() == 1 && shape.valence[branch[0]] == 4 && n == 5 {
        tags.push(FamilyTag::DTilde(4));
    } else if branch.len() == 2
        && branch.iter().all(|&b| shape.valence[b] == 3 && leaf_count(b) == 2)
        && shape.valence.iter().all(|&v| v <= 3)
    {
        tags.push(FamilyTag::DTilde(n - 1));
    }
    tags
}

/// Arms of a tripod from its center, each listed outward, sorted by length
/// descending then by first vertex.
pub fn tripod_arms(d: &CoxeterDiagram, center: usize) -> Vec<Vec<usize>> {
    let mut arms: Vec<Vec<usize>> = d
        .neighbors(center)
        .map(|first| {
            let mut arm = vec![first];
            let mut prev = center;
            let mut cur = first;
            loop {
                let next = d.neighbors(cur).find(|&v| v != prev);
                match next {
                    Some(v) => {
                        arm.push(v);
                        prev = cur;
                        cur = v;
                    }
                    None => break,
                }
            }
            arm
        })
        .collect();
    arms.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    arms
}

/// All vertex subsets inducing connected subdiagrams, ordered by size then
/// lexicographically.
pub fn connected_subsets(d: &CoxeterDiagram) -> Vec<Vec<usize>> {
    let n = d.len();
    assert!(n < 64, "diagram too large for subset enumeration");
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if d.subset_connected(&vs) {
            out.push(vs);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Result of the ABI test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbiVerdict {
    pub holds: bool,
    /// The smallest, lexicographically least irreducible spherical induced
    /// subdiagram not of type A, B or I_2.
    pub witness: Option<Vec<usize>>,
    pub witness_type: Option<FamilyTag>,
}

/// Whether every induced irreducible spherical subdiagram has type A, B or
/// I_2.
#[allow(non_snake_case)]
pub fn is_ABI(d: &CoxeterDiagram) -> AbiVerdict {
    for vs in connected_subsets(d) {
        let sub = d.induced(&vs);
        let c = classify_family(&sub);
        if let Some(t) = c.tags.iter().find(|t| t.is_spherical()) {
            let abi = c
                .tags
                .iter()
                .any(|t| matches!(t, FamilyTag::A(_) | FamilyTag::B(_) | FamilyTag::I2(_)));
            if !abi {
                return AbiVerdict { holds: false, witness: Some(vs), witness_type: Some(*t) };
            }
        }
    }
    AbiVerdict { holds: true, witness: None, witness_type: None }
}

/// Spherical test for arbitrary diagrams: every connected component is
/// spherical.
pub fn is_spherical(d: &CoxeterDiagram) -> bool {
    d.components_within(&vec![true; d.len()])
        .iter()
        .all(|c| classify_family(&d.induced(c)).is_spherical())
}

/// Non-isomorphic unlabeled trees on `n` vertices as edge lists, grown leaf
/// by leaf and deduplicated by a canonical rooted encoding.
pub fn unlabeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for k in 1..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..k {
                let mut e = t.clone();
                e.push((v, k));
                let key = tree_canonical(k + 1, &e);
                if seen.insert(key) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    level
}

/// Canonical code of an unrooted tree (minimum over centers of the AHU
/// rooted encoding).
pub fn tree_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // find centers by peeling leaves
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut remaining = n;
    let mut layer: Vec<usize> = (0..n).filter(|&i| deg[i] <= 1).collect();
    let mut removed = vec![false; n];
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &u in &adj[v] {
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
    let centers: Vec<usize> = (0..n).filter(|&i| !removed[i]).collect();
    fn enc(v: usize, p: usize, adj: &[Vec<usize>]) -> String {
        let mut kids: Vec<String> = adj[v].iter().filter(|&&u| u != p).map(|&u| enc(u, v, adj)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    centers.iter().map(|&c| enc(c, usize::MAX, &adj)).min().unwrap_or_default()
}

/// All edge labelings of all non-isomorphic trees with `n` vertices, labels
/// drawn from `labels`.
pub fn labeled_trees(n: usize, labels: &[u32]) -> Vec<CoxeterDiagram> {
    let mut out = Vec::new();
    for shape in unlabeled_trees(n) {
        let e = shape.len();
        let total = labels.len().pow(e as u32);
        for code in 0..total {
            let mut c = code;
            let edges: Vec<(usize, usize, u32)> = shape
                .iter()
                .map(|&(a, b)| {
                    let l = labels[c % labels.len()];
                    c /= labels.len();
                    (a, b, l)
                })
                .collect();
            out.push(CoxeterDiagram::new(default_names(n), &edges).expect("tree"));
        }
    }
    out
}
