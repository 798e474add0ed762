//! Finite simplicial complexes of type `S`: Coxeter complexes, relative
//! complexes, links, vertex orders, subdivisions, special cycles, the
//! thickening and the hypothesis battery of the contractibility criterion.

use std::collections::{BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::coxeter::GroupTable;
use crate::diagram::CoxeterDiagram;
use crate::graph::Graph;
use crate::poset::{PosetError, Property, RankedPoset, Verdict};
use crate::taxonomy::{enumerate_like, is_admissible, LikeQuery};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("empty type set")]
    EmptyTypes,
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("type {0} out of range")]
    UnknownType(usize),
    #[error("vertex {0} has an unknown type")]
    BadVertexType(usize),
    #[error("chamber {0} does not have exactly one vertex of each type")]
    BadChamber(usize),
    #[error("order does not list every type exactly once")]
    BadOrder,
    #[error("layout mismatch: {0}")]
    Layout(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("relation is not a partial order (witness {0:?})")]
    NotPartialOrder([usize; 3]),
    #[error("complex carries no diagram")]
    NoDiagram,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Provenance of simple connectivity; it is never computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Connectivity {
    Known { simply_connected: bool, reason: String },
    Assumed,
}

impl Connectivity {
    fn known(sc: bool, reason: &str) -> Self {
        Connectivity::Known { simply_connected: sc, reason: reason.to_string() }
    }

    pub fn is_simply_connected(&self) -> Option<bool> {
        match self {
            Connectivity::Known { simply_connected, .. } => Some(*simply_connected),
            Connectivity::Assumed => None,
        }
    }
}

/// A pure simplicial complex whose chambers carry one vertex of each type.
/// `chambers[c][t]` is the vertex of type `t` in chamber `c`.
#[derive(Clone, Debug)]
pub struct TypedComplex {
    types: Vec<String>,
    diagram: Option<CoxeterDiagram>,
    /// Diagram vertex of each type, when a diagram is attached.
    type_gen: Vec<usize>,
    vertex_type: Vec<usize>,
    labels: Vec<String>,
    chambers: Vec<Vec<usize>>,
    adj: Vec<FixedBitSet>,
    chambers_of: Vec<Vec<usize>>,
    origin: Option<Vec<usize>>,
    connectivity: Connectivity,
}

impl TypedComplex {
    /// Validates and deduplicates the chambers; adjacency is derived.
    pub fn new(types: Vec<String>, vertex_type: Vec<usize>, chambers: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        let nt = types.len();
        if nt == 0 {
            return Err(ComplexError::EmptyTypes);
        }
        if let Some(v) = vertex_type.iter().position(|&t| t >= nt) {
            return Err(ComplexError::BadVertexType(v));
        }
        let n = vertex_type.len();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (i, ch) in chambers.into_iter().enumerate() {
            let ok = ch.len() == nt && ch.iter().enumerate().all(|(t, &v)| v < n && vertex_type[v] == t);
            if !ok {
                return Err(ComplexError::BadChamber(i));
            }
            if seen.insert(ch.clone()) {
                kept.push(ch);
            }
        }
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        let mut chambers_of = vec![Vec::new(); n];
        for (c, ch) in kept.iter().enumerate() {
            for (i, &a) in ch.iter().enumerate() {
                chambers_of[a].push(c);
                for &b in &ch[i + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        let labels = (0..n).map(|v| format!("v{v}")).collect();
        Ok(TypedComplex {
            types,
            diagram: None,
            type_gen: Vec::new(),
            vertex_type,
            labels,
            chambers: kept,
            adj,
            chambers_of,
            origin: None,
            connectivity: Connectivity::Assumed,
        })
    }

    /// A single chamber with one vertex per type.
    pub fn simplex(types: Vec<String>) -> Result<Self, ComplexError> {
        let n = types.len();
        let mut c = Self::new(types, (0..n).collect(), vec![(0..n).collect()])?;
        c.connectivity = Connectivity::known(true, "simplex");
        Ok(c)
    }

    pub fn with_diagram(mut self, d: CoxeterDiagram, type_gen: Vec<usize>) -> Result<Self, ComplexError> {
        if type_gen.len() != self.types.len() {
            return Err(ComplexError::Layout("one generator per type required".into()));
        }
        if let Some(&g) = type_gen.iter().find(|&&g| g >= d.len()) {
            return Err(ComplexError::UnknownType(g));
        }
        self.diagram = Some(d);
        self.type_gen = type_gen;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        self.labels = labels;
        self
    }

    pub fn with_connectivity(mut self, c: Connectivity) -> Self {
        self.connectivity = c;
        self
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn type_index(&self, name: &str) -> Option<usize> {
        self.types.iter().position(|t| t == name)
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertex_type.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_type.is_empty()
    }

    pub fn vertex_type(&self, v: usize) -> usize {
        self.vertex_type[v]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertices_of_type(&self, t: usize) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.vertex_type[v] == t).collect()
    }

    pub fn chambers(&self) -> &[Vec<usize>] {
        &self.chambers
    }

    pub fn chambers_containing(&self, v: usize) -> &[usize] {
        &self.chambers_of[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn diagram(&self) -> Option<&CoxeterDiagram> {
        self.diagram.as_ref()
    }

    /// The diagram generator `s` of the type `ŝ`.
    pub fn type_generator(&self, t: usize) -> Option<usize> {
        self.diagram.as_ref().map(|_| self.type_gen[t])
    }

    /// Vertex of the parent complex this vertex came from.
    pub fn origin(&self, v: usize) -> Option<usize> {
        self.origin.as_ref().map(|o| o[v])
    }

    pub fn connectivity(&self) -> &Connectivity {
        &self.connectivity
    }

    /// Whether the vertices lie in a common chamber.
    pub fn spans_simplex(&self, vs: &[usize]) -> bool {
        match vs.split_first() {
            None => true,
            Some((&first, rest)) => self.chambers_of[first]
                .iter()
                .any(|&c| rest.iter().all(|&v| self.chambers[c][self.vertex_type[v]] == v)),
        }
    }

    /// The 1-skeleton.
    pub fn graph(&self) -> Graph {
        let mut edges = Vec::new();
        for a in 0..self.len() {
            for b in self.adj[a].ones().filter(|&b| b > a) {
                edges.push((a, b));
            }
        }
        Graph::from_edges(self.len(), &edges)
    }

    /// Every set of pairwise adjacent vertices spans a simplex. The witness
    /// is the first clique found that does not.
    pub fn is_flag(&self) -> Verdict {
        fn grow(c: &TypedComplex, clique: &mut Vec<usize>, cand: &FixedBitSet) -> Option<Vec<usize>> {
            if clique.len() >= 3 && !c.spans_simplex(clique) {
                return Some(clique.clone());
            }
            let last = *clique.last().expect("nonempty");
            for v in cand.ones().filter(|&v| v > last) {
                let mut next = cand.clone();
                next.intersect_with(&c.adj[v]);
                clique.push(v);
                if let Some(w) = grow(c, clique, &next) {
                    return Some(w);
                }
                clique.pop();
            }
            None
        }
        for v in 0..self.len() {
            if let Some(w) = grow(self, &mut vec![v], &self.adj[v].clone()) {
                return Verdict { holds: false, witness: Some(w) };
            }
        }
        Verdict { holds: true, witness: None }
    }

    /// Induced subcomplex on the vertices whose type is in `keep`; chambers
    /// are the traces of the chambers of `self`.
    pub fn relative_complex(&self, keep: &[usize]) -> Result<TypedComplex, ComplexError> {
        if keep.is_empty() {
            return Err(ComplexError::EmptyTypes);
        }
        if let Some(&t) = keep.iter().find(|&&t| t >= self.types.len()) {
            return Err(ComplexError::UnknownType(t));
        }
        let keep: Vec<usize> = keep.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut new_type = vec![usize::MAX; self.types.len()];
        for (i, &t) in keep.iter().enumerate() {
            new_type[t] = i;
        }
        let old: Vec<usize> = (0..self.len()).filter(|&v| new_type[self.vertex_type[v]] != usize::MAX).collect();
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let vertex_type = old.iter().map(|&v| new_type[self.vertex_type[v]]).collect();
        let chambers = self.chambers.iter().map(|ch| keep.iter().map(|&t| new_id[ch[t]]).collect()).collect();
        let types = keep.iter().map(|&t| self.types[t].clone()).collect();
        let mut c = TypedComplex::new(types, vertex_type, chambers)?;
        c.labels = old.iter().map(|&v| self.labels[v].clone()).collect();
        if let Some(d) = &self.diagram {
            c = c.with_diagram(d.clone(), keep.iter().map(|&t| self.type_gen[t]).collect())?;
        }
        c.origin = Some(old);
        if keep.len() == self.types.len() {
            c.connectivity = self.connectivity.clone();
        }
        Ok(c)
    }

    /// The link of `v` as a complex on the remaining types.
    pub fn vertex_link(&self, v: usize) -> Result<TypedComplex, ComplexError> {
        if v >= self.len() {
            return Err(ComplexError::UnknownVertex(v));
        }
        let tv = self.vertex_type[v];
        let keep: Vec<usize> = (0..self.types.len()).filter(|&t| t != tv).collect();
        let old: Vec<usize> = self.adj[v].ones().collect();
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &u) in old.iter().enumerate() {
            new_id[u] = i;
        }
        let new_type = |t: usize| if t > tv { t - 1 } else { t };
        let vertex_type = old.iter().map(|&u| new_type(self.vertex_type[u])).collect();
        let chambers = self.chambers_of[v]
            .iter()
            .map(|&c| keep.iter().map(|&t| new_id[self.chambers[c][t]]).collect())
            .collect();
        let types = keep.iter().map(|&t| self.types[t].clone()).collect();
        let mut c = TypedComplex::new(types, vertex_type, chambers)?;
        c.labels = old.iter().map(|&u| self.labels[u].clone()).collect();
        if let Some(d) = &self.diagram {
            c = c.with_diagram(d.clone(), keep.iter().map(|&t| self.type_gen[t]).collect())?;
        }
        c.origin = Some(old);
        Ok(c)
    }

    /// Orders the vertices by the total order `order` on types (listed from
    /// smallest to largest): `x < y` iff adjacent and `type(x) < type(y)`.
    pub fn order_relation(&self, order: &[usize]) -> Result<OrderedComplex, ComplexError> {
        OrderedComplex::new(self.clone(), order)
    }

    /// Searches the least vertex of the type of `x4` that is adjacent or
    /// equal to each of `x1, x2, x3`.
    pub fn complete_4cycle(&self, xs: [usize; 4]) -> Result<Option<usize>, ComplexError> {
        for &x in &xs {
            if x >= self.len() {
                return Err(ComplexError::UnknownVertex(x));
            }
        }
        let near = |a: usize, b: usize| a == b || self.adjacent(a, b);
        for i in 0..4 {
            let (a, b) = (xs[i], xs[(i + 1) % 4]);
            if !near(a, b) {
                return Err(ComplexError::NotACycle(format!("{a} and {b} are not adjacent")));
            }
        }
        let t = self.vertex_type[xs[3]];
        Ok((0..self.len()).find(|&y| self.vertex_type[y] == t && xs[..3].iter().all(|&x| near(x, y))))
    }

    fn check_layout(&self, layout: &[usize]) -> Result<(), ComplexError> {
        let nt = self.types.len();
        let distinct: BTreeSet<usize> = layout.iter().copied().collect();
        if layout.len() != nt || distinct.len() != nt || layout.iter().any(|&t| t >= nt) {
            return Err(ComplexError::Layout("layout must list every type exactly once".into()));
        }
        Ok(())
    }

    /// Diagram adjacency between the generators of two types, if a diagram
    /// is attached.
    fn gens_adjacent(&self, a: usize, b: usize) -> Option<bool> {
        self.diagram.as_ref().map(|d| d.adjacent(self.type_gen[a], self.type_gen[b]))
    }

    /// The `(b1, b2)`-subdivision. `layout` lists the types as
    /// `b1, b2, b3, .., b_{n+1}` in the D-type labeling.
    pub fn subdivide_b(&self, layout: &[usize]) -> Result<SubdividedComplex, ComplexError> {
        self.check_layout(layout)?;
        let m = layout.len();
        if m < 3 {
            return Err(ComplexError::Layout("D-type layout needs at least three types".into()));
        }
        if self.diagram.is_some() {
            let mut expect = vec![(0, 2), (1, 2)];
            expect.extend((3..m).map(|i| (i - 1, i)));
            self.check_tree_layout(layout, &expect)?;
        }
        let mut tau = vec![0u32; m];
        tau[0] = 1;
        tau[1] = 1;
        for (i, t) in tau.iter_mut().enumerate().skip(2) {
            *t = i as u32 + 1;
        }
        self.subdivide(layout, &tau, &[((0, 1), 2)])
    }

    /// The D̃-type subdivision. `layout` lists the types as
    /// `a1, a2, b1 .. bn, c1, c2`.
    pub fn subdivide_d(&self, layout: &[usize]) -> Result<SubdividedComplex, ComplexError> {
        self.check_layout(layout)?;
        let m = layout.len();
        if m < 5 {
            return Err(ComplexError::Layout("D~-type layout needs at least five types".into()));
        }
        let n = m - 4;
        if self.diagram.is_some() {
            let mut expect = vec![(0, 2), (1, 2), (m - 2, m - 3), (m - 1, m - 3)];
            expect.extend((3..m - 2).map(|i| (i - 1, i)));
            self.check_tree_layout(layout, &expect)?;
        }
        let mut tau = vec![0u32; m];
        tau[0] = 1;
        tau[1] = 1;
        for j in 0..n {
            tau[2 + j] = j as u32 + 3;
        }
        tau[m - 2] = n as u32 + 4;
        tau[m - 1] = n as u32 + 4;
        self.subdivide(layout, &tau, &[((0, 1), 2), ((m - 2, m - 1), n as u32 + 3)])
    }

    /// The generators along `layout` span exactly the tree with edges `expect`
    /// (positions in `layout`).
    fn check_tree_layout(&self, layout: &[usize], expect: &[(usize, usize)]) -> Result<(), ComplexError> {
        for i in 0..layout.len() {
            for j in i + 1..layout.len() {
                let want = expect.contains(&(i, j)) || expect.contains(&(j, i));
                if self.gens_adjacent(layout[i], layout[j]) != Some(want) {
                    return Err(ComplexError::Layout(format!(
                        "types {} and {} {} adjacent in the diagram",
                        self.types[layout[i]],
                        self.types[layout[j]],
                        if want { "must be" } else { "must not be" }
                    )));
                }
            }
        }
        Ok(())
    }

    /// Inserts a midpoint on every edge joining the types at the layout
    /// positions of each pair in `splits`; each chamber is cut along all of
    /// them.
    fn subdivide(
        &self,
        layout: &[usize],
        tau_of_pos: &[u32],
        splits: &[((usize, usize), u32)],
    ) -> Result<SubdividedComplex, ComplexError> {
        let ntau = tau_of_pos.iter().chain(splits.iter().map(|s| &s.1)).copied().max().unwrap_or(0) as usize;
        let mut tau: Vec<u32> = (0..self.len())
            .map(|v| {
                let pos = layout.iter().position(|&t| t == self.vertex_type[v]).expect("layout covers types");
                tau_of_pos[pos]
            })
            .collect();
        let mut fake: Vec<FakeVertex> = Vec::new();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut chambers = Vec::new();
        for ch in &self.chambers {
            let mids: Vec<(usize, (usize, usize))> = splits
                .iter()
                .map(|&((p, q), t)| {
                    let edge = (ch[layout[p]], ch[layout[q]]);
                    let next = self.len() + fake.len();
                    let id = *midpoint.entry(edge).or_insert_with(|| {
                        fake.push(FakeVertex { id: next, edge: [edge.0, edge.1], tau: t });
                        tau.push(t);
                        next
                    });
                    (id, (p, q))
                })
                .collect();
            // one chamber per choice of endpoint on each split edge
            for choice in 0..(1usize << splits.len()) {
                let mut out = vec![usize::MAX; ntau];
                for (pos, &t) in layout.iter().enumerate() {
                    let split = mids.iter().enumerate().find(|(_, (_, (p, q)))| pos == *p || pos == *q);
                    match split {
                        Some((k, (_, (p, _)))) => {
                            let take_first = (choice >> k) & 1 == 0;
                            if (pos == *p) == take_first {
                                out[tau_of_pos[pos] as usize - 1] = ch[t];
                            }
                        }
                        None => out[tau_of_pos[pos] as usize - 1] = ch[t],
                    }
                }
                for (k, &(id, _)) in mids.iter().enumerate() {
                    out[splits[k].1 as usize - 1] = id;
                }
                chambers.push(out);
            }
        }
        let types: Vec<String> = (1..=ntau).map(|t| t.to_string()).collect();
        let vertex_type = tau.iter().map(|&t| t as usize - 1).collect();
        let mut complex = TypedComplex::new(types, vertex_type, chambers)?;
        let mut labels = self.labels.clone();
        labels.extend(fake.iter().map(|f| format!("mid({},{})", self.labels[f.edge[0]], self.labels[f.edge[1]])));
        complex.labels = labels;
        complex.connectivity = self.connectivity.clone();
        Ok(SubdividedComplex { base: self.clone(), complex, tau, fake, real: self.len() })
    }

    /// Induced 4-cycles `x1 x2 x3 x4`, each listed once with `x1` least.
    pub fn induced_4cycles(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for x1 in 0..self.len() {
            for x3 in x1 + 1..self.len() {
                if self.adjacent(x1, x3) {
                    continue;
                }
                let mut common = self.adj[x1].clone();
                common.intersect_with(&self.adj[x3]);
                let cs: Vec<usize> = common.ones().filter(|&c| c > x1).collect();
                for (i, &x2) in cs.iter().enumerate() {
                    for &x4 in &cs[i + 1..] {
                        if !self.adjacent(x2, x4) && (x2.min(x4) > x1) {
                            out.push([x1, x2, x3, x4]);
                        }
                    }
                }
            }
        }
        // a cycle with x1 least is found once from its diagonal through x1
        out
    }

    fn require_tree(&self) -> Result<(&CoxeterDiagram, CoxeterDiagram), ComplexError> {
        let d = self.diagram.as_ref().ok_or(ComplexError::NoDiagram)?;
        let sub = d.induced(&self.type_gen);
        if !sub.shape().is_tree {
            return Err(ComplexError::Layout("type diagram is not a tree".into()));
        }
        Ok((d, sub))
    }

    /// The labeled 4-cycle condition, checked directly and through bowtie
    /// freeness over every maximal linear subdiagram.
    pub fn labeled_4cycle_check(&self) -> Result<FourCycleReport, ComplexError> {
        let (_, sub) = self.require_tree()?;
        let nt = self.types.len();
        // sub's vertex i is self.type_gen sorted; map types to sub vertices
        let mut sorted = self.type_gen.clone();
        sorted.sort_unstable();
        let sub_of_type: Vec<usize> = self.type_gen.iter().map(|g| sorted.binary_search(g).unwrap()).collect();
        let type_of_sub: Vec<usize> = (0..nt).map(|i| sub_of_type.iter().position(|&x| x == i).unwrap()).collect();
        let cycles = self.induced_4cycles();
        let mut direct = Verdict { holds: true, witness: None };
        for cyc in &cycles {
            let ts: Vec<usize> = cyc.iter().map(|&x| sub_of_type[self.vertex_type[x]]).collect();
            let span = subtree_span(&sub, &ts);
            let found = (0..self.len()).any(|y| {
                span[sub_of_type[self.vertex_type[y]]] && cyc.iter().all(|&x| self.adjacent(x, y))
            });
            if !found {
                direct = Verdict { holds: false, witness: Some(cyc.to_vec()) };
                break;
            }
        }
        let mut lemma = Verdict { holds: true, witness: None };
        let mut lemma_applicable = true;
        if let Some(d) = &self.diagram {
            lemma_applicable = is_admissible(d, &self.type_gen).map(|a| a.holds).unwrap_or(false);
        }
        for path in maximal_paths(&sub) {
            let order: Vec<usize> = path.iter().map(|&i| type_of_sub[i]).collect();
            let rel = self.relative_complex(&order)?;
            // types of rel are sorted; re-express the path order in rel's indices
            let rel_order: Vec<usize> = order.iter().map(|t| rel.type_index(&self.types[*t]).unwrap()).collect();
            let oc = rel.order_relation(&rel_order)?;
            let verdict = match oc.poset() {
                Ok(p) => p.check(Property::BowtieFree),
                Err(_) => Verdict { holds: false, witness: None },
            };
            if !verdict.holds {
                let witness = verdict.witness.map(|w| w.iter().map(|&x| rel.origin(x).unwrap()).collect());
                lemma = Verdict { holds: false, witness };
                break;
            }
        }
        let agreement = !lemma_applicable || direct.holds == lemma.holds;
        Ok(FourCycleReport { cycles: cycles.len(), direct, lemma, lemma_applicable, agreement })
    }

    /// Embedded cycles `v0 .. v_{k-1}` with `allowed[i % 2][type]`, listed
    /// once up to rotations by two and reflections.
    fn alternating_cycles(&self, len: usize, allowed: [&[bool]; 2]) -> Vec<Vec<usize>> {
        fn walk(
            c: &TypedComplex,
            len: usize,
            allowed: [&[bool]; 2],
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let pos = path.len();
            let last = *path.last().unwrap();
            if pos == len {
                if c.adjacent(last, path[0]) && path[1] < path[len - 1] {
                    out.push(path.clone());
                }
                return;
            }
            for v in c.adj[last].ones() {
                if !allowed[pos % 2][c.vertex_type[v]] || path.contains(&v) {
                    continue;
                }
                if pos % 2 == 0 && v < path[0] {
                    continue;
                }
                path.push(v);
                walk(c, len, allowed, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        for v in 0..self.len() {
            if allowed[0][self.vertex_type[v]] {
                walk(self, len, allowed, &mut vec![v], &mut out);
            }
        }
        out
    }

    fn common_neighbor(&self, vs: &[usize], type_ok: impl Fn(usize) -> bool) -> Option<usize> {
        let mut common = FixedBitSet::with_capacity(self.len());
        common.insert_range(..);
        for &v in vs {
            common.intersect_with(&self.adj[v]);
        }
        common.ones().find(|&y| type_ok(self.vertex_type[y]))
    }

    /// Special cycles of the requested kind with their center status.
    pub fn special_cycles(&self, kind: CycleKind) -> Result<Vec<SpecialCycle>, ComplexError> {
        let nt = self.types.len();
        let mut out = Vec::new();
        match kind {
            CycleKind::Special4 => {
                for s in 0..nt {
                    for t in s + 1..nt {
                        let (a, b) = (one_hot(nt, &[s]), one_hot(nt, &[t]));
                        for cyc in self.alternating_cycles(4, [&a, &b]) {
                            let center = self.common_neighbor(&cyc, |_| true);
                            out.push(SpecialCycle::new(kind, cyc, s, center, None, None));
                        }
                    }
                }
            }
            CycleKind::Special6(source) => {
                let mut seen = HashSet::new();
                for (s, leaves) in self.special6_patterns(source)? {
                    let (a, b) = (one_hot(nt, &[s]), one_hot(nt, &leaves));
                    for cyc in self.alternating_cycles(6, [&a, &b]) {
                        if !seen.insert(canonical_cycle(&cyc, 1)) {
                            continue;
                        }
                        let center = self.common_neighbor(&cyc, |_| true);
                        let quasi = self.common_neighbor(&[cyc[0], cyc[2], cyc[4]], |_| true);
                        out.push(SpecialCycle::new(kind, cyc, s, center, quasi, None));
                    }
                }
            }
            CycleKind::Tripod4 => out = self.tripod_cycles()?,
        }
        Ok(out)
    }

    /// Pairs `(base type, allowed leaf types)` for special 6-cycles.
    fn special6_patterns(&self, source: Special6Source) -> Result<Vec<(usize, Vec<usize>)>, ComplexError> {
        let d = self.diagram.as_ref().ok_or(ComplexError::NoDiagram)?;
        let type_of_gen = |g: usize| self.type_gen.iter().position(|&x| x == g);
        let mut pats: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        let mut push = |base: usize, leaves: &[usize]| {
            let (Some(s), Some(ls)) =
                (type_of_gen(base), leaves.iter().map(|&l| type_of_gen(l)).collect::<Option<Vec<_>>>())
            else {
                return;
            };
            let mut ls = ls;
            ls.sort_unstable();
            pats.insert((s, ls));
        };
        match source {
            Special6Source::Definition => {
                for b in enumerate_like(d, LikeQuery::B) {
                    let v = &b.vertices;
                    let n = v.len();
                    if n == 2 {
                        push(v[0], &[v[1]]);
                        push(v[1], &[v[0]]);
                    } else {
                        push(v[0], &[v[n - 1]]);
                    }
                }
                for dd in enumerate_like(d, LikeQuery::D) {
                    let v = &dd.vertices;
                    let n = v.len();
                    let plain = (0..n).all(|i| (i + 1..n).all(|j| !d.adjacent(v[i], v[j]) || d.label(v[i], v[j]) == 3));
                    if !plain {
                        continue;
                    }
                    match n {
                        3 => push(v[2], &[v[0], v[1]]),
                        // each labeling of the star puts one leaf last
                        4 => push(v[3], &[v[0], v[1]]),
                        _ => push(v[n - 1], &[v[0], v[1]]),
                    }
                }
            }
            Special6Source::Braid => {
                for (a, b, _) in d.edges() {
                    push(a, &[b]);
                    push(b, &[a]);
                }
            }
        }
        Ok(pats.into_iter().collect())
    }

    fn tripod_cycles(&self) -> Result<Vec<SpecialCycle>, ComplexError> {
        let (d, _) = self.require_tree()?;
        let type_of_gen = |g: usize| self.type_gen.iter().position(|&x| x == g);
        let mut out = Vec::new();
        for vs in crate::diagram::connected_subsets(&d.induced(&self.type_gen)) {
            let mut sorted = self.type_gen.clone();
            sorted.sort_unstable();
            let gens: Vec<usize> = vs.iter().map(|&i| sorted[i]).collect();
            let sub = d.induced(&gens);
            let shape = sub.shape();
            if !shape.is_tripod {
                continue;
            }
            let center = gens[(0..gens.len()).find(|&i| shape.valence[i] == 3).unwrap()];
            let leaves: Vec<usize> = shape.leaves.iter().map(|&i| gens[i]).collect();
            for &a2 in &leaves {
                let rest: Vec<usize> = leaves.iter().copied().filter(|&l| l != a2).collect();
                let (t1, t2, t3) = (type_of_gen(rest[0]).unwrap(), type_of_gen(a2).unwrap(), type_of_gen(rest[1]).unwrap());
                let arm = d.path_between(center, a2).expect("tree");
                let arm_types: Vec<usize> = arm.iter().filter_map(|&g| type_of_gen(g)).collect();
                let x2s = self.vertices_of_type(t2);
                for (i, &x2) in x2s.iter().enumerate() {
                    for &x4 in &x2s[i + 1..] {
                        let mut common = self.adj[x2].clone();
                        common.intersect_with(&self.adj[x4]);
                        let ones: Vec<usize> = common.ones().collect();
                        for &x1 in ones.iter().filter(|&&x| self.vertex_type[x] == t1) {
                            for &x3 in ones.iter().filter(|&&x| self.vertex_type[x] == t3) {
                                let cyc = vec![x1, x2, x3, x4];
                                let diag = self.adjacent(x1, x3);
                                let center = if diag {
                                    None
                                } else {
                                    self.common_neighbor(&cyc, |t| arm_types.contains(&t))
                                };
                                out.push(SpecialCycle::new(CycleKind::Tripod4, cyc, t2, center, None, Some(diag)));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Type-preserving isomorphism onto `other`, matching types by name.
    pub fn type_isomorphism(&self, other: &TypedComplex) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.chambers.len() != other.chambers.len() {
            return None;
        }
        let tmap: Vec<usize> = self.types.iter().map(|t| other.type_index(t)).collect::<Option<_>>()?;
        if other.types.len() != self.types.len() {
            return None;
        }
        // visit vertices so that each one after the first in its component
        // has an earlier neighbor
        let g = self.graph();
        let mut order = Vec::new();
        let mut seen = vec![false; self.len()];
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &v in g.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        let target: HashSet<Vec<usize>> = other
            .chambers
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        if self.iso_extend(other, &tmap, &order, 0, &mut map, &mut used, &target) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_extend(
        &self,
        other: &TypedComplex,
        tmap: &[usize],
        order: &[usize],
        k: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        target: &HashSet<Vec<usize>>,
    ) -> bool {
        if k == order.len() {
            return self.chambers.iter().all(|c| {
                let mut img: Vec<usize> = c.iter().map(|&v| map[v]).collect();
                img.sort_unstable();
                target.contains(&img)
            });
        }
        let v = order[k];
        let want = tmap[self.vertex_type[v]];
        let mapped_nb = self.adj[v].ones().find(|&u| map[u] != usize::MAX);
        let cands: Vec<usize> = match mapped_nb {
            Some(u) => other.adj[map[u]].ones().collect(),
            None => (0..other.len()).collect(),
        };
        for c in cands {
            if used[c] || other.vertex_type[c] != want || other.adj[c].count_ones(..) != self.adj[v].count_ones(..) {
                continue;
            }
            let consistent = order[..k].iter().all(|&w| self.adjacent(v, w) == other.adjacent(c, map[w]));
            if !consistent {
                continue;
            }
            map[v] = c;
            used[c] = true;
            if self.iso_extend(other, tmap, order, k + 1, map, used, target) {
                return true;
            }
            map[v] = usize::MAX;
            used[c] = false;
        }
        false
    }

    /// JSON dump `{types, vertices: [{id, type}], chambers}`.
    pub fn to_value(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = (0..self.len())
            .map(|v| serde_json::json!({ "id": v, "type": self.types[self.vertex_type[v]], "label": self.labels[v] }))
            .collect();
        serde_json::json!({
            "types": self.types,
            "vertices": vertices,
            "chambers": self.chambers,
        })
    }
}

fn one_hot(n: usize, on: &[usize]) -> Vec<bool> {
    let mut v = vec![false; n];
    for &i in on {
        v[i] = true;
    }
    v
}

/// Least rotation (by multiples of `step`) or reflection of a cycle.
fn canonical_cycle(c: &[usize], step: usize) -> Vec<usize> {
    let k = c.len();
    let mut best: Option<Vec<usize>> = None;
    for r in (0..k).step_by(step) {
        let fwd: Vec<usize> = (0..k).map(|i| c[(r + i) % k]).collect();
        let bwd: Vec<usize> = (0..k).map(|i| c[(r + k - i) % k]).collect();
        for cand in [fwd, bwd] {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Vertices of the smallest subtree of a tree diagram containing `vs`.
fn subtree_span(d: &CoxeterDiagram, vs: &[usize]) -> Vec<bool> {
    let mut span = vec![false; d.len()];
    for &a in vs {
        span[a] = true;
        for &b in vs {
            if let Some(p) = d.path_between(a, b) {
                for x in p {
                    span[x] = true;
                }
            }
        }
    }
    span
}

/// Leaf-to-leaf paths of a tree diagram (the single vertex for one vertex).
fn maximal_paths(d: &CoxeterDiagram) -> Vec<Vec<usize>> {
    if d.len() == 1 {
        return vec![vec![0]];
    }
    let leaves = d.shape().leaves;
    let mut out = Vec::new();
    for (i, &a) in leaves.iter().enumerate() {
        for &b in &leaves[i + 1..] {
            out.push(d.path_between(a, b).expect("tree"));
        }
    }
    out
}

pub fn build_coxeter_complex(g: &GroupTable) -> Result<TypedComplex, ComplexError> {
    let d = g.diagram();
    let n = d.len();
    if n == 0 {
        return Err(ComplexError::EmptyTypes);
    }
    let mut offsets = Vec::with_capacity(n);
    let mut systems = Vec::with_capacity(n);
    let mut vertex_type = Vec::new();
    let mut labels = Vec::new();
    for s in 0..n {
        let parabolic: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        let cs = g.cosets(&parabolic);
        offsets.push(vertex_type.len());
        for &r in &cs.reps {
            vertex_type.push(s);
            let word: Vec<&str> = g.word(r).iter().map(|&l| d.name(l)).collect();
            let w = if word.is_empty() { "e".to_string() } else { word.join("") };
            labels.push(format!("{w}W^{}", d.name(s)));
        }
        systems.push(cs);
    }
    let chambers = (0..g.order())
        .map(|w| (0..n).map(|s| offsets[s] + systems[s].coset_of[w] as usize).collect())
        .collect();
    let connectivity = match n {
        1 => Connectivity::known(false, "two points"),
        2 => Connectivity::known(false, "circle"),
        _ => Connectivity::known(true, "sphere of rank at least 3"),
    };
    let c = TypedComplex::new(d.names().to_vec(), vertex_type, chambers)?
        .with_diagram(d.clone(), (0..n).collect())?
        .with_labels(labels)
        .with_connectivity(connectivity);
    Ok(c)
}

/// A vertex inserted as the midpoint of `edge` (base vertex ids).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FakeVertex {
    pub id: usize,
    pub edge: [usize; 2],
    pub tau: u32,
}

/// A subdivision. Vertices `0..real` are the base vertices; the rest are
/// fake. Type `t` of `complex` is the τ value `t + 1`.
#[derive(Clone, Debug)]
pub struct SubdividedComplex {
    pub base: TypedComplex,
    pub complex: TypedComplex,
    pub tau: Vec<u32>,
    pub fake: Vec<FakeVertex>,
    pub real: usize,
}

impl SubdividedComplex {
    pub fn is_fake(&self, v: usize) -> bool {
        v >= self.real
    }

    /// The order by τ.
    pub fn ordered(&self) -> Result<OrderedComplex, ComplexError> {
        let order: Vec<usize> = (0..self.complex.types().len()).collect();
        self.complex.order_relation(&order)
    }

    pub fn to_value(&self) -> serde_json::Value {
        let mut v = self.complex.to_value();
        v["fake"] = serde_json::to_value(&self.fake).expect("serializable");
        v["tau"] = serde_json::to_value(&self.tau).expect("serializable");
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourCycleReport {
    pub cycles: usize,
    pub direct: Verdict,
    /// Bowtie freeness over the maximal linear subdiagrams.
    pub lemma: Verdict,
    /// The equivalence needs an admissible type diagram.
    pub lemma_applicable: bool,
    pub agreement: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Special6Source {
    /// B-like and D-subdiagrams with their base vertices.
    Definition,
    /// `ŝt̂ŝt̂ŝt̂` for every diagram edge `st`.
    Braid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleKind {
    Special4,
    Special6(Special6Source),
    Tripod4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialCycle {
    pub kind: CycleKind,
    pub vertices: Vec<usize>,
    /// Type at the even positions.
    pub base_type: usize,
    /// A vertex adjacent to every cycle vertex (for tripod cycles, with
    /// type on the arm towards the repeated leaf).
    pub center: Option<usize>,
    /// A common neighbor of the base-type vertices (6-cycles only).
    pub quasi_center: Option<usize>,
    /// Whether `x1 ~ x3` (tripod cycles only).
    pub diagonal_adjacent: Option<bool>,
}

impl SpecialCycle {
    fn new(
        kind: CycleKind,
        vertices: Vec<usize>,
        base_type: usize,
        center: Option<usize>,
        quasi_center: Option<usize>,
        diagonal_adjacent: Option<bool>,
    ) -> Self {
        SpecialCycle { kind, vertices, base_type, center, quasi_center, diagonal_adjacent }
    }

    /// The conclusion expected for this kind of cycle holds.
    pub fn resolved(&self) -> bool {
        match self.kind {
            CycleKind::Special4 => self.center.is_some(),
            CycleKind::Special6(_) => self.quasi_center.is_some(),
            CycleKind::Tripod4 => self.diagonal_adjacent == Some(true) || self.center.is_some(),
        }
    }
}

/// A typed complex with the vertex relation induced by a total order on
/// types.
#[derive(Clone, Debug)]
pub struct OrderedComplex {
    base: TypedComplex,
    order: Vec<usize>,
    rank_of_type: Vec<u32>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    intransitive: Option<[usize; 3]>,
    admissible: Option<bool>,
}

impl OrderedComplex {
    pub fn new(base: TypedComplex, order: &[usize]) -> Result<Self, ComplexError> {
        let nt = base.types.len();
        let mut rank_of_type = vec![0u32; nt];
        if order.len() != nt {
            return Err(ComplexError::BadOrder);
        }
        for (i, &t) in order.iter().enumerate() {
            if t >= nt || rank_of_type[t] != 0 {
                return Err(ComplexError::BadOrder);
            }
            rank_of_type[t] = i as u32 + 1;
        }
        let n = base.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            for y in base.adj[x].ones() {
                if rank_of_type[base.vertex_type[x]] < rank_of_type[base.vertex_type[y]] {
                    up[x].insert(y);
                    down[y].insert(x);
                }
            }
        }
        let mut intransitive = None;
        'outer: for y in 0..n {
            for x in down[y].ones() {
                if let Some(z) = up[y].ones().find(|&z| !up[x].contains(z)) {
                    intransitive = Some([x, y, z]);
                    break 'outer;
                }
            }
        }
        let admissible = base
            .diagram
            .as_ref()
            .and_then(|d| is_admissible(d, &base.type_gen).ok())
            .map(|a| a.holds);
        Ok(OrderedComplex { base, order: order.to_vec(), rank_of_type, up, down, intransitive, admissible })
    }

    pub fn base(&self) -> &TypedComplex {
        &self.base
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Position of the vertex type in the order, from 1.
    pub fn rank(&self, v: usize) -> u32 {
        self.rank_of_type[self.base.vertex_type[v]]
    }

    pub fn top(&self) -> u32 {
        self.order.len() as u32
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Strict upper neighbors.
    pub fn above(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn below(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn is_min_type(&self, v: usize) -> bool {
        self.rank(v) == 1
    }

    pub fn is_max_type(&self, v: usize) -> bool {
        self.rank(v) == self.top()
    }

    pub fn is_extremal(&self, v: usize) -> bool {
        self.is_min_type(v) || self.is_max_type(v)
    }

    /// The relation is transitive (its closure is always antisymmetric since
    /// the rank strictly increases along it).
    pub fn is_partial_order(&self) -> bool {
        self.intransitive.is_none()
    }

    pub fn transitivity_witness(&self) -> Option<[usize; 3]> {
        self.intransitive
    }

    /// Admissibility of the type diagram, when a diagram is attached.
    pub fn admissible(&self) -> Option<bool> {
        self.admissible
    }

    fn require_order(&self) -> Result<(), ComplexError> {
        match self.intransitive {
            Some(w) => Err(ComplexError::NotPartialOrder(w)),
            None => Ok(()),
        }
    }

    /// The ranked poset; rank validity is re-checked.
    pub fn poset(&self) -> Result<RankedPoset, ComplexError> {
        self.require_order()?;
        let rank = (0..self.len()).map(|v| self.rank(v)).collect();
        let mut pairs = Vec::new();
        for x in 0..self.len() {
            pairs.extend(self.up[x].ones().map(|y| (x, y)));
        }
        let p = RankedPoset::from_relations(rank, &pairs, Some(self.top()))?;
        let graded = p.check(Property::WeaklyGraded);
        if !graded.holds {
            return Err(PosetError::Hypothesis(format!("rank map fails at {:?}", graded.witness)).into());
        }
        Ok(p)
    }

    /// `y1 ~ y2` iff some minimal-type `z1` and maximal-type `z2` satisfy
    /// `z1 <= y_i <= z2` for both.
    pub fn thickening(&self) -> Result<Graph, ComplexError> {
        self.require_order()?;
        let n = self.len();
        let lower: Vec<FixedBitSet> = (0..n)
            .map(|y| {
                let mut b = FixedBitSet::with_capacity(n);
                if self.is_min_type(y) {
                    b.insert(y);
                }
                b.extend(self.down[y].ones().filter(|&z| self.is_min_type(z)));
                b
            })
            .collect();
        let upper: Vec<FixedBitSet> = (0..n)
            .map(|y| {
                let mut b = FixedBitSet::with_capacity(n);
                if self.is_max_type(y) {
                    b.insert(y);
                }
                b.extend(self.up[y].ones().filter(|&z| self.is_max_type(z)));
                b
            })
            .collect();
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if !lower[a].is_disjoint(&lower[b]) && !upper[a].is_disjoint(&upper[b]) {
                    g.add_edge(a, b);
                }
            }
        }
        Ok(g)
    }

    /// Induced 1-skeleton on the extremal vertices, with the vertex map.
    pub fn extremal_subgraph(&self) -> Result<(Graph, Vec<usize>), ComplexError> {
        self.require_order()?;
        let vs: Vec<usize> = (0..self.len()).filter(|&v| self.is_extremal(v)).collect();
        Ok((self.base.graph().induced(&vs), vs))
    }

    /// For `x < y`: an extremal `y' > x` incomparable with `y`, and an
    /// extremal `x' < y` incomparable with `x`. Only pairs inside `region`
    /// are checked when it is given.
    pub fn locally_determined(&self, region: Option<&[usize]>) -> Verdict {
        let n = self.len();
        let inside: Vec<bool> = match region {
            Some(r) => {
                let mut m = vec![false; n];
                for &v in r {
                    m[v] = true;
                }
                m
            }
            None => vec![true; n],
        };
        for x in 0..n {
            if !inside[x] {
                continue;
            }
            for y in self.up[x].ones() {
                if !inside[y] {
                    continue;
                }
                let up_ok = self.up[x].ones().any(|y2| self.is_extremal(y2) && !self.comparable(y2, y));
                let down_ok = self.down[y].ones().any(|x2| self.is_extremal(x2) && !self.comparable(x2, x));
                if !up_ok || !down_ok {
                    return Verdict { holds: false, witness: Some(vec![x, y]) };
                }
            }
        }
        Verdict { holds: true, witness: None }
    }

    /// The hypothesis battery; simple connectivity is read from provenance.
    pub fn ctilde_hypotheses(&self, region: Option<&[usize]>) -> HypothesisReport {
        let connectivity = self.base.connectivity.clone();
        let Ok(p) = self.poset() else {
            return HypothesisReport {
                partial_order: false,
                upper_sets: None,
                lower_sets: None,
                locally_determined: None,
                bowtie_free: None,
                upward_flag: None,
                downward_flag: None,
                connectivity,
            };
        };
        let mut upper = Verdict { holds: true, witness: None };
        let mut lower = Verdict { holds: true, witness: None };
        for x in 0..self.len() {
            if upper.holds {
                let elems: Vec<usize> = p.up_set(x).ones().collect();
                let sub = p.restrict(&elems);
                for prop in [Property::BowtieFree, Property::UpwardFlag] {
                    let v = sub.check(prop);
                    if !v.holds {
                        let mut w = vec![x];
                        w.extend(v.witness.unwrap_or_default().iter().map(|&i| elems[i]));
                        upper = Verdict { holds: false, witness: Some(w) };
                        break;
                    }
                }
            }
            if lower.holds {
                let elems: Vec<usize> = p.down_set(x).ones().collect();
                let sub = p.restrict(&elems);
                for prop in [Property::BowtieFree, Property::DownwardFlag] {
                    let v = sub.check(prop);
                    if !v.holds {
                        let mut w = vec![x];
                        w.extend(v.witness.unwrap_or_default().iter().map(|&i| elems[i]));
                        lower = Verdict { holds: false, witness: Some(w) };
                        break;
                    }
                }
            }
        }
        HypothesisReport {
            partial_order: true,
            upper_sets: Some(upper),
            lower_sets: Some(lower),
            locally_determined: Some(self.locally_determined(region)),
            bowtie_free: Some(p.check(Property::BowtieFree)),
            upward_flag: Some(p.check(Property::UpwardFlag)),
            downward_flag: Some(p.check(Property::DownwardFlag)),
            connectivity,
        }
    }
}

/// Each check is independent; `None` means it could not run because the
/// relation is not a partial order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub partial_order: bool,
    /// Every `V_{>=x}` is bowtie free and upward flag.
    pub upper_sets: Option<Verdict>,
    /// Every `V_{<=x}` is bowtie free and downward flag.
    pub lower_sets: Option<Verdict>,
    pub locally_determined: Option<Verdict>,
    pub bowtie_free: Option<Verdict>,
    pub upward_flag: Option<Verdict>,
    pub downward_flag: Option<Verdict>,
    pub connectivity: Connectivity,
}

impl HypothesisReport {
    fn ok(v: &Option<Verdict>) -> bool {
        v.as_ref().is_some_and(|v| v.holds)
    }

    /// All local hypotheses of the criterion hold.
    pub fn local_hypotheses_hold(&self) -> bool {
        self.partial_order
            && Self::ok(&self.upper_sets)
            && Self::ok(&self.lower_sets)
            && Self::ok(&self.locally_determined)
    }

    /// The global lattice consequences hold.
    pub fn global_lattice_holds(&self) -> bool {
        Self::ok(&self.bowtie_free) && Self::ok(&self.upward_flag) && Self::ok(&self.downward_flag)
    }
}

/// Vertex id of integer point `p` in the box `[0, 2 cells]^n`.
pub fn box_vertex(cells: usize, p: &[i64]) -> Option<usize> {
    let side = 2 * cells as i64 + 1;
    let mut id = 0usize;
    for &x in p {
        if x < 0 || x >= side {
            return None;
        }
        id = id * side as usize + x as usize;
    }
    Some(id)
}

pub fn box_point(n: usize, cells: usize, mut id: usize) -> Vec<i64> {
    let side = 2 * cells + 1;
    let mut p = vec![0i64; n];
    for i in (0..n).rev() {
        p[i] = (id % side) as i64;
        id /= side;
    }
    p
}

/// The orthoscheme tessellation of `[0, 2 cells]^n`. The type of a point is
/// its number of odd coordinates; each cell with even corner `c` holds the
/// chambers `v_0, v_1, .., v_n` running from a corner of the cell to its
/// center `c + (1, .., 1)` one coordinate at a time.
pub fn ctilde_box(n: usize, cells: usize) -> Result<TypedComplex, ComplexError> {
    if n == 0 {
        return Err(ComplexError::EmptyTypes);
    }
    let side = 2 * cells + 1;
    let total = side.pow(n as u32);
    let vertex_type: Vec<usize> =
        (0..total).map(|id| box_point(n, cells, id).iter().filter(|&&x| x % 2 != 0).count()).collect();
    let perms = permutations(n);
    let mut chambers = Vec::new();
    let cell_count = cells.pow(n as u32);
    for cell in 0..cell_count {
        let mut c = vec![0i64; n];
        let mut k = cell;
        for i in (0..n).rev() {
            c[i] = 2 * (k % cells) as i64;
            k /= cells;
        }
        for corner in 0..(1usize << n) {
            let v0: Vec<i64> = (0..n).map(|i| c[i] + 2 * ((corner >> i) & 1) as i64).collect();
            for perm in &perms {
                let mut p = v0.clone();
                let mut ch = vec![box_vertex(cells, &p).unwrap()];
                for &i in perm {
                    p[i] += if (corner >> i) & 1 == 1 { -1 } else { 1 };
                    ch.push(box_vertex(cells, &p).unwrap());
                }
                chambers.push(ch);
            }
        }
    }
    let types = (0..=n).map(|t| format!("t{t}")).collect();
    let labels = (0..total)
        .map(|id| {
            let p: Vec<String> = box_point(n, cells, id).iter().map(|x| x.to_string()).collect();
            format!("({})", p.join(","))
        })
        .collect();
    Ok(TypedComplex::new(types, vertex_type, chambers)?
        .with_labels(labels)
        .with_connectivity(Connectivity::known(true, "convex chamber box")))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::GroupTable;
    use crate::diagram::FamilyTag;

    fn coxeter(tag: FamilyTag) -> TypedComplex {
        let d = tag.diagram().unwrap();
        build_coxeter_complex(&GroupTable::enumerate(&d, 1_000_000).unwrap()).unwrap()
    }

    #[test]
    fn small_coxeter_complexes() {
        let a2 = coxeter(FamilyTag::A(2));
        assert_eq!((a2.len(), a2.chambers().len()), (6, 6));
        let a3 = coxeter(FamilyTag::A(3));
        assert_eq!((a3.len(), a3.chambers().len()), (14, 24));
        let i4 = coxeter(FamilyTag::I2(4));
        assert_eq!((i4.len(), i4.chambers().len()), (8, 8));
        assert!(a3.is_flag().holds);
    }

    #[test]
    fn relative_and_link() {
        let a3 = coxeter(FamilyTag::A(3));
        let r = a3.relative_complex(&[0, 2]).unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r.graph().edges().len(), 12);
        let v = a3.vertices_of_type(1)[0];
        let link = a3.vertex_link(v).unwrap();
        assert_eq!(link.len(), 4);
        assert_eq!(link.graph().edges().len(), 4);
        let hex = coxeter(FamilyTag::A(2));
        assert_eq!(hex.vertex_link(0).unwrap().graph().edges().len(), 0);
        let one = hex.relative_complex(&[0]).unwrap();
        assert_eq!((one.len(), one.graph().edges().len()), (3, 0));
    }

    #[test]
    fn single_chamber() {
        let s = TypedComplex::simplex(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let link = s.vertex_link(0).unwrap();
        assert_eq!(link.chambers().len(), 1);
        let oc = s.order_relation(&[0, 1, 2]).unwrap();
        assert!(oc.is_partial_order());
        let th = oc.thickening().unwrap();
        assert_eq!(th.edges().len(), 3);
        // the top vertex is the only extremal vertex above the bottom one
        let rep = oc.ctilde_hypotheses(None);
        assert_eq!(rep.locally_determined.as_ref().unwrap().witness, Some(vec![0, 1]));
        assert!(rep.upper_sets.as_ref().unwrap().holds && rep.lower_sets.as_ref().unwrap().holds);
        assert!(rep.global_lattice_holds());
        let sub = s.subdivide_b(&[0, 1, 2]).unwrap();
        assert_eq!((sub.fake.len(), sub.complex.chambers().len()), (1, 2));
    }

    #[test]
    fn dtilde_single_chamber() {
        let types: Vec<String> = (1..=5).map(|i| format!("x{i}")).collect();
        let s = TypedComplex::simplex(types).unwrap();
        let sub = s.subdivide_d(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!((sub.fake.len(), sub.complex.chambers().len()), (2, 4));
        let taus: Vec<u32> = sub.fake.iter().map(|f| f.tau).collect();
        assert_eq!(taus, vec![2, 4]);
        assert_eq!(sub.tau[3], 5);
    }

    #[test]
    fn hexagon_has_centerless_braid_cycle() {
        let hex = coxeter(FamilyTag::A(2));
        assert!(hex.special_cycles(CycleKind::Special6(Special6Source::Definition)).unwrap().is_empty());
        let cycles = hex.special_cycles(CycleKind::Special6(Special6Source::Braid)).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].center, None);
        assert_eq!(cycles[0].quasi_center, None);
    }

    #[test]
    fn box_counts() {
        let b = ctilde_box(2, 2).unwrap();
        assert_eq!(b.len(), 25);
        assert_eq!(b.chambers().len(), 32);
        assert!(b.is_flag().holds);
    }
}
