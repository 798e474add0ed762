//! Plain undirected simple graphs with BFS utilities.

use std::collections::VecDeque;

use serde::Serialize;

pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Ignores loops and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b || self.adjacent(a, b) {
            return;
        }
        let pa = self.adj[a].binary_search(&b).unwrap_err();
        self.adj[a].insert(pa, b);
        let pb = self.adj[b].binary_search(&a).unwrap_err();
        self.adj[b].insert(pb, a);
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            for &b in ns {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// BFS distances from `src`; unreachable vertices get [`UNREACHABLE`].
    pub fn distances(&self, src: usize) -> Vec<u32> {
        self.distances_from_set(&[src])
    }

    pub fn distances_from_set(&self, src: &[usize]) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.len()];
        let mut queue = VecDeque::new();
        for &s in src {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn all_pairs(&self) -> Vec<Vec<u32>> {
        (0..self.len()).map(|s| self.distances(s)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.distances(0).iter().all(|&d| d != UNREACHABLE)
    }

    /// A proper 2-coloring, if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.len()];
        for s in 0..self.len() {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// Induced subgraph on `vs` (new vertex `i` is `vs[i]`).
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in vs.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(vs.len());
        for (i, &v) in vs.iter().enumerate() {
            g.adj[i] = self.adj[v].iter().filter(|&&u| pos[u] != usize::MAX).map(|&u| pos[u]).collect();
            g.adj[i].sort_unstable();
        }
        g
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::json!({ "vertices": self.len(), "edges": self.edges() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_distances() {
        let c = Graph::cycle(6);
        assert_eq!(c.distances(0), vec![0, 1, 2, 3, 2, 1]);
        assert!(c.bipartition().is_some());
        assert!(Graph::cycle(5).bipartition().is_none());
    }

    #[test]
    fn induced_and_components() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(!g.is_connected());
        let h = g.induced(&[3, 2]);
        assert!(h.adjacent(0, 1));
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);
    }
}
