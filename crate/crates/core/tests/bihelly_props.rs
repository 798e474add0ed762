use std::collections::VecDeque;

use artin_lab::bihelly::*;
use artin_lab::complex::ctilde_box;
use artin_lab::diagram::unlabeled_trees;
use artin_lab::graph::Graph;
use proptest::prelude::*;

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == u32::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// Helly property of all half-balls through the three-point criterion: a
/// finite family is Helly iff for any three points the members containing
/// at least two of them share a point.
fn berge_duchet(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs(&adj, s)).collect();
    let diam = dist.iter().flatten().copied().max().unwrap();
    let mut balls: Vec<u64> = Vec::new();
    for u in 0..n {
        for k in 0..=diam {
            let mut m = 0u64;
            for v in 0..n {
                if dist[u][v] <= k && dist[u][v] % 2 == k % 2 {
                    m |= 1 << v;
                }
            }
            balls.push(m);
        }
    }
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                let pts = (1u64 << x) | (1 << y) | (1 << z);
                let mut acc = u64::MAX;
                let mut any = false;
                for &b in &balls {
                    if (b & pts).count_ones() >= 2 || (x == y && y == z && b & pts != 0) {
                        acc &= b;
                        any = true;
                    }
                }
                if any && acc == 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn bipartite(n: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
    BipartiteGraph::new(Graph::from_edges(n, edges)).unwrap()
}

#[test]
fn trees_up_to_fifteen_are_bi_helly() {
    let mut count = 0;
    for n in 1..=15 {
        for edges in unlabeled_trees(n) {
            let g = bipartite(n, &edges);
            let v = g.is_bi_helly(None, DEFAULT_CLIQUE_CAP);
            assert_eq!(v.status, HellyStatus::Holds, "{edges:?}");
            count += 1;
        }
    }
    assert!(count > 10_000);
    for n in 2..=9 {
        for edges in unlabeled_trees(n) {
            assert!(berge_duchet(n, &edges));
        }
    }
}

#[test]
fn box_extremal_graphs_are_bi_helly_and_isometric() {
    for cells in 1..=3 {
        let b = ctilde_box(2, cells).unwrap();
        let skeleton = b.graph().all_pairs();
        let oc = b.order_relation(&[0, 1, 2]).unwrap();
        let (gamma, vs) = oc.extremal_subgraph().unwrap();
        let g = BipartiteGraph::new(gamma).unwrap();
        assert_eq!(g.is_bi_helly(None, DEFAULT_CLIQUE_CAP).status, HellyStatus::Holds);
        for (i, &a) in vs.iter().enumerate() {
            for (j, &c) in vs.iter().enumerate() {
                assert_eq!(g.distance(i, j), skeleton[a][c]);
            }
        }
    }
}

#[test]
fn even_cycles_beyond_four_fail() {
    for n in [6, 8, 10] {
        let g = BipartiteGraph::new(Graph::cycle(n)).unwrap();
        let v = g.is_bi_helly(None, DEFAULT_CLIQUE_CAP);
        assert_eq!(v.status, HellyStatus::Fails);
        assert!(!berge_duchet(n, &Graph::cycle(n).edges()));
        let w = v.witness.unwrap();
        let sets: Vec<Vec<usize>> = w.iter().map(|b| g.half_ball(b.center, b.radius)).collect();
        for a in &sets {
            for b in &sets {
                assert!(a.iter().any(|x| b.contains(x)));
            }
        }
        assert!((0..n).all(|x| !sets.iter().all(|s| s.contains(&x))));
    }
    assert!(berge_duchet(4, &Graph::cycle(4).edges()));
}

#[test]
fn hexagon_witness_from_the_example_is_valid() {
    let g = BipartiteGraph::new(Graph::cycle(6)).unwrap();
    let fam = [g.half_ball(0, 1), g.half_ball(2, 1), g.half_ball(4, 1)];
    assert_eq!(fam, [vec![1, 5], vec![1, 3], vec![3, 5]]);
}

#[test]
fn cap_limits_are_reported() {
    let g = BipartiteGraph::new(Graph::path(9)).unwrap();
    assert_eq!(g.is_bi_helly(Some(1), DEFAULT_CLIQUE_CAP).status, HellyStatus::CapLimited);
    assert_eq!(g.is_bi_helly(None, 1).status, HellyStatus::CapLimited);
}

/// All near-cliques (pairwise distance two), sorted.
fn near_cliques(g: &BipartiteGraph) -> Vec<Vec<usize>> {
    fn grow(g: &BipartiteGraph, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let last = *cur.last().unwrap();
        for v in last + 1..g.len() {
            if cur.iter().all(|&u| g.distance(u, v) == 2) {
                cur.push(v);
                grow(g, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..g.len() {
        grow(g, &mut vec![v], &mut out);
    }
    out
}

fn small_fixtures() -> Vec<BipartiteGraph> {
    let mut out = Vec::new();
    for n in 2..=8 {
        for edges in unlabeled_trees(n) {
            out.push(bipartite(n, &edges));
        }
    }
    let mut k33 = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            k33.push((a, b));
        }
    }
    out.push(bipartite(6, &k33));
    out.push(bipartite(4, &Graph::cycle(4).edges()));
    for cells in [1, 2] {
        let b = ctilde_box(2, cells).unwrap();
        let oc = b.order_relation(&[0, 1, 2]).unwrap();
        let (gamma, _) = oc.extremal_subgraph().unwrap();
        out.push(BipartiteGraph::new(gamma).unwrap());
    }
    out
}

/// Every path choosing one vertex per step is a geodesic.
fn selections_are_geodesics(g: &BipartiteGraph, seq: &[Vec<usize>]) -> bool {
    let n = seq.len() - 1;
    let mut frontier: Vec<(usize, usize)> = seq[0].iter().map(|&v| (v, v)).collect();
    for step in &seq[1..] {
        let mut next = Vec::new();
        for &(start, v) in &frontier {
            for &w in step {
                if g.distance(v, w) == 1 {
                    next.push((start, w));
                }
            }
        }
        frontier = next;
    }
    frontier.iter().all(|&(s, e)| g.distance(s, e) as usize == n)
}

fn box_gamma(cells: usize) -> BipartiteGraph {
    let b = ctilde_box(2, cells).unwrap();
    let (gamma, _) = b.order_relation(&[0, 1, 2]).unwrap().extremal_subgraph().unwrap();
    BipartiteGraph::new(gamma).unwrap()
}

#[test]
fn directed_geodesics_exist_and_are_unique() {
    let mut pairs = 0;
    for g in small_fixtures().into_iter().filter(|g| g.len() <= 8) {
        assert_eq!(g.is_bi_helly(None, DEFAULT_CLIQUE_CAP).status, HellyStatus::Holds);
        let ncs = near_cliques(&g);
        for a in &ncs {
            for b in &ncs {
                if g.uniform_distance(a, b).is_some_and(|n| n >= 2) {
                    for reach in [Reach::Any, Reach::All] {
                        let seq = g.directed_geodesic(a, b, reach).unwrap();
                        assert!(selections_are_geodesics(&g, &seq));
                        let check = g.local_check(&seq, reach).unwrap();
                        assert!(check.direct && check.triples);
                    }
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs > 1000);
}

#[test]
fn box_graphs_split_the_two_readings() {
    for cells in [2, 3] {
        let g = box_gamma(cells);
        let ncs = near_cliques(&g);
        let mut missing = 0;
        for a in &ncs {
            for b in &ncs {
                if !g.uniform_distance(a, b).is_some_and(|n| n >= 2) {
                    continue;
                }
                let seq = g.directed_geodesic(a, b, Reach::All).unwrap();
                assert!(selections_are_geodesics(&g, &seq));
                match g.directed_geodesic(a, b, Reach::Any) {
                    Ok(s) => assert!(selections_are_geodesics(&g, &s)),
                    Err(BiHellyError::Violation { .. }) => {
                        // the readings coincide on single vertices
                        assert!(a.len() > 1 || b.len() > 1);
                        missing += 1;
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(missing > 0, "{cells}");
    }
}

/// Sequences `K_0 .. K_n` (n <= max_n) with consecutive near-cliques
/// completely joined.
fn joined_sequences(g: &BipartiteGraph, ncs: &[Vec<usize>], max_n: usize, f: &mut impl FnMut(&[Vec<usize>])) {
    fn walk(
        g: &BipartiteGraph,
        ncs: &[Vec<usize>],
        max_n: usize,
        seq: &mut Vec<Vec<usize>>,
        f: &mut impl FnMut(&[Vec<usize>]),
    ) {
        if seq.len() >= 3 {
            f(seq);
        }
        if seq.len() > max_n {
            return;
        }
        for k in ncs {
            if g.uniform_distance(seq.last().unwrap(), k) == Some(1) {
                seq.push(k.clone());
                walk(g, ncs, max_n, seq, f);
                seq.pop();
            }
        }
    }
    for k in ncs {
        walk(g, ncs, max_n, &mut vec![k.clone()], f);
    }
}

#[test]
fn local_and_global_checks_agree() {
    let mut seen = 0usize;
    let mut geodesic = 0usize;
    let mut common_disagreements = 0usize;
    let mut graphs = small_fixtures().into_iter().filter(|g| g.len() <= 7).collect::<Vec<_>>();
    graphs.push(box_gamma(2));
    for g in graphs {
        let ncs = near_cliques(&g);
        joined_sequences(&g, &ncs, 4, &mut |seq| {
            let c = g.local_check(seq, Reach::Any).unwrap();
            assert!(c.agreement, "{seq:?}");
            seen += 1;
            geodesic += c.direct as usize;
            if !g.local_check(seq, Reach::All).unwrap().agreement {
                common_disagreements += 1;
            }
        });
    }
    assert!(seen > 10_000, "{seen}");
    assert!(geodesic > 100 && geodesic < seen);
    assert!(common_disagreements > 0);
}

#[test]
fn common_reach_breaks_local_to_global() {
    let g = box_gamma(2);
    let seq = vec![vec![0], vec![3], vec![6], vec![4, 9], vec![7]];
    let c = g.local_check(&seq, Reach::All).unwrap();
    assert!(c.triples && !c.direct);
    assert_eq!(g.directed_geodesic(&[0], &[7], Reach::All).unwrap()[2], vec![1, 6]);
    let c = g.local_check(&seq, Reach::Any).unwrap();
    assert_eq!((c.direct, c.first_bad_triple), (false, Some(2)));
    // the common reading globally with union triples does not agree either
    let mut mixed = 0;
    joined_sequences(&g, &near_cliques(&g), 4, &mut |s| {
        mixed += !g.local_check_mixed(s, Reach::All, Reach::Any).unwrap().agreement as usize;
    });
    assert!(mixed > 0);
}

#[test]
fn enlarged_step_breaks_both_checks() {
    // spider: center 0 with legs 0-1-2-3, 0-4-5-6, 0-7-8
    let g = bipartite(9, &[(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (0, 7), (7, 8)]);
    let mut seq = g.directed_geodesic(&[3], &[6], Reach::All).unwrap();
    assert_eq!(seq[3], vec![0]);
    assert_eq!(seq.len(), 7);
    seq[2] = vec![1, 7];
    let c = g.local_check(&seq, Reach::All).unwrap();
    assert!(!c.direct && !c.triples);
    assert!(c.agreement);
    assert!(matches!(c.first_bad_triple, Some(1..=3)));
    let short = g.local_check(&seq[..2], Reach::All).unwrap();
    assert!(short.direct && short.triples);
}

#[test]
fn box_corner_geodesic() {
    let b = ctilde_box(2, 3).unwrap();
    let oc = b.order_relation(&[0, 1, 2]).unwrap();
    let (gamma, vs) = oc.extremal_subgraph().unwrap();
    let g = BipartiteGraph::new(gamma).unwrap();
    let corner = |label: &str| vs.iter().position(|&v| b.label(v) == label).unwrap();
    let (a, z) = (corner("(0,0)"), corner("(6,6)"));
    let seq = g.directed_geodesic(&[a], &[z], Reach::All).unwrap();
    assert!(selections_are_geodesics(&g, &seq));
    assert_eq!(seq.len() as u32 - 1, g.distance(a, z));
}

fn random_bipartite(n: usize, density: f64, seed: u64) -> Option<(usize, Vec<(usize, usize)>)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let left = n / 2;
    let mut edges = Vec::new();
    for a in 0..left {
        for b in left..n {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    let g = Graph::from_edges(n, &edges);
    g.is_connected().then_some((n, edges))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn helly_matches_three_point_criterion(n in 2usize..11, density in 0.2f64..0.8, seed in any::<u64>()) {
        if let Some((n, edges)) = random_bipartite(n, density, seed) {
            let g = bipartite(n, &edges);
            let v = g.is_bi_helly(None, 100_000);
            prop_assume!(v.status != HellyStatus::CapLimited);
            prop_assert_eq!(v.status == HellyStatus::Holds, berge_duchet(n, &edges));
        }
    }

    #[test]
    fn half_balls_grow_by_two(n in 2usize..11, density in 0.2f64..0.8, seed in any::<u64>()) {
        if let Some((n, edges)) = random_bipartite(n, density, seed) {
            let g = bipartite(n, &edges);
            for u in 0..n {
                for k in 0..6 {
                    let small = g.half_ball(u, k);
                    let big = g.half_ball(u, k + 2);
                    prop_assert!(small.iter().all(|v| big.contains(v)));
                }
            }
        }
    }
}

#[test]
fn union_reach_loses_existence_on_a_bi_helly_graph() {
    // extremal subgraph of the two-cell square box
    let e = [
        (0, 3), (1, 3), (1, 4), (2, 4), (3, 5), (3, 6), (4, 6), (4, 7),
        (5, 8), (6, 8), (6, 9), (7, 9), (8, 10), (8, 11), (9, 11), (9, 12),
    ];
    assert!(berge_duchet(13, &e));
    let g = bipartite(13, &e);
    assert_eq!(g.is_bi_helly(None, DEFAULT_CLIQUE_CAP).status, HellyStatus::Holds);
    assert_eq!(g.uniform_distance(&[0], &[7, 11]), Some(4));
    assert!(matches!(
        g.directed_geodesic(&[0], &[7, 11], Reach::Any),
        Err(BiHellyError::Violation { step: 3, .. })
    ));
    let seq = g.directed_geodesic(&[0], &[7, 11], Reach::All).unwrap();
    assert_eq!(seq, vec![vec![0], vec![3], vec![6], vec![9], vec![7, 11]]);
}
