//! Independent oracles shared by the integration suites. These stay
//! deliberately naive: the exhaustive orientation count walks all 2^m edge
//! orientations, and the spanning-tree oracle is textbook
//! deletion-contraction on multigraphs. Neither shares any code path with
//! the library implementations they check.
#![allow(dead_code)] // each test target uses its own subset

use euler_orient::graph::Graph;
use euler_orient::BigCount;

/// Exhaustive `EO(G)`: every vertex must have out-degree equal to in-degree.
/// Only usable for m <= ~22.
pub fn brute_force_eo(g: &Graph) -> BigCount {
    let m = g.edge_count();
    assert!(m <= 22, "brute force oracle capped at 22 edges");
    let edges = g.edges();
    let mut count = 0u64;
    for mask in 0u64..(1u64 << m) {
        let mut residual = vec![0i32; g.n()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if (mask >> i) & 1 == 0 {
                residual[u] += 1;
                residual[v] -= 1;
            } else {
                residual[u] -= 1;
                residual[v] += 1;
            }
        }
        if residual.iter().all(|&r| r == 0) {
            count += 1;
        }
    }
    BigCount::from(count)
}

fn multigraph_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

fn t_multigraph(n: usize, edges: &[(usize, usize)]) -> u128 {
    let live: Vec<(usize, usize)> = edges.iter().copied().filter(|&(u, v)| u != v).collect();
    if multigraph_components(n, &live) > 1 {
        return 0;
    }
    if live.is_empty() {
        return if n == 1 { 1 } else { 0 };
    }
    let (u, v) = live[0];
    let rest = &live[1..];
    // delete the edge
    let deleted = t_multigraph(n, rest);
    // contract it: relabel v to u, then compact
    let mut contracted: Vec<(usize, usize)> = Vec::with_capacity(rest.len());
    for &(a, b) in rest {
        let a = if a == v { u } else { a };
        let b = if b == v { u } else { b };
        contracted.push((a, b));
    }
    let mut map = vec![usize::MAX; n];
    let mut next = 0usize;
    for x in 0..n {
        if x != v {
            map[x] = next;
            next += 1;
        }
    }
    for e in contracted.iter_mut() {
        *e = (map[e.0], map[e.1]);
    }
    deleted + t_multigraph(n - 1, &contracted)
}

/// Deletion-contraction spanning-tree count; exponential, for m <= ~14.
pub fn spanning_trees_deletion_contraction(g: &Graph) -> u128 {
    assert!(g.edge_count() <= 14, "deletion-contraction oracle capped");
    t_multigraph(g.n(), g.edges())
}

/// Deterministic corpus of random even graphs with at most `max_m` edges.
pub fn random_even_corpus(count: usize, max_m: usize, base_seed: u64) -> Vec<Graph> {
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0u64;
    while out.len() < count {
        let n = 5 + (attempt % 4) as usize; // 5..=8
        let toggles = 10 + (attempt % 25) as usize;
        let g = euler_orient::graph::random_even_graph(n, toggles, base_seed.wrapping_add(attempt))
            .expect("generator");
        attempt += 1;
        if g.edge_count() <= max_m {
            out.push(g);
        }
    }
    out
}
