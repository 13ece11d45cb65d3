//! Exact Eulerian-orientation counts by two independent algorithms: a pruned
//! backtracker over a DFS edge order, and a frontier dynamic program over a
//! vertex-elimination edge order. Each serves as an oracle for the other and
//! as ground truth for every estimator.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::BigCount;

/// Default cap on edges for the backtracker.
pub const DEFAULT_EDGE_CAP: usize = 40;
/// Default cap on the elimination-frontier width for the dynamic program.
pub const DEFAULT_FRONTIER_CAP: usize = 20;

/// Per-vertex orientation residuals over the oriented-so-far prefix.
///
/// `residual[v]` is out-degree minus in-degree; `remaining[v]` counts
/// incident edges not yet oriented. The residual sum is zero at all times. A
/// state is infeasible when some vertex has `|residual| > remaining`, or when
/// residual and remaining have different parities (each remaining edge moves
/// the residual by exactly ±1).
#[derive(Clone, Debug)]
pub struct ImbalanceState {
    pub residual: Vec<i32>,
    pub remaining: Vec<u32>,
}

impl ImbalanceState {
    pub fn new(g: &Graph) -> Self {
        ImbalanceState {
            residual: vec![0; g.n()],
            remaining: (0..g.n()).map(|v| g.degree(v) as u32).collect(),
        }
    }

    #[inline]
    pub fn feasible_at(&self, v: usize) -> bool {
        let r = self.residual[v];
        let rem = self.remaining[v] as i32;
        r.abs() <= rem && (r & 1) == (rem & 1)
    }

    #[inline]
    fn orient(&mut self, from: usize, to: usize) {
        self.residual[from] += 1;
        self.residual[to] -= 1;
        self.remaining[from] -= 1;
        self.remaining[to] -= 1;
    }

    #[inline]
    fn unorient(&mut self, from: usize, to: usize) {
        self.residual[from] -= 1;
        self.residual[to] += 1;
        self.remaining[from] += 1;
        self.remaining[to] += 1;
    }
}

/// Edges in the order a DFS from vertex 0 first meets them (tree and back
/// edges alike); later components follow from their smallest vertex.
fn dfs_edge_order(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut visited = vec![false; n];
    let mut edge_seen = vec![false; g.edge_count()];
    let mut edge_index = HashMap::new();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        edge_index.insert((u, v), i);
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut order = Vec::with_capacity(g.edge_count());
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut stack = vec![start];
        visited[start] = true;
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                let idx = edge_index[&key(v, w)];
                if !edge_seen[idx] {
                    edge_seen[idx] = true;
                    order.push(key(v, w));
                }
                if !visited[w] {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    debug_assert_eq!(order.len(), g.edge_count());
    order
}

fn count_from(
    edges: &[(usize, usize)],
    start: usize,
    state: &mut ImbalanceState,
    acc: &mut BigCount,
) {
    if start == edges.len() {
        *acc += 1u32;
        return;
    }
    let (u, v) = edges[start];
    for (from, to) in [(u, v), (v, u)] {
        state.orient(from, to);
        if state.feasible_at(u) && state.feasible_at(v) {
            count_from(edges, start + 1, state, acc);
        }
        state.unorient(from, to);
    }
}

/// Exact `EO(G)` by pruned backtracking over a DFS edge order.
///
/// Returns zero when any vertex has odd degree; multiplies over connected
/// components implicitly. Refuses graphs with more than `edge_cap` edges.
/// The search splits its first few edge decisions across rayon workers; the
/// total is an exact integer either way, so the result is independent of the
/// worker count.
pub fn eo_count_backtrack(g: &Graph, edge_cap: usize) -> Result<BigCount> {
    let m = g.edge_count();
    if m > edge_cap {
        return Err(Error::EdgeCapExceeded { edges: m, cap: edge_cap });
    }
    if g.odd_vertex().is_some() {
        return Ok(BigCount::zero());
    }
    if m == 0 {
        return Ok(BigCount::one());
    }
    let edges = dfs_edge_order(g);

    // enumerate feasible prefixes, then finish each in parallel
    let split = m.min(8);
    let mut prefixes = Vec::new();
    let mut state = ImbalanceState::new(g);
    collect_prefixes(&edges, 0, split, &mut state, &mut prefixes);
    let total = prefixes
        .into_par_iter()
        .map(|snapshot| {
            let mut state = snapshot;
            let mut acc = BigCount::zero();
            count_from(&edges, split, &mut state, &mut acc);
            acc
        })
        .reduce(BigCount::zero, |a, b| a + b);
    Ok(total)
}

fn collect_prefixes(
    edges: &[(usize, usize)],
    depth: usize,
    split: usize,
    state: &mut ImbalanceState,
    out: &mut Vec<ImbalanceState>,
) {
    if depth == split {
        out.push(state.clone());
        return;
    }
    let (u, v) = edges[depth];
    for (from, to) in [(u, v), (v, u)] {
        state.orient(from, to);
        if state.feasible_at(u) && state.feasible_at(v) {
            collect_prefixes(edges, depth + 1, split, state, out);
        }
        state.unorient(from, to);
    }
}

/// Width of the elimination frontier for the DP edge order, computable
/// without running the DP.
pub fn frontier_width(g: &Graph) -> usize {
    let edges = elimination_edge_order(g);
    let mut first = vec![usize::MAX; g.n()];
    let mut last = vec![0usize; g.n()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        for w in [u, v] {
            if first[w] == usize::MAX {
                first[w] = i;
            }
            last[w] = i;
        }
    }
    let mut width = 0usize;
    let mut active = 0usize;
    for i in 0..edges.len() {
        let (u, v) = edges[i];
        for w in [u, v] {
            if first[w] == i {
                active += 1;
            }
        }
        width = width.max(active);
        for w in [u, v] {
            if last[w] == i {
                active -= 1;
            }
        }
    }
    width
}

/// Edges sorted by `(max endpoint, min endpoint)`: the vertex-elimination
/// order that lets a vertex leave the frontier as soon as its last incident
/// edge is processed.
fn elimination_edge_order(g: &Graph) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    edges.sort_unstable_by_key(|&(u, v)| (v, u));
    edges
}

/// Exact `EO(G)` by dynamic programming over frontier residual vectors.
///
/// Same contract as [`eo_count_backtrack`], implemented independently:
/// edges are processed in elimination order, partial counts are memoized by
/// the residual vector of the active frontier, and a vertex leaving the
/// frontier must have residual exactly zero. Refuses graphs whose frontier
/// would exceed `frontier_cap`.
pub fn eo_count_dp(g: &Graph, frontier_cap: usize) -> Result<BigCount> {
    if g.odd_vertex().is_some() {
        return Ok(BigCount::zero());
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(BigCount::one());
    }
    let width = frontier_width(g);
    if width > frontier_cap {
        return Err(Error::FrontierCapExceeded { width, cap: frontier_cap });
    }

    let edges = elimination_edge_order(g);
    let mut last = vec![0usize; g.n()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        last[u] = i;
        last[v] = i;
    }

    // frontier: sorted list of active vertices; states keyed by their residuals
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<i16>, BigCount> = HashMap::new();
    states.insert(Vec::new(), BigCount::one());

    for (i, &(u, v)) in edges.iter().enumerate() {
        for w in [u, v] {
            if !frontier.contains(&w) {
                let pos = frontier.partition_point(|&x| x < w);
                frontier.insert(pos, w);
                for key in states.keys().cloned().collect::<Vec<_>>() {
                    let count = states.remove(&key).unwrap();
                    let mut grown = key;
                    grown.insert(pos, 0);
                    states.insert(grown, count);
                }
            }
        }
        let pu = frontier.binary_search(&u).unwrap();
        let pv = frontier.binary_search(&v).unwrap();

        let mut next: HashMap<Vec<i16>, BigCount> = HashMap::with_capacity(states.len() * 2);
        for (key, count) in &states {
            for dir in [1i16, -1i16] {
                let mut k = key.clone();
                k[pu] += dir;
                k[pv] -= dir;
                *next.entry(k).or_insert_with(BigCount::zero) += count;
            }
        }

        // retire vertices whose last edge this was; their residual must be 0
        let mut retire: Vec<usize> = [u, v].iter().copied().filter(|&w| last[w] == i).collect();
        retire.sort_unstable_by(|a, b| b.cmp(a)); // remove higher position first
        if !retire.is_empty() {
            let positions: Vec<usize> = retire
                .iter()
                .map(|w| frontier.binary_search(w).unwrap())
                .collect();
            let mut filtered: HashMap<Vec<i16>, BigCount> = HashMap::with_capacity(next.len());
            'state: for (key, count) in next {
                let mut k = key;
                for &pos in &positions {
                    if k[pos] != 0 {
                        continue 'state;
                    }
                    k.remove(pos);
                }
                *filtered.entry(k).or_insert_with(BigCount::zero) += &count;
            }
            next = filtered;
            for w in retire {
                let pos = frontier.binary_search(&w).unwrap();
                frontier.remove(pos);
            }
        }
        states = next;
        if states.is_empty() {
            return Ok(BigCount::zero());
        }
    }

    debug_assert!(frontier.is_empty());
    Ok(states.remove(&Vec::new()).unwrap_or_else(BigCount::zero))
}
