//! Simple undirected graphs: bit-set adjacency plus a canonical edge list,
//! generators for the test families, parity and connectivity predicates, and
//! the edge-list text format used by every CLI subcommand.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParseError, Result};

/// A simple undirected graph on vertices `0..n`.
///
/// Invariants held by every constructor: no loops, no duplicate edges, and
/// the adjacency bit-sets are exactly the symmetric closure of the edge list.
/// The edge list is kept in canonical order: `(min, max)` pairs sorted
/// lexicographically. Values are immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<FixedBitSet>,
}

/// Per-vertex degrees `d_0, ..., d_{n-1}`; the sum is always `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn all_even(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }

    pub fn min(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }
}

impl Graph {
    /// Builds a graph from unordered vertex pairs, rejecting loops,
    /// duplicates, and out-of-range endpoints.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("vertex count must be positive".into()));
        }
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) out of range 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at vertex {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if adj[u].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate edge ({u}, {v})")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
            edges.push((u, v));
        }
        edges.sort_unstable();
        Ok(Graph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence {
            degrees: (0..self.n).map(|v| self.degree(v)).collect(),
        }
    }

    pub fn is_all_even(&self) -> bool {
        self.degree_sequence().all_even()
    }

    /// Index of a vertex with odd degree, if any.
    pub fn odd_vertex(&self) -> Option<usize> {
        (0..self.n).find(|&v| self.degree(v) % 2 == 1)
    }

    /// Connected components as sorted vertex sets, ordered by smallest member.
    ///
    /// The component count equals the multiplicity of the Laplacian eigenvalue
    /// zero; connectivity decisions are always made here, by traversal, never
    /// by an eigensolver.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen.contains(start) {
                continue;
            }
            let mut queue = vec![start];
            let mut comp = Vec::new();
            seen.insert(start);
            while let Some(v) = queue.pop() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen.contains(w) {
                        seen.insert(w);
                        queue.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// The induced subgraph after deleting `removed` vertices and all incident
    /// edges. Remaining vertices are renumbered in increasing order.
    pub fn without_vertices(&self, removed: &[usize]) -> Result<Graph> {
        let mut drop = FixedBitSet::with_capacity(self.n);
        for &v in removed {
            if v >= self.n {
                return Err(Error::InvalidInput(format!("vertex {v} out of range")));
            }
            drop.insert(v);
        }
        let kept: Vec<usize> = (0..self.n).filter(|&v| !drop.contains(v)).collect();
        if kept.is_empty() {
            return Err(Error::InvalidInput("cannot remove every vertex".into()));
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            index[v] = i;
        }
        let pairs = self
            .edges
            .iter()
            .filter(|(u, v)| !drop.contains(*u) && !drop.contains(*v))
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(kept.len(), pairs)
    }

    /// Relabels vertices by `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidInput("permutation length mismatch".into()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[p] = true;
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Serializes to the canonical edge-list text format (LF line endings).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list interchange format: a header `n m` followed by `m`
/// lines `u v`. Lines starting with `#` and blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n = 0usize;
    let mut declared = 0usize;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut saw_header = false;
    let mut adj: Vec<FixedBitSet> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        if !saw_header {
            let a = fields.next().and_then(|s| s.parse::<usize>().ok());
            let b = fields.next().and_then(|s| s.parse::<usize>().ok());
            match (a, b, fields.next()) {
                (Some(nv), Some(mv), None) if nv > 0 => {
                    n = nv;
                    declared = mv;
                    saw_header = true;
                    adj = vec![FixedBitSet::with_capacity(n); n];
                }
                _ => return Err(ParseError::BadHeader { line: line_no }.into()),
            }
            continue;
        }
        let a = fields.next().and_then(|s| s.parse::<usize>().ok());
        let b = fields.next().and_then(|s| s.parse::<usize>().ok());
        let (a, b) = match (a, b, fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(ParseError::Malformed { line: line_no }.into()),
        };
        for &x in &[a, b] {
            if x >= n {
                return Err(ParseError::VertexOutOfRange {
                    line: line_no,
                    vertex: x,
                    n,
                }
                .into());
            }
        }
        if a == b {
            return Err(ParseError::SelfLoop { line: line_no }.into());
        }
        let (u, v) = (a.min(b), a.max(b));
        if adj[u].contains(v) {
            return Err(ParseError::DuplicateEdge { line: line_no }.into());
        }
        adj[u].insert(v);
        adj[v].insert(u);
        pairs.push((u, v));
    }

    if !saw_header {
        return Err(ParseError::Empty.into());
    }
    if pairs.len() != declared {
        return Err(ParseError::WrongEdgeCount {
            expected: declared,
            found: pairs.len(),
        }
        .into());
    }
    Graph::new(n, pairs)
}

// ----------------------------------------------------------------------------
// Generators
// ----------------------------------------------------------------------------

/// The complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph> {
    let pairs = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
    Graph::new(n, pairs)
}

/// The complete bipartite graph with parts `{0..a}` and `{a..a+b}`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("both parts must be non-empty".into()));
    }
    let pairs = (0..a).flat_map(move |u| (a..a + b).map(move |v| (u, v)));
    Graph::new(a + b, pairs)
}

/// The cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    circulant(n, &[1])
}

/// Circulant graph: `j ~ j ± s (mod n)` for every offset `s`.
///
/// Offsets must lie in `1..=n/2`; the offset `n/2` (when `n` is even)
/// contributes a single perfect-matching edge per vertex.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInput("circulant needs n >= 3".into()));
    }
    let mut sorted = offsets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != offsets.len() {
        return Err(Error::InvalidInput("duplicate offsets".into()));
    }
    if sorted.iter().any(|&s| s == 0 || s > n / 2) {
        return Err(Error::InvalidInput(format!(
            "offsets must lie in 1..={}",
            n / 2
        )));
    }
    let mut pairs = Vec::new();
    for &s in &sorted {
        for j in 0..n {
            let k = (j + s) % n;
            // each unordered pair exactly once; offset n/2 wraps onto itself
            if j < k {
                pairs.push((j, k));
            } else if s * 2 != n {
                pairs.push((k, j));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Graph::new(n, pairs)
}

/// Seedable even-degree random graphs.
///
/// Starts from an even-degree base (complete graph for odd `n`, a circulant
/// for even `n`) and applies `toggles` random triangle XOR moves: pick three
/// distinct vertices and flip the presence of the three pairwise edges. Each
/// move changes every incident degree by 0 or ±2, so all degrees stay even,
/// and the graph stays simple by construction. The result may be
/// disconnected; callers filter if they need connectivity.
pub fn random_even_graph(n: usize, toggles: usize, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInput("random_even_graph needs n >= 3".into()));
    }
    let base = if n % 2 == 1 {
        complete(n)?
    } else if n == 4 {
        // circulant(4, {1,2}) would be 3-regular (odd); the 4-cycle is the
        // smallest even-degree start.
        cycle(4)?
    } else {
        circulant(n, &[1, 2])?
    };

    let mut present = vec![vec![false; n]; n];
    for &(u, v) in base.edges() {
        present[u][v] = true;
        present[v][u] = true;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..toggles {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n);
        while b == a {
            b = rng.random_range(0..n);
        }
        let mut c = rng.random_range(0..n);
        while c == a || c == b {
            c = rng.random_range(0..n);
        }
        for (u, v) in [(a, b), (a, c), (b, c)] {
            present[u][v] = !present[u][v];
            present[v][u] = !present[v][u];
        }
    }

    let pairs = (0..n).flat_map(|u| {
        let row = &present[u];
        ((u + 1)..n).filter(move |&v| row[v]).map(move |v| (u, v))
    });
    Graph::new(n, pairs)
}
