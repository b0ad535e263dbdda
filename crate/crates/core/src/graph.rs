//! Undirected simple graphs, colorings, cut evaluation and exhaustive Max-Cut.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng as _;
use thiserror::Error;

use crate::rng::rng_from_seed;

/// Largest vertex count accepted by [`brute_force_max_cut`].
pub const BRUTE_FORCE_LIMIT: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected header \"n m\"")]
    MalformedHeader { line: usize },
    #[error("line {line}: expected edge \"u v\"")]
    MalformedLine { line: usize },
    #[error("line {line}: endpoint {vertex} out of range for n = {n}")]
    EndpointOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("coloring has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{n} vertices exceeds the exhaustive limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Undirected simple graph.
///
/// Edges are kept in insertion order with `u < v` in each pair; every
/// algorithm in the crate iterates them in this order. Adjacency lists are
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Build a graph from an edge list. Line numbers in errors are 1-based
    /// edge positions plus one (as if a header line preceded them).
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for (i, (a, b)) in edges.into_iter().enumerate() {
            let line = i + 2;
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::EndpointOutOfRange { line, vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { line, vertex: a });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            list.push((u, v));
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Self {
            n,
            edges: list,
            adjacency,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Cycle 0-1-…-(n-1)-0.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Subgraph induced by `vertices`, relabelled by their position in the
    /// sorted vertex list.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in sorted.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(sorted.len(), edges).expect("induced subgraph is simple")
    }

    /// Canonical edge-list rendering: `n m`, then edges sorted lexicographically.
    pub fn render(&self) -> String {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Neighbour bitmask per vertex; requires `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.adjacency
            .iter()
            .map(|nbrs| nbrs.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }
}

/// Parse the edge-list format: first line `n m`, then `m` lines `u v`.
/// Blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(GraphError::MalformedHeader { line: 1 })?;
    let (n, m) = parse_pair(header).ok_or(GraphError::MalformedHeader { line: header_line })?;

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        let (a, b) = parse_pair(body).ok_or(GraphError::MalformedLine { line })?;
        for v in [a, b] {
            if v >= n {
                return Err(GraphError::EndpointOutOfRange { line, vertex: v, n });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop { line, vertex: a });
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            return Err(GraphError::DuplicateEdge {
                line,
                u: key.0,
                v: key.1,
            });
        }
        edges.push((a, b));
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Graph::new(n, edges)
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// G(n, p): each pair `(u, v)`, `u < v`, visited in lexicographic order with
/// one uniform draw in `[0, 1)` per pair; the edge is kept when the draw is
/// below `prob`.
pub fn gen_erdos_renyi(n: usize, prob: f64, seed: u64) -> Graph {
    assert!(n >= 1, "graph needs at least one vertex");
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < prob {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("generated graph is simple")
}

/// Vertex two-coloring; `bits[v]` is the color of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    bits: Vec<bool>,
}

impl Coloring {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    /// Bit `v` of `index` is the color of vertex `v`.
    pub fn from_index(n: usize, index: u64) -> Self {
        Self {
            bits: (0..n).map(|v| (index >> v) & 1 == 1).collect(),
        }
    }

    /// Parse a string like `"0101"` where character `v` is vertex `v`'s color.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (v, &b)| acc | ((b as u64) << v))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn flip(&mut self, v: usize) {
        self.bits[v] = !self.bits[v];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

impl std::fmt::Display for Coloring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of edges whose endpoints have different colors.
pub fn cut_size(g: &Graph, s: &Coloring) -> Result<usize, GraphError> {
    if s.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            expected: g.n(),
            got: s.len(),
        });
    }
    Ok(g.edges().iter().filter(|&&(u, v)| s.get(u) != s.get(v)).count())
}

/// Cut of the coloring packed in `index` (bit `v` = vertex `v`).
pub fn cut_size_packed(g: &Graph, index: u64) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| ((index >> u) ^ (index >> v)) & 1 == 1)
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCut {
    pub value: usize,
    pub argmax: Coloring,
}

/// Exhaustive Max-Cut.
///
/// Vertex 0 is pinned to color 0, so the search covers the `2^(n-1)`
/// colorings of the remaining vertices in Gray-code order with O(1) cut
/// updates per step. Among optimal colorings with vertex 0 colored 0 the
/// smallest packed index wins.
pub fn brute_force_max_cut(g: &Graph) -> Result<MaxCut, GraphError> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(GraphError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n <= 1 {
        return Ok(MaxCut {
            value: 0,
            argmax: Coloring::zeros(n),
        });
    }
    let masks = g.adjacency_masks();
    let mut state: u64 = 0;
    let mut cut: i64 = 0;
    let mut best = (0i64, 0u64);
    let steps: u64 = 1 << (n - 1);
    for step in 1..steps {
        // Gray code: flip free vertex (trailing zeros of step) + 1.
        let v = step.trailing_zeros() as usize + 1;
        let nbrs = masks[v];
        let differing = if (state >> v) & 1 == 0 {
            (nbrs & state).count_ones()
        } else {
            (nbrs & !state).count_ones()
        } as i64;
        cut += g.degree(v) as i64 - 2 * differing;
        state ^= 1 << v;
        if cut > best.0 || (cut == best.0 && state < best.1) {
            best = (cut, state);
        }
    }
    Ok(MaxCut {
        value: best.0 as usize,
        argmax: Coloring::from_index(n, best.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_max_cut(g: &Graph) -> usize {
        (0..1u64 << g.n())
            .map(|k| cut_size_packed(g, k))
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn parses_single_edge_and_triangle() {
        let k2 = parse_graph("2 1\n0 1").unwrap();
        assert_eq!(k2.n(), 2);
        assert_eq!(k2.num_edges(), 1);
        let k3 = parse_graph("3 3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!(k3.num_edges(), 3);
        assert_eq!(k3.render(), Graph::complete(3).render());
        assert!(k3.has_edge(0, 2));
    }

    #[test]
    fn parse_errors_name_their_line() {
        assert_eq!(
            parse_graph("2 1\n0 0"),
            Err(GraphError::SelfLoop { line: 2, vertex: 0 })
        );
        assert_eq!(
            parse_graph("3 2\n0 1\n1 0"),
            Err(GraphError::DuplicateEdge { line: 3, u: 0, v: 1 })
        );
        assert_eq!(
            parse_graph("2 1\n0 5"),
            Err(GraphError::EndpointOutOfRange {
                line: 2,
                vertex: 5,
                n: 2
            })
        );
        assert_eq!(
            parse_graph("2 1\n0 x"),
            Err(GraphError::MalformedLine { line: 2 })
        );
        assert_eq!(parse_graph("two"), Err(GraphError::MalformedHeader { line: 1 }));
        assert_eq!(
            parse_graph("3 2\n0 1"),
            Err(GraphError::EdgeCountMismatch {
                declared: 2,
                found: 1
            })
        );
    }

    #[test]
    fn render_round_trips() {
        let g = gen_erdos_renyi(9, 0.5, 11);
        let back = parse_graph(&g.render()).unwrap();
        assert_eq!(back.render(), g.render());
        assert_eq!(back.num_edges(), g.num_edges());
        for &(u, v) in g.edges() {
            assert!(back.has_edge(u, v));
        }
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert_eq!(gen_erdos_renyi(5, 0.0, 3).num_edges(), 0);
        assert_eq!(gen_erdos_renyi(5, 1.0, 3).num_edges(), 10);
        assert_eq!(gen_erdos_renyi(12, 0.4, 99), gen_erdos_renyi(12, 0.4, 99));
    }

    #[test]
    fn erdos_renyi_edge_count_statistics() {
        // Binomial(4950, 0.8): mean 3960, sigma ~ 28.14.
        let sigma = (4950.0f64 * 0.8 * 0.2).sqrt();
        for seed in 0..100 {
            let m = gen_erdos_renyi(100, 0.8, seed).num_edges() as f64;
            assert!((m - 3960.0).abs() <= 3.0 * sigma + 1e-9, "seed {seed}: {m}");
        }
        let m7 = gen_erdos_renyi(100, 0.8, 7).num_edges() as f64;
        assert!((m7 - 3960.0).abs() <= 3.0 * sigma);
    }

    #[test]
    fn cut_examples() {
        let k3 = Graph::complete(3);
        let c4 = Graph::cycle(4);
        assert_eq!(cut_size(&k3, &Coloring::from_bit_str("001").unwrap()), Ok(2));
        assert_eq!(cut_size(&c4, &Coloring::from_bit_str("0101").unwrap()), Ok(4));
        assert_eq!(cut_size(&c4, &Coloring::zeros(4)), Ok(0));
        assert_eq!(
            cut_size(&c4, &Coloring::zeros(3)),
            Err(GraphError::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_max_cut(&Graph::complete(3)).unwrap().value, 2);
        assert_eq!(brute_force_max_cut(&Graph::complete(5)).unwrap().value, 6);
        let g = gen_erdos_renyi(10, 0.5, 1);
        let best = brute_force_max_cut(&g).unwrap();
        assert_eq!(best.value, naive_max_cut(&g));
        assert_eq!(cut_size(&g, &best.argmax).unwrap(), best.value);
        assert!(!best.argmax.get(0));
    }

    #[test]
    fn brute_force_tie_break_is_smallest_index() {
        // K2 optima with vertex 0 = 0: only "01" (index 2).
        let best = brute_force_max_cut(&Graph::complete(2)).unwrap();
        assert_eq!(best.argmax.to_index(), 2);
        // C4 optima with vertex 0 = 0: only "0101" (index 0b1010).
        let best = brute_force_max_cut(&Graph::cycle(4)).unwrap();
        assert_eq!(best.argmax.to_index(), 0b1010);
    }

    #[test]
    fn brute_force_guard() {
        assert!(matches!(
            brute_force_max_cut(&Graph::empty(31)),
            Err(GraphError::TooLarge { n: 31, .. })
        ));
        assert_eq!(brute_force_max_cut(&Graph::empty(1)).unwrap().value, 0);
    }

    #[test]
    fn max_cut_at_least_half_edges_rounded_up() {
        for seed in 0..40 {
            let g = gen_erdos_renyi(11, 0.45, seed);
            let best = brute_force_max_cut(&g).unwrap().value;
            assert!(best >= g.num_edges().div_ceil(2));
            assert!(best <= g.num_edges());
        }
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::cycle(5);
        let sub = g.induced_subgraph(&[4, 0, 1]);
        assert_eq!(sub.n(), 3);
        // edges 0-1 and 4-0 survive -> (1,2) and (0,2) after relabelling [0,1,4].
        assert_eq!(sub.num_edges(), 2);
        assert!(sub.has_edge(0, 1));
        assert!(sub.has_edge(0, 2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn complement_symmetry(n in 2usize..14, p in 0.0f64..1.0, seed: u64, k: u64) {
                let g = gen_erdos_renyi(n, p, seed);
                let s = Coloring::from_index(n, k & ((1 << n) - 1));
                let c = cut_size(&g, &s).unwrap();
                prop_assert_eq!(c, cut_size(&g, &s.complement()).unwrap());
                prop_assert!(c <= g.num_edges());
            }

            #[test]
            fn parse_render_round_trip(n in 1usize..20, p in 0.0f64..1.0, seed: u64) {
                let g = gen_erdos_renyi(n, p, seed);
                let back = parse_graph(&g.render()).unwrap();
                prop_assert_eq!(back.render(), g.render());
            }
        }
    }
}
