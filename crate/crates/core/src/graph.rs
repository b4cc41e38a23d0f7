//! Dense graphs on a shared vertex set and collections of them.
//!
//! A vertex set is a `u64` bit mask, so graphs are limited to
//! [`MAX_VERTICES`] vertices and collections to [`MAX_COLORS`] colors. Row `v`
//! of a [`Graph`] is the neighborhood of `v`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;
pub const MAX_COLORS: usize = 64;

/// Bit mask over vertices (or colors).
pub type VertexSet = u64;

/// Iterates the indices of the set bits of `mask` in ascending order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Mask with the low `n` bits set.
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Collects vertex indices into a mask.
pub fn mask_of(vertices: impl IntoIterator<Item = usize>) -> VertexSet {
    vertices.into_iter().fold(0, |m, v| m | (1u64 << v))
}

/// Simple undirected graph, stored as one adjacency bit row per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph on {n} vertices exceeds {MAX_VERTICES}");
        Graph { n, rows: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        let all = full_mask(n);
        for v in 0..n {
            g.rows[v] = all & !(1u64 << v);
        }
        g
    }

    /// Clique on `part`, no other edges.
    pub fn clique_on(n: usize, part: VertexSet) -> Self {
        let mut g = Graph::empty(n);
        for v in bits(part) {
            g.rows[v] = part & !(1u64 << v);
        }
        g
    }

    /// Every edge between `a` and `b` (which must be disjoint).
    pub fn complete_bipartite(n: usize, a: VertexSet, b: VertexSet) -> Self {
        debug_assert_eq!(a & b, 0);
        let mut g = Graph::empty(n);
        for v in bits(a) {
            g.rows[v] |= b;
        }
        for v in bits(b) {
            g.rows[v] |= a;
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.rows[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Adds `uv`; panics on a loop or an out-of-range vertex.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::pre(format!("edge {u} {v} out of range for {} vertices", self.n)));
        }
        if u == v {
            return Err(Error::pre(format!("loop at vertex {u}")));
        }
        self.rows[u] |= 1u64 << v;
        self.rows[v] |= 1u64 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1u64 << v);
        self.rows[v] &= !(1u64 << u);
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.rows[u] >> u >> 1).map(move |k| (u, u + 1 + k)))
    }

    /// Number of edges with both endpoints in `part`.
    pub fn edges_inside(&self, part: VertexSet) -> usize {
        bits(part)
            .map(|v| (self.rows[v] & part).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> usize {
        bits(a).map(|v| (self.rows[v] & b).count_ones() as usize).sum()
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Graph) -> Graph {
        debug_assert_eq!(self.n, other.n);
        Graph {
            n: self.n,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Connected components as vertex masks, ordered by lowest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.rows[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Adjacency rows agree with each other and carry no loops.
    pub fn is_symmetric_and_loop_free(&self) -> bool {
        (0..self.n).all(|u| {
            self.rows[u] >> u & 1 == 0
                && self.rows[u] & !full_mask(self.n) == 0
                && bits(self.rows[u]).all(|v| self.rows[v] >> u & 1 == 1)
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// `m` graphs on a common vertex set; graph `i` has color `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphCollection {
    n: usize,
    graphs: Vec<Graph>,
}

impl GraphCollection {
    pub fn new(n: usize, graphs: Vec<Graph>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count",
                limit: MAX_VERTICES,
            });
        }
        if graphs.len() > MAX_COLORS {
            return Err(Error::TooLarge {
                what: "color count",
                limit: MAX_COLORS,
            });
        }
        if let Some(g) = graphs.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n(),
            });
        }
        Ok(GraphCollection { n, graphs })
    }

    /// `m` copies of `g`.
    pub fn copies(g: &Graph, m: usize) -> Self {
        GraphCollection::new(g.n(), vec![g.clone(); m]).expect("copies of one graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of colors.
    pub fn m(&self) -> usize {
        self.graphs.len()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn graph(&self, color: usize) -> &Graph {
        &self.graphs[color]
    }

    pub fn colors(&self) -> std::ops::Range<usize> {
        0..self.graphs.len()
    }

    pub fn has_edge(&self, color: usize, u: usize, v: usize) -> bool {
        self.graphs[color].has_edge(u, v)
    }

    /// Mask of the colors whose graph contains `uv`.
    pub fn colors_of(&self, u: usize, v: usize) -> u64 {
        self.graphs
            .iter()
            .enumerate()
            .filter(|(_, g)| g.has_edge(u, v))
            .fold(0, |m, (i, _)| m | (1u64 << i))
    }

    /// Union of all member graphs.
    pub fn union_graph(&self) -> Graph {
        self.graphs.iter().fold(Graph::empty(self.n), |acc, g| acc.union(g))
    }

    /// Minimum over colors and vertices of the degree.
    pub fn min_degree(&self) -> Result<usize> {
        if self.graphs.is_empty() {
            return Err(Error::EmptyCollection);
        }
        Ok(self.graphs.iter().map(Graph::min_degree).min().unwrap_or(0))
    }

    pub fn with_graph(mut self, color: usize, g: Graph) -> Self {
        assert_eq!(g.n(), self.n);
        self.graphs[color] = g;
        self
    }

    pub fn graph_mut(&mut self, color: usize) -> &mut Graph {
        &mut self.graphs[color]
    }

    /// Same collection with one more color appended.
    pub fn push(&mut self, g: Graph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.n(),
            });
        }
        if self.graphs.len() == MAX_COLORS {
            return Err(Error::TooLarge {
                what: "color count",
                limit: MAX_COLORS,
            });
        }
        self.graphs.push(g);
        Ok(())
    }

    /// Relabels vertices by `vertex_perm` and moves color `i` to `color_perm[i]`.
    pub fn relabeled(&self, vertex_perm: &[usize], color_perm: &[usize]) -> Self {
        let mut graphs = vec![Graph::empty(self.n); self.m()];
        for (i, g) in self.graphs.iter().enumerate() {
            graphs[color_perm[i]] = g.permuted(vertex_perm);
        }
        GraphCollection { n: self.n, graphs }
    }
}

/// Bipartition `A ∪ B` of the vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    a: VertexSet,
    b: VertexSet,
}

impl Partition {
    pub fn new(n: usize, a: VertexSet) -> Result<Self> {
        let all = full_mask(n);
        if a & !all != 0 {
            return Err(Error::pre("partition side contains out-of-range vertices"));
        }
        Ok(Partition { a, b: all & !a })
    }

    pub fn from_sides(n: usize, a: &[usize], b: &[usize]) -> Result<Self> {
        let (ma, mb) = (mask_of(a.iter().copied()), mask_of(b.iter().copied()));
        if ma & mb != 0 || ma | mb != full_mask(n) {
            return Err(Error::pre("sides must partition the vertex set"));
        }
        Ok(Partition { a: ma, b: mb })
    }

    pub fn a(&self) -> VertexSet {
        self.a
    }

    pub fn b(&self) -> VertexSet {
        self.b
    }

    pub fn a_vertices(&self) -> Vec<usize> {
        bits(self.a).collect()
    }

    pub fn b_vertices(&self) -> Vec<usize> {
        bits(self.b).collect()
    }

    pub fn swapped(&self) -> Self {
        Partition { a: self.b, b: self.a }
    }

    pub fn is_equitable(&self) -> bool {
        (self.a.count_ones() as i64 - self.b.count_ones() as i64).abs() <= 1
    }

    pub fn crosses(&self, u: usize, v: usize) -> bool {
        (self.a >> u & 1) != (self.a >> v & 1)
    }
}
