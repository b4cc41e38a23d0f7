//! Exhaustive search for transversal and rainbow Hamilton paths and cycles.
//!
//! The search enumerates vertex sequences depth first (neighbors in ascending
//! order) and carries an incremental matching from the edges chosen so far to
//! distinct colors. A branch dies as soon as that matching cannot be extended,
//! so colors are never branched on explicitly; the final coloring is computed
//! by [`find_assignment`] and is therefore deterministic.
//!
//! Cycles are rooted at their smallest vertex and reported only when the
//! second vertex is smaller than the last, which removes rotations and
//! reflections. Hamilton searches additionally prune a branch when some
//! unvisited vertex has too few usable neighbors left.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assign::{assignment_oracle, find_assignment, ColorMatching, HostSubgraph, Mode};
use crate::error::{Error, Result};
use crate::graph::{bits, full_mask, GraphCollection};

/// Default cap on `n` for the exponential searches.
pub const DEFAULT_MAX_N: usize = 24;
/// Cap on `n` for [`count_transversal_hamilton_cycles`].
pub const COUNT_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Path,
    Cycle,
}

/// A rainbow path or cycle: its vertex sequence and the color of each edge.
///
/// For a cycle the last entry of `edge_colors` belongs to the closing edge
/// from the last vertex back to the first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RainbowWalkResult {
    pub kind: WalkKind,
    pub vertices: Vec<usize>,
    pub edge_colors: Vec<usize>,
}

impl RainbowWalkResult {
    /// Consecutive vertex pairs, plus the closing pair for a cycle.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let vs = &self.vertices;
        let mut out: Vec<_> = vs.windows(2).map(|w| (w[0], w[1])).collect();
        if self.kind == WalkKind::Cycle && vs.len() >= 3 {
            out.push((vs[vs.len() - 1], vs[0]));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        match self.kind {
            WalkKind::Path => self.vertices.len().saturating_sub(1),
            WalkKind::Cycle if self.vertices.len() >= 3 => self.vertices.len(),
            WalkKind::Cycle => 0,
        }
    }

    pub fn host(&self, n: usize) -> Result<HostSubgraph> {
        HostSubgraph::new(n, self.edges())
    }

    /// Vertex mask of the walk.
    pub fn vertex_set(&self) -> u64 {
        self.vertices.iter().fold(0, |m, &v| m | (1u64 << v))
    }

    /// Color mask of the walk.
    pub fn color_set(&self) -> u64 {
        self.edge_colors.iter().fold(0, |m, &c| m | (1u64 << c))
    }

    /// Checks the walk against `c`: distinct in-range vertices, one color per
    /// edge, every edge present in its color, colors pairwise distinct.
    pub fn validate(&self, c: &GraphCollection) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidWalk(msg));
        if self.kind == WalkKind::Cycle && self.vertices.len() < 3 {
            return bad("a cycle needs at least 3 vertices".into());
        }
        let mut seen = 0u64;
        for &v in &self.vertices {
            if v >= c.n() {
                return bad(format!("vertex {v} out of range"));
            }
            if seen >> v & 1 == 1 {
                return bad(format!("vertex {v} repeated"));
            }
            seen |= 1u64 << v;
        }
        let edges = self.edges();
        if edges.len() != self.edge_colors.len() {
            return bad(format!("{} edges but {} colors", edges.len(), self.edge_colors.len()));
        }
        let mut used = 0u64;
        for (&(u, v), &color) in edges.iter().zip(&self.edge_colors) {
            if color >= c.m() {
                return bad(format!("color {color} out of range"));
            }
            if used >> color & 1 == 1 {
                return bad(format!("color {color} repeated"));
            }
            used |= 1u64 << color;
            if !c.has_edge(color, u, v) {
                return bad(format!("edge {u} {v} missing from color {color}"));
            }
        }
        Ok(())
    }

    /// True when the walk uses every color of `c` exactly once.
    pub fn is_transversal_in(&self, c: &GraphCollection) -> bool {
        self.validate(c).is_ok() && self.edge_colors.len() == c.m()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_n: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_n: DEFAULT_MAX_N }
    }
}

impl SolverConfig {
    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::TooLarge {
                what: "vertex count for exhaustive search",
                limit: self.max_n,
            });
        }
        Ok(())
    }
}

/// Depth-first walker shared by every search in this module.
struct Walker {
    n: usize,
    adj: Vec<u64>,
    /// Color mask of each vertex pair, row-major.
    pair_colors: Vec<u64>,
    kind: WalkKind,
    /// Number of vertices in a complete walk.
    len: usize,
    /// Vertices the walk may use.
    universe: u64,
    /// Every universe vertex must be covered; enables degree pruning.
    spanning: bool,
    matching: ColorMatching,
    path: Vec<usize>,
    visited: u64,
}

impl Walker {
    fn new(c: &GraphCollection, kind: WalkKind, len: usize, universe: u64) -> Self {
        let adj = c.union_graph().rows().iter().map(|r| r & universe).collect();
        let n = c.n();
        let mut pair_colors = vec![0u64; n * n];
        for (color, g) in c.graphs().iter().enumerate() {
            for (u, v) in g.edges() {
                pair_colors[u * n + v] |= 1u64 << color;
                pair_colors[v * n + u] |= 1u64 << color;
            }
        }
        Walker {
            n,
            adj,
            pair_colors,
            kind,
            len,
            universe,
            spanning: len == universe.count_ones() as usize,
            matching: ColorMatching::new(c.m()),
            path: Vec::with_capacity(len),
            visited: 0,
        }
    }

    fn edge_colors(&self, u: usize, v: usize) -> u64 {
        self.pair_colors[u * self.n + v]
    }

    /// Starts the walk at `v`; false if `v`'s edge to the previous vertex
    /// cannot join the matching.
    fn push(&mut self, v: usize) -> bool {
        if let Some(&end) = self.path.last() {
            if !self.matching.push(self.edge_colors(end, v)) {
                return false;
            }
        }
        self.path.push(v);
        self.visited |= 1u64 << v;
        true
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("non-empty walk");
        self.visited &= !(1u64 << v);
        if !self.path.is_empty() {
            self.matching.pop();
        }
    }

    /// Necessary conditions for completing a spanning walk.
    fn viable(&self) -> bool {
        let end = *self.path.last().expect("non-empty walk");
        let unvisited = self.universe & !self.visited;
        match self.kind {
            WalkKind::Cycle => {
                let root = self.path[0];
                if self.path.len() > 1 && unvisited != 0 && self.adj[root] & unvisited == 0 {
                    return false;
                }
                let avail = unvisited | (1u64 << end) | (1u64 << root);
                bits(unvisited).all(|w| (self.adj[w] & avail).count_ones() >= 2)
            }
            WalkKind::Path => {
                let avail = unvisited | (1u64 << end);
                let mut terminals = 0;
                for w in bits(unvisited) {
                    match (self.adj[w] & avail).count_ones() {
                        0 => return false,
                        1 => terminals += 1,
                        _ => {}
                    }
                }
                terminals <= 1
            }
        }
    }

    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let end = *self.path.last().expect("non-empty walk");
        if self.path.len() == self.len {
            return match self.kind {
                WalkKind::Path => {
                    if self.len == 1 || self.path[0] < end {
                        visit(&self.path)
                    } else {
                        ControlFlow::Continue(())
                    }
                }
                WalkKind::Cycle => {
                    let root = self.path[0];
                    if self.len < 3 || self.path[1] > end || self.adj[end] >> root & 1 == 0 {
                        return ControlFlow::Continue(());
                    }
                    if !self.matching.push(self.edge_colors(end, root)) {
                        return ControlFlow::Continue(());
                    }
                    let flow = visit(&self.path);
                    self.matching.pop();
                    flow
                }
            };
        }
        if self.spanning && !self.viable() {
            return ControlFlow::Continue(());
        }
        for v in bits(self.adj[end] & !self.visited) {
            if self.push(v) {
                let flow = self.run(visit);
                self.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Runs from the given prefix; the prefix must be pushable.
    fn run_from<F>(&mut self, prefix: &[usize], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut pushed = 0;
        let mut flow = ControlFlow::Continue(());
        let ok = prefix.iter().all(|&v| {
            let ok = self.visited >> v & 1 == 0 && self.push(v);
            pushed += ok as usize;
            ok
        });
        if ok {
            flow = self.run(visit);
        }
        for _ in 0..pushed {
            self.pop();
        }
        flow
    }
}

fn first_walk(walker: &mut Walker, prefix: &[usize]) -> Option<Vec<usize>> {
    let mut found = None;
    let _ = walker.run_from(prefix, &mut |p: &[usize]| {
        found = Some(p.to_vec());
        ControlFlow::Break(())
    });
    found
}

fn colored(c: &GraphCollection, kind: WalkKind, vertices: Vec<usize>, mode: Mode) -> RainbowWalkResult {
    let mut walk = RainbowWalkResult {
        kind,
        vertices,
        edge_colors: Vec::new(),
    };
    let host = walk.host(c.n()).expect("search yields simple walks");
    walk.edge_colors = find_assignment(&host, c, mode)
        .expect("search respects the color budget")
        .expect("search only reports matchable walks")
        .colors;
    walk
}

fn check_cycle_shape(c: &GraphCollection, config: &SolverConfig) -> Result<()> {
    if c.m() != c.n() {
        return Err(Error::ColorCount {
            expected: c.n(),
            found: c.m(),
        });
    }
    if c.n() < 3 {
        return Err(Error::pre("a Hamilton cycle needs n >= 3"));
    }
    config.check(c.n())
}

/// Transversal Hamilton cycle (`m = n`), or `None` if none exists.
pub fn find_transversal_hamilton_cycle(c: &GraphCollection) -> Result<Option<RainbowWalkResult>> {
    find_transversal_hamilton_cycle_with(c, &SolverConfig::default())
}

pub fn find_transversal_hamilton_cycle_with(
    c: &GraphCollection,
    config: &SolverConfig,
) -> Result<Option<RainbowWalkResult>> {
    check_cycle_shape(c, config)?;
    let mut walker = Walker::new(c, WalkKind::Cycle, c.n(), full_mask(c.n()));
    Ok(first_walk(&mut walker, &[0]).map(|vs| colored(c, WalkKind::Cycle, vs, Mode::Transversal)))
}

/// Same verdict and witness as [`find_transversal_hamilton_cycle`], with the
/// choice of the root's successor fanned out across the rayon pool.
pub fn find_transversal_hamilton_cycle_sharded(c: &GraphCollection) -> Result<Option<RainbowWalkResult>> {
    let config = SolverConfig::default();
    check_cycle_shape(c, &config)?;
    let seconds: Vec<usize> = bits(c.union_graph().neighbors(0)).collect();
    Ok(seconds
        .par_iter()
        .find_map_first(|&second| {
            let mut walker = Walker::new(c, WalkKind::Cycle, c.n(), full_mask(c.n()));
            first_walk(&mut walker, &[0, second])
        })
        .map(|vs| colored(c, WalkKind::Cycle, vs, Mode::Transversal)))
}

/// Transversal Hamilton path (`m = n - 1`), or `None` if none exists.
pub fn find_transversal_hamilton_path(c: &GraphCollection) -> Result<Option<RainbowWalkResult>> {
    find_transversal_hamilton_path_with(c, &SolverConfig::default())
}

pub fn find_transversal_hamilton_path_with(
    c: &GraphCollection,
    config: &SolverConfig,
) -> Result<Option<RainbowWalkResult>> {
    let n = c.n();
    if n < 2 {
        return Err(Error::pre("a Hamilton path search needs n >= 2"));
    }
    if c.m() != n - 1 {
        return Err(Error::ColorCount {
            expected: n - 1,
            found: c.m(),
        });
    }
    config.check(n)?;
    let mut walker = Walker::new(c, WalkKind::Path, n, full_mask(n));
    for start in 0..n {
        if let Some(vs) = first_walk(&mut walker, &[start]) {
            return Ok(Some(colored(c, WalkKind::Path, vs, Mode::Transversal)));
        }
    }
    Ok(None)
}

/// Longest rainbow cycle with at least `min_len` vertices.
///
/// Lengths are tried from `min(n, m)` downwards; within a length, cycles are
/// rooted at their smallest vertex, roots in ascending order.
pub fn find_longest_rainbow_cycle(c: &GraphCollection, min_len: usize) -> Result<Option<RainbowWalkResult>> {
    find_longest_rainbow_cycle_with(c, min_len, &SolverConfig::default())
}

pub fn find_longest_rainbow_cycle_with(
    c: &GraphCollection,
    min_len: usize,
    config: &SolverConfig,
) -> Result<Option<RainbowWalkResult>> {
    let n = c.n();
    if min_len < 3 || min_len > n {
        return Err(Error::pre(format!("min_len must lie in [3, {n}], got {min_len}")));
    }
    config.check(n)?;
    for len in (min_len..=n.min(c.m())).rev() {
        if let Some(walk) = rainbow_cycle_of_length(c, len) {
            return Ok(Some(walk));
        }
    }
    Ok(None)
}

/// Some rainbow cycle on exactly `len` vertices.
pub(crate) fn rainbow_cycle_of_length(c: &GraphCollection, len: usize) -> Option<RainbowWalkResult> {
    let n = c.n();
    if len < 3 || len > n || len > c.m() {
        return None;
    }
    for root in 0..=(n - len) {
        let universe = full_mask(n) & !full_mask(root);
        let mut walker = Walker::new(c, WalkKind::Cycle, len, universe);
        if let Some(vs) = first_walk(&mut walker, &[root]) {
            return Some(colored(c, WalkKind::Cycle, vs, Mode::Rainbow));
        }
    }
    None
}

/// Number of (Hamilton cycle, color bijection) pairs, cycles counted up to
/// rotation and reflection.
pub fn count_transversal_hamilton_cycles(c: &GraphCollection) -> Result<u64> {
    if c.n() > COUNT_MAX_N {
        return Err(Error::TooLarge {
            what: "vertex count for counting",
            limit: COUNT_MAX_N,
        });
    }
    check_cycle_shape(c, &SolverConfig::default())?;
    let mut total = 0u64;
    let mut walker = Walker::new(c, WalkKind::Cycle, c.n(), full_mask(c.n()));
    let _ = walker.run_from(&[0], &mut |vs: &[usize]| {
        let masks: Vec<u64> = vs
            .iter()
            .zip(vs.iter().cycle().skip(1))
            .map(|(&u, &v)| c.colors_of(u, v))
            .collect();
        total += perfect_matchings(&masks);
        ControlFlow::Continue(())
    });
    Ok(total)
}

/// Perfect matchings between `masks.len()` slots and as many colors
/// (a 0/1 permanent), by dynamic programming over used-color sets.
fn perfect_matchings(masks: &[u64]) -> u64 {
    let k = masks.len();
    let mut ways = vec![0u64; 1 << k];
    ways[0] = 1;
    for used in 0..(1usize << k) {
        let w = ways[used];
        if w == 0 {
            continue;
        }
        let slot = used.count_ones() as usize;
        if slot == k {
            continue;
        }
        for color in bits(masks[slot] & !(used as u64) & full_mask(k)) {
            ways[used | 1 << color] += w;
        }
    }
    ways[(1 << k) - 1]
}

/// Largest `n` the permutation oracles accept.
pub const ORACLE_MAX_N: usize = 9;

/// Reference search: every vertex permutation, colored by the brute-force
/// assignment oracle. Independent of the walker above.
pub fn permutation_oracle(c: &GraphCollection, kind: WalkKind) -> Result<Option<RainbowWalkResult>> {
    let n = c.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            what: "vertex count for the permutation oracle",
            limit: ORACLE_MAX_N,
        });
    }
    match kind {
        WalkKind::Cycle => check_cycle_shape(c, &SolverConfig::default())?,
        WalkKind::Path if n < 2 || c.m() != n - 1 => {
            return Err(Error::ColorCount {
                expected: n.saturating_sub(1),
                found: c.m(),
            })
        }
        WalkKind::Path => {}
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let walk = RainbowWalkResult {
            kind,
            vertices: perm.clone(),
            edge_colors: Vec::new(),
        };
        let host = walk.host(n)?;
        if let Some(a) = assignment_oracle(&host, c, Mode::Transversal)? {
            return Ok(Some(RainbowWalkResult {
                edge_colors: a.colors,
                ..walk
            }));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
