//! Constructive moves on rainbow paths and cycles.
//!
//! The pipeline in [`constructive_hamilton_path`] follows the classical
//! argument for transversal Hamilton paths in collections of `n - 1` graphs
//! with minimum degree at least `(n - 1) / 2`:
//!
//! 1. find a rainbow cycle on at least `n - 2` vertices;
//! 2. with one vertex `y` left over, open the cycle at an edge whose color
//!    also reaches `y`, or splice `y` in next to the cycle vertex of largest
//!    in-degree in the auxiliary digraph;
//! 3. with two vertices left over, combine the rotations that either grow the
//!    cycle, re-route it to free a different color, or bypass it through one
//!    leftover vertex and then absorb the other;
//! 4. fall back to the exhaustive solver if no move applies.
//!
//! Every candidate is re-validated before it is returned, so the moves are
//! heuristics only in the sense that they may miss; they never produce an
//! invalid walk.

use serde::{Deserialize, Serialize};

use crate::assign::{ColorAssignment, Mode};
use crate::error::{Error, Result};
use crate::graph::{bits, full_mask, GraphCollection};
use crate::solver::{find_longest_rainbow_cycle, find_transversal_hamilton_path, RainbowWalkResult, WalkKind};

/// Digraph with an arc `x -> z` whenever `x` lies on a rainbow walk, the walk
/// edge leaving `x` has color `i`, `xz` is an edge of `G_i`, and `z` is not
/// the walk successor of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryDigraph {
    n: usize,
    out: Vec<u64>,
    base: RainbowWalkResult,
}

impl AuxiliaryDigraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_walk(&self) -> &RainbowWalkResult {
        &self.base
    }

    pub fn out_neighbors(&self, v: usize) -> u64 {
        self.out[v]
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out[from] >> to & 1 == 1
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.out.iter().filter(|row| *row >> v & 1 == 1).count()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| bits(self.out[x]).map(move |z| (x, z)))
    }
}

pub fn build_aux_digraph(walk: &RainbowWalkResult, c: &GraphCollection) -> Result<AuxiliaryDigraph> {
    walk.validate(c)?;
    let mut out = vec![0u64; c.n()];
    let len = walk.vertices.len();
    for (i, &color) in walk.edge_colors.iter().enumerate() {
        let x = walk.vertices[i];
        let succ = walk.vertices[(i + 1) % len];
        out[x] = c.graph(color).neighbors(x) & !(1u64 << succ);
    }
    Ok(AuxiliaryDigraph {
        n: c.n(),
        out,
        base: walk.clone(),
    })
}

/// Closes a rainbow path `x_1 ... x_t` into a rainbow cycle on the same
/// vertices using two reserve colors.
///
/// Looks for the smallest `j` such that `x_1 x_{j+1}` is an edge of the first
/// reserve color (`1 <= j <= t - 2`) and `x_j x_t` is an edge of the second
/// (`2 <= j <= t - 1`), and returns `x_1 x_{j+1} ... x_t x_j x_{j-1} ... x_2`.
pub fn rotate_to_cycle(
    path: &RainbowWalkResult,
    c: &GraphCollection,
    reserve: (usize, usize),
) -> Result<Option<RainbowWalkResult>> {
    if path.kind != WalkKind::Path {
        return Err(Error::InvalidWalk("rotation expects a path".into()));
    }
    path.validate(c)?;
    let (first, second) = reserve;
    if first == second || first >= c.m() || second >= c.m() {
        return Err(Error::pre(
            "reserve colors must be two distinct colors of the collection",
        ));
    }
    if path.edge_colors.contains(&first) || path.edge_colors.contains(&second) {
        return Err(Error::pre("reserve colors must not appear on the path"));
    }
    let t = path.vertices.len();
    if t < 3 {
        return Ok(None);
    }
    // 1-based x_k is vertices[k - 1].
    let x = |k: usize| path.vertices[k - 1];
    let col = |k: usize| path.edge_colors[k - 1];
    let hit = (2..=t - 2).find(|&j| c.has_edge(first, x(1), x(j + 1)) && c.has_edge(second, x(j), x(t)));
    let Some(j) = hit else {
        return Ok(None);
    };
    let mut vertices = vec![x(1)];
    let mut edge_colors = vec![first];
    for k in j + 1..t {
        vertices.push(x(k));
        edge_colors.push(col(k));
    }
    vertices.push(x(t));
    edge_colors.push(second);
    for k in (2..=j).rev() {
        vertices.push(x(k));
        edge_colors.push(col(k - 1));
    }
    let cycle = RainbowWalkResult {
        kind: WalkKind::Cycle,
        vertices,
        edge_colors,
    };
    debug_assert!(cycle.validate(c).is_ok());
    Ok(Some(cycle))
}

/// Joins `p` and `q` into one rainbow path `p, bridge, q` through one or two
/// new vertices, with bridge colors drawn from `pool`.
///
/// One-vertex bridges are tried before two-vertex bridges; within a size,
/// bridge vertices and then colors are tried in ascending order.
pub fn connect_paths(
    p: &RainbowWalkResult,
    q: &RainbowWalkResult,
    c: &GraphCollection,
    pool: &[usize],
    forbidden: &[usize],
) -> Result<Option<RainbowWalkResult>> {
    for (name, w) in [("p", p), ("q", q)] {
        if w.kind != WalkKind::Path || w.vertices.is_empty() {
            return Err(Error::InvalidWalk(format!("{name} must be a non-empty path")));
        }
        w.validate(c)?;
    }
    if p.vertex_set() & q.vertex_set() != 0 || p.color_set() & q.color_set() != 0 {
        return Err(Error::pre("paths must be vertex- and color-disjoint"));
    }
    let mut pool_mask = 0u64;
    for &color in pool {
        if color >= c.m() {
            return Err(Error::pre(format!("pool color {color} out of range")));
        }
        pool_mask |= 1u64 << color;
    }
    if pool_mask & (p.color_set() | q.color_set()) != 0 {
        return Err(Error::pre("pool colors must be unused by both paths"));
    }
    let blocked = forbidden
        .iter()
        .fold(p.vertex_set() | q.vertex_set(), |m, &v| m | (1u64 << v));
    let free = full_mask(c.n()) & !blocked;
    let (u, v) = (*p.vertices.last().unwrap(), q.vertices[0]);
    let avail = |a: usize, b: usize, used: u64| c.colors_of(a, b) & pool_mask & !used;

    let join = |bridge: &[usize], colors: &[usize]| {
        let mut vertices = p.vertices.clone();
        vertices.extend_from_slice(bridge);
        vertices.extend_from_slice(&q.vertices);
        let mut edge_colors = p.edge_colors.clone();
        edge_colors.extend_from_slice(colors);
        edge_colors.extend_from_slice(&q.edge_colors);
        RainbowWalkResult {
            kind: WalkKind::Path,
            vertices,
            edge_colors,
        }
    };

    for w in bits(free) {
        for c1 in bits(avail(u, w, 0)) {
            if let Some(c2) = bits(avail(w, v, 1u64 << c1)).next() {
                return Ok(Some(join(&[w], &[c1, c2])));
            }
        }
    }
    for w in bits(free) {
        for w2 in bits(free & !(1u64 << w)) {
            for c1 in bits(avail(u, w, 0)) {
                for c2 in bits(avail(w, w2, 1u64 << c1)) {
                    let used = (1u64 << c1) | (1u64 << c2);
                    if let Some(c3) = bits(avail(w2, v, used)).next() {
                        return Ok(Some(join(&[w, w2], &[c1, c2, c3])));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Which stage of the pipeline produced the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Rainbow cycle on `n - 1` vertices, one vertex spliced in.
    CaseOne,
    /// Rainbow cycle on `n - 2` vertices, two vertices absorbed.
    CaseTwo,
    /// Exhaustive solver.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub walk: Option<RainbowWalkResult>,
    pub route: Route,
}

/// Transversal Hamilton path for `m = n - 1`, built by rotations where
/// possible and by exhaustive search otherwise.
pub fn constructive_hamilton_path(c: &GraphCollection) -> Result<Option<RainbowWalkResult>> {
    Ok(constructive_hamilton_path_traced(c)?.walk)
}

pub fn constructive_hamilton_path_traced(c: &GraphCollection) -> Result<Construction> {
    let n = c.n();
    if n < 2 || c.m() != n - 1 {
        return Err(Error::ColorCount {
            expected: n.saturating_sub(1),
            found: c.m(),
        });
    }
    if n >= 4 {
        let mut pipeline = Pipeline::new(c);
        if let Some(cycle) = find_longest_rainbow_cycle(c, 3.max(n - 2))? {
            let ring = Ring::from_walk(&cycle);
            let missing: Vec<usize> = bits(full_mask(n) & !cycle.vertex_set()).collect();
            let (found, route) = match missing[..] {
                [y] => (pipeline.case_one(&ring, y), Route::CaseOne),
                [y, y2] => (pipeline.case_two(&ring, y, y2), Route::CaseTwo),
                _ => (None, Route::Fallback),
            };
            if let Some(walk) = found {
                check_transversal(&walk, c)?;
                return Ok(Construction {
                    walk: Some(walk),
                    route,
                });
            }
        }
    }
    let walk = find_transversal_hamilton_path(c)?;
    if let Some(w) = &walk {
        check_transversal(w, c)?;
    }
    Ok(Construction {
        walk,
        route: Route::Fallback,
    })
}

fn check_transversal(walk: &RainbowWalkResult, c: &GraphCollection) -> Result<()> {
    walk.validate(c)?;
    let assignment = ColorAssignment {
        mode: Mode::Transversal,
        colors: walk.edge_colors.clone(),
    };
    if !assignment.is_valid_for(&walk.host(c.n())?, c) || walk.vertices.len() != c.n() {
        return Err(Error::InvalidWalk(
            "constructed path is not a transversal Hamilton path".into(),
        ));
    }
    Ok(())
}

/// Rainbow cycle with an orientation and a distinguished first vertex.
/// `cols[i]` colors the edge `verts[i] verts[i + 1 mod len]`.
#[derive(Debug, Clone)]
struct Ring {
    verts: Vec<usize>,
    cols: Vec<usize>,
}

impl Ring {
    fn from_walk(w: &RainbowWalkResult) -> Self {
        Ring {
            verts: w.vertices.clone(),
            cols: w.edge_colors.clone(),
        }
    }

    fn len(&self) -> usize {
        self.verts.len()
    }

    fn rotated(&self, k: usize) -> Ring {
        let mut r = self.clone();
        r.verts.rotate_left(k);
        r.cols.rotate_left(k);
        r
    }

    fn reversed(&self) -> Ring {
        let l = self.len();
        Ring {
            verts: (0..l).map(|i| self.verts[(l - i) % l]).collect(),
            cols: (0..l).map(|i| self.cols[l - 1 - i]).collect(),
        }
    }

    fn to_walk(&self) -> RainbowWalkResult {
        RainbowWalkResult {
            kind: WalkKind::Cycle,
            vertices: self.verts.clone(),
            edge_colors: self.cols.clone(),
        }
    }
}

/// Rainbow path; `cols[i]` colors the edge `verts[i] verts[i + 1]`.
#[derive(Debug, Clone)]
struct Chain {
    verts: Vec<usize>,
    cols: Vec<usize>,
}

impl Chain {
    fn reversed(&self) -> Chain {
        let mut r = self.clone();
        r.verts.reverse();
        r.cols.reverse();
        r
    }

    fn extended(&self, v: usize, color: usize) -> Chain {
        let mut r = self.clone();
        r.verts.push(v);
        r.cols.push(color);
        r
    }
}

/// Rotation and splicing moves with a shared budget of `n^2` candidates.
struct Pipeline<'a> {
    c: &'a GraphCollection,
    budget: usize,
}

impl<'a> Pipeline<'a> {
    fn new(c: &'a GraphCollection) -> Self {
        Pipeline {
            c,
            budget: c.n() * c.n(),
        }
    }

    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        true
    }

    fn has(&self, color: usize, u: usize, v: usize) -> bool {
        self.c.has_edge(color, u, v)
    }

    fn finish(&self, chain: &Chain) -> Option<RainbowWalkResult> {
        let walk = RainbowWalkResult {
            kind: WalkKind::Path,
            vertices: chain.verts.clone(),
            edge_colors: chain.cols.clone(),
        };
        (walk.validate(self.c).is_ok() && walk.is_transversal_in(self.c)).then_some(walk)
    }

    fn valid_ring(&self, ring: &Ring) -> bool {
        ring.to_walk().validate(self.c).is_ok()
    }

    /// Ring positions ordered by in-degree in the auxiliary digraph, largest
    /// first, ties by vertex index.
    fn by_in_degree(&self, ring: &Ring) -> Vec<usize> {
        let Ok(d) = build_aux_digraph(&ring.to_walk(), self.c) else {
            return Vec::new();
        };
        let mut order: Vec<usize> = (0..ring.len()).collect();
        order.sort_by_key(|&p| (std::cmp::Reverse(d.in_degree(ring.verts[p])), ring.verts[p]));
        order
    }

    /// Up to `limit` rainbow paths that start at `y`, cover the ring, and use
    /// exactly the ring's colors.
    fn pendants(&mut self, ring: &Ring, y: usize, limit: usize) -> Vec<Chain> {
        let l = ring.len();
        let (v, cols) = (&ring.verts, &ring.cols);
        let mut out = Vec::new();
        // Open the ring at an edge whose color also joins y to an end.
        for i in 0..l {
            if out.len() >= limit {
                return out;
            }
            if self.has(cols[i], y, v[i]) && self.spend() {
                let mut verts = vec![y];
                verts.extend((0..l).map(|k| v[(i + l - k) % l]));
                let mut cs = vec![cols[i]];
                cs.extend((1..l).map(|k| cols[(i + l - k) % l]));
                out.push(Chain { verts, cols: cs });
            }
            if self.has(cols[i], y, v[(i + 1) % l]) && self.spend() {
                let mut verts = vec![y];
                verts.extend((0..l).map(|k| v[(i + 1 + k) % l]));
                let mut cs = vec![cols[i]];
                cs.extend((0..l - 1).map(|k| cols[(i + 1 + k) % l]));
                out.push(Chain { verts, cols: cs });
            }
        }
        // Splice y next to x_1: x_2 .. x_a x_1 x_l .. x_{a+1} y.
        for oriented in [ring.clone(), ring.reversed()] {
            for p in self.by_in_degree(&oriented) {
                let r = oriented.rotated(p);
                let (v, cols) = (&r.verts, &r.cols);
                for a in 1..l - 1 {
                    if out.len() >= limit || self.budget == 0 {
                        return out;
                    }
                    if !(self.has(cols[a], v[a], v[0]) && self.has(cols[0], v[a + 1], y)) || !self.spend() {
                        continue;
                    }
                    let mut verts: Vec<usize> = v[1..=a].to_vec();
                    verts.push(v[0]);
                    verts.extend(v[a + 1..].iter().rev());
                    verts.push(y);
                    let mut cs: Vec<usize> = cols[1..a].to_vec();
                    cs.push(cols[a]);
                    cs.push(cols[l - 1]);
                    cs.extend(cols[a + 1..l - 1].iter().rev());
                    cs.push(cols[0]);
                    out.push(Chain { verts, cols: cs }.reversed());
                }
            }
        }
        out
    }

    fn case_one(&mut self, ring: &Ring, y: usize) -> Option<RainbowWalkResult> {
        let chains = self.pendants(ring, y, 1);
        chains.iter().find_map(|ch| self.finish(ch))
    }

    /// Ring on `n - 2` vertices, leftover vertices `a` and `b`, exactly one
    /// color off the ring.
    fn case_two(&mut self, ring: &Ring, a: usize, b: usize) -> Option<RainbowWalkResult> {
        let on_ring = ring.cols.iter().fold(0u64, |m, &c| m | (1u64 << c));
        let free = bits(full_mask(self.c.m()) & !on_ring).next()?;
        let l = ring.len();

        // Leftover edge in the free color: extend any pendant path.
        for (y, y2) in [(a, b), (b, a)] {
            if self.has(free, y, y2) {
                for ch in self.pendants(ring, y, 1) {
                    if let Some(w) = self.finish(&ch.reversed().extended(y2, free)) {
                        return Some(w);
                    }
                }
            }
        }

        for (y, y2) in [(a, b), (b, a)] {
            // Insert y into the ring, then splice y2 as in the one-vertex case.
            for rr in [ring.clone(), ring.reversed()] {
                for i in 0..l {
                    let j = (i + 1) % l;
                    if !(self.has(rr.cols[i], rr.verts[i], y) && self.has(free, y, rr.verts[j])) || !self.spend() {
                        continue;
                    }
                    let mut verts = rr.verts[..=i].to_vec();
                    verts.push(y);
                    verts.extend_from_slice(&rr.verts[i + 1..]);
                    let mut cs = rr.cols[..i].to_vec();
                    cs.extend([rr.cols[i], free]);
                    cs.extend_from_slice(&rr.cols[i + 1..]);
                    let grown = Ring { verts, cols: cs };
                    if self.valid_ring(&grown) {
                        if let Some(w) = self.case_one(&grown, y2) {
                            return Some(w);
                        }
                    }
                }
            }

            // Re-route the ring to free the color of y y2, then extend.
            for base in [ring.clone(), ring.reversed()] {
                for k in 0..l {
                    let freed = base.cols[k];
                    if !self.has(freed, y, y2) {
                        continue;
                    }
                    let rr = base.rotated(k);
                    let (v, cols) = (&rr.verts, &rr.cols);
                    for s in 1..l - 1 {
                        if !(self.has(cols[s], v[s], v[0]) && self.has(free, v[s + 1], v[1])) || !self.spend() {
                            continue;
                        }
                        let mut verts = vec![v[0]];
                        verts.extend(v[1..=s].iter().rev());
                        verts.extend_from_slice(&v[s + 1..]);
                        let mut cs = vec![cols[s]];
                        cs.extend(cols[1..s].iter().rev());
                        cs.push(free);
                        cs.extend_from_slice(&cols[s + 1..]);
                        let rerouted = Ring { verts, cols: cs };
                        if !self.valid_ring(&rerouted) {
                            continue;
                        }
                        for ch in self.pendants(&rerouted, y, 1) {
                            if let Some(w) = self.finish(&ch.reversed().extended(y2, freed)) {
                                return Some(w);
                            }
                        }
                    }
                }
            }

            // Bypass x_1 x_2 through y, then absorb y2 with the color dropped.
            for base in [ring.clone(), ring.reversed()] {
                for p in self.by_in_degree(&base) {
                    let rr = base.rotated(p);
                    let (v, cols) = (&rr.verts, &rr.cols);
                    for s in 1..l {
                        let j = (s + 1) % l;
                        if !(self.has(cols[0], v[s], y) && self.has(free, v[j], y)) || !self.spend() {
                            continue;
                        }
                        let mut verts = v[1..=s].to_vec();
                        verts.push(y);
                        verts.extend_from_slice(&v[s + 1..]);
                        verts.push(v[0]);
                        let mut cs = cols[1..s].to_vec();
                        cs.extend([cols[0], free]);
                        if s < l - 1 {
                            cs.extend_from_slice(&cols[s + 1..l - 1]);
                            cs.push(cols[l - 1]);
                        }
                        if let Some(w) = self.absorb(&Chain { verts, cols: cs }, y2, cols[s]) {
                            return Some(w);
                        }
                    }
                    if self.budget == 0 {
                        return None;
                    }
                }
            }

            for ch in self.pendants(ring, y, l) {
                if let Some(w) = self.absorb(&ch, y2, free) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Attaches `z` to a rainbow path by its free color, directly at an end
    /// or after one rotation.
    fn absorb(&mut self, chain: &Chain, z: usize, free: usize) -> Option<RainbowWalkResult> {
        for ch in [chain.clone(), chain.reversed()] {
            let k = ch.verts.len();
            if self.has(free, ch.verts[k - 1], z) {
                if let Some(w) = self.finish(&ch.extended(z, free)) {
                    return Some(w);
                }
            }
            for j in 0..k.saturating_sub(2) {
                if !(self.has(ch.cols[j], ch.verts[j], ch.verts[k - 1]) && self.has(free, z, ch.verts[j + 1]))
                    || !self.spend()
                {
                    continue;
                }
                let mut verts = ch.verts[..=j].to_vec();
                verts.extend(ch.verts[j + 1..].iter().rev());
                verts.push(z);
                let mut cs = ch.cols[..j].to_vec();
                cs.push(ch.cols[j]);
                cs.extend(ch.cols[j + 1..].iter().rev());
                cs.push(free);
                if let Some(w) = self.finish(&Chain { verts, cols: cs }) {
                    return Some(w);
                }
            }
        }
        None
    }
}
