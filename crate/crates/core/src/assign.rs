//! Edge-to-color assignments: deciding whether a host graph is rainbow or
//! transversal in a collection.
//!
//! [`find_assignment`] reduces the question to bipartite matching between
//! host edges and colors; [`assignment_oracle`] enumerates injections
//! directly and exists to cross-check the matching route.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, GraphCollection};

/// Largest host the brute-force oracle accepts.
pub const ORACLE_MAX_EDGES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Injective: distinct colors, not necessarily all of them.
    Rainbow,
    /// Bijective: every color used exactly once.
    Transversal,
}

/// Graph `H` on the collection's vertex set, given by its edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostSubgraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl HostSubgraph {
    /// Edges are stored as given; `(u, v)` and `(v, u)` count as duplicates.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::pre(format!("host edge {u} {v} out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::pre(format!("host edge {u} {v} is a loop")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::pre(format!("duplicate host edge {u} {v}")));
            }
        }
        Ok(HostSubgraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Color for each host edge, indexed like [`HostSubgraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    pub mode: Mode,
    pub colors: Vec<usize>,
}

impl ColorAssignment {
    /// Re-checks injectivity, edge membership and (in transversal mode)
    /// surjectivity from scratch.
    pub fn is_valid_for(&self, h: &HostSubgraph, c: &GraphCollection) -> bool {
        if self.colors.len() != h.edge_count() || h.n() != c.n() {
            return false;
        }
        let mut used = vec![false; c.m()];
        for (&(u, v), &color) in h.edges().iter().zip(&self.colors) {
            if color >= c.m() || used[color] || !c.has_edge(color, u, v) {
                return false;
            }
            used[color] = true;
        }
        match self.mode {
            Mode::Rainbow => true,
            Mode::Transversal => used.iter().all(|&u| u),
        }
    }
}

fn check_shape(h: &HostSubgraph, c: &GraphCollection, mode: Mode) -> Result<()> {
    if h.n() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: c.n(),
            found: h.n(),
        });
    }
    match mode {
        Mode::Transversal if h.edge_count() != c.m() => Err(Error::ColorCount {
            expected: h.edge_count(),
            found: c.m(),
        }),
        Mode::Rainbow if h.edge_count() > c.m() => Err(Error::pre(format!(
            "rainbow host has {} edges but only {} colors exist",
            h.edge_count(),
            c.m()
        ))),
        _ => Ok(()),
    }
}

/// Finds an assignment by maximum bipartite matching (augmenting paths).
///
/// Edges are inserted in input order and each augmenting search tries colors
/// in ascending index order, so the result is deterministic.
pub fn find_assignment(h: &HostSubgraph, c: &GraphCollection, mode: Mode) -> Result<Option<ColorAssignment>> {
    check_shape(h, c, mode)?;
    let mut matching = ColorMatching::new(c.m());
    for &(u, v) in h.edges() {
        if !matching.push(c.colors_of(u, v)) {
            return Ok(None);
        }
    }
    Ok(Some(ColorAssignment {
        mode,
        colors: matching.assignment(),
    }))
}

/// Exhaustive enumeration of injections; first hit in lexicographic order of
/// the color vector.
pub fn assignment_oracle(h: &HostSubgraph, c: &GraphCollection, mode: Mode) -> Result<Option<ColorAssignment>> {
    check_shape(h, c, mode)?;
    if h.edge_count() > ORACLE_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "oracle host edge count",
            limit: ORACLE_MAX_EDGES,
        });
    }
    fn extend(h: &HostSubgraph, c: &GraphCollection, used: &mut [bool], chosen: &mut Vec<usize>) -> bool {
        let k = chosen.len();
        if k == h.edge_count() {
            return true;
        }
        let (u, v) = h.edges()[k];
        for color in 0..c.m() {
            if used[color] || !c.has_edge(color, u, v) {
                continue;
            }
            used[color] = true;
            chosen.push(color);
            if extend(h, c, used, chosen) {
                return true;
            }
            chosen.pop();
            used[color] = false;
        }
        false
    }
    let mut used = vec![false; c.m()];
    let mut chosen = Vec::with_capacity(h.edge_count());
    Ok(extend(h, c, &mut used, &mut chosen).then_some(ColorAssignment { mode, colors: chosen }))
}

/// Incremental matching of slots (host edges) to colors.
///
/// Every pushed slot stays matched: a failed `push` leaves the matching
/// unchanged and discards the slot, and `pop` frees the last slot's color
/// without disturbing the others. The solver relies on this to keep a
/// feasibility certificate for a growing path in `O(slots * colors)` per step.
#[derive(Debug, Clone)]
pub(crate) struct ColorMatching {
    admissible: Vec<u64>,
    color_of: Vec<usize>,
    owner: Vec<Option<usize>>,
}

impl ColorMatching {
    pub(crate) fn new(m: usize) -> Self {
        ColorMatching {
            admissible: Vec::new(),
            color_of: Vec::new(),
            owner: vec![None; m],
        }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.color_of.len()
    }

    /// Adds a slot that may take any color in `mask`; false if the enlarged
    /// system has no complete matching.
    pub(crate) fn push(&mut self, mask: u64) -> bool {
        let slot = self.admissible.len();
        self.admissible.push(mask);
        self.color_of.push(usize::MAX);
        let mut visited = 0u64;
        if self.augment(slot, &mut visited) {
            true
        } else {
            self.admissible.pop();
            self.color_of.pop();
            false
        }
    }

    pub(crate) fn pop(&mut self) {
        self.admissible.pop();
        if let Some(color) = self.color_of.pop() {
            self.owner[color] = None;
        }
    }

    fn augment(&mut self, slot: usize, visited: &mut u64) -> bool {
        for color in bits(self.admissible[slot] & !*visited) {
            *visited |= 1u64 << color;
            let free = match self.owner[color] {
                None => true,
                Some(other) => self.augment(other, visited),
            };
            if free {
                self.owner[color] = Some(slot);
                self.color_of[slot] = color;
                return true;
            }
        }
        false
    }

    pub(crate) fn assignment(&self) -> Vec<usize> {
        self.color_of.clone()
    }
}
