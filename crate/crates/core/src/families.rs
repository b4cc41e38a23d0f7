//! Extremal families without transversal Hamilton cycles or paths.
//!
//! Each family has a generator on a canonical vertex layout, a structural
//! predicate used by [`classify`], and a certificate kernel that proves the
//! absence of a transversal Hamilton cycle (or path) from first principles.
//!
//! | tag                         | reason                            |
//! |-----------------------------|-----------------------------------|
//! | `HalfSplit`                 | `IndependentSetTooLarge`          |
//! | `DominatingVertexTwoCliques`| `CutVertexArgument`               |
//! | `HstSpanningOddT`           | `ParityOfCrossEdges`              |
//! | `NearSplitSparseB`          | `SegmentCount`                    |
//! | `NoRainbowTwoMatching`      | `NoTwoDisjointRainbowCrossEdges`  |
//! | `HPathHn10`                 | `ParityOfCrossEdges` (path form)  |
//! | `HPathNearSplit`            | `SegmentCount` (path form)        |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::assign::ColorMatching;
use crate::error::{Error, Result};
use crate::graph::{bits, full_mask, mask_of, Graph, GraphCollection, Partition, VertexSet};
use crate::solver::WalkKind;

/// Largest `n` for which the classifier also enumerates every subset as a
/// partition candidate.
pub const CLASSIFY_ENUMERATION_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoMatchingShape {
    /// All colors but at most one are exactly two cliques on the partition.
    TwoCliquesOneFree,
    /// Every cross edge in every color meets one vertex `u` of `A`.
    StarThroughU,
    /// One color crosses only at `u` or `v`; all others cross only by `uv`.
    CrossPairFig1a,
    /// Two colors cross by `{uv, u'v'}` and `{uv', u'v}`; the rest are two
    /// cliques.
    SwapPairFig1b,
}

impl NoMatchingShape {
    pub const ALL: [NoMatchingShape; 4] = [
        NoMatchingShape::TwoCliquesOneFree,
        NoMatchingShape::StarThroughU,
        NoMatchingShape::CrossPairFig1a,
        NoMatchingShape::SwapPairFig1b,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtremalTag {
    HalfSplit,
    DominatingVertexTwoCliques,
    HstSpanningOddT(usize),
    NearSplitSparseB,
    NoRainbowTwoMatching(NoMatchingShape),
    HPathHn10,
    HPathNearSplit,
    Unknown,
}

impl ExtremalTag {
    /// Stable CLI name; `hst` carries its `t` separately.
    pub fn name(&self) -> &'static str {
        match self {
            ExtremalTag::HalfSplit => "half-split",
            ExtremalTag::DominatingVertexTwoCliques => "dom-vertex",
            ExtremalTag::HstSpanningOddT(_) => "hst",
            ExtremalTag::NearSplitSparseB => "near-split-b",
            ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::TwoCliquesOneFree) => "no-r2m-two-cliques",
            ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::StarThroughU) => "no-r2m-star-u",
            ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::CrossPairFig1a) => "no-r2m-fig1a",
            ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::SwapPairFig1b) => "no-r2m-fig1b",
            ExtremalTag::HPathHn10 => "hpath-hn10",
            ExtremalTag::HPathNearSplit => "hpath-near-split",
            ExtremalTag::Unknown => "unknown",
        }
    }

    /// Parses a CLI name; `hst` requires `t`.
    pub fn from_name(name: &str, t: Option<usize>) -> Result<Self> {
        let tag = match name {
            "half-split" => ExtremalTag::HalfSplit,
            "dom-vertex" => ExtremalTag::DominatingVertexTwoCliques,
            "hst" => ExtremalTag::HstSpanningOddT(t.ok_or_else(|| Error::pre("family `hst` needs a value for t"))?),
            "near-split-b" => ExtremalTag::NearSplitSparseB,
            "no-r2m-two-cliques" => ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::TwoCliquesOneFree),
            "no-r2m-star-u" => ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::StarThroughU),
            "no-r2m-fig1a" => ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::CrossPairFig1a),
            "no-r2m-fig1b" => ExtremalTag::NoRainbowTwoMatching(NoMatchingShape::SwapPairFig1b),
            "hpath-hn10" => ExtremalTag::HPathHn10,
            "hpath-near-split" => ExtremalTag::HPathNearSplit,
            other => return Err(Error::pre(format!("unknown family `{other}`"))),
        };
        Ok(tag)
    }

    /// Target the family obstructs.
    pub fn target(&self) -> WalkKind {
        match self {
            ExtremalTag::HPathHn10 | ExtremalTag::HPathNearSplit => WalkKind::Path,
            _ => WalkKind::Cycle,
        }
    }

    /// Whether the family is defined at this `n`.
    pub fn fits(&self, n: usize) -> bool {
        match self {
            ExtremalTag::HalfSplit | ExtremalTag::DominatingVertexTwoCliques => n % 2 == 1 && n >= 5,
            ExtremalTag::HstSpanningOddT(t) => n % 2 == 0 && n >= 4 && t % 2 == 1 && *t <= n,
            ExtremalTag::NearSplitSparseB => n % 2 == 0 && n >= 6,
            ExtremalTag::NoRainbowTwoMatching(_) => n % 2 == 0 && n >= 6,
            ExtremalTag::HPathHn10 => n >= 4,
            ExtremalTag::HPathNearSplit => n >= 6,
            ExtremalTag::Unknown => false,
        }
    }

    /// Every tag defined at `n` for the given target, in classification order.
    pub fn all_for(n: usize, target: WalkKind) -> Vec<ExtremalTag> {
        let candidates: Vec<ExtremalTag> = match target {
            WalkKind::Cycle => {
                let mut v = vec![ExtremalTag::HalfSplit, ExtremalTag::DominatingVertexTwoCliques];
                v.extend((1..=n).step_by(2).map(ExtremalTag::HstSpanningOddT));
                v.push(ExtremalTag::NearSplitSparseB);
                v.extend(NoMatchingShape::ALL.map(ExtremalTag::NoRainbowTwoMatching));
                v
            }
            WalkKind::Path => vec![ExtremalTag::HPathHn10, ExtremalTag::HPathNearSplit],
        };
        candidates.into_iter().filter(|t| t.fits(n)).collect()
    }
}

impl fmt::Display for ExtremalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremalTag::HstSpanningOddT(t) => write!(f, "hst(t={t})"),
            other => f.write_str(other.name()),
        }
    }
}

impl Serialize for ExtremalTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Partition and distinguished vertices realizing a family's structure.
///
/// Conventions per tag: for `DominatingVertexTwoCliques` the dominating
/// vertex is `vertices[0]` and lies on side `B`; for `NearSplitSparseB` the
/// sparse side is `B`; for `HPathNearSplit` it is `A`. An edge `uv` that is
/// the only edge allowed inside the sparse side is listed in `vertices`.
/// For the no-rainbow-2-matching shapes, `vertices` is `[u]`, `[u, v]`, or
/// `[u, u', v, v']`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "sides")]
    pub partition: Partition,
    pub vertices: Vec<usize>,
    pub exceptional_colors: Vec<usize>,
}

fn sides<S: Serializer>(p: &Partition, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Sides {
        a: Vec<usize>,
        b: Vec<usize>,
    }
    Sides {
        a: p.a_vertices(),
        b: p.b_vertices(),
    }
    .serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalClass {
    pub tag: ExtremalTag,
    pub witness: Option<Witness>,
}

impl ExtremalClass {
    pub fn unknown() -> Self {
        ExtremalClass {
            tag: ExtremalTag::Unknown,
            witness: None,
        }
    }

    fn found(tag: ExtremalTag, witness: Witness) -> Self {
        ExtremalClass {
            tag,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    IndependentSetTooLarge,
    CutVertexArgument,
    ParityOfCrossEdges,
    SegmentCount,
    NoTwoDisjointRainbowCrossEdges,
}

impl Reason {
    pub fn for_tag(tag: ExtremalTag) -> Option<Reason> {
        Some(match tag {
            ExtremalTag::HalfSplit => Reason::IndependentSetTooLarge,
            ExtremalTag::DominatingVertexTwoCliques => Reason::CutVertexArgument,
            ExtremalTag::HstSpanningOddT(_) | ExtremalTag::HPathHn10 => Reason::ParityOfCrossEdges,
            ExtremalTag::NearSplitSparseB | ExtremalTag::HPathNearSplit => Reason::SegmentCount,
            ExtremalTag::NoRainbowTwoMatching(_) => Reason::NoTwoDisjointRainbowCrossEdges,
            ExtremalTag::Unknown => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalCertificate {
    pub class: ExtremalClass,
    pub reason: Reason,
    pub target: WalkKind,
}

impl ExtremalCertificate {
    /// Re-checks the reason against `c` without consulting the family
    /// predicates.
    pub fn verify(&self, c: &GraphCollection) -> bool {
        let Some(w) = &self.class.witness else {
            return false;
        };
        let expected_m = match self.target {
            WalkKind::Cycle => c.n(),
            WalkKind::Path => c.n().saturating_sub(1),
        };
        if c.m() != expected_m || c.n() < 3 {
            return false;
        }
        let p = w.partition;
        match self.reason {
            Reason::IndependentSetTooLarge => {
                let bound = match self.target {
                    WalkKind::Cycle => c.n() / 2,
                    WalkKind::Path => c.n().div_ceil(2),
                };
                independent_in_all(c, p.a()) && p.a().count_ones() as usize > bound
            }
            Reason::CutVertexArgument => {
                let Some(&u) = w.vertices.first() else {
                    return false;
                };
                let (a, b) = (p.a(), p.b() & !(1u64 << u));
                self.target == WalkKind::Cycle
                    && p.b() >> u & 1 == 1
                    && a != 0
                    && b != 0
                    && c.graphs().iter().all(|g| g.edges_between(a, b) == 0)
            }
            Reason::ParityOfCrossEdges => {
                if p.a() == 0 || p.b() == 0 {
                    return false;
                }
                let mut crossing = 0;
                for g in c.graphs() {
                    let cross = g.edges_between(p.a(), p.b()) > 0;
                    let inside = g.edges_inside(p.a()) + g.edges_inside(p.b()) > 0;
                    if cross && inside {
                        return false;
                    }
                    crossing += usize::from(cross);
                }
                match self.target {
                    WalkKind::Cycle => crossing % 2 == 1,
                    WalkKind::Path => crossing == 0,
                }
            }
            Reason::SegmentCount => {
                let sparse = match self.class.tag {
                    ExtremalTag::HPathNearSplit => p.a(),
                    _ => p.b(),
                };
                let other = full_mask(c.n()) & !sparse;
                let (s, o) = (sparse.count_ones() as usize, other.count_ones() as usize);
                let slack = usize::from(self.target == WalkKind::Path);
                let needed = s.saturating_sub(o + slack);
                needed > 0 && inside_capacity(c, sparse) < needed
            }
            Reason::NoTwoDisjointRainbowCrossEdges => {
                self.target == WalkKind::Cycle
                    && p.is_equitable()
                    && p.a().count_ones() >= 2
                    && p.b().count_ones() >= 2
                    && !has_rainbow_two_matching(c, &p)
            }
        }
    }
}

/// Upper bound on the number of edges inside `side` that any rainbow
/// subgraph can use: one per color that has such an edge, one per pair.
fn inside_capacity(c: &GraphCollection, side: VertexSet) -> usize {
    let colors = c.graphs().iter().filter(|g| g.edges_inside(side) > 0).count();
    let pairs = c.union_graph().edges_inside(side);
    colors.min(pairs)
}

fn independent_in_all(c: &GraphCollection, side: VertexSet) -> bool {
    c.graphs().iter().all(|g| g.edges_inside(side) == 0)
}

/// Whether two vertex-disjoint `A`-`B` edges exist in two distinct colors.
pub fn has_rainbow_two_matching(c: &GraphCollection, p: &Partition) -> bool {
    let mut cross = Vec::new();
    for a in bits(p.a()) {
        for b in bits(p.b()) {
            let mask = c.colors_of(a, b);
            if mask != 0 {
                cross.push((a, b, mask));
            }
        }
    }
    for (i, &(a1, b1, m1)) in cross.iter().enumerate() {
        for &(a2, b2, m2) in &cross[i + 1..] {
            if a1 == a2 || b1 == b2 {
                continue;
            }
            if !(m1 == m2 && m1.count_ones() == 1) {
                return true;
            }
        }
    }
    false
}

/// Policy for the parts of a family the structure leaves unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fill {
    Empty,
    #[default]
    Complete,
    /// Each free edge independently with probability 1/2.
    Random(u64),
}

impl FromStr for Fill {
    type Err = Error;

    /// `random` parses with seed 0; use [`Fill::Random`] to set one.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empty" => Ok(Fill::Empty),
            "complete" => Ok(Fill::Complete),
            "random" => Ok(Fill::Random(0)),
            other => Err(Error::pre(format!("unknown fill `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FamilyParams {
    /// Applies to `HalfSplit` (inside `B`), `NearSplitSparseB` (inside `A`)
    /// and `HPathNearSplit` (inside the dense side); other families are fully
    /// determined by their structure.
    pub fill: Fill,
    /// Color allowed to break the sparse side (`NearSplitSparseB`,
    /// `HPathNearSplit` at odd `n`) or to differ from two cliques
    /// (`no-r2m-*`). Defaults to none for the sparse families and to color 0
    /// for the no-rainbow-2-matching shapes.
    pub exceptional_color: Option<usize>,
}

struct Filler {
    fill: Fill,
    rng: ChaCha8Rng,
}

impl Filler {
    fn new(fill: Fill) -> Self {
        let seed = match fill {
            Fill::Random(s) => s,
            _ => 0,
        };
        Filler {
            fill,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn fill(&mut self, g: &mut Graph, part: VertexSet) {
        let vs: Vec<usize> = bits(part).collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                let keep = match self.fill {
                    Fill::Empty => false,
                    Fill::Complete => true,
                    Fill::Random(_) => self.rng.gen_bool(0.5),
                };
                if keep {
                    g.add_edge(u, v);
                }
            }
        }
    }
}

fn low(k: usize) -> VertexSet {
    full_mask(k)
}

fn two_cliques(n: usize, a: VertexSet) -> Graph {
    Graph::clique_on(n, a).union(&Graph::clique_on(n, full_mask(n) & !a))
}

fn hst_collection(n: usize, s: usize, t: usize) -> GraphCollection {
    let a = low(n.div_ceil(2));
    let b = full_mask(n) & !a;
    let mut graphs = vec![two_cliques(n, a); s];
    graphs.extend(std::iter::repeat_n(Graph::complete_bipartite(n, a, b), t));
    GraphCollection::new(n, graphs).expect("sizes are in range")
}

fn check_n(n: usize) -> Result<()> {
    if n > crate::graph::MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count",
            limit: crate::graph::MAX_VERTICES,
        });
    }
    Ok(())
}

/// `s` copies of two cliques of sizes `ceil(n/2)`, `floor(n/2)` followed by
/// `t` copies of the complete bipartite graph between them; `A` is the first
/// `ceil(n/2)` vertices.
pub fn generate_h_s_t(n: usize, s: usize, t: usize) -> Result<GraphCollection> {
    check_n(n)?;
    if n < 2 || s + t != n {
        return Err(Error::pre(format!(
            "need s + t = n >= 2, got s = {s}, t = {t}, n = {n}"
        )));
    }
    Ok(hst_collection(n, s, t))
}

/// Odd `n`: `A` (the first `ceil(n/2)` vertices) independent in every color,
/// every cross graph complete, the inside of `B` filled per `fill`.
pub fn generate_half_split(n: usize, fill: Fill) -> Result<GraphCollection> {
    generate_family(
        ExtremalTag::HalfSplit,
        n,
        FamilyParams {
            fill,
            exceptional_color: None,
        },
    )
}

/// Builds any family on its canonical layout; see [`Witness`] for the
/// layout conventions and [`FamilyParams`] for what `params` controls.
pub fn generate_family(tag: ExtremalTag, n: usize, params: FamilyParams) -> Result<GraphCollection> {
    check_n(n)?;
    if !tag.fits(n) {
        return Err(Error::pre(format!("family {tag} is not defined at n = {n}")));
    }
    let m = match tag.target() {
        WalkKind::Cycle => n,
        WalkKind::Path => n - 1,
    };
    if let Some(e) = params.exceptional_color {
        if e >= m {
            return Err(Error::pre(format!("exceptional color {e} out of range for {m} colors")));
        }
    }
    let mut filler = Filler::new(params.fill);
    let all = full_mask(n);
    let half = n / 2;
    let graphs: Vec<Graph> = match tag {
        ExtremalTag::HalfSplit => {
            let a = low(n.div_ceil(2));
            let b = all & !a;
            (0..m)
                .map(|_| {
                    let mut g = Graph::complete_bipartite(n, a, b);
                    filler.fill(&mut g, b);
                    g
                })
                .collect()
        }
        ExtremalTag::DominatingVertexTwoCliques => {
            let a = low(1 + (n - 1) / 2) & !1;
            // Vertex 0 sits in the complement clique with B, then joins A.
            let mut g = two_cliques(n, a);
            for v in bits(a) {
                g.add_edge(0, v);
            }
            vec![g; m]
        }
        ExtremalTag::HstSpanningOddT(t) => return Ok(hst_collection(n, n - t, t)),
        ExtremalTag::NearSplitSparseB => {
            let a = low(half - 1);
            let b = all & !a;
            (0..m)
                .map(|i| {
                    let mut g = Graph::complete_bipartite(n, a, b);
                    filler.fill(&mut g, a);
                    if params.exceptional_color == Some(i) {
                        g = g.union(&Graph::clique_on(n, b));
                    }
                    g
                })
                .collect()
        }
        ExtremalTag::NoRainbowTwoMatching(shape) => {
            let a = low(half);
            let base = two_cliques(n, a);
            let e = params.exceptional_color.unwrap_or(0);
            let (u, u2, v, v2) = (0, 1, half, half + 1);
            (0..m)
                .map(|i| {
                    let mut g = base.clone();
                    match shape {
                        NoMatchingShape::TwoCliquesOneFree => {
                            if i == e {
                                g = Graph::complete(n);
                            }
                        }
                        NoMatchingShape::StarThroughU => {
                            for w in half..n {
                                g.add_edge(u, w);
                            }
                        }
                        NoMatchingShape::CrossPairFig1a => {
                            if i == e {
                                for w in half..n {
                                    g.add_edge(u, w);
                                }
                                for w in 0..half {
                                    g.add_edge(w, v);
                                }
                            } else {
                                g.add_edge(u, v);
                            }
                        }
                        NoMatchingShape::SwapPairFig1b => {
                            let e2 = (e + 1) % m;
                            if i == e {
                                g.add_edge(u, v);
                                g.add_edge(u2, v2);
                            } else if i == e2 {
                                g.add_edge(u, v2);
                                g.add_edge(u2, v);
                            }
                        }
                    }
                    g
                })
                .collect()
        }
        ExtremalTag::HPathHn10 => return Ok(hst_collection(n, n - 1, 0)),
        ExtremalTag::HPathNearSplit => {
            let s = if n % 2 == 0 { half + 1 } else { (n + 3) / 2 };
            let a = low(s);
            let b = all & !a;
            if n % 2 == 0 && params.exceptional_color.is_some() {
                return Err(Error::pre("the even path family has no exceptional color"));
            }
            (0..m)
                .map(|i| {
                    let mut g = Graph::complete_bipartite(n, a, b);
                    filler.fill(&mut g, b);
                    if params.exceptional_color == Some(i) {
                        g = g.union(&Graph::clique_on(n, a));
                    }
                    g
                })
                .collect()
        }
        ExtremalTag::Unknown => unreachable!("Unknown never fits"),
    };
    GraphCollection::new(n, graphs)
}

/// Lower bound on `δ` each family meets under complete fill:
/// `ceil(n/2 - 1)` for cycle families, `ceil((n - 3)/2)` for path families.
pub fn family_degree_bound(tag: ExtremalTag, n: usize) -> usize {
    match tag.target() {
        WalkKind::Cycle => n.div_ceil(2).saturating_sub(1),
        WalkKind::Path => n.saturating_sub(3).div_ceil(2),
    }
}

fn cross_edges(g: &Graph, p: &Partition) -> Vec<(usize, usize)> {
    bits(p.a())
        .flat_map(|a| bits(g.neighbors(a) & p.b()).map(move |b| (a, b)))
        .collect()
}

fn is_two_cliques(g: &Graph, p: &Partition) -> bool {
    *g == two_cliques(g.n(), p.a())
}

fn witness(partition: Partition, vertices: Vec<usize>, exceptional_colors: Vec<usize>) -> Witness {
    Witness {
        partition,
        vertices,
        exceptional_colors,
    }
}

/// Sides of the given size suggested by the structure: closed
/// non-neighborhoods in the union graph, in the union without one color, and
/// in the union without one pair. Below the enumeration bound every subset
/// of that size is added.
fn sparse_side_candidates(c: &GraphCollection, size: usize) -> Vec<VertexSet> {
    let n = c.n();
    let all = full_mask(n);
    let mut out = BTreeSet::new();
    let mut unions = vec![c.union_graph()];
    for e in c.colors() {
        let mut g = Graph::empty(n);
        for (i, h) in c.graphs().iter().enumerate() {
            if i != e {
                g = g.union(h);
            }
        }
        unions.push(g);
    }
    let full = c.union_graph();
    for (u, w) in full.edges() {
        let mut g = full.clone();
        g.remove_edge(u, w);
        unions.push(g);
    }
    for g in &unions {
        for v in 0..n {
            let side = all & !g.neighbors(v);
            if side.count_ones() as usize == size {
                out.insert(side);
            }
        }
    }
    if n <= CLASSIFY_ENUMERATION_MAX_N {
        out.extend(subsets_of_size(n, size));
    }
    out.into_iter().collect()
}

fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = VertexSet> {
    (0..1u64 << n).filter(move |m| m.count_ones() as usize == size)
}

/// Equitable partitions suggested by the structure (closed and open
/// neighborhoods in single colors), both orientations.
fn equitable_candidates(c: &GraphCollection) -> Vec<Partition> {
    let n = c.n();
    let all = full_mask(n);
    let fits = |m: VertexSet| {
        let k = m.count_ones() as usize;
        k == n / 2 || k == n.div_ceil(2)
    };
    let mut sides = BTreeSet::new();
    for g in c.graphs() {
        for v in 0..n {
            for side in [g.neighbors(v) | 1u64 << v, g.neighbors(v)] {
                if fits(side) {
                    sides.insert(side);
                    sides.insert(all & !side);
                }
            }
        }
    }
    if n <= CLASSIFY_ENUMERATION_MAX_N {
        sides.extend((0..1u64 << n).filter(|&m| fits(m)));
    }
    sides
        .into_iter()
        .map(|a| Partition::new(n, a).expect("side within range"))
        .collect()
}

/// `None` unless the inside of `side` has edges in at most one color, or
/// only ever the same single pair. Returns `(pair, exceptional colors)`.
fn sparse_inside(c: &GraphCollection, side: VertexSet) -> Option<(Vec<usize>, Vec<usize>)> {
    let colors: Vec<usize> = c.colors().filter(|&i| c.graph(i).edges_inside(side) > 0).collect();
    if colors.len() <= 1 {
        return Some((Vec::new(), colors));
    }
    let union = c.union_graph();
    let pairs: Vec<(usize, usize)> = union
        .edges()
        .filter(|&(u, v)| side >> u & 1 == 1 && side >> v & 1 == 1)
        .collect();
    match pairs[..] {
        [(u, v)] => Some((vec![u, v], Vec::new())),
        _ => None,
    }
}

fn half_split_at(c: &GraphCollection, a: VertexSet) -> Option<Witness> {
    let n = c.n();
    let b = full_mask(n) & !a;
    let complete = a.count_ones() as usize * b.count_ones() as usize;
    let ok = a.count_ones() as usize == n.div_ceil(2)
        && c.graphs()
            .iter()
            .all(|g| g.edges_inside(a) == 0 && g.edges_between(a, b) == complete);
    ok.then(|| witness(Partition::new(n, a).expect("in range"), Vec::new(), Vec::new()))
}

fn dominating_at(c: &GraphCollection, u: usize) -> Option<Witness> {
    let n = c.n();
    let rest = full_mask(n) & !(1u64 << u);
    if c.graphs().iter().any(|g| g.degree(u) != n - 1) {
        return None;
    }
    let w = bits(rest).next()?;
    let a = (c.graph(0).neighbors(w) & rest) | 1u64 << w;
    let b = rest & !a;
    if a.count_ones() as usize != (n - 1) / 2 || b.count_ones() != a.count_ones() {
        return None;
    }
    let split = two_cliques(n, a);
    let ok = c
        .graphs()
        .iter()
        .all(|g| bits(rest).all(|v| g.neighbors(v) & rest == split.neighbors(v) & rest));
    ok.then(|| witness(Partition::new(n, a).expect("in range"), vec![u], Vec::new()))
}

/// Number of colors with cross edges when every color is cross-only or
/// inside-only.
fn crossing_colors(c: &GraphCollection, p: &Partition) -> Option<usize> {
    let mut t = 0;
    for g in c.graphs() {
        let cross = g.edges_between(p.a(), p.b()) > 0;
        if cross && g.edges_inside(p.a()) + g.edges_inside(p.b()) > 0 {
            return None;
        }
        t += usize::from(cross);
    }
    Some(t)
}

fn shape_at(c: &GraphCollection, p: &Partition, shape: NoMatchingShape) -> Option<Witness> {
    let off: Vec<usize> = c.colors().filter(|&i| !is_two_cliques(c.graph(i), p)).collect();
    let crosses: Vec<Vec<(usize, usize)>> = c.graphs().iter().map(|g| cross_edges(g, p)).collect();
    let found = match shape {
        NoMatchingShape::TwoCliquesOneFree => (off.len() <= 1).then(|| witness(*p, Vec::new(), off.clone())),
        NoMatchingShape::StarThroughU => {
            let all: Vec<(usize, usize)> = crosses.iter().flatten().copied().collect();
            if all.is_empty() {
                return None;
            }
            bits(p.a())
                .find(|&u| all.iter().all(|&(a, _)| a == u))
                .map(|u| witness(*p, vec![u], Vec::new()))
        }
        NoMatchingShape::CrossPairFig1a => bits(p.a()).find_map(|u| {
            bits(p.b()).find_map(|v| {
                let extra: Vec<usize> = c
                    .colors()
                    .filter(|&i| crosses[i].iter().any(|&e| e != (u, v)))
                    .collect();
                let [e] = extra[..] else {
                    return None;
                };
                crosses[e]
                    .iter()
                    .all(|&(a, b)| a == u || b == v)
                    .then(|| witness(*p, vec![u, v], vec![e]))
            })
        }),
        NoMatchingShape::SwapPairFig1b => {
            let [e1, e2] = off[..] else {
                return None;
            };
            let (&[(u, v), (u2, v2)], &[_, _]) = (&crosses[e1][..], &crosses[e2][..]) else {
                return None;
            };
            if u == u2 || v == v2 {
                return None;
            }
            let mut want = vec![(u, v2), (u2, v)];
            want.sort_unstable();
            (crosses[e2] == want).then(|| witness(*p, vec![u, u2, v, v2], vec![e1, e2]))
        }
    };
    found.filter(|_| !has_rainbow_two_matching(c, p))
}

/// First family whose structure `c` realizes, in the order the
/// classification lists them, or `Unknown`.
pub fn classify(c: &GraphCollection) -> ExtremalClass {
    let n = c.n();
    if n < 4 {
        return ExtremalClass::unknown();
    }
    let all = full_mask(n);
    if c.m() == n && n % 2 == 1 {
        for a in sparse_side_candidates(c, n.div_ceil(2)) {
            if let Some(w) = half_split_at(c, a) {
                return ExtremalClass::found(ExtremalTag::HalfSplit, w);
            }
        }
        if let Some(w) = (0..n).find_map(|u| dominating_at(c, u)) {
            return ExtremalClass::found(ExtremalTag::DominatingVertexTwoCliques, w);
        }
    } else if c.m() == n {
        let eq = equitable_candidates(c);
        for p in &eq {
            if let Some(t) = crossing_colors(c, p).filter(|t| t % 2 == 1) {
                return ExtremalClass::found(ExtremalTag::HstSpanningOddT(t), witness(*p, Vec::new(), Vec::new()));
            }
        }
        if n >= 6 {
            for b in sparse_side_candidates(c, n / 2 + 1) {
                if let Some((pair, colors)) = sparse_inside(c, b) {
                    let p = Partition::new(n, all & !b).expect("in range");
                    return ExtremalClass::found(ExtremalTag::NearSplitSparseB, witness(p, pair, colors));
                }
            }
            for shape in NoMatchingShape::ALL {
                if let Some(w) = eq.iter().find_map(|p| shape_at(c, p, shape)) {
                    return ExtremalClass::found(ExtremalTag::NoRainbowTwoMatching(shape), w);
                }
            }
        }
    } else if c.m() + 1 == n {
        let big = n.div_ceil(2) as u32;
        for p in equitable_candidates(c).iter().filter(|p| p.a().count_ones() == big) {
            if crossing_colors(c, p) == Some(0) && c.graphs().iter().all(|g| g.edges_between(p.a(), p.b()) == 0) {
                return ExtremalClass::found(ExtremalTag::HPathHn10, witness(*p, Vec::new(), Vec::new()));
            }
        }
        if n >= 6 {
            let size = if n % 2 == 0 { n / 2 + 1 } else { (n + 3) / 2 };
            for a in sparse_side_candidates(c, size) {
                let fits = match sparse_inside(c, a) {
                    Some((pair, colors)) if n % 2 == 1 => Some((pair, colors)),
                    Some((pair, colors)) if pair.is_empty() && colors.is_empty() => Some((pair, colors)),
                    _ => None,
                };
                if let Some((pair, colors)) = fits {
                    let p = Partition::new(n, a).expect("in range");
                    return ExtremalClass::found(ExtremalTag::HPathNearSplit, witness(p, pair, colors));
                }
            }
        }
    }
    ExtremalClass::unknown()
}

/// Re-derives the class from its own witness.
fn holds(c: &GraphCollection, cls: &ExtremalClass) -> bool {
    let Some(w) = &cls.witness else {
        return false;
    };
    let (n, p) = (c.n(), w.partition);
    if !cls.tag.fits(n) {
        return false;
    }
    let m_ok = match cls.tag.target() {
        WalkKind::Cycle => c.m() == n,
        WalkKind::Path => c.m() + 1 == n,
    };
    m_ok && match cls.tag {
        ExtremalTag::HalfSplit => half_split_at(c, p.a()).is_some(),
        ExtremalTag::DominatingVertexTwoCliques => w
            .vertices
            .first()
            .and_then(|&u| dominating_at(c, u))
            .is_some_and(|d| d.partition == p),
        ExtremalTag::HstSpanningOddT(t) => p.is_equitable() && crossing_colors(c, &p) == Some(t),
        ExtremalTag::NearSplitSparseB => p.b().count_ones() as usize == n / 2 + 1 && sparse_inside(c, p.b()).is_some(),
        ExtremalTag::NoRainbowTwoMatching(shape) => p.is_equitable() && shape_at(c, &p, shape).is_some(),
        ExtremalTag::HPathHn10 => p.is_equitable() && crossing_colors(c, &p) == Some(0),
        ExtremalTag::HPathNearSplit => {
            let size = if n % 2 == 0 { n / 2 + 1 } else { (n + 3) / 2 };
            p.a().count_ones() as usize == size
                && match sparse_inside(c, p.a()) {
                    Some((pair, colors)) => n % 2 == 1 || (pair.is_empty() && colors.is_empty()),
                    None => false,
                }
        }
        ExtremalTag::Unknown => false,
    }
}

/// Certificate that `c` has no transversal Hamilton cycle (or path, for the
/// path families). Errors if `cls` is `Unknown` or its structure does not
/// hold in `c`; `None` if the structure holds but the reason does not verify.
pub fn certify_no_thc(c: &GraphCollection, cls: &ExtremalClass) -> Result<Option<ExtremalCertificate>> {
    let reason = Reason::for_tag(cls.tag).ok_or_else(|| Error::pre("an unknown class has no certificate"))?;
    if !holds(c, cls) {
        return Err(Error::pre(format!(
            "collection does not have the structure of {}",
            cls.tag
        )));
    }
    let cert = ExtremalCertificate {
        class: cls.clone(),
        reason,
        target: cls.tag.target(),
    };
    Ok(cert.verify(c).then_some(cert))
}

/// [`classify`] followed by [`certify_no_thc`].
pub fn certify(c: &GraphCollection) -> Option<ExtremalCertificate> {
    let cls = classify(c);
    certify_no_thc(c, &cls).ok().flatten()
}

/// Star `K_{1,4}` with four distinctly colored edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RainbowStar {
    pub center: usize,
    pub leaves: [usize; 4],
    pub colors: [usize; 4],
}

impl RainbowStar {
    pub fn is_valid_in(&self, c: &GraphCollection) -> bool {
        let distinct = |xs: &[usize]| xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
        distinct(&self.leaves)
            && distinct(&self.colors)
            && !self.leaves.contains(&self.center)
            && self
                .leaves
                .iter()
                .zip(&self.colors)
                .all(|(&l, &col)| col < c.m() && c.has_edge(col, self.center, l))
    }
}

/// `t` vertex- and color-disjoint rainbow stars with centers in `y` and
/// leaves in `b`, under the density hypotheses
/// `7|Y| < |B| <= 3m/5`, `sum_i e(G_i[Y, B]) >= t |B| m`, `t <= |Y|`.
pub fn extract_rainbow_stars(c: &GraphCollection, y: &[usize], b: &[usize], t: usize) -> Result<Vec<RainbowStar>> {
    if t == 0 {
        return Ok(Vec::new());
    }
    let n = c.n();
    if y.iter().chain(b).any(|&v| v >= n) {
        return Err(Error::pre("star sides contain out-of-range vertices"));
    }
    let (ym, bm) = (mask_of(y.iter().copied()), mask_of(b.iter().copied()));
    if ym.count_ones() as usize != y.len() || bm.count_ones() as usize != b.len() || ym & bm != 0 {
        return Err(Error::pre("star sides must be duplicate-free and disjoint"));
    }
    let (ny, nb, m) = (y.len(), b.len(), c.m());
    let density: usize = c
        .graphs()
        .iter()
        .map(|g| {
            bits(ym)
                .map(|v| (g.neighbors(v) & bm).count_ones() as usize)
                .sum::<usize>()
        })
        .sum();
    if !(7 * ny < nb && 5 * nb <= 3 * m && t <= ny && density >= t * nb * m) {
        return Err(Error::pre("rainbow star hypotheses do not hold"));
    }
    stars(c, ym, bm, t)
}

fn stars(c: &GraphCollection, ym: VertexSet, bm: VertexSet, t: usize) -> Result<Vec<RainbowStar>> {
    let stuck = || Error::pre("no qualifying star center; the density hypothesis is violated");
    if t == 1 {
        return bits(ym)
            .find_map(|w| star_at(c, w, bm))
            .map(|s| vec![s])
            .ok_or_else(stuck);
    }
    let k = 4 * t;
    let rich = |w: usize| {
        c.colors()
            .filter(|&i| (c.graph(i).neighbors(w) & bm).count_ones() as usize >= k)
            .collect::<Vec<_>>()
    };
    let w = bits(ym).find(|&w| rich(w).len() >= k).ok_or_else(stuck)?;
    let mut found = stars(c, ym & !(1u64 << w), bm, t - 1)?;
    let used_colors: BTreeSet<usize> = found.iter().flat_map(|s| s.colors).collect();
    let mut used_leaves = found.iter().flat_map(|s| s.leaves).fold(0u64, |m, v| m | 1u64 << v);
    let picked: Vec<usize> = rich(w)
        .into_iter()
        .filter(|i| !used_colors.contains(i))
        .take(4)
        .collect();
    let mut leaves = [0; 4];
    for (slot, &color) in picked.iter().enumerate() {
        let leaf = bits(c.graph(color).neighbors(w) & bm & !used_leaves)
            .next()
            .ok_or_else(stuck)?;
        used_leaves |= 1u64 << leaf;
        leaves[slot] = leaf;
    }
    let colors: [usize; 4] = picked.try_into().map_err(|_| stuck())?;
    found.push(RainbowStar {
        center: w,
        leaves,
        colors,
    });
    Ok(found)
}

/// Any rainbow star at `w`: a matching of four colors to distinct leaves.
fn star_at(c: &GraphCollection, w: usize, bm: VertexSet) -> Option<RainbowStar> {
    let mut matching = ColorMatching::new(c.n());
    let mut colors = Vec::new();
    for i in c.colors() {
        if matching.push(c.graph(i).neighbors(w) & bm) {
            colors.push(i);
            if colors.len() == 4 {
                let leaves = matching.assignment();
                return Some(RainbowStar {
                    center: w,
                    leaves: leaves.try_into().ok()?,
                    colors: colors.try_into().ok()?,
                });
            }
        }
    }
    None
}

/// Single graphs of minimum degree at least `n/2 - 1` without a Hamilton
/// cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorollaryVariant {
    /// Odd `n`: `K_1` joined to two cliques of size `(n-1)/2`.
    OddCutVertex,
    /// Odd `n`: `(n+1)/2` independent vertices joined to a clique of size
    /// `(n-1)/2`.
    OddSplit,
    /// Even `n`: `K_1` joined to cliques of sizes `n/2 - 1` and `n/2`.
    EvenCutVertex,
    /// Even `n`: a `K_2` plus `n/2 - 1` isolated vertices, joined to a clique
    /// of size `n/2 - 1`.
    EvenSplit,
}

impl CorollaryVariant {
    pub const ALL: [CorollaryVariant; 4] = [
        CorollaryVariant::OddCutVertex,
        CorollaryVariant::OddSplit,
        CorollaryVariant::EvenCutVertex,
        CorollaryVariant::EvenSplit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CorollaryVariant::OddCutVertex => "cor-odd-cut",
            CorollaryVariant::OddSplit => "cor-odd-split",
            CorollaryVariant::EvenCutVertex => "cor-even-cut",
            CorollaryVariant::EvenSplit => "cor-even-split",
        }
    }

    pub fn fits(&self, n: usize) -> bool {
        match self {
            CorollaryVariant::OddCutVertex | CorollaryVariant::OddSplit => n % 2 == 1 && n >= 5,
            CorollaryVariant::EvenCutVertex | CorollaryVariant::EvenSplit => n % 2 == 0 && n >= 6,
        }
    }
}

impl FromStr for CorollaryVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorollaryVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::pre(format!("`{s}` is not a corollary graph")))
    }
}

pub fn corollary_graph(n: usize, variant: CorollaryVariant) -> Result<Graph> {
    check_n(n)?;
    if !variant.fits(n) {
        return Err(Error::pre(format!("{} is not defined at n = {n}", variant.name())));
    }
    let all = full_mask(n);
    let g = match variant {
        CorollaryVariant::OddCutVertex | CorollaryVariant::EvenCutVertex => {
            // Vertex 0 is the cut vertex; the first clique is 1..=(n-1)/2.
            let a = low(1 + (n - 1) / 2) & !1;
            let mut g = two_cliques(n, a);
            for v in bits(a) {
                g.add_edge(0, v);
            }
            g
        }
        CorollaryVariant::OddSplit | CorollaryVariant::EvenSplit => {
            let s = n / 2 + 1;
            let (i, k) = (low(s), all & !low(s));
            let mut g = Graph::complete_bipartite(n, i, k).union(&Graph::clique_on(n, k));
            if variant == CorollaryVariant::EvenSplit {
                g.add_edge(0, 1);
            }
            g
        }
    };
    Ok(g)
}

/// `n` copies of the corollary graph.
pub fn single_graph_corollary_families(n: usize, variant: CorollaryVariant) -> Result<GraphCollection> {
    Ok(GraphCollection::copies(&corollary_graph(n, variant)?, n))
}

/// An edge whose addition makes the corollary graph Hamiltonian: it joins
/// the two cliques away from the cut vertex, or adds the one missing edge
/// inside the independent side.
pub fn strategic_edge(n: usize, variant: CorollaryVariant) -> Result<(usize, usize)> {
    corollary_graph(n, variant)?;
    Ok(match variant {
        CorollaryVariant::OddCutVertex | CorollaryVariant::EvenCutVertex => (1, n - 1),
        CorollaryVariant::OddSplit => (0, 1),
        CorollaryVariant::EvenSplit => (2, 3),
    })
}
