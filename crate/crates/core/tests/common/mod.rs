//! Random instances and brute-force oracles shared by the integration tests.
//!
//! The oracles use neither the matching engine nor the solver: walks come
//! from plain permutation enumeration and color assignments from a subset DP.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transversal::{Graph, GraphCollection};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn random_collection(n: usize, m: usize, p: f64, rng: &mut impl Rng) -> GraphCollection {
    GraphCollection::new(n, (0..m).map(|_| random_graph(n, p, rng)).collect()).unwrap()
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

/// Number of bijections from `edges` onto all `m` colors with each edge in
/// its color's graph (`edges.len() == m`).
pub fn bijection_count(c: &GraphCollection, edges: &[(usize, usize)]) -> u64 {
    let m = c.m();
    assert_eq!(edges.len(), m);
    // ways[mask]: assignments of the first popcount(mask) edges onto `mask`.
    let mut ways = vec![0u64; 1 << m];
    ways[0] = 1;
    for mask in 0usize..1 << m {
        if ways[mask] == 0 {
            continue;
        }
        let k = mask.count_ones() as usize;
        if k == m {
            continue;
        }
        let (u, v) = edges[k];
        for color in 0..m {
            if mask >> color & 1 == 0 && c.graph(color).has_edge(u, v) {
                ways[mask | 1 << color] += ways[mask];
            }
        }
    }
    ways[(1 << m) - 1]
}

/// Whether some injection of `edges` into the colors exists.
pub fn injection_exists(c: &GraphCollection, edges: &[(usize, usize)]) -> bool {
    fn go(c: &GraphCollection, edges: &[(usize, usize)], used: u64) -> bool {
        let Some((&(u, v), rest)) = edges.split_first() else {
            return true;
        };
        (0..c.m())
            .any(|color| used >> color & 1 == 0 && c.graph(color).has_edge(u, v) && go(c, rest, used | 1 << color))
    }
    go(c, edges, 0)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every Hamilton cycle of `K_n` once, as edge lists: vertex 0 first and the
/// second vertex below the last.
pub fn hamilton_cycles(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    loop {
        if rest[0] < rest[n - 2] {
            let order: Vec<usize> = std::iter::once(0).chain(rest.iter().copied()).collect();
            out.push((0..n).map(|i| (order[i], order[(i + 1) % n])).collect());
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    out
}

/// Every Hamilton path of `K_n` once (first vertex below last).
pub fn hamilton_paths(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        if n < 2 || order[0] < order[n - 1] {
            out.push((1..n).map(|i| (order[i - 1], order[i])).collect());
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    out
}

pub fn oracle_cycle_count(c: &GraphCollection) -> u64 {
    if c.m() != c.n() {
        return 0;
    }
    hamilton_cycles(c.n()).iter().map(|e| bijection_count(c, e)).sum()
}

pub fn oracle_has_cycle(c: &GraphCollection) -> bool {
    c.m() == c.n() && hamilton_cycles(c.n()).iter().any(|e| bijection_count(c, e) > 0)
}

pub fn oracle_has_path(c: &GraphCollection) -> bool {
    c.m() + 1 == c.n() && hamilton_paths(c.n()).iter().any(|e| bijection_count(c, e) > 0)
}

/// Longest rainbow cycle length by brute force over vertex subsets.
pub fn oracle_longest_rainbow_cycle(c: &GraphCollection) -> Option<usize> {
    let n = c.n();
    (3..=n.min(c.m())).rev().find(|&len| {
        (0u64..1 << n).filter(|s| s.count_ones() as usize == len).any(|s| {
            let verts: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            hamilton_cycles(len).iter().any(|cyc| {
                let edges: Vec<(usize, usize)> = cyc.iter().map(|&(a, b)| (verts[a], verts[b])).collect();
                injection_exists(c, &edges)
            })
        })
    })
}

/// Vertices in order along a walk, checked to be a Hamilton path or cycle
/// whose edges use each color once and lie in their colors.
pub fn is_transversal_walk(c: &GraphCollection, w: &transversal::RainbowWalkResult) -> bool {
    let n = c.n();
    let mut seen = vec![false; n];
    if w.vertices.len() != n
        || w.vertices
            .iter()
            .any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
    {
        return false;
    }
    let closing = w.kind == transversal::WalkKind::Cycle;
    let edges: Vec<(usize, usize)> = (0..n - usize::from(!closing))
        .map(|i| (w.vertices[i], w.vertices[(i + 1) % n]))
        .collect();
    let mut used = vec![false; c.m()];
    edges.len() == c.m()
        && w.edge_colors.len() == edges.len()
        && edges.iter().zip(&w.edge_colors).all(|(&(u, v), &col)| {
            col < c.m() && !std::mem::replace(&mut used[col], true) && c.graph(col).has_edge(u, v)
        })
}
