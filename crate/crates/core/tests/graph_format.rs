mod common;

use proptest::prelude::*;
use transversal::families::generate_h_s_t;
use transversal::tgc::{parse_tgc, serialize_tgc};
use transversal::{Error, Graph, GraphCollection};

fn collection() -> impl Strategy<Value = GraphCollection> {
    (1usize..=9, 0usize..=6)
        .prop_flat_map(|(n, m)| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), pairs), m)
                .prop_map(move |bits| (n, bits))
        })
        .prop_map(|(n, bits)| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let graphs = bits
                .iter()
                .map(|row| {
                    let edges: Vec<_> = pairs.iter().zip(row).filter(|(_, &b)| b).map(|(&e, _)| e).collect();
                    Graph::from_edges(n, &edges).unwrap()
                })
                .collect();
            GraphCollection::new(n, graphs).unwrap()
        })
}

/// Non-canonical text for `c`: blocks in reverse, edges reversed and
/// doubled, comments and blank lines interleaved.
fn scrambled(c: &GraphCollection) -> String {
    let mut s = format!("# scrambled\ntgc 1\n\nn {}\nm {}\n", c.n(), c.m());
    for i in c.colors().rev() {
        s += &format!("c {i}   # block\n");
        for (u, v) in c.graph(i).edges().collect::<Vec<_>>().into_iter().rev() {
            s += &format!("{v} {u}\n{u} {v}\n");
        }
    }
    s
}

fn brute_min_degree(c: &GraphCollection) -> usize {
    let mut best = usize::MAX;
    for g in c.graphs() {
        for v in 0..c.n() {
            best = best.min((0..c.n()).filter(|&u| g.has_edge(u, v)).count());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn round_trip_is_canonical(c in collection()) {
        let text = serialize_tgc(&c);
        let back = parse_tgc(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serialize_tgc(&back), text.clone());
        prop_assert_eq!(serialize_tgc(&parse_tgc(&scrambled(&c)).unwrap()), text);
    }

    #[test]
    fn parsed_rows_are_symmetric_and_loop_free(c in collection()) {
        let back = parse_tgc(&scrambled(&c)).unwrap();
        for g in back.graphs() {
            prop_assert!(g.is_symmetric_and_loop_free());
            for u in 0..c.n() {
                prop_assert!(!g.has_edge(u, u));
                for v in 0..c.n() {
                    prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                }
            }
        }
    }

    #[test]
    fn min_degree_matches_double_loop(c in collection()) {
        match c.min_degree() {
            Ok(d) => prop_assert_eq!(d, brute_min_degree(&c)),
            Err(e) => {
                prop_assert_eq!(c.m(), 0);
                prop_assert_eq!(e, Error::EmptyCollection);
            }
        }
    }
}

#[test]
fn min_degree_examples() {
    let empty = GraphCollection::copies(&Graph::empty(4), 3);
    assert_eq!(empty.min_degree().unwrap(), 0);
    assert_eq!(generate_h_s_t(6, 0, 6).unwrap().min_degree().unwrap(), 3);
    assert_eq!(generate_h_s_t(6, 6, 0).unwrap().min_degree().unwrap(), 2);
}

#[test]
fn parse_examples() {
    let k2 = parse_tgc("tgc 1\nn 2\nm 1\nc 0\n0 1\n").unwrap();
    assert_eq!(k2, GraphCollection::copies(&Graph::complete(2), 1));
    assert!(matches!(
        parse_tgc("tgc 1\nn 3\nm 1\nc 0\n0 3\n"),
        Err(Error::Parse { line: 5, .. })
    ));
}

#[test]
fn serialize_examples() {
    let empty = GraphCollection::new(3, Vec::new()).unwrap();
    assert_eq!(serialize_tgc(&empty), "tgc 1\nn 3\nm 0\n");
    let tri = GraphCollection::copies(&Graph::complete(3), 1);
    assert_eq!(serialize_tgc(&tri), "tgc 1\nn 3\nm 1\nc 0\n0 1\n0 2\n1 2\n");
}
