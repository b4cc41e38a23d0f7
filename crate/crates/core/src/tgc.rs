//! The TGC text format.
//!
//! ```text
//! tgc 1
//! n <N>
//! m <M>
//! c <color>      (M blocks, each color index in [0, M) exactly once)
//! <u> <v>        (zero or more edge lines per block)
//! ```
//!
//! `#` starts a comment. Blank lines are ignored. The serializer writes the
//! canonical form: LF endings, colors in index order, edges `u v` with
//! `u < v` in lexicographic order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphCollection, MAX_COLORS, MAX_VERTICES};

const MAGIC: &str = "tgc";
const VERSION: &str = "1";

pub fn parse_tgc(text: &str) -> Result<GraphCollection> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            (i + 1, body.split_whitespace().collect::<Vec<_>>())
        })
        .filter(|(_, toks)| !toks.is_empty());

    let (line, toks) = next(&mut lines, 0, "header")?;
    if toks != [MAGIC, VERSION] {
        return Err(Error::parse(line, format!("expected `{MAGIC} {VERSION}`")));
    }
    let (line, toks) = next(&mut lines, line, "vertex count")?;
    let n = keyed_number(line, &toks, "n")?;
    if n > MAX_VERTICES {
        return Err(Error::parse(line, format!("n = {n} exceeds {MAX_VERTICES}")));
    }
    let (line, toks) = next(&mut lines, line, "color count")?;
    let m = keyed_number(line, &toks, "m")?;
    if m > MAX_COLORS {
        return Err(Error::parse(line, format!("m = {m} exceeds {MAX_COLORS}")));
    }

    let mut graphs: Vec<Option<Graph>> = vec![None; m];
    let mut current: Option<usize> = None;
    let mut end_line = line;
    for (line, toks) in lines {
        end_line = line;
        if toks[0] == "c" {
            let color = keyed_number(line, &toks, "c")?;
            if color >= m {
                return Err(Error::parse(line, format!("color {color} out of range for m = {m}")));
            }
            if graphs[color].is_some() {
                return Err(Error::parse(line, format!("duplicate block for color {color}")));
            }
            graphs[color] = Some(Graph::empty(n));
            current = Some(color);
            continue;
        }
        let Some(color) = current else {
            return Err(Error::parse(line, "edge line before any color block"));
        };
        let [u, v] = toks[..] else {
            return Err(Error::parse(line, "expected `<u> <v>`"));
        };
        let (u, v) = (vertex(line, u, n)?, vertex(line, v, n)?);
        if u == v {
            return Err(Error::parse(line, format!("loop edge at vertex {u}")));
        }
        graphs[color].as_mut().expect("current block exists").add_edge(u, v);
    }

    let found = graphs.iter().filter(|g| g.is_some()).count();
    if found != m {
        return Err(Error::parse(
            end_line + 1,
            format!("expected {m} color blocks, found {found}"),
        ));
    }
    GraphCollection::new(n, graphs.into_iter().map(Option::unwrap).collect())
}

fn next<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    previous: usize,
    what: &str,
) -> Result<(usize, Vec<&'a str>)> {
    lines
        .next()
        .ok_or_else(|| Error::parse(previous + 1, format!("unexpected end of input, expected {what}")))
}

fn keyed_number(line: usize, toks: &[&str], key: &str) -> Result<usize> {
    match toks {
        [k, value] if *k == key => value
            .parse()
            .map_err(|_| Error::parse(line, format!("`{value}` is not a non-negative integer"))),
        _ => Err(Error::parse(line, format!("expected `{key} <integer>`"))),
    }
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("`{tok}` is not a vertex index")))?;
    if v >= n {
        return Err(Error::parse(line, format!("vertex {v} out of range for n = {n}")));
    }
    Ok(v)
}

pub fn serialize_tgc(c: &GraphCollection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {VERSION}");
    let _ = writeln!(out, "n {}", c.n());
    let _ = writeln!(out, "m {}", c.m());
    for (i, g) in c.graphs().iter().enumerate() {
        let _ = writeln!(out, "c {i}");
        for (u, v) in g.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
    }
    out
}
