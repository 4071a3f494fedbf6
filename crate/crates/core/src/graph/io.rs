use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Edge, EdgeSet, Graph, Vertex};
use crate::error::{Error, Result};

/// Parses the whitespace-separated `u v` edge-list format.
///
/// Lines starting with `#` and blank lines are skipped. Ids are remapped to a
/// dense `0..k` range in ascending order, so already-dense files keep their ids.
pub fn parse_edge_list(text: &str, origin: &Path) -> Result<Graph> {
    let raw = parse_pairs(text, origin)?;
    let mut ids: BTreeMap<usize, Vertex> = BTreeMap::new();
    for &(_, u, v) in &raw {
        ids.insert(u, 0);
        ids.insert(v, 0);
    }
    for (dense, slot) in ids.values_mut().enumerate() {
        *slot = dense;
    }
    let edges = dedup(
        raw.into_iter().map(|(l, u, v)| (l, u, v, ids[&u], ids[&v])),
        origin,
    )?;
    Graph::new(ids.len(), edges)
}

/// Parses the same format as [`parse_edge_list`] but keeps the ids as
/// written, for scoring edge sets that need not cover every vertex.
pub fn parse_edge_set(text: &str, origin: &Path) -> Result<EdgeSet> {
    let raw = parse_pairs(text, origin)?;
    Ok(
        dedup(raw.into_iter().map(|(l, u, v)| (l, u, v, u, v)), origin)?
            .into_iter()
            .collect(),
    )
}

pub fn load_edge_set(path: impl AsRef<Path>) -> Result<EdgeSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_set(&text, path)
}

fn dedup(
    pairs: impl Iterator<Item = (usize, usize, usize, Vertex, Vertex)>,
    origin: &Path,
) -> Result<Vec<Edge>> {
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for (lineno, u, v, a, b) in pairs {
        let e = super::edge(a, b);
        if !seen.insert(e) {
            return Err(Error::parse(
                origin,
                lineno,
                format!("duplicate edge {u} {v}"),
            ));
        }
        edges.push(e);
    }
    Ok(edges)
}

fn parse_pairs(text: &str, origin: &Path) -> Result<Vec<(usize, usize, usize)>> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(
                origin,
                lineno,
                "expected exactly two vertex ids",
            ));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(origin, lineno, format!("invalid vertex id {s:?}")))
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(Error::parse(origin, lineno, format!("self-loop at {u}")));
        }
        raw.push((lineno, u, v));
    }
    Ok(raw)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

/// Writes one `u v` line per edge in ascending order.
pub fn write_edge_list<W: Write>(
    edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    mut out: W,
) -> std::io::Result<()> {
    for (u, v) in edges {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_edge_list(g.edges().iter().copied(), &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}
