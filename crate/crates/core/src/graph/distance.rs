use std::collections::HashMap;

use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Hop distances from a set of source vertices to every vertex.
///
/// Rows are stored densely per source. The table is immutable once built and
/// can be shared across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    n: usize,
    sources: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    rows: Vec<Vec<u32>>,
}

impl DistanceTable {
    /// BFS distances from each of `sources` on a connected graph.
    pub fn from_graph(g: &Graph, sources: &[Vertex]) -> Result<Self> {
        g.require_connected()?;
        for &s in sources {
            g.check_vertex(s)?;
        }
        let rows = sources
            .iter()
            .map(|&s| {
                g.bfs(s)
                    .into_iter()
                    .map(|d| d.expect("connected graph") as u32)
                    .collect()
            })
            .collect();
        Self::from_rows(g.n(), sources.to_vec(), rows)
    }

    /// All-pairs table (every vertex is a source).
    pub fn all_pairs(g: &Graph) -> Result<Self> {
        let all: Vec<Vertex> = (0..g.n()).collect();
        Self::from_graph(g, &all)
    }

    /// Builds a table from precomputed rows, e.g. distances estimated from
    /// cascade timestamps.
    pub fn from_rows(n: usize, sources: Vec<Vertex>, rows: Vec<Vec<u32>>) -> Result<Self> {
        if sources.len() != rows.len() {
            return Err(Error::InvalidParameter(format!(
                "{} sources but {} rows",
                sources.len(),
                rows.len()
            )));
        }
        let mut index = HashMap::with_capacity(sources.len());
        for (i, (&s, row)) in sources.iter().zip(&rows).enumerate() {
            if s >= n {
                return Err(Error::InvalidVertex { vertex: s, n });
            }
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "row for source {s} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if index.insert(s, i).is_some() {
                return Err(Error::InvalidParameter(format!("source {s} listed twice")));
            }
        }
        Ok(DistanceTable {
            n,
            sources,
            index,
            rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sources(&self) -> &[Vertex] {
        &self.sources
    }

    /// Distance row of `source`, if it is one of the table's sources.
    pub fn row(&self, source: Vertex) -> Option<&[u32]> {
        self.index.get(&source).map(|&i| self.rows[i].as_slice())
    }

    pub(crate) fn require_row(&self, source: Vertex) -> Result<&[u32]> {
        self.row(source).ok_or(Error::MissingDistance {
            source_vertex: source,
        })
    }

    pub fn get(&self, source: Vertex, v: Vertex) -> Option<u32> {
        self.row(source).and_then(|r| r.get(v).copied())
    }
}
