//! Undirected simple graphs and the deterministic machinery built on hop
//! distances: vertex classification, convex hulls, separating sets,
//! reconstruction from distance profiles and redundancy.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

mod distance;
mod io;
pub mod oracle;
mod reconstruct;
mod tree;

pub use distance::DistanceTable;
pub use io::{
    load_edge_list, load_edge_set, parse_edge_list, parse_edge_set, save_edge_list, write_edge_list,
};
pub use reconstruct::{
    accuracy_lower_bound, is_redundant, is_redundant_by_criterion, is_separating,
    mutually_replaceable, reconstruct_from, redundant_core, relative_distance, ReconstructMode,
};
pub use tree::{classify_vertices, convex_hull, subtree, SubtreeHandle, VertexClassification};

/// A vertex id in `0..n`.
pub type Vertex = usize;

/// An undirected edge, always stored with `.0 < .1`.
pub type Edge = (Vertex, Vertex);

/// A set of undirected edges in normalized form.
pub type EdgeSet = BTreeSet<Edge>;

/// Normalizes an unordered pair so that the smaller id comes first.
#[inline]
pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Immutable undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and ids outside `0..n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut set = EdgeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !set.insert(edge(u, v)) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
            adj,
        })
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// Star with center `0` and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges are valid")
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph edges are valid")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle needs n >= 3, got {n}"
            )));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending `(u, v)` order with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.n as f64
        }
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs(0).iter().all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() + 1 == self.n && self.is_connected()
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub(crate) fn require_tree(&self) -> Result<()> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(Error::NotATree {
                vertices: self.n,
                edges: self.edges.len(),
                connected: self.is_connected(),
            })
        }
    }

    /// Hop distances from `source`; `None` marks unreachable vertices.
    pub fn bfs(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Hop count between `u` and `v`, `Ok(None)` when they are in different components.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.bfs(u)[v])
    }

    /// Copy of the graph without edge `(u, v)`.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        let e = edge(u, v);
        Graph::new(self.n, self.edges.iter().copied().filter(|&x| x != e))
    }

    /// Copy of the graph with edge `(u, v)` added.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        Graph::new(
            self.n,
            self.edges.iter().copied().chain(std::iter::once((u, v))),
        )
    }

    /// True when no three vertices are pairwise adjacent.
    pub fn is_triangle_free(&self) -> bool {
        self.edges.iter().all(|&(u, v)| {
            let (a, b) = (&self.adj[u], &self.adj[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return false,
                }
            }
            true
        })
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "permutation has length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}
