use std::collections::{BTreeSet, VecDeque};

use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Degree classes of a tree, plus the branched vertices that reach a leaf
/// through ordinary vertices only.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexClassification {
    /// Degree 1.
    pub leaves: BTreeSet<Vertex>,
    /// Degree at least 3.
    pub branched: BTreeSet<Vertex>,
    /// Degree 2.
    pub ordinary: BTreeSet<Vertex>,
    /// Branched vertices with a simple path to a leaf avoiding other branched vertices.
    pub boundary_branched: BTreeSet<Vertex>,
}

pub fn classify_vertices(t: &Graph) -> Result<VertexClassification> {
    t.require_tree()?;
    let mut c = VertexClassification::default();
    for v in 0..t.n() {
        match t.degree(v) {
            0 | 1 => c.leaves.insert(v),
            2 => c.ordinary.insert(v),
            _ => c.branched.insert(v),
        };
    }
    // Walk inward from every leaf through ordinary vertices.
    for &leaf in &c.leaves {
        let mut prev = leaf;
        let Some(&first) = t.neighbors(leaf).first() else {
            continue;
        };
        let mut cur = first;
        while t.degree(cur) == 2 {
            let next = t
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| w != prev)
                .expect("ordinary vertex has two neighbors");
            prev = cur;
            cur = next;
        }
        if t.degree(cur) >= 3 {
            c.boundary_branched.insert(cur);
        }
    }
    Ok(c)
}

/// Union of the tree paths between all pairs of `vs`.
///
/// Computed by repeatedly pruning leaves that are not in `vs`.
pub fn convex_hull(t: &Graph, vs: &[Vertex]) -> Result<BTreeSet<Vertex>> {
    t.require_tree()?;
    if vs.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    for &v in vs {
        t.check_vertex(v)?;
    }
    Ok(hull_mask(t, vs)
        .into_iter()
        .enumerate()
        .filter_map(|(v, inside)| inside.then_some(v))
        .collect())
}

/// Hull membership as a mask; `t` must be a tree and `vs` non-empty.
pub(crate) fn hull_mask(t: &Graph, vs: &[Vertex]) -> Vec<bool> {
    let n = t.n();
    let mut keep = vec![false; n];
    for &v in vs {
        keep[v] = true;
    }
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| deg[v] <= 1 && !keep[v]).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in t.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] <= 1 && !keep[w] {
                    queue.push_back(w);
                }
            }
        }
    }
    alive
}

/// The part of a tree on `anchor.0`'s side of the first edge of the path
/// from `anchor.0` to `anchor.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeHandle {
    pub anchor: (Vertex, Vertex),
    pub members: BTreeSet<Vertex>,
}

impl SubtreeHandle {
    pub fn contains(&self, v: Vertex) -> bool {
        self.members.contains(&v)
    }
}

pub fn subtree(t: &Graph, u: Vertex, v: Vertex) -> Result<SubtreeHandle> {
    t.require_tree()?;
    t.check_vertex(u)?;
    t.check_vertex(v)?;
    if u == v {
        return Err(Error::DegenerateSubtree(u));
    }
    let from_v = t.bfs(v);
    let du = from_v[u].expect("tree is connected");
    // The first step from u towards v is the unique neighbor one hop closer to v.
    let next = t
        .neighbors(u)
        .iter()
        .copied()
        .find(|&w| from_v[w] == Some(du - 1))
        .expect("u has a neighbor closer to v");
    let mut members = BTreeSet::from([u]);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for &w in t.neighbors(x) {
            if (x == u && w == next) || members.contains(&w) {
                continue;
            }
            members.insert(w);
            queue.push_back(w);
        }
    }
    Ok(SubtreeHandle {
        anchor: (u, v),
        members,
    })
}
