use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{classify_vertices, convex_hull, Graph, Vertex};

/// Which leaf set is subtracted from in the separating-set size bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeafReading {
    /// `|leaves| - |long leaves|`.
    #[default]
    AllLeaves,
    /// `|long leaves| - |boundary branched vertices anchoring a long leaf|`.
    LongLeaves,
}

/// Leaves whose unique neighbor is ordinary (degree 2).
pub fn long_leaves(t: &Graph) -> Result<BTreeSet<Vertex>> {
    let c = classify_vertices(t)?;
    Ok(c.leaves
        .iter()
        .copied()
        .filter(|&v| t.neighbors(v).first().is_some_and(|&w| t.degree(w) == 2))
        .collect())
}

/// Branched vertex reached from `leaf` by walking inward through ordinary
/// vertices, if any.
fn anchor(t: &Graph, leaf: Vertex) -> Option<Vertex> {
    let mut prev = leaf;
    let mut cur = *t.neighbors(leaf).first()?;
    while t.degree(cur) == 2 {
        let next = t.neighbors(cur).iter().copied().find(|&w| w != prev)?;
        prev = cur;
        cur = next;
    }
    (t.degree(cur) >= 3).then_some(cur)
}

/// Lower bound on the size of a source set whose distance profiles pin the
/// tree down uniquely, under the chosen reading of the leaf sets.
pub fn separating_size_bound(t: &Graph, reading: LeafReading) -> Result<usize> {
    let c = classify_vertices(t)?;
    let long = long_leaves(t)?;
    Ok(match reading {
        LeafReading::AllLeaves => c.leaves.len() - long.len(),
        LeafReading::LongLeaves => {
            let anchors: BTreeSet<Vertex> = long.iter().filter_map(|&l| anchor(t, l)).collect();
            long.len().saturating_sub(anchors.len())
        }
    })
}

/// True when no other tree on the same vertex ids reproduces the distance
/// profiles of `vs`. Brute force over all labeled trees, so only for tiny `n`.
pub fn has_unique_reconstruction(t: &Graph, vs: &[Vertex], labeled: &[Vec<u8>]) -> bool {
    let n = t.n();
    let rows: Vec<Vec<Option<usize>>> = vs.iter().map(|&s| t.bfs(s)).collect();
    let matches = labeled
        .iter()
        .filter(|d| {
            vs.iter()
                .zip(&rows)
                .all(|(&s, r)| (0..n).all(|u| r[u] == Some(d[s * n + u] as usize)))
        })
        .count();
    matches == 1
}

/// Flattened distance matrices of every labeled tree on `n` vertices.
pub fn labeled_tree_distances(n: usize) -> Vec<Vec<u8>> {
    crate::graph::oracle::all_labeled_trees(n)
        .into_iter()
        .map(|g| {
            let mut d = vec![0u8; n * n];
            for s in 0..n {
                for (u, x) in g.bfs(s).into_iter().enumerate() {
                    d[s * n + u] = x.expect("tree is connected") as u8;
                }
            }
            d
        })
        .collect()
}

/// True when the part of `t` hanging off `c` (away from `parent`) is a path
/// ending in a fan of leaves, possibly of length zero.
fn is_broom(t: &Graph, c: Vertex, parent: Vertex) -> bool {
    let (mut prev, mut cur) = (parent, c);
    loop {
        let mut kids = t.neighbors(cur).iter().copied().filter(|&w| w != prev);
        let Some(first) = kids.next() else {
            return true;
        };
        match kids.next() {
            None if t.degree(first) > 1 => (prev, cur) = (cur, first),
            None => return true,
            Some(_) => {
                return t
                    .neighbors(cur)
                    .iter()
                    .all(|&w| w == prev || t.degree(w) == 1)
            }
        }
    }
}

/// Whether the distance profiles of `vs` admit no other tree on the same
/// vertex ids.
///
/// Outside `conv(vs)` every vertex only knows its depth below its hull
/// vertex, so a hanging part is pinned down exactly when each of its levels
/// with a successor holds a single vertex: either all hanging neighbors of a
/// hull vertex are leaves, or there is one and it roots a broom.
pub fn is_uniquely_determined(t: &Graph, vs: &[Vertex]) -> Result<bool> {
    let hull = convex_hull(t, vs)?;
    for &h in &hull {
        let hanging: Vec<Vertex> = t
            .neighbors(h)
            .iter()
            .copied()
            .filter(|w| !hull.contains(w))
            .collect();
        let ok = match hanging[..] {
            [] => true,
            [c] => is_broom(t, c, h),
            _ => hanging.iter().all(|&c| t.degree(c) == 1),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Size of the smallest source set whose distance profiles determine `t`.
///
/// Uniqueness depends only on the hull, and the cheapest source set for a
/// hull is its leaf set, so this minimizes the leaf count of a valid
/// subtree by dynamic programming from every possible root.
pub fn min_unique_source_count(t: &Graph) -> Result<usize> {
    t.require_tree()?;
    let n = t.n();
    if n <= 2 {
        return Ok(1);
    }
    let mut best = usize::MAX;
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut broom = vec![false; n];
    // Cost of the subtree below `v` given `v` and its parent are hull members.
    let mut cost = vec![0usize; n];
    for root in 0..n {
        order.clear();
        order.push(root);
        parent[root] = root;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &w in t.neighbors(v) {
                if w != parent[v] {
                    parent[w] = v;
                    order.push(w);
                }
            }
            i += 1;
        }
        for &v in order.iter().rev() {
            let kids: Vec<Vertex> = t
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| w != root && parent[w] == v)
                .collect();
            broom[v] = match kids[..] {
                [] => true,
                [c] => broom[c],
                _ => kids.iter().all(|&c| t.degree(c) == 1),
            };
            let inner: usize = kids
                .iter()
                .filter(|&&c| t.degree(c) > 1)
                .map(|&c| cost[c])
                .sum();
            let all: usize = kids.iter().map(|&c| cost[c]).sum();
            let inner_count = kids.iter().filter(|&&c| t.degree(c) > 1).count();
            let hang_one = kids
                .iter()
                .filter(|&&c| broom[c])
                .map(|&c| all - cost[c])
                .min();
            if v != root {
                let mut c = if inner_count == 0 { 1 } else { inner };
                if let Some(h) = hang_one {
                    c = c.min(if kids.len() == 1 { 1 } else { h });
                }
                cost[v] = c;
            } else {
                // The root is itself a leaf of the hull when it has at most one hull child.
                let mut c = match inner_count {
                    0 => 1,
                    1 => 1 + inner,
                    _ => inner,
                };
                for &h in &kids {
                    if !broom[h] {
                        continue;
                    }
                    let rest = kids.len() - 1;
                    let sum = all - cost[h];
                    c = c.min(match rest {
                        0 => 1,
                        1 => 1 + sum,
                        _ => sum,
                    });
                }
                best = best.min(c);
            }
        }
    }
    Ok(best)
}
