use super::tree::hull_mask;
use super::{DistanceTable, EdgeSet, Graph, Vertex};
use crate::error::{Error, Result};

/// Edge criterion used when reconstructing from relative distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReconstructMode {
    /// `d_V'(u, v) <= 1`; zero-distance pairs are kept as edges.
    #[default]
    ThresholdLe1,
    /// `d_V'(u, v) == 1`; only sound when the underlying graph is a tree.
    ExactEq1,
}

fn rows<'a>(dt: &'a DistanceTable, vs: &[Vertex]) -> Result<Vec<&'a [u32]>> {
    vs.iter().map(|&s| dt.require_row(s)).collect()
}

/// `sup` over `vs` of `|d_s(u) - d_s(v)|`; zero for an empty `vs`.
pub fn relative_distance(dt: &DistanceTable, vs: &[Vertex], u: Vertex, v: Vertex) -> Result<u32> {
    for w in [u, v] {
        if w >= dt.n() {
            return Err(Error::InvalidVertex {
                vertex: w,
                n: dt.n(),
            });
        }
    }
    Ok(rows(dt, vs)?
        .into_iter()
        .map(|r| r[u].abs_diff(r[v]))
        .max()
        .unwrap_or(0))
}

/// True when every pair of distinct vertices differs in distance to some member of `vs`.
pub fn is_separating(g: &Graph, vs: &[Vertex]) -> Result<bool> {
    let dt = DistanceTable::from_graph(g, vs)?;
    let rows = rows(&dt, vs)?;
    let mut signatures: Vec<Vec<u32>> = (0..g.n())
        .map(|v| rows.iter().map(|r| r[v]).collect())
        .collect();
    signatures.sort_unstable();
    Ok(signatures.windows(2).all(|w| w[0] != w[1]))
}

/// Pairs declared adjacent from the distance profiles of `vs`.
pub fn reconstruct_from(
    dt: &DistanceTable,
    vs: &[Vertex],
    n: usize,
    mode: ReconstructMode,
) -> Result<EdgeSet> {
    if n > dt.n() {
        return Err(Error::InvalidParameter(format!(
            "table covers {} vertices, asked for {n}",
            dt.n()
        )));
    }
    let rows = rows(dt, vs)?;
    let mut out = EdgeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            let d = rows.iter().map(|r| r[u].abs_diff(r[v])).max().unwrap_or(0);
            let keep = match mode {
                ReconstructMode::ThresholdLe1 => d <= 1,
                ReconstructMode::ExactEq1 => d == 1,
            };
            if keep {
                out.insert((u, v));
            }
        }
    }
    Ok(out)
}

/// `|conv(vs)| / |V|`, a lower bound on the reconstruction accuracy of `vs`.
pub fn accuracy_lower_bound(t: &Graph, vs: &[Vertex]) -> Result<f64> {
    t.require_tree()?;
    if vs.is_empty() {
        return Ok(0.0);
    }
    for &v in vs {
        t.check_vertex(v)?;
    }
    let inside = hull_mask(t, vs).into_iter().filter(|&b| b).count();
    Ok(inside as f64 / t.n() as f64)
}

fn without(vs: &[Vertex], x: Vertex) -> Vec<Vertex> {
    vs.iter().copied().filter(|&v| v != x).collect()
}

/// Definitional redundancy test: reconstructing with and without `vi` yields
/// the same edge set.
pub fn is_redundant(dt: &DistanceTable, vs: &[Vertex], vi: Vertex, n: usize) -> Result<bool> {
    if !vs.contains(&vi) {
        return Err(Error::NotInVertexSet(vi));
    }
    let full = reconstruct_from(dt, vs, n, ReconstructMode::ThresholdLe1)?;
    let reduced = reconstruct_from(dt, &without(vs, vi), n, ReconstructMode::ThresholdLe1)?;
    Ok(full == reduced)
}

/// Redundancy via the pairwise criterion: every pair `vi` pushes apart by
/// more than one hop is also pushed apart by another member of `vs`.
pub fn is_redundant_by_criterion(
    dt: &DistanceTable,
    vs: &[Vertex],
    vi: Vertex,
    n: usize,
) -> Result<bool> {
    if !vs.contains(&vi) {
        return Err(Error::NotInVertexSet(vi));
    }
    let own = dt.require_row(vi)?;
    let others = rows(dt, &without(vs, vi))?;
    for u in 0..n {
        for v in u + 1..n {
            if own[u].abs_diff(own[v]) > 1 && !others.iter().any(|r| r[u].abs_diff(r[v]) > 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reconstructions from `vs \ {a}` and `vs \ {b}` coincide.
pub fn mutually_replaceable(
    dt: &DistanceTable,
    vs: &[Vertex],
    a: Vertex,
    b: Vertex,
    n: usize,
) -> Result<bool> {
    for x in [a, b] {
        if !vs.contains(&x) {
            return Err(Error::NotInVertexSet(x));
        }
    }
    let ra = reconstruct_from(dt, &without(vs, a), n, ReconstructMode::ThresholdLe1)?;
    let rb = reconstruct_from(dt, &without(vs, b), n, ReconstructMode::ThresholdLe1)?;
    Ok(ra == rb)
}

/// Greedily strips redundant members of `vs` in ascending id order.
///
/// Each member is tested against the current (already reduced) set. A member
/// that is not redundant stays non-redundant in every subset, so one pass is
/// enough. Returns the kept vertices in ascending order.
pub fn redundant_core(t: &Graph, vs: &[Vertex]) -> Result<Vec<Vertex>> {
    t.require_tree()?;
    let mut members: Vec<Vertex> = vs.to_vec();
    members.sort_unstable();
    members.dedup();
    for &v in &members {
        t.check_vertex(v)?;
    }
    let n = t.n();
    let m = members.len();
    if m == 0 {
        return Ok(members);
    }
    let dt = DistanceTable::from_graph(t, &members)?;
    let rows: Vec<&[u32]> = members.iter().map(|&s| dt.row(s).unwrap()).collect();

    // Per pair: number of members separating it by more than one hop, and the
    // xor of their member indices (which names the member once the count is 1).
    let pairs = n * n.saturating_sub(1) / 2;
    let mut count = vec![0u32; pairs];
    let mut xor = vec![0u32; pairs];
    for (k, r) in rows.iter().enumerate() {
        let mut idx = 0;
        for u in 0..n {
            for v in u + 1..n {
                if r[u].abs_diff(r[v]) > 1 {
                    count[idx] += 1;
                    xor[idx] ^= k as u32;
                }
                idx += 1;
            }
        }
    }
    let mut pinned = vec![0u32; m];
    for idx in 0..pairs {
        if count[idx] == 1 {
            pinned[xor[idx] as usize] += 1;
        }
    }

    let mut keep = vec![true; m];
    for k in 0..m {
        if pinned[k] > 0 {
            continue;
        }
        keep[k] = false;
        let r = rows[k];
        let mut idx = 0;
        for u in 0..n {
            for v in u + 1..n {
                if r[u].abs_diff(r[v]) > 1 {
                    count[idx] -= 1;
                    xor[idx] ^= k as u32;
                    if count[idx] == 1 {
                        pinned[xor[idx] as usize] += 1;
                    }
                }
                idx += 1;
            }
        }
    }
    Ok(members
        .into_iter()
        .zip(keep)
        .filter_map(|(v, k)| k.then_some(v))
        .collect())
}
