//! Slow, definitional versions of the graph operations.
//!
//! These exist to cross-check the fast implementations and to drive the
//! exhaustive property suites; none of them is meant for large inputs.

use std::collections::{BTreeSet, HashSet};

use super::{edge, Graph, Vertex};

/// All-pairs hop distances by Floyd-Warshall; `None` for unreachable pairs.
#[allow(clippy::needless_range_loop)]
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|ij| ik + kj < ij) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Vertices on the unique path between `a` and `b` in a tree.
pub fn tree_path(t: &Graph, a: Vertex, b: Vertex) -> Vec<Vertex> {
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![a];
    parent[a] = a;
    while let Some(x) = stack.pop() {
        for &w in t.neighbors(x) {
            if parent[w] == usize::MAX {
                parent[w] = x;
                stack.push(w);
            }
        }
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[cur];
        path.push(cur);
    }
    path
}

/// Convex hull as the union of all pairwise tree paths.
pub fn hull_by_pairs(t: &Graph, vs: &[Vertex]) -> BTreeSet<Vertex> {
    let mut out: BTreeSet<Vertex> = vs.iter().copied().collect();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            out.extend(tree_path(t, a, b));
        }
    }
    out
}

/// Component of `u` after deleting the first edge of the path `u -> v`.
pub fn subtree_by_bfs(t: &Graph, u: Vertex, v: Vertex) -> BTreeSet<Vertex> {
    let path = tree_path(t, u, v);
    // path runs from v to u; the step after u is the second-to-last entry.
    let next = path[path.len() - 2];
    let cut = edge(u, next);
    let reduced = Graph::new(t.n(), t.edges().iter().copied().filter(|&e| e != cut))
        .expect("subgraph of a valid graph");
    reduced
        .bfs(u)
        .into_iter()
        .enumerate()
        .filter_map(|(w, d)| d.map(|_| w))
        .collect()
}

/// Every labeled tree on `n` vertices (`n^(n-2)` of them), via Prüfer codes.
pub fn all_labeled_trees(n: usize) -> Vec<Graph> {
    match n {
        0 => return Vec::new(),
        1 => return vec![Graph::new(1, []).unwrap()],
        2 => return vec![Graph::path(2)],
        _ => {}
    }
    let total = n.pow((n - 2) as u32);
    let mut seq = vec![0usize; n - 2];
    (0..total)
        .map(|code| {
            let mut c = code;
            for s in seq.iter_mut() {
                *s = c % n;
                c /= n;
            }
            from_pruefer(n, &seq)
        })
        .collect()
}

/// Every unlabeled tree on `n` vertices, one labeled representative each.
///
/// Keeps one labeled tree per isomorphism class using a center-rooted
/// canonical string. Practical up to about `n = 9`.
pub fn all_trees(n: usize) -> Vec<Graph> {
    let mut seen = HashSet::new();
    all_labeled_trees(n)
        .into_iter()
        .filter(|t| seen.insert(canonical_form(t)))
        .collect()
}

fn from_pruefer(n: usize, seq: &[usize]) -> Graph {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<_> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).unwrap()
}

/// Isomorphism-invariant string for a tree.
pub fn canonical_form(t: &Graph) -> String {
    let centers = tree_centers(t);
    centers
        .iter()
        .map(|&c| rooted_code(t, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn tree_centers(t: &Graph) -> Vec<Vertex> {
    let n = t.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in t.neighbors(v) {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

fn rooted_code(t: &Graph, v: Vertex, parent: Vertex) -> String {
    let mut kids: Vec<String> = t
        .neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(t, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unlabeled_tree_counts() {
        // OEIS A000055.
        let counts: Vec<usize> = (1..=8).map(|n| all_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
        for t in all_trees(7) {
            assert!(t.is_tree());
        }
    }

    #[test]
    fn floyd_on_path() {
        let d = floyd_warshall(&Graph::path(4));
        assert_eq!(d[0][3], Some(3));
        assert_eq!(d[2][1], Some(1));
    }
}
