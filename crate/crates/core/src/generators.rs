//! Synthetic network generators. All of them are deterministic functions of
//! their parameters and seed.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::seed;

/// Default number of `G(n, m)` draws tried before giving up on connectivity.
pub const DEFAULT_CONNECT_RETRIES: usize = 10_000;

/// A generator family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// Uniform-attachment ("Erdős–Rényi") random tree.
    ErTree { n: usize },
    /// `G(n, m)` with `m = round(n * avg_degree / 2)`, conditioned on connectivity.
    ErGraph {
        n: usize,
        avg_degree: f64,
        max_retries: usize,
    },
    /// Undirected forest-fire graph.
    ForestFire {
        n: usize,
        p_forward: f64,
        p_backward: f64,
    },
}

impl GeneratorSpec {
    pub fn n(&self) -> usize {
        match *self {
            GeneratorSpec::ErTree { n }
            | GeneratorSpec::ErGraph { n, .. }
            | GeneratorSpec::ForestFire { n, .. } => n,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::ErTree { .. } => "er_tree",
            GeneratorSpec::ErGraph { .. } => "er_graph",
            GeneratorSpec::ForestFire { .. } => "forest_fire",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorSpec::ErTree { n } => check_n(n),
            GeneratorSpec::ErGraph {
                n,
                avg_degree,
                max_retries,
            } => {
                check_n(n)?;
                if !(avg_degree > 0.0 && avg_degree < n as f64) {
                    return Err(Error::InvalidParameter(format!(
                        "average degree must lie in (0, {n}), got {avg_degree}"
                    )));
                }
                if max_retries == 0 {
                    return Err(Error::InvalidParameter(
                        "retry budget must be positive".into(),
                    ));
                }
                Ok(())
            }
            GeneratorSpec::ForestFire {
                n,
                p_forward,
                p_backward,
            } => {
                check_n(n)?;
                for (name, p) in [("forward", p_forward), ("backward", p_backward)] {
                    if !(0.0..1.0).contains(&p) {
                        return Err(Error::InvalidParameter(format!(
                            "{name} burning probability must lie in [0, 1), got {p}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Graph> {
        self.validate()?;
        match *self {
            GeneratorSpec::ErTree { n } => gen_er_tree(n, seed),
            GeneratorSpec::ErGraph {
                n,
                avg_degree,
                max_retries,
            } => gen_er_graph_with_retries(n, avg_degree, max_retries, seed),
            GeneratorSpec::ForestFire {
                n,
                p_forward,
                p_backward,
            } => gen_forest_fire(n, p_forward, p_backward, seed),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorSpec::ErTree { n } => write!(f, "er_tree(n={n})"),
            GeneratorSpec::ErGraph { n, avg_degree, .. } => {
                write!(f, "er_graph(n={n},deg={avg_degree})")
            }
            GeneratorSpec::ForestFire {
                n,
                p_forward,
                p_backward,
            } => {
                write!(f, "forest_fire(n={n},pf={p_forward},pb={p_backward})")
            }
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter(
            "vertex count must be at least 1".into(),
        ))
    } else {
        Ok(())
    }
}

/// Random tree grown by attaching each new vertex to a uniformly chosen
/// existing vertex.
pub fn gen_er_tree(n: usize, seed: u64) -> Result<Graph> {
    check_n(n)?;
    let mut rng = seed::rng(seed);
    let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::new(n, edges)
}

pub fn gen_er_graph(n: usize, avg_degree: f64, seed: u64) -> Result<Graph> {
    gen_er_graph_with_retries(n, avg_degree, DEFAULT_CONNECT_RETRIES, seed)
}

/// `G(n, m)` resampled until connected, at most `max_retries` draws.
pub fn gen_er_graph_with_retries(
    n: usize,
    avg_degree: f64,
    max_retries: usize,
    seed: u64,
) -> Result<Graph> {
    GeneratorSpec::ErGraph {
        n,
        avg_degree,
        max_retries,
    }
    .validate()?;
    let total = n * (n - 1) / 2;
    let m = ((n as f64 * avg_degree / 2.0).round() as usize).min(total);
    let mut rng = seed::rng(seed);
    for _ in 0..max_retries {
        let mut picks = index::sample(&mut rng, total, m).into_vec();
        picks.sort_unstable();
        let edges = decode_pairs(n, &picks);
        if spans(n, &edges) {
            return Graph::new(n, edges);
        }
    }
    Err(Error::RetryBudgetExhausted(max_retries))
}

/// Maps sorted linear indices over `{(u, v) : u < v}` (row-major) to pairs.
fn decode_pairs(n: usize, sorted: &[usize]) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::with_capacity(sorted.len());
    let (mut u, mut row_start) = (0usize, 0usize);
    for &k in sorted {
        while k >= row_start + (n - 1 - u) {
            row_start += n - 1 - u;
            u += 1;
        }
        out.push((u, u + 1 + (k - row_start)));
    }
    out
}

fn spans(n: usize, edges: &[(Vertex, Vertex)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components <= 1
}

/// Forest-fire growth: each new vertex links to a uniform ambassador, then
/// recursively burns a geometric number of the current vertex's out-links
/// (mean `p_forward / (1 - p_forward)`) and in-links (mean
/// `p_backward / (1 - p_backward)`), linking to everything burned. Links are
/// tracked directed during growth and returned undirected.
pub fn gen_forest_fire(n: usize, p_forward: f64, p_backward: f64, seed: u64) -> Result<Graph> {
    GeneratorSpec::ForestFire {
        n,
        p_forward,
        p_backward,
    }
    .validate()?;
    let mut rng = seed::rng(seed);
    let forward =
        Geometric::new(1.0 - p_forward).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let backward =
        Geometric::new(1.0 - p_backward).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut out_links: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut in_links: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    let mut mark = vec![usize::MAX; n];
    for v in 1..n {
        let ambassador = rng.random_range(0..v);
        mark[v] = v;
        mark[ambassador] = v;
        let mut burned = vec![ambassador];
        let mut queue = VecDeque::from([ambassador]);
        while let Some(x) = queue.pop_front() {
            let want_out = forward.sample(&mut rng) as usize;
            let want_in = backward.sample(&mut rng) as usize;
            for (links, want) in [(&out_links[x], want_out), (&in_links[x], want_in)] {
                if want == 0 {
                    continue;
                }
                let mut fresh: Vec<Vertex> =
                    links.iter().copied().filter(|&w| mark[w] != v).collect();
                fresh.shuffle(&mut rng);
                for &w in fresh.iter().take(want) {
                    mark[w] = v;
                    burned.push(w);
                    queue.push_back(w);
                }
            }
        }
        for &w in &burned {
            out_links[v].push(w);
            in_links[w].push(v);
            edges.push((w, v));
        }
    }
    Graph::new(n, edges)
}
