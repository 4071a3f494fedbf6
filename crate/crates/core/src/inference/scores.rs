use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, EdgeSet, Vertex};

use super::weights::{pair_index, WeightMatrix};

/// Per-pair edge likelihoods over `0..n`, non-negative and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    n: usize,
    scores: Vec<f64>,
}

impl ScoreTable {
    /// Normalizes raw non-negative per-pair scores (upper triangle, row-major).
    pub fn from_raw(n: usize, raw: Vec<f64>) -> Result<Self> {
        if raw.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidParameter(format!(
                "{} scores for {n} vertices",
                raw.len()
            )));
        }
        if raw.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidParameter(
                "scores must be finite and non-negative".into(),
            ));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter("scores sum to zero".into()));
        }
        Ok(ScoreTable {
            n,
            scores: raw.into_iter().map(|s| s / total).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<f64> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        let (a, b) = edge(u, v);
        Some(self.scores[pair_index(self.n, a, b)])
    }

    pub fn sum(&self) -> f64 {
        self.scores.iter().sum()
    }

    /// Pairs in descending score order, ties broken by `(u, v)`.
    pub fn ranked(&self) -> Vec<Edge> {
        let n = self.n;
        let mut keyed: Vec<(f64, Vertex, Vertex)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| (self.scores[pair_index(n, u, v)], u, v))
            .collect();
        keyed.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        keyed.into_iter().map(|(_, u, v)| (u, v)).collect()
    }

    pub fn top(&self, k: usize) -> Result<EdgeSet> {
        let ranked = self.ranked();
        if ranked.len() < k {
            return Err(Error::InsufficientPairs {
                needed: k,
                available: ranked.len(),
                excluded: 0,
            });
        }
        Ok(ranked.into_iter().take(k).collect())
    }

    /// Writes `u v score` lines for every pair with a positive score.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.n;
        for u in 0..n {
            for v in u + 1..n {
                let s = self.scores[pair_index(n, u, v)];
                if s > 0.0 {
                    writeln!(out, "{u} {v} {s}")?;
                }
            }
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Turns weights into likelihoods: a standard normal density of the excess
/// over the minimum weight, scaled by the root mean square excess of the
/// `n_edges` smallest weights. Excluded pairs score zero. When that scale is
/// zero the minimal-weight pairs share the mass uniformly.
pub fn likelihood_scores(w: &WeightMatrix, n_edges: usize) -> Result<ScoreTable> {
    let smallest = w.smallest(n_edges.max(1))?;
    let n = w.n();
    let at = |e: &Edge| w.get(e.0, e.1).expect("valid pair");
    let w_star = at(&smallest[0]);
    let sigma2 = smallest
        .iter()
        .map(|e| (at(e) - w_star).powi(2))
        .sum::<f64>()
        / smallest.len() as f64;
    let sigma = sigma2.sqrt();
    let mut raw = vec![0.0; w.pair_count()];
    for (u, v, x) in w.iter() {
        if w.is_excluded(u, v) == Some(true) {
            continue;
        }
        raw[pair_index(n, u, v)] = if sigma > 0.0 {
            std_normal_pdf((x - w_star) / sigma)
        } else if x == w_star {
            1.0
        } else {
            0.0
        };
    }
    ScoreTable::from_raw(n, raw)
}

/// Averages two score tables and returns the `n_edges` best pairs.
pub fn fuse_scores(a: &ScoreTable, b: &ScoreTable, n_edges: usize) -> Result<EdgeSet> {
    if a.n != b.n {
        return Err(Error::UniverseMismatch(a.n, b.n));
    }
    let raw = a
        .scores
        .iter()
        .zip(&b.scores)
        .map(|(x, y)| 0.5 * (x + y))
        .collect();
    ScoreTable::from_raw(a.n, raw)?.top(n_edges)
}

/// Parses `u v score` lines (`#` comments allowed) over `0..n` and
/// normalizes. Unlisted pairs score zero.
pub fn parse_score_file(text: &str, origin: &Path, n: usize) -> Result<ScoreTable> {
    let mut raw = vec![0.0; n * n.saturating_sub(1) / 2];
    let mut seen = vec![false; raw.len()];
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, s] = fields[..] else {
            return Err(Error::parse(origin, lineno, "expected `u v score`"));
        };
        let u: Vertex = u
            .parse()
            .map_err(|_| Error::parse(origin, lineno, format!("bad vertex {u:?}")))?;
        let v: Vertex = v
            .parse()
            .map_err(|_| Error::parse(origin, lineno, format!("bad vertex {v:?}")))?;
        let s: f64 = s
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite() && *s >= 0.0)
            .ok_or_else(|| Error::parse(origin, lineno, format!("bad score {s:?}")))?;
        if u == v {
            return Err(Error::parse(origin, lineno, format!("self-loop at {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::parse(
                origin,
                lineno,
                format!("vertex outside 0..{n}"),
            ));
        }
        let (a, b) = edge(u, v);
        let idx = pair_index(n, a, b);
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::parse(
                origin,
                lineno,
                format!("pair ({a}, {b}) listed twice"),
            ));
        }
        raw[idx] = s;
    }
    ScoreTable::from_raw(n, raw)
}

pub fn load_score_file(path: impl AsRef<Path>, n: usize) -> Result<ScoreTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_score_file(&text, path, n)
}
