use std::io::Write;

use rayon::prelude::*;

use crate::diffusion::Cascade;
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};

/// How per-source timestamp gaps are turned into a pair weight.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    /// Mean of `| |dT| / mu1 - 1 |` over shared sources.
    Tree { mu1: f64 },
    /// One term per `(k, mu_k)`: the smaller of the sample moment of `|dT|^k`
    /// and its distance to `mu_k`, combined across terms.
    Moments {
        moments: Vec<(u32, f64)>,
        combine: Combiner,
        deviation: Deviation,
    },
}

/// Where the distance to `mu_k` is taken in a moment term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Deviation {
    /// `| mean(|dT|^k) - mu_k |`: the sample moment against the nominal one.
    Pooled,
    /// `mean(| |dT|^k - mu_k |)`: per-source distances, then averaged.
    #[default]
    PerSource,
}

/// Combines per-moment weights into one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combiner {
    #[default]
    Sum,
    Mean,
    Max,
}

impl Combiner {
    fn apply(self, parts: &[f64]) -> f64 {
        match self {
            Combiner::Sum => parts.iter().sum(),
            Combiner::Mean => parts.iter().sum::<f64>() / parts.len() as f64,
            Combiner::Max => parts.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

impl WeightRule {
    pub fn graph(mu1: f64, mu2: f64) -> Self {
        WeightRule::Moments {
            moments: vec![(1, mu1), (2, mu2)],
            combine: Combiner::Sum,
            deviation: Deviation::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {x}"
                )))
            }
        };
        match self {
            WeightRule::Tree { mu1 } => positive("mu1", *mu1),
            WeightRule::Moments { moments, .. } => {
                if moments.is_empty() {
                    return Err(Error::InvalidParameter("moment list is empty".into()));
                }
                for &(k, mu) in moments {
                    if k == 0 {
                        return Err(Error::InvalidParameter(
                            "moment order must be at least 1".into(),
                        ));
                    }
                    positive(&format!("moment {k}"), mu)?;
                }
                Ok(())
            }
        }
    }
}

/// Timestamps of a set of cascades laid out vertex-major: entry
/// `v * m + i` is the time of vertex `v` in cascade `i`, NaN when missing.
#[derive(Debug, Clone)]
pub(crate) struct TimeStore {
    pub n: usize,
    pub sources: Vec<Vertex>,
    pub rows: Vec<Vec<f64>>,
}

impl TimeStore {
    pub fn from_cascades(cascades: &[Cascade]) -> Result<Self> {
        let first = cascades.first().ok_or(Error::NoCascades)?;
        let n = first.n();
        let mut rows = Vec::with_capacity(cascades.len());
        for c in cascades {
            if c.n() != n {
                return Err(Error::InvalidParameter(format!(
                    "cascades cover {} and {} vertices",
                    n,
                    c.n()
                )));
            }
            rows.push(c.times().iter().map(|t| t.unwrap_or(f64::NAN)).collect());
        }
        Ok(TimeStore {
            n,
            sources: cascades.iter().map(Cascade::source).collect(),
            rows,
        })
    }

    fn by_vertex(&self) -> Vec<f64> {
        let m = self.rows.len();
        let mut out = vec![f64::NAN; self.n * m];
        for (i, row) in self.rows.iter().enumerate() {
            for (v, &t) in row.iter().enumerate() {
                out[v * m + i] = t;
            }
        }
        out
    }
}

#[inline]
pub(crate) fn pair_index(n: usize, u: Vertex, v: Vertex) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Symmetric pairwise weights with the support behind each entry.
///
/// Entries whose support falls below the threshold are flagged excluded;
/// entries with no support at all hold `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    cascades: usize,
    w: Vec<f64>,
    parts: Vec<Vec<f64>>,
    support: Vec<u32>,
    excluded: Vec<bool>,
}

impl WeightMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cascades the weights were computed from.
    pub fn cascade_count(&self) -> usize {
        self.cascades
    }

    pub fn pair_count(&self) -> usize {
        self.w.len()
    }

    fn index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        Some(pair_index(self.n, a, b))
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<f64> {
        self.index(u, v).map(|i| self.w[i])
    }

    /// Weight of the `i`-th combined term (e.g. `W1`, `W2`) when retained.
    pub fn component(&self, i: usize, u: Vertex, v: Vertex) -> Option<f64> {
        let idx = self.index(u, v)?;
        self.parts.get(i).map(|p| p[idx])
    }

    pub fn component_count(&self) -> usize {
        self.parts.len()
    }

    pub fn support(&self, u: Vertex, v: Vertex) -> Option<u32> {
        self.index(u, v).map(|i| self.support[i])
    }

    pub fn is_excluded(&self, u: Vertex, v: Vertex) -> Option<bool> {
        self.index(u, v).map(|i| self.excluded[i])
    }

    pub fn excluded_count(&self) -> usize {
        self.excluded.iter().filter(|&&x| x).count()
    }

    /// Iterates `(u, v, W)` over all pairs `u < v`.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v, self.w[pair_index(n, u, v)])))
    }

    /// Non-excluded pairs in ascending `(W, u, v)` order.
    pub fn ranked(&self) -> Vec<Edge> {
        self.ranked_by(&self.w)
    }

    /// Non-excluded pairs ranked by the `i`-th component alone.
    pub fn ranked_component(&self, i: usize) -> Option<Vec<Edge>> {
        self.parts.get(i).map(|p| self.ranked_by(p))
    }

    fn ranked_by(&self, w: &[f64]) -> Vec<Edge> {
        let n = self.n;
        let mut keyed: Vec<(f64, Vertex, Vertex)> = Vec::with_capacity(w.len());
        for u in 0..n {
            for v in u + 1..n {
                let i = pair_index(n, u, v);
                if !self.excluded[i] {
                    keyed.push((w[i], u, v));
                }
            }
        }
        keyed.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        keyed.into_iter().map(|(_, u, v)| (u, v)).collect()
    }

    /// The `k` smallest non-excluded pairs.
    pub fn smallest(&self, k: usize) -> Result<Vec<Edge>> {
        let mut ranked = self.ranked();
        if ranked.len() < k {
            return Err(Error::InsufficientPairs {
                needed: k,
                available: ranked.len(),
                excluded: self.excluded_count(),
            });
        }
        ranked.truncate(k);
        Ok(ranked)
    }

    /// Writes `u,v,weight,support,excluded` rows plus one column per component.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "u,v,weight,support,excluded")?;
        for i in 0..self.parts.len() {
            write!(out, ",w{}", i + 1)?;
        }
        writeln!(out)?;
        for (u, v, w) in self.iter() {
            let i = pair_index(self.n, u, v);
            write!(out, "{u},{v},{w},{},{}", self.support[i], self.excluded[i])?;
            for p in &self.parts {
                write!(out, ",{}", p[i])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if (0.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "support fraction must lie in [0, 1], got {tau}"
        )))
    }
}

pub(crate) fn compute(store: &TimeStore, rule: &WeightRule, tau: f64) -> Result<WeightMatrix> {
    rule.validate()?;
    check_tau(tau)?;
    let n = store.n;
    let m = store.rows.len();
    if m == 0 {
        return Err(Error::NoCascades);
    }
    let flat = store.by_vertex();
    let min_support = tau * m as f64;
    let terms = match rule {
        WeightRule::Tree { .. } => 0,
        WeightRule::Moments { moments, .. } => moments.len(),
    };

    // One chunk per u: (w, parts (term-major), support) for v in u+1..n.
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<u32>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let a = &flat[u * m..(u + 1) * m];
            let len = n - u - 1;
            let mut w = Vec::with_capacity(len);
            let mut parts = vec![0.0; terms * len];
            let mut support = Vec::with_capacity(len);
            let mut raw = vec![0.0; terms];
            let mut dev = vec![0.0; terms];
            let mut term_w = vec![0.0; terms];
            for (j, v) in (u + 1..n).enumerate() {
                let b = &flat[v * m..(v + 1) * m];
                let mut count = 0u32;
                match rule {
                    WeightRule::Tree { mu1 } => {
                        let mut acc = 0.0;
                        for (x, y) in a.iter().zip(b) {
                            let d = x - y;
                            if d.is_nan() {
                                continue;
                            }
                            count += 1;
                            acc += (d.abs() / mu1 - 1.0).abs();
                        }
                        w.push(if count == 0 {
                            f64::INFINITY
                        } else {
                            acc / count as f64
                        });
                    }
                    WeightRule::Moments {
                        moments,
                        combine,
                        deviation,
                    } => {
                        raw.iter_mut().for_each(|x| *x = 0.0);
                        dev.iter_mut().for_each(|x| *x = 0.0);
                        for (x, y) in a.iter().zip(b) {
                            let d = x - y;
                            if d.is_nan() {
                                continue;
                            }
                            count += 1;
                            let d = d.abs();
                            for (t, &(k, mu)) in moments.iter().enumerate() {
                                let s = power(d, k);
                                raw[t] += s;
                                dev[t] += (s - mu).abs();
                            }
                        }
                        if count == 0 {
                            w.push(f64::INFINITY);
                            for t in 0..terms {
                                parts[t * len + j] = f64::INFINITY;
                            }
                        } else {
                            let c = count as f64;
                            for t in 0..terms {
                                let spread = match deviation {
                                    Deviation::Pooled => (raw[t] - moments[t].1 * c).abs(),
                                    Deviation::PerSource => dev[t],
                                };
                                term_w[t] = raw[t].min(spread) / c;
                                parts[t * len + j] = term_w[t];
                            }
                            w.push(combine.apply(&term_w));
                        }
                    }
                }
                support.push(count);
            }
            (w, parts, support)
        })
        .collect();

    let total = n * n.saturating_sub(1) / 2;
    let mut w = Vec::with_capacity(total);
    let mut parts = vec![Vec::with_capacity(total); terms];
    let mut support = Vec::with_capacity(total);
    for (rw, rp, rs) in rows {
        let len = rw.len();
        w.extend(rw);
        for (t, p) in parts.iter_mut().enumerate() {
            p.extend_from_slice(&rp[t * len..(t + 1) * len]);
        }
        support.extend(rs);
    }
    let excluded = support
        .iter()
        .map(|&s| s == 0 || (s as f64) < min_support)
        .collect();
    Ok(WeightMatrix {
        n,
        cascades: m,
        w,
        parts,
        support,
        excluded,
    })
}

#[inline]
fn power(d: f64, k: u32) -> f64 {
    let mut s = d;
    for _ in 1..k {
        s *= d;
    }
    s
}

/// Tree weights: mean deviation of `|dT| / mu1` from one.
pub fn tree_weights(cascades: &[Cascade], mu1: f64, tau: f64) -> Result<WeightMatrix> {
    compute(
        &TimeStore::from_cascades(cascades)?,
        &WeightRule::Tree { mu1 },
        tau,
    )
}

/// Graph weights `W1 + W2` from the first two moments; both terms are kept
/// as components 0 and 1.
pub fn graph_weights(cascades: &[Cascade], mu1: f64, mu2: f64, tau: f64) -> Result<WeightMatrix> {
    compute(
        &TimeStore::from_cascades(cascades)?,
        &WeightRule::graph(mu1, mu2),
        tau,
    )
}

/// Weights under an arbitrary rule.
pub fn weights_for(cascades: &[Cascade], rule: &WeightRule, tau: f64) -> Result<WeightMatrix> {
    compute(&TimeStore::from_cascades(cascades)?, rule, tau)
}

/// Weights from arbitrary moment orders combined by `combine`. The first
/// order must be 1.
pub fn generalized_weights(
    cascades: &[Cascade],
    moments: &[(u32, f64)],
    combine: Combiner,
    deviation: Deviation,
    tau: f64,
) -> Result<WeightMatrix> {
    match moments.first() {
        None => return Err(Error::InvalidParameter("moment list is empty".into())),
        Some(&(k, _)) if k != 1 => {
            return Err(Error::InvalidParameter(format!(
                "first moment order must be 1, got {k}"
            )))
        }
        _ => {}
    }
    let rule = WeightRule::Moments {
        moments: moments.to_vec(),
        combine,
        deviation,
    };
    compute(&TimeStore::from_cascades(cascades)?, &rule, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{simulate_cascade, DelayFamily, DelaySpec};
    use crate::graph::Graph;

    fn unit_cascades(g: &Graph, sources: &[Vertex]) -> Vec<Cascade> {
        let spec = DelaySpec::homogeneous(DelayFamily::Deterministic { value: 1.0 }).unwrap();
        sources
            .iter()
            .map(|&s| simulate_cascade(g, s, &spec, 0, None).unwrap())
            .collect()
    }

    #[test]
    fn pair_index_is_dense() {
        let n = 7;
        let mut expect = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(pair_index(n, u, v), expect);
                expect += 1;
            }
        }
    }

    #[test]
    fn unit_tree_weights() {
        // 0-1-2-3 with 4 hanging off 1.
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let all: Vec<Vertex> = (0..5).collect();
        let w = tree_weights(&unit_cascades(&g, &all), 1.0, 0.2).unwrap();
        for &(u, v) in g.edges() {
            assert_eq!(w.get(u, v), Some(0.0));
        }
        // Sources 0 and 1 see 2 and 0 two hops apart.
        let w = tree_weights(&unit_cascades(&g, &[3]), 1.0, 0.2).unwrap();
        assert_eq!(w.get(3, 1), Some(1.0));
        assert_eq!(w.get(1, 3), Some(1.0));
    }

    #[test]
    fn unit_graph_weights() {
        let g = Graph::cycle(6).unwrap();
        let all: Vec<Vertex> = (0..6).collect();
        let w = graph_weights(&unit_cascades(&g, &all), 1.0, 1.0, 0.2).unwrap();
        for &(u, v) in g.edges() {
            assert_eq!(w.get(u, v), Some(0.0));
            assert_eq!(w.component(0, u, v), Some(0.0));
            assert_eq!(w.component(1, u, v), Some(0.0));
        }
    }

    #[test]
    fn identical_times_take_zero_branch() {
        let a = Cascade::new(0, vec![Some(0.0), Some(2.0), Some(2.0)]).unwrap();
        let b = Cascade::new(1, vec![Some(1.0), Some(0.0), Some(0.0)]).unwrap();
        let w = graph_weights(&[a, b], 1.0, 2.0, 0.0).unwrap();
        assert_eq!(w.component(0, 1, 2), Some(0.0));
        assert_eq!(w.get(1, 2), Some(0.0));
    }

    #[test]
    fn support_and_exclusion() {
        let a = Cascade::new(0, vec![Some(0.0), Some(1.0), None]).unwrap();
        let b = Cascade::new(1, vec![Some(1.0), Some(0.0), None]).unwrap();
        let w = tree_weights(&[a, b], 1.0, 0.5).unwrap();
        assert_eq!(w.support(0, 1), Some(2));
        assert_eq!(w.support(0, 2), Some(0));
        assert_eq!(w.get(0, 2), Some(f64::INFINITY));
        assert_eq!(w.is_excluded(0, 2), Some(true));
        assert_eq!(w.smallest(1).unwrap(), vec![(0, 1)]);
        assert!(matches!(
            w.smallest(2),
            Err(Error::InsufficientPairs {
                needed: 2,
                available: 1,
                excluded: 2
            })
        ));
    }

    #[test]
    fn generalized_sum_matches_graph_weights() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 3)]).unwrap();
        let spec = DelaySpec::homogeneous(DelayFamily::exponential(1.0)).unwrap();
        let cs: Vec<Cascade> = (0..6)
            .map(|s| simulate_cascade(&g, s, &spec, s as u64, None).unwrap())
            .collect();
        let a = graph_weights(&cs, 1.0, 2.0, 0.2).unwrap();
        let b = generalized_weights(
            &cs,
            &[(1, 1.0), (2, 2.0)],
            Combiner::Sum,
            Deviation::PerSource,
            0.2,
        )
        .unwrap();
        assert_eq!(a, b);
        let single =
            generalized_weights(&cs, &[(1, 1.0)], Combiner::Sum, Deviation::PerSource, 0.2)
                .unwrap();
        for (u, v, x) in single.iter() {
            assert_eq!(Some(x), a.component(0, u, v));
        }
        assert!(generalized_weights(&cs, &[], Combiner::Sum, Deviation::PerSource, 0.2).is_err());
        assert!(
            generalized_weights(&cs, &[(2, 2.0)], Combiner::Sum, Deviation::PerSource, 0.2)
                .is_err()
        );
    }

    #[test]
    fn csv_has_header_and_rows() {
        let g = Graph::path(3);
        let w = graph_weights(&unit_cascades(&g, &[0]), 1.0, 1.0, 0.0).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("u,v,weight,support,excluded,w1,w2\n"));
    }
}
