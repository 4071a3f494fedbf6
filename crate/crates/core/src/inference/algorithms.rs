use crate::diffusion::{merge_by_source, Cascade};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, EdgeSet, Vertex};

use super::degree::estimate_avg_degree;
use super::transfer::transfer_row;
use super::weights::{compute, Combiner, Deviation, TimeStore, WeightMatrix, WeightRule};

/// Which pairs the selection step draws its `m_s` candidates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionScope {
    /// The `m_s` smallest pairs overall; those with both ends among the
    /// sources are transferred.
    #[default]
    AllPairs,
    /// The `m_s` smallest pairs among source-source pairs.
    SourcePairs,
}

/// Average degree used to size the output of graph inference.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DegreeChoice {
    Given(f64),
    /// Estimated from the cascades by the minimum-arrival estimator.
    #[default]
    Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceConfig {
    /// Number of transfer rounds `I`.
    pub iterations: usize,
    /// Pairs selected per round; `None` means `round(1.5 n)`.
    pub ms: Option<usize>,
    pub mu1: f64,
    pub mu2: Option<f64>,
    pub deg_ave: DegreeChoice,
    /// Pairs seen by fewer than `tau * |V_c|` cascades are never selected.
    pub tau: f64,
    /// Trim fraction of the degree estimator.
    pub trim: f64,
    /// Emit a minimum-weight spanning tree instead of the plain `n - 1`
    /// smallest pairs (tree inference only).
    pub spanning_tree: bool,
    pub scope: SelectionScope,
    /// Moment-term form used by graph inference.
    pub deviation: Deviation,
    /// Graph inference switches to the tree weight rule when it is asked for
    /// at most `n - 1` edges.
    pub sparse_fallback: bool,
}

impl InferenceConfig {
    pub fn new(mu1: f64) -> Self {
        InferenceConfig {
            iterations: 2,
            ms: None,
            mu1,
            mu2: None,
            deg_ave: DegreeChoice::Estimate,
            tau: 0.2,
            trim: 0.2,
            spanning_tree: false,
            scope: SelectionScope::AllPairs,
            deviation: Deviation::default(),
            sparse_fallback: true,
        }
    }

    pub fn with_mu2(mut self, mu2: f64) -> Self {
        self.mu2 = Some(mu2);
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_ms(mut self, ms: usize) -> Self {
        self.ms = Some(ms);
        self
    }

    pub fn with_deg_ave(mut self, deg: DegreeChoice) -> Self {
        self.deg_ave = deg;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    fn graph_rule(&self, mu2: f64) -> WeightRule {
        WeightRule::Moments {
            moments: vec![(1, self.mu1), (2, mu2)],
            combine: Combiner::Sum,
            deviation: self.deviation,
        }
    }

    pub fn ms_for(&self, n: usize) -> usize {
        self.ms.unwrap_or((1.5 * n as f64).round() as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu1 > 0.0 && self.mu1.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mu1 must be positive, got {}",
                self.mu1
            )));
        }
        if let Some(mu2) = self.mu2 {
            if !(mu2 > 0.0 && mu2.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "mu2 must be positive, got {mu2}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in [0, 1], got {}",
                self.tau
            )));
        }
        if !(0.0..0.5).contains(&self.trim) {
            return Err(Error::InvalidParameter(format!(
                "trim must lie in [0, 0.5), got {}",
                self.trim
            )));
        }
        if let DegreeChoice::Given(d) = self.deg_ave {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "average degree must be positive, got {d}"
                )));
            }
        }
        Ok(())
    }
}

/// Result of an inference run: the edges plus the final weights.
#[derive(Debug, Clone)]
pub struct InferenceOutput {
    pub edges: EdgeSet,
    pub weights: WeightMatrix,
    /// Average degree used to size the output (graph inference only).
    pub deg_ave: Option<f64>,
    /// Number of pair transfers performed over all rounds.
    pub transfers: usize,
}

fn prepare(cascades: &[Cascade], n: usize) -> Result<Vec<Cascade>> {
    if cascades.is_empty() {
        return Err(Error::NoCascades);
    }
    if let Some(c) = cascades.iter().find(|c| c.n() != n) {
        return Err(Error::InvalidParameter(format!(
            "cascade from {} covers {} vertices, expected {n}",
            c.source(),
            c.n()
        )));
    }
    merge_by_source(cascades.iter().cloned())
}

/// Runs `iterations` rounds of selection and transfer on `store`, then
/// returns the weights of the updated timestamps.
fn transfer_rounds(
    store: &mut TimeStore,
    rule: &WeightRule,
    cfg: &InferenceConfig,
) -> Result<(WeightMatrix, usize)> {
    let n = store.n;
    let m = store.rows.len();
    let mut slot: Vec<Option<usize>> = vec![None; n];
    for (i, &s) in store.sources.iter().enumerate() {
        slot[s] = Some(i);
    }
    let ms = cfg.ms_for(n);
    let mut eta = vec![0u64; m];
    let mut transfers = 0;
    let (mut t_ij, mut t_ji) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..cfg.iterations {
        let w = compute(store, rule, cfg.tau)?;
        let both = |&(u, v): &Edge| slot[u].is_some() && slot[v].is_some();
        let selected: Vec<Edge> = match cfg.scope {
            SelectionScope::AllPairs => w.ranked().into_iter().take(ms).filter(both).collect(),
            SelectionScope::SourcePairs => w.ranked().into_iter().filter(both).take(ms).collect(),
        };
        for (u, v) in selected {
            let (i, j) = (slot[u].expect("source"), slot[v].expect("source"));
            // T_i^j: cascade at v_j reinterpreted at v_i, and vice versa.
            let off_j = store.rows[j][u];
            let off_i = store.rows[i][v];
            let has_ij = !off_j.is_nan();
            let has_ji = !off_i.is_nan();
            if has_ij {
                transfer_row(&store.rows[j], off_j, &store.rows[i], &mut t_ij);
            }
            if has_ji {
                transfer_row(&store.rows[i], off_i, &store.rows[j], &mut t_ji);
            }
            if has_ij {
                eta[i] += 1;
                blend(&mut store.rows[i], &t_ij, eta[i] as f64);
            }
            if has_ji {
                eta[j] += 1;
                blend(&mut store.rows[j], &t_ji, eta[j] as f64);
            }
            if has_ij || has_ji {
                transfers += 1;
            }
        }
    }
    Ok((compute(store, rule, cfg.tau)?, transfers))
}

fn blend(row: &mut [f64], fresh: &[f64], eta: f64) {
    for (t, &f) in row.iter_mut().zip(fresh) {
        if !f.is_nan() && !t.is_nan() {
            *t = (eta * *t + f) / (eta + 1.0);
        }
    }
}

/// Iterative tree inference: returns `n - 1` pairs.
pub fn iti(cascades: &[Cascade], n: usize, cfg: &InferenceConfig) -> Result<EdgeSet> {
    iti_detailed(cascades, n, cfg).map(|o| o.edges)
}

pub fn iti_detailed(
    cascades: &[Cascade],
    n: usize,
    cfg: &InferenceConfig,
) -> Result<InferenceOutput> {
    cfg.validate()?;
    let merged = prepare(cascades, n)?;
    let mut store = TimeStore::from_cascades(&merged)?;
    let (weights, transfers) =
        transfer_rounds(&mut store, &WeightRule::Tree { mu1: cfg.mu1 }, cfg)?;
    let target = n.saturating_sub(1);
    let edges = if cfg.spanning_tree {
        spanning_tree(&weights, target)?
    } else {
        weights.smallest(target)?.into_iter().collect()
    };
    Ok(InferenceOutput {
        edges,
        weights,
        deg_ave: None,
        transfers,
    })
}

/// Minimum-weight spanning tree by Kruskal over the non-excluded pairs.
fn spanning_tree(w: &WeightMatrix, target: usize) -> Result<EdgeSet> {
    let n = w.n();
    let mut parent: Vec<Vertex> = (0..n).collect();
    fn find(p: &mut [Vertex], mut x: Vertex) -> Vertex {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let ranked = w.ranked();
    let available = ranked.len();
    let mut out = EdgeSet::new();
    for (u, v) in ranked {
        if out.len() == target {
            break;
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            out.insert(edge(u, v));
        }
    }
    if out.len() < target {
        return Err(Error::InsufficientPairs {
            needed: target,
            available,
            excluded: w.excluded_count(),
        });
    }
    Ok(out)
}

/// Tree inference with the mean delay estimated along the way.
///
/// Starts from a tenth of the smallest positive timestamp gap, and after each
/// round sets the estimate to the mean gap across the selected edges. Every
/// round restarts from the input cascades. Returns the last round's edges and
/// the estimate trajectory (initial value first).
pub fn general_iti(
    cascades: &[Cascade],
    n: usize,
    cfg: &InferenceConfig,
    rounds: usize,
) -> Result<(EdgeSet, Vec<f64>)> {
    if rounds == 0 {
        return Err(Error::InvalidParameter(
            "general ITI needs at least one round".into(),
        ));
    }
    let merged = prepare(cascades, n)?;
    let store = TimeStore::from_cascades(&merged)?;
    let smallest_gap = smallest_positive_gap(&store)
        .ok_or_else(|| Error::InvalidParameter("cascades have no positive timestamp gap".into()))?;
    let mut mu = 0.1 * smallest_gap;
    let mut trajectory = vec![mu];
    let mut edges = EdgeSet::new();
    for _ in 0..rounds {
        let round_cfg = InferenceConfig {
            mu1: mu,
            ..cfg.clone()
        };
        edges = iti(&merged, n, &round_cfg)?;
        mu = mean_gap(&store, &edges).ok_or_else(|| {
            Error::InvalidParameter("selected edges carry no timestamp gaps".into())
        })?;
        trajectory.push(mu);
    }
    Ok((edges, trajectory))
}

fn smallest_positive_gap(store: &TimeStore) -> Option<f64> {
    let mut best: Option<f64> = None;
    let mut sorted = Vec::new();
    for row in &store.rows {
        sorted.clear();
        sorted.extend(row.iter().copied().filter(|t| !t.is_nan()));
        sorted.sort_unstable_by(f64::total_cmp);
        for pair in sorted.windows(2) {
            let d = pair[1] - pair[0];
            if d > 0.0 && best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
    }
    best
}

fn mean_gap(store: &TimeStore, edges: &EdgeSet) -> Option<f64> {
    let (mut total, mut count) = (0.0, 0usize);
    for &(u, v) in edges {
        for row in &store.rows {
            let d = row[u] - row[v];
            if !d.is_nan() {
                total += d.abs();
                count += 1;
            }
        }
    }
    (count > 0 && total > 0.0).then(|| total / count as f64)
}

/// Graph inference: returns `round(n * deg_ave / 2)` pairs.
pub fn gi(cascades: &[Cascade], n: usize, cfg: &InferenceConfig) -> Result<EdgeSet> {
    gi_detailed(cascades, n, cfg).map(|o| o.edges)
}

pub fn gi_detailed(
    cascades: &[Cascade],
    n: usize,
    cfg: &InferenceConfig,
) -> Result<InferenceOutput> {
    cfg.validate()?;
    let mu2 = cfg.mu2.ok_or_else(|| {
        Error::InvalidParameter("graph inference needs the second moment mu2".into())
    })?;
    let merged = prepare(cascades, n)?;
    let deg = match cfg.deg_ave {
        DegreeChoice::Given(d) => d,
        DegreeChoice::Estimate => estimate_avg_degree(&merged, cfg.mu1, cfg.trim)?,
    };
    let count = edge_count_for(n, deg);
    let rule = if cfg.sparse_fallback && count < n {
        WeightRule::Tree { mu1: cfg.mu1 }
    } else {
        cfg.graph_rule(mu2)
    };
    let mut store = TimeStore::from_cascades(&merged)?;
    let (weights, transfers) = transfer_rounds(&mut store, &rule, cfg)?;
    let edges = weights.smallest(count)?.into_iter().collect();
    Ok(InferenceOutput {
        edges,
        weights,
        deg_ave: Some(deg),
        transfers,
    })
}

/// `round(n * deg / 2)`, the number of pairs graph inference emits.
pub fn edge_count_for(n: usize, deg: f64) -> usize {
    (n as f64 * deg / 2.0).round() as usize
}
