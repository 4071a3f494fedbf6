//! Edge recovery rate, seeded trial batches and parameter sweeps.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use rand::seq::index;
use rayon::prelude::*;

use crate::diffusion::{make_heterogeneous, Cascade, DelayFamily, DelaySpec, Simulator};
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::graph::{reconstruct_from, DistanceTable, EdgeSet, Graph, ReconstructMode, Vertex};
use crate::inference::{general_iti, gi_detailed, iti, InferenceConfig};
use crate::seed;

/// `1 - |A xor B| / (2 |truth|)`, counting both missed and spurious edges.
pub fn edge_recovery_rate(estimated: &EdgeSet, truth: &EdgeSet) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::InvalidParameter("true edge set is empty".into()));
    }
    let wrong = estimated.symmetric_difference(truth).count();
    Ok(1.0 - wrong as f64 / (2.0 * truth.len() as f64))
}

/// Where each trial's network comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Generate(GeneratorSpec),
    Fixed(Graph),
}

impl GraphSource {
    fn realize(&self, seed: u64) -> Result<Graph> {
        match self {
            GraphSource::Generate(spec) => spec.generate(seed),
            GraphSource::Fixed(g) => Ok(g.clone()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            GraphSource::Generate(spec) => spec.n(),
            GraphSource::Fixed(g) => g.n(),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Generate(spec) => write!(f, "{spec}"),
            GraphSource::Fixed(g) => write!(f, "fixed(n={},m={})", g.n(), g.edge_count()),
        }
    }
}

/// Delay laws of each trial.
#[derive(Debug, Clone, PartialEq)]
pub enum DelayChoice {
    Homogeneous(DelayFamily),
    /// Per-edge means drawn uniformly from `[lo, hi]` in every trial.
    Heterogeneous {
        base: DelayFamily,
        lo: f64,
        hi: f64,
    },
}

impl DelayChoice {
    fn realize(&self, g: &Graph, seed: u64) -> Result<DelaySpec> {
        match self {
            DelayChoice::Homogeneous(f) => DelaySpec::homogeneous(f.clone()),
            DelayChoice::Heterogeneous { base, lo, hi } => {
                make_heterogeneous(g, base, *lo, *hi, seed)
            }
        }
    }
}

impl fmt::Display for DelayChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelayChoice::Homogeneous(fam) => write!(f, "{fam}"),
            DelayChoice::Heterogeneous { base, lo, hi } => write!(f, "{base}@[{lo},{hi}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Iti,
    GeneralIti {
        rounds: usize,
    },
    Gi,
    /// Rounds `T / mu1` to hop counts and reconstructs with the `<= 1` rule.
    Reconstruct,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Iti => write!(f, "iti"),
            Algorithm::GeneralIti { .. } => write!(f, "general_iti"),
            Algorithm::Gi => write!(f, "gi"),
            Algorithm::Reconstruct => write!(f, "reconstruct_from"),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iti" => Ok(Algorithm::Iti),
            "general_iti" | "giti" => Ok(Algorithm::GeneralIti { rounds: 3 }),
            "gi" => Ok(Algorithm::Gi),
            "reconstruct_from" | "reconstruct" => Ok(Algorithm::Reconstruct),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

/// One batch of seeded trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub graph: GraphSource,
    pub delay: DelayChoice,
    /// Fraction of vertices used as cascade sources.
    pub vc_frac: f64,
    /// Cascades per source (averaged before inference).
    pub kappa: usize,
    pub algorithm: Algorithm,
    /// Inference settings. Unless `mu1`/`mu2` are overridden below, the
    /// moments are replaced by each trial's declared delay moments.
    pub inference: InferenceConfig,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub horizon: Option<f64>,
    pub trials: usize,
    pub seed: u64,
}

impl Experiment {
    pub fn new(graph: GraphSource, delay: DelayChoice, algorithm: Algorithm, seed: u64) -> Self {
        Experiment {
            graph,
            delay,
            vc_frac: 0.5,
            kappa: 1,
            algorithm,
            inference: InferenceConfig::new(1.0),
            mu1: None,
            mu2: None,
            horizon: None,
            trials: 1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.vc_frac > 0.0 && self.vc_frac <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "source fraction must lie in (0, 1], got {}",
                self.vc_frac
            )));
        }
        if self.kappa == 0 {
            return Err(Error::InvalidParameter("kappa must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if let GraphSource::Generate(spec) = &self.graph {
            spec.validate()?;
        }
        Ok(())
    }

    /// Number of sources for an `n`-vertex graph: `round(vc_frac * n)`, at least 1.
    pub fn source_count(&self, n: usize) -> usize {
        ((self.vc_frac * n as f64).round() as usize).clamp(1, n)
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        seed::derive(self.seed, trial as u64)
    }

    /// Everything a trial's inference step sees, before inference runs.
    pub fn realize(&self, trial: usize) -> Result<TrialData> {
        let ts = self.trial_seed(trial);
        let graph = self.graph.realize(seed::derive(ts, 0))?;
        let spec = self.delay.realize(&graph, seed::derive(ts, 1))?;
        let sources = pick_sources(graph.n(), self.source_count(graph.n()), seed::derive(ts, 2));
        let cascades = simulate_batch(
            &graph,
            &spec,
            &sources,
            self.kappa,
            seed::derive(ts, 3),
            self.horizon,
        )?;
        Ok(TrialData {
            graph,
            spec,
            sources,
            cascades,
        })
    }

    /// Runs trial `trial` and scores it.
    pub fn run_trial(&self, trial: usize) -> TrialReport {
        let start = Instant::now();
        let outcome = self.realize(trial).and_then(|data| {
            let cfg = self.config_for(&data.spec);
            let (edges, deg) = infer(&data.cascades, data.graph.n(), self.algorithm, &cfg)?;
            Ok((edge_recovery_rate(&edges, &data.graph.edge_set())?, deg))
        });
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let (recovery, deg_ave, error) = match outcome {
            Ok((r, d)) => (Some(r), d, None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        TrialReport {
            trial,
            seed: self.trial_seed(trial),
            graph: self.graph.to_string(),
            delay: self.delay.to_string(),
            vc_frac: self.vc_frac,
            kappa: self.kappa,
            algorithm: self.algorithm.to_string(),
            recovery,
            deg_ave,
            error,
            wall_ms,
        }
    }

    /// Inference settings with the moments resolved for `spec`.
    pub fn config_for(&self, spec: &DelaySpec) -> InferenceConfig {
        let mut cfg = self.inference.clone();
        cfg.mu1 = self.mu1.unwrap_or(spec.mu1());
        cfg.mu2 = Some(self.mu2.unwrap_or(spec.mu2()));
        cfg
    }
}

/// The realized inputs of one trial.
#[derive(Debug, Clone)]
pub struct TrialData {
    pub graph: Graph,
    pub spec: DelaySpec,
    pub sources: Vec<Vertex>,
    pub cascades: Vec<Cascade>,
}

/// `k` distinct vertices of `0..n`, uniformly at random, sorted.
pub fn pick_sources(n: usize, k: usize, seed: u64) -> Vec<Vertex> {
    let mut rng = seed::rng(seed);
    let mut out = index::sample(&mut rng, n, k.min(n)).into_vec();
    out.sort_unstable();
    out
}

/// `kappa` cascades from each source, drawn from one seeded stream in
/// source order.
pub fn simulate_batch(
    g: &Graph,
    spec: &DelaySpec,
    sources: &[Vertex],
    kappa: usize,
    seed: u64,
    horizon: Option<f64>,
) -> Result<Vec<Cascade>> {
    let sim = Simulator::new(g, spec)?;
    let mut rng = seed::rng(seed);
    let mut out = Vec::with_capacity(sources.len() * kappa);
    for &s in sources {
        for _ in 0..kappa {
            out.push(sim.run(s, &mut rng, horizon)?);
        }
    }
    Ok(out)
}

/// Dispatches to an inference algorithm; returns the edges and, for graph
/// inference, the average degree used.
pub fn infer(
    cascades: &[Cascade],
    n: usize,
    algorithm: Algorithm,
    cfg: &InferenceConfig,
) -> Result<(EdgeSet, Option<f64>)> {
    match algorithm {
        Algorithm::Iti => Ok((iti(cascades, n, cfg)?, None)),
        Algorithm::GeneralIti { rounds } => Ok((general_iti(cascades, n, cfg, rounds)?.0, None)),
        Algorithm::Gi => {
            let out = gi_detailed(cascades, n, cfg)?;
            Ok((out.edges, out.deg_ave))
        }
        Algorithm::Reconstruct => Ok((reconstruct_from_cascades(cascades, n, cfg.mu1)?, None)),
    }
}

/// Rounds each averaged cascade to hop counts (`T / mu1`) and applies the
/// `<= 1` reconstruction rule. Vertices untimed in a cascade are treated
/// as unreachable and rounded to `u32::MAX`.
pub fn reconstruct_from_cascades(cascades: &[Cascade], n: usize, mu1: f64) -> Result<EdgeSet> {
    let merged = crate::diffusion::merge_by_source(cascades.iter().cloned())?;
    let sources: Vec<Vertex> = merged.iter().map(Cascade::source).collect();
    let rows = merged
        .iter()
        .map(|c| {
            c.times()
                .iter()
                .map(|t| t.map_or(u32::MAX, |t| (t / mu1).round().max(0.0) as u32))
                .collect()
        })
        .collect();
    let dt = DistanceTable::from_rows(n, sources.clone(), rows)?;
    reconstruct_from(&dt, &sources, n, ReconstructMode::ThresholdLe1)
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub graph: String,
    pub delay: String,
    pub vc_frac: f64,
    pub kappa: usize,
    pub algorithm: String,
    /// `None` when the trial failed.
    pub recovery: Option<f64>,
    pub deg_ave: Option<f64>,
    pub error: Option<String>,
    pub wall_ms: f64,
}

/// Summary over the successful trials of a batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean_r: f64,
    pub sd_r: f64,
    pub n_trials: usize,
    pub failed: usize,
    pub mean_wall_ms: f64,
}

impl Aggregate {
    pub fn from_reports(reports: &[TrialReport]) -> Self {
        let rs: Vec<f64> = reports.iter().filter_map(|r| r.recovery).collect();
        let (mean_r, sd_r) = mean_sd(&rs);
        let wall: Vec<f64> = reports.iter().map(|r| r.wall_ms).collect();
        Aggregate {
            mean_r,
            sd_r,
            n_trials: rs.len(),
            failed: reports.len() - rs.len(),
            mean_wall_ms: mean_sd(&wall).0,
        }
    }
}

/// Sample mean and (n - 1) standard deviation; NaN for empty input.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs every trial of `exp`, at most `jobs` at a time (`None`: rayon's
/// default). Reports come back in trial order.
pub fn run_trials(exp: &Experiment, jobs: Option<usize>) -> Result<(Vec<TrialReport>, Aggregate)> {
    exp.validate()?;
    let run = || -> Vec<TrialReport> {
        (0..exp.trials)
            .into_par_iter()
            .map(|t| exp.run_trial(t))
            .collect()
    };
    let reports = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run),
        None => run(),
    };
    for r in &reports {
        if let Some(e) = &r.error {
            log::warn!("trial {} (seed {}) failed: {e}", r.trial, r.seed);
        }
    }
    let agg = Aggregate::from_reports(&reports);
    Ok((reports, agg))
}

/// One axis of a sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    VcFrac(Vec<f64>),
    Kappa(Vec<usize>),
    Iterations(Vec<usize>),
    Ms(Vec<usize>),
    Algorithm(Vec<Algorithm>),
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::VcFrac(_) => "vc_frac",
            SweepAxis::Kappa(_) => "kappa",
            SweepAxis::Iterations(_) => "iterations",
            SweepAxis::Ms(_) => "ms",
            SweepAxis::Algorithm(_) => "algo",
        }
    }

    fn len(&self) -> usize {
        match self {
            SweepAxis::VcFrac(v) => v.len(),
            SweepAxis::Kappa(v) => v.len(),
            SweepAxis::Iterations(v) => v.len(),
            SweepAxis::Ms(v) => v.len(),
            SweepAxis::Algorithm(v) => v.len(),
        }
    }

    fn apply(&self, i: usize, exp: &mut Experiment) -> String {
        match self {
            SweepAxis::VcFrac(v) => {
                exp.vc_frac = v[i];
                v[i].to_string()
            }
            SweepAxis::Kappa(v) => {
                exp.kappa = v[i];
                v[i].to_string()
            }
            SweepAxis::Iterations(v) => {
                exp.inference.iterations = v[i];
                v[i].to_string()
            }
            SweepAxis::Ms(v) => {
                exp.inference.ms = Some(v[i]);
                v[i].to_string()
            }
            SweepAxis::Algorithm(v) => {
                exp.algorithm = v[i];
                v[i].to_string()
            }
        }
    }
}

/// Aggregate of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: Vec<String>,
    pub aggregate: Aggregate,
}

/// Runs `base` at every point of the Cartesian product of `axes` (first
/// axis varies slowest). Every grid point reuses the base seed, so points
/// differ only in the swept parameters.
pub fn sweep(base: &Experiment, axes: &[SweepAxis], jobs: Option<usize>) -> Result<Vec<SweepRow>> {
    if axes.is_empty() || axes.iter().any(|a| a.len() == 0) {
        return Err(Error::InvalidParameter("sweep grid is empty".into()));
    }
    let total: usize = axes.iter().map(SweepAxis::len).product();
    let mut rows = Vec::with_capacity(total);
    for point in 0..total {
        let mut exp = base.clone();
        let mut rem = point;
        let mut params = vec![String::new(); axes.len()];
        for (a, axis) in axes.iter().enumerate().rev() {
            let i = rem % axis.len();
            rem /= axis.len();
            params[a] = axis.apply(i, &mut exp);
        }
        let (_, aggregate) = run_trials(&exp, jobs)?;
        rows.push(SweepRow { params, aggregate });
    }
    Ok(rows)
}

/// Writes the sweep as CSV: one column per axis, then
/// `mean_R,sd_R,n_trials,mean_wall_ms`.
pub fn write_sweep_csv<W: Write>(
    axes: &[SweepAxis],
    rows: &[SweepRow],
    mut out: W,
) -> std::io::Result<()> {
    for a in axes {
        write!(out, "{},", a.name())?;
    }
    writeln!(out, "mean_R,sd_R,n_trials,mean_wall_ms")?;
    for row in rows {
        for p in &row.params {
            write!(out, "{p},")?;
        }
        let a = &row.aggregate;
        writeln!(
            out,
            "{:.6},{:.6},{},{:.3}",
            a.mean_r, a.sd_r, a.n_trials, a.mean_wall_ms
        )?;
    }
    Ok(())
}

/// Writes per-trial reports as CSV.
pub fn write_trials_csv<W: Write>(reports: &[TrialReport], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "trial,seed,graph,delay,vc_frac,kappa,algo,R,deg_ave,wall_ms,error"
    )?;
    for r in reports {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},\"{}\",\"{}\",{},{},{},{},{},{:.3},\"{}\"",
            r.trial,
            r.seed,
            r.graph,
            r.delay,
            r.vc_frac,
            r.kappa,
            r.algorithm,
            opt(r.recovery),
            opt(r.deg_ave),
            r.wall_ms,
            r.error.as_deref().unwrap_or("").replace('"', "'")
        )?;
    }
    Ok(())
}

pub mod studies;
