use crate::diffusion::{DelayFamily, DelaySpec, Simulator};
use crate::error::{Error, Result};
use crate::evaluation::mean_sd;
use crate::graph::{Graph, Vertex};
use crate::seed;

/// Survival function of the detour time `Y` used by the moment-gap bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetourSurvival {
    /// Empirical survival of the simulated `Y` samples.
    Empirical,
    /// Closed-form survival of a gamma law (`shape`, `scale`), e.g. a
    /// two-edge detour with exponential delays.
    Gamma { shape: f64, scale: f64 },
}

/// Monte Carlo moment gap between the propagation time with and without
/// one edge, against its analytic lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentGapReport {
    pub k: u32,
    /// `E[X^k]` with the edge present.
    pub moment_with_edge: f64,
    /// `E[Y^k]` with the edge removed.
    pub moment_without_edge: f64,
    pub gap: f64,
    pub bound: f64,
    pub samples: usize,
    pub std_error: f64,
    /// `gap >= bound - 3 * std_error`.
    pub pass: bool,
}

/// Estimates `E[Y^k] - E[X^k]` for the edge `(u, v)`: `X` is the `u -> v`
/// propagation time in `g`, `Y` the same time with the edge removed. Both
/// come from the same delay draws, so each sample of the difference is
/// non-negative. The bound is `eps1 * F((eps0 - eps1)^(1/k)) *
/// Hbar(eps0^(1/k))` with `F` the edge-delay cdf.
#[allow(clippy::too_many_arguments)]
pub fn moment_gap(
    g: &Graph,
    u: Vertex,
    v: Vertex,
    delay: &DelaySpec,
    k: u32,
    eps0: f64,
    eps1: f64,
    samples: usize,
    seed: u64,
    survival: DetourSurvival,
) -> Result<MomentGapReport> {
    if !(eps0 > eps1 && eps1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need eps0 > eps1 > 0, got {eps0}, {eps1}"
        )));
    }
    if k == 0 || samples < 2 {
        return Err(Error::InvalidParameter(
            "need k >= 1 and at least 2 samples".into(),
        ));
    }
    if !g.without_edge(u, v)?.is_connected() {
        return Err(Error::BridgeEdge(u, v));
    }
    let family = delay.family().ok_or_else(|| {
        Error::InvalidParameter("moment gap bound needs a homogeneous delay law".into())
    })?;
    let sim = Simulator::new(g, delay)?;
    let e = sim.edge_index(u, v).ok_or(Error::NotAnEdge(u, v))?;
    let mut rng = seed::rng(seed);
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    let mut diffs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let delays = sim.sample_delays(&mut rng);
        let y = sim.arrival_times(u, &delays, Some(e))[v];
        let x = y.min(delays[e]);
        let (xk, yk) = (x.powi(k as i32), y.powi(k as i32));
        xs.push(xk);
        ys.push(yk);
        diffs.push(yk - xk);
    }
    let (gap, sd) = mean_sd(&diffs);
    let std_error = sd / (samples as f64).sqrt();
    let inv_k = 1.0 / k as f64;
    let f = family.cdf((eps0 - eps1).powf(inv_k));
    let t = eps0.powf(inv_k);
    let hbar = match survival {
        DetourSurvival::Empirical => {
            let ys_raw: Vec<f64> = ys.iter().map(|y| y.powf(inv_k)).collect();
            ys_raw.iter().filter(|&&y| y > t).count() as f64 / samples as f64
        }
        DetourSurvival::Gamma { shape, scale } => gamma_survival(shape, scale, t),
    };
    let bound = eps1 * f * hbar;
    Ok(MomentGapReport {
        k,
        moment_with_edge: mean_sd(&xs).0,
        moment_without_edge: mean_sd(&ys).0,
        gap,
        bound,
        samples,
        std_error,
        pass: gap >= bound - 3.0 * std_error,
    })
}

pub(crate) fn gamma_survival(shape: f64, scale: f64, x: f64) -> f64 {
    use statrs::distribution::ContinuousCDF;
    statrs::distribution::Gamma::new(shape, 1.0 / scale)
        .expect("positive gamma parameters")
        .sf(x)
}

/// Both sides of `|E X_wu - E X_wv|^k <= E[X_uv^k]`, estimated from shared
/// delay draws.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMomentReport {
    pub lhs: f64,
    pub rhs: f64,
    pub std_error: f64,
    /// `lhs <= rhs + 3 * std_error`.
    pub holds: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn path_moment_inequality(
    g: &Graph,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    delay: &DelaySpec,
    k: u32,
    samples: usize,
    seed: u64,
) -> Result<PathMomentReport> {
    if k == 0 || samples < 2 {
        return Err(Error::InvalidParameter(
            "need k >= 1 and at least 2 samples".into(),
        ));
    }
    if u == v {
        return Err(Error::InvalidParameter("u and v must differ".into()));
    }
    for x in [u, v, w] {
        g.check_vertex(x)?;
    }
    let sim = Simulator::new(g, delay)?;
    let mut rng = seed::rng(seed);
    let mut diff = Vec::with_capacity(samples);
    let mut xk = Vec::with_capacity(samples);
    for _ in 0..samples {
        let delays = sim.sample_delays(&mut rng);
        let from_w = sim.arrival_times(w, &delays, None);
        let from_u = sim.arrival_times(u, &delays, None);
        diff.push(from_w[u] - from_w[v]);
        xk.push(from_u[v].powi(k as i32));
    }
    let root_n = (samples as f64).sqrt();
    let (m, sd_m) = mean_sd(&diff);
    let (rhs, sd_r) = mean_sd(&xk);
    let lhs = m.abs().powi(k as i32);
    // Delta method for |m|^k.
    let se_l = k as f64 * m.abs().powi(k as i32 - 1) * sd_m / root_n;
    let std_error = (se_l * se_l + (sd_r / root_n).powi(2)).sqrt();
    Ok(PathMomentReport {
        lhs,
        rhs,
        std_error,
        holds: lhs <= rhs + 3.0 * std_error,
    })
}

/// Log-spaced grid of `points` values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// The default grid for [`tv_upper_bound`]: 400 points from 1e-4 to 10.
pub fn default_eps_grid() -> Vec<f64> {
    log_grid(1e-4, 10.0, 400)
}

/// `(e^-eps * sum_{i<l} eps^i / i!)^k + 1 - e^-eps`, the total-variation
/// bound for `k` disjoint length-`l` detours with unit exponential delays.
pub fn tv_bound_at(l: u32, k: u32, eps: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for i in 0..l {
        if i > 0 {
            term *= eps / i as f64;
        }
        sum += term;
    }
    ((-eps).exp() * sum).powi(k as i32) + 1.0 - (-eps).exp()
}

/// Minimum of [`tv_bound_at`] over `eps_grid`.
pub fn tv_upper_bound(l: u32, k: u32, eps_grid: &[f64]) -> Result<f64> {
    if l == 0 || k == 0 {
        return Err(Error::InvalidParameter(
            "path length and path count must be at least 1".into(),
        ));
    }
    if eps_grid.is_empty() {
        return Err(Error::InvalidParameter("epsilon grid is empty".into()));
    }
    if let Some(e) = eps_grid.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "epsilon grid values must be positive, got {e}"
        )));
    }
    Ok(eps_grid
        .iter()
        .map(|&e| tv_bound_at(l, k, e))
        .fold(f64::INFINITY, f64::min))
}

/// Two-sample Kolmogorov-Smirnov comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct KsReport {
    pub statistic: f64,
    pub critical: f64,
    pub alpha: f64,
    pub reject: bool,
}

/// Two-sample KS statistic `sup |F_a - F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `c(alpha)` of the asymptotic two-sample KS test.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt()
}

/// Compares the `u -> v` propagation time on an edge plus a disjoint
/// length-`l` detour against a lone edge, by a two-sample KS test at level
/// `alpha`. `l = 0` compares two independent lone-edge samples.
pub fn edge_vs_path_distribution_distinct(
    l: usize,
    delay: &DelayFamily,
    samples: usize,
    alpha: f64,
    seed: u64,
) -> Result<KsReport> {
    if l == 1 {
        return Err(Error::InvalidParameter(
            "a detour needs at least 2 edges".into(),
        ));
    }
    if samples == 0 || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(
            "need samples > 0 and alpha in (0, 1)".into(),
        ));
    }
    delay.validate()?;
    let mut rng = seed::rng(seed);
    let mut with_detour = Vec::with_capacity(samples);
    let mut lone = Vec::with_capacity(samples);
    for _ in 0..samples {
        let direct = delay.sample(&mut rng);
        let detour: f64 = (0..l).map(|_| delay.sample(&mut rng)).sum();
        with_detour.push(if l == 0 { direct } else { direct.min(detour) });
        lone.push(delay.sample(&mut rng));
    }
    let statistic = ks_statistic(&with_detour, &lone);
    let n = samples as f64;
    let critical = ks_coefficient(alpha) * (2.0 / n).sqrt();
    Ok(KsReport {
        statistic,
        critical,
        alpha,
        reject: statistic > critical,
    })
}

/// Histogram estimate of the total variation between `Y` and `min(X, Y)`
/// next to the bound `inf_eps Hbar(eps) + P(eps)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinTvReport {
    pub tv_estimate: f64,
    pub bound: f64,
    /// Allowance for histogram estimation error.
    pub slack: f64,
    pub holds: bool,
}

pub fn min_tv_check(
    x: &DelayFamily,
    y: &DelayFamily,
    samples: usize,
    bins: usize,
    seed: u64,
) -> Result<MinTvReport> {
    if samples == 0 || bins == 0 {
        return Err(Error::InvalidParameter("need samples and bins".into()));
    }
    let mut rng = seed::rng(seed);
    let mut ys = Vec::with_capacity(samples);
    let mut zs = Vec::with_capacity(samples);
    for _ in 0..samples {
        ys.push(y.sample(&mut rng));
        let (a, b) = (x.sample(&mut rng), y.sample(&mut rng));
        zs.push(a.min(b));
    }
    let hi = ys.iter().chain(&zs).copied().fold(0.0, f64::max) * (1.0 + 1e-12);
    let mut hy = vec![0usize; bins];
    let mut hz = vec![0usize; bins];
    let bin = |t: f64| (((t / hi) * bins as f64) as usize).min(bins - 1);
    for &t in &ys {
        hy[bin(t)] += 1;
    }
    for &t in &zs {
        hz[bin(t)] += 1;
    }
    let n = samples as f64;
    let tv_estimate = 0.5
        * hy.iter()
            .zip(&hz)
            .map(|(a, b)| (*a as f64 - *b as f64).abs() / n)
            .sum::<f64>();
    let bound = default_eps_grid()
        .into_iter()
        .map(|e| (1.0 - y.cdf(e)) + x.cdf(e))
        .fold(f64::INFINITY, f64::min);
    // Expected |noise| of a binned TV estimate is about sqrt(bins / n).
    let slack = (bins as f64 / n).sqrt();
    Ok(MinTvReport {
        tv_estimate,
        bound,
        slack,
        holds: tv_estimate <= bound + slack,
    })
}
