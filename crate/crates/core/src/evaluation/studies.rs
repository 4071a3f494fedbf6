//! Tree-level studies that do not involve diffusion: hull coverage,
//! uniqueness rates and redundant-core sizes over random trees, plus the
//! degree-estimator ratio on forest-fire graphs.

use rand::Rng as _;
use rayon::prelude::*;

use crate::diffusion::{DelayFamily, DelaySpec};
use crate::error::Result;
use crate::generators::{gen_er_tree, GeneratorSpec};
use crate::graph::{accuracy_lower_bound, redundant_core, Vertex};
use crate::inference::estimate_avg_degree;
use crate::seed;
use crate::theory::{min_unique_source_count, separating_size_bound, LeafReading};

use super::{mean_sd, pick_sources, simulate_batch};

/// Mean `|conv(V')| / |V|` at each source fraction, over `trees` random
/// trees of `n` vertices. Tree `i` is shared by every fraction.
pub fn hull_fraction_curve(n: usize, trees: usize, fracs: &[f64], seed: u64) -> Result<Vec<f64>> {
    let per_tree = (0..trees)
        .into_par_iter()
        .map(|i| {
            let s = seed::derive(seed, i as u64);
            let t = gen_er_tree(n, seed::derive(s, 0))?;
            fracs
                .iter()
                .enumerate()
                .map(|(j, &f)| {
                    let k = ((f * n as f64).round() as usize).clamp(1, n);
                    accuracy_lower_bound(&t, &pick_sources(n, k, seed::derive(s, 1 + j as u64)))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..fracs.len())
        .map(|j| per_tree.iter().map(|r| r[j]).sum::<f64>() / trees as f64)
        .collect())
}

/// Per-tree separating-set size bounds, divided by `n`.
pub fn separating_bound_fractions(
    n: usize,
    trees: usize,
    reading: LeafReading,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..trees)
        .into_par_iter()
        .map(|i| {
            let t = gen_er_tree(n, seed::derive(seed::derive(seed, i as u64), 0))?;
            Ok(separating_size_bound(&t, reading)? as f64 / n as f64)
        })
        .collect()
}

/// Smallest uniquely determining source-set size of each of `trees`
/// random trees, divided by `n`.
pub fn min_unique_fractions(n: usize, trees: usize, seed: u64) -> Result<Vec<f64>> {
    (0..trees)
        .into_par_iter()
        .map(|i| {
            let t = gen_er_tree(n, seed::derive(seed::derive(seed, i as u64), 0))?;
            Ok(min_unique_source_count(&t)? as f64 / n as f64)
        })
        .collect()
}

/// Fraction of random trees that some source set of `round(frac * n)`
/// vertices determines uniquely.
pub fn uniqueness_rate(n: usize, trees: usize, frac: f64, seed: u64) -> Result<f64> {
    let k = (frac * n as f64).round();
    let fr = min_unique_fractions(n, trees, seed)?;
    Ok(fr.iter().filter(|&&b| (b * n as f64).round() <= k).count() as f64 / trees as f64)
}

/// `|V''| / |V|` for the redundant core of a source set of
/// `round(frac * n)` random vertices on each of `trees` random trees.
pub fn redundant_core_fractions(n: usize, trees: usize, frac: f64, seed: u64) -> Result<Vec<f64>> {
    (0..trees)
        .into_par_iter()
        .map(|i| {
            let s = seed::derive(seed, i as u64);
            let t = gen_er_tree(n, seed::derive(s, 0))?;
            let k = ((frac * n as f64).round() as usize).clamp(1, n);
            let vs: Vec<Vertex> = pick_sources(n, k, seed::derive(s, 1));
            Ok(redundant_core(&t, &vs)?.len() as f64 / n as f64)
        })
        .collect()
}

/// Ratio of the estimated to the true average degree, one per trial. Each
/// trial draws a forest-fire graph, a source fraction uniform in
/// `[0.1, 1]`, and one cascade per source with the given delays.
pub fn degree_ratio_trials(
    graph: &GeneratorSpec,
    delay: &DelayFamily,
    trials: usize,
    trim: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let spec = DelaySpec::homogeneous(delay.clone())?;
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let ts = seed::derive(seed, i as u64);
            let g = graph.generate(seed::derive(ts, 0))?;
            let n = g.n();
            let frac: f64 = seed::rng(seed::derive(ts, 4)).random_range(0.1..=1.0);
            let k = ((frac * n as f64).round() as usize).clamp(1, n);
            let sources = pick_sources(n, k, seed::derive(ts, 2));
            let cascades = simulate_batch(&g, &spec, &sources, 1, seed::derive(ts, 3), None)?;
            Ok(estimate_avg_degree(&cascades, spec.mu1(), trim)? / g.average_degree())
        })
        .collect()
}

/// Mean and standard deviation of a sample, for study summaries.
pub fn summarize(xs: &[f64]) -> (f64, f64) {
    mean_sd(xs)
}
