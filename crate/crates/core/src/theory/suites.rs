//! Property suites that turn the supporting claims into pass/fail report rows.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng as _;
use rayon::prelude::*;

use crate::diffusion::{simulate_cascade, DelayFamily, DelaySpec};
use crate::error::{Error, Result};
use crate::evaluation::pick_sources;
use crate::generators::{gen_er_graph_with_retries, gen_er_tree};
use crate::graph::oracle::all_trees;
use crate::graph::{
    classify_vertices, convex_hull, is_redundant, is_redundant_by_criterion, is_separating,
    mutually_replaceable, reconstruct_from, redundant_core, subtree, DistanceTable, Graph,
    ReconstructMode, Vertex,
};
use crate::inference::{generalized_weights, graph_weights, Combiner, Deviation};
use crate::seed;

use super::bounds::{
    has_unique_reconstruction, is_uniquely_determined, labeled_tree_distances,
    min_unique_source_count, separating_size_bound, LeafReading,
};
use super::moments::{
    default_eps_grid, edge_vs_path_distribution_distinct, min_tv_check, moment_gap,
    path_moment_inequality, tv_bound_at, tv_upper_bound, DetourSurvival,
};

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryRow {
    pub operation: String,
    pub parameters: String,
    pub statistic: f64,
    pub bound: f64,
    pub pass: bool,
}

impl TheoryRow {
    fn new(
        operation: &str,
        parameters: impl Into<String>,
        statistic: f64,
        bound: f64,
        pass: bool,
    ) -> Self {
        TheoryRow {
            operation: operation.to_string(),
            parameters: parameters.into(),
            statistic,
            bound,
            pass,
        }
    }

    /// A count of counterexamples that must be zero.
    fn violations(operation: &str, parameters: impl Into<String>, count: usize) -> Self {
        TheoryRow::new(operation, parameters, count as f64, 0.0, count == 0)
    }
}

/// Writes `operation,parameters,statistic,bound,pass` rows.
pub fn write_report<W: Write>(rows: &[TheoryRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "operation,parameters,statistic,bound,pass")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.operation,
            r.parameters,
            r.statistic,
            r.bound,
            if r.pass { "pass" } else { "fail" }
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Reconstruction from distance profiles on trees.
    Reconstruction,
    /// Redundant sources and their sufficient conditions.
    Redundancy,
    /// Moment separation of edges from non-edges.
    Moments,
    /// Total-variation impossibility bound and the edge-vs-path test.
    TvBound,
    /// Lower bound on the size of a uniquely determining source set.
    SeparatingBound,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Reconstruction,
        Suite::Redundancy,
        Suite::Moments,
        Suite::TvBound,
        Suite::SeparatingBound,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Reconstruction => "thm-3.7",
            Suite::Redundancy => "redundancy",
            Suite::Moments => "moments",
            Suite::TvBound => "tv-bound",
            Suite::SeparatingBound => "appendix-b",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm-3.7" | "reconstruction" => Ok(Suite::Reconstruction),
            "redundancy" => Ok(Suite::Redundancy),
            "moments" => Ok(Suite::Moments),
            "tv-bound" => Ok(Suite::TvBound),
            "appendix-b" | "separating-bound" => Ok(Suite::SeparatingBound),
            _ => Err(Error::InvalidParameter(format!("unknown suite {s:?}"))),
        }
    }
}

/// Sizes and seeds for the suites.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    /// Largest tree enumerated exhaustively.
    pub max_n: usize,
    /// Largest tree for the brute-force uniqueness check (labeled trees grow as `n^(n-2)`).
    pub max_n_unique: usize,
    pub random_trees: usize,
    pub gap_instances: usize,
    pub gap_samples: usize,
    pub path_instances: usize,
    pub path_samples: usize,
    /// Detour length for the total-variation bound.
    pub l: u32,
    /// Detour count for the total-variation bound.
    pub k: u32,
    pub ks_samples: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_n: 8,
            max_n_unique: 7,
            random_trees: 1000,
            gap_instances: 200,
            gap_samples: 4000,
            path_instances: 500,
            path_samples: 400,
            l: 2,
            k: 100,
            ks_samples: 100_000,
            seed: 0,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<TheoryRow>> {
    match suite {
        Suite::Reconstruction => reconstruction_suite(opts),
        Suite::Redundancy => redundancy_suite(opts),
        Suite::Moments => moments_suite(opts),
        Suite::TvBound => tv_suite(opts),
        Suite::SeparatingBound => separating_suite(opts),
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<Vertex>> {
    (1u32..1 << n).map(move |mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
}

/// A random tree with 9 to 40 vertices and a random non-empty source set.
fn random_case(seed: u64) -> Result<(Graph, Vec<Vertex>)> {
    let mut rng = seed::rng(seed);
    let n = rng.random_range(9..=40);
    let t = gen_er_tree(n, seed::derive(seed, 1))?;
    let k = rng.random_range(1..=n);
    Ok((t, pick_sources(n, k, seed::derive(seed, 2))))
}

#[derive(Default, Clone, Copy)]
struct ReconstructionTally {
    cases: usize,
    contained: usize,
    hull: usize,
    exact_applicable: usize,
    exact: usize,
    converse: usize,
    eq1_contained: usize,
}

impl ReconstructionTally {
    fn add(&mut self, o: &ReconstructionTally) {
        self.cases += o.cases;
        self.contained += o.contained;
        self.hull += o.hull;
        self.exact_applicable += o.exact_applicable;
        self.exact += o.exact;
        self.converse += o.converse;
        self.eq1_contained += o.eq1_contained;
    }
}

/// Checks every reconstruction claim on one tree and source set, counting
/// violations.
fn check_reconstruction(t: &Graph, vs: &[Vertex]) -> Result<ReconstructionTally> {
    let n = t.n();
    let mut tally = ReconstructionTally {
        cases: 1,
        ..Default::default()
    };
    let dt = DistanceTable::from_graph(t, vs)?;
    let truth = t.edge_set();
    let rec = reconstruct_from(&dt, vs, n, ReconstructMode::ThresholdLe1)?;
    tally.contained += usize::from(!truth.is_subset(&rec));
    let eq1 = reconstruct_from(&dt, vs, n, ReconstructMode::ExactEq1)?;
    tally.eq1_contained += usize::from(!truth.is_subset(&eq1));

    let hull = convex_hull(t, vs)?;
    let members: Vec<Vertex> = hull.iter().copied().collect();
    let mut sigs: Vec<Vec<u32>> = members
        .iter()
        .map(|&u| {
            vs.iter()
                .map(|&s| dt.get(s, u).expect("row present"))
                .collect()
        })
        .collect();
    sigs.sort_unstable();
    tally.hull += usize::from(sigs.windows(2).any(|w| w[0] == w[1]));

    let separating = is_separating(t, vs)?;
    if rec == truth && !separating {
        tally.converse += 1;
    }

    // Sufficient condition for exact recovery.
    let c = classify_vertices(t)?;
    let mut special: Vec<Vertex> = c
        .boundary_branched
        .iter()
        .copied()
        .filter(|v| hull.contains(v) && t.neighbors(*v).iter().any(|w| !hull.contains(w)))
        .collect();
    special.extend(
        members
            .iter()
            .copied()
            .filter(|&v| t.neighbors(v).iter().filter(|w| hull.contains(w)).count() <= 1),
    );
    special.sort_unstable();
    special.dedup();
    let spread = special
        .iter()
        .enumerate()
        .all(|(i, &a)| special[i + 1..].iter().all(|&b| !t.has_edge(a, b)));
    if separating && spread {
        tally.exact_applicable += 1;
        tally.exact += usize::from(rec != truth);
    }
    Ok(tally)
}

fn reconstruction_rows(label: &str, tally: &ReconstructionTally) -> Vec<TheoryRow> {
    let p = |extra: &str| format!("{label}; cases={}{extra}", tally.cases);
    vec![
        TheoryRow::violations("edges_contained", p(""), tally.contained),
        TheoryRow::violations("edges_contained_exact_mode", p(""), tally.eq1_contained),
        TheoryRow::violations("hull_separated", p(""), tally.hull),
        TheoryRow::violations(
            "exact_recovery_sufficient",
            p(&format!("; applicable={}", tally.exact_applicable)),
            tally.exact,
        ),
        TheoryRow::violations("exact_recovery_implies_separating", p(""), tally.converse),
    ]
}

fn reconstruction_suite(opts: &SuiteOptions) -> Result<Vec<TheoryRow>> {
    let mut exhaustive = ReconstructionTally::default();
    for n in 1..=opts.max_n {
        for t in all_trees(n) {
            for vs in subsets(n) {
                exhaustive.add(&check_reconstruction(&t, &vs)?);
            }
        }
    }
    let random = (0..opts.random_trees)
        .into_par_iter()
        .map(|i| {
            let (t, vs) = random_case(seed::derive(opts.seed, i as u64))?;
            check_reconstruction(&t, &vs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sampled = ReconstructionTally::default();
    for r in &random {
        sampled.add(r);
    }

    // Converse direction on triangle-free graphs that are not trees.
    let mut cyc_cases = 0;
    let mut cyc_bad = 0;
    for n in 4..=opts.max_n.max(4) {
        let g = Graph::cycle(n)?;
        for vs in subsets(n) {
            cyc_cases += 1;
            let dt = DistanceTable::from_graph(&g, &vs)?;
            let rec = reconstruct_from(&dt, &vs, n, ReconstructMode::ThresholdLe1)?;
            if rec == g.edge_set() && !is_separating(&g, &vs)? {
                cyc_bad += 1;
            }
            if !g.edge_set().is_subset(&rec) {
                cyc_bad += 1;
            }
        }
    }

    let mut rows = reconstruction_rows(&format!("all trees n<={}", opts.max_n), &exhaustive);
    rows.extend(reconstruction_rows("random trees n=9..40", &sampled));
    rows.push(TheoryRow::violations(
        "triangle_free_converse",
        format!("cycles n=4..{}; cases={cyc_cases}", opts.max_n.max(4)),
        cyc_bad,
    ));
    Ok(rows)
}

/// `v_i'`: the member of `conv(vs \ {vi})` closest to `vi`, with the path to it.
fn projection(t: &Graph, hull: &BTreeSet<Vertex>, vi: Vertex) -> (Vertex, Vec<Vertex>) {
    let d = t.bfs(vi);
    let target = *hull
        .iter()
        .min_by_key(|&&v| (d[v].expect("tree is connected"), v))
        .expect("hull is not empty");
    let path = crate::graph::oracle::tree_path(t, vi, target);
    (target, path)
}

#[derive(Default, Clone, Copy)]
struct RedundancyTally {
    members: usize,
    criterion: usize,
    monotone: usize,
    replaceable_pairs: usize,
    replaceable: usize,
    in_hull_cases: usize,
    in_hull: usize,
    ordinary_path_cases: usize,
    ordinary_path: usize,
    core: usize,
}

impl RedundancyTally {
    fn add(&mut self, o: &RedundancyTally) {
        self.members += o.members;
        self.criterion += o.criterion;
        self.monotone += o.monotone;
        self.replaceable_pairs += o.replaceable_pairs;
        self.replaceable += o.replaceable;
        self.in_hull_cases += o.in_hull_cases;
        self.in_hull += o.in_hull;
        self.ordinary_path_cases += o.ordinary_path_cases;
        self.ordinary_path += o.ordinary_path;
        self.core += o.core;
    }
}

fn check_redundancy(t: &Graph, vs: &[Vertex], seed: u64) -> Result<RedundancyTally> {
    let n = t.n();
    let mut rng = seed::rng(seed);
    let mut tally = RedundancyTally::default();
    let all: Vec<Vertex> = (0..n).collect();
    let dt = DistanceTable::from_graph(t, &all)?;
    let mut redundant = Vec::with_capacity(vs.len());
    for &vi in vs {
        tally.members += 1;
        let r = is_redundant(&dt, vs, vi, n)?;
        redundant.push(r);
        tally.criterion += usize::from(r != is_redundant_by_criterion(&dt, vs, vi, n)?);
        if r {
            let extra = rng.random_range(0..n);
            if !vs.contains(&extra) {
                let mut bigger = vs.to_vec();
                bigger.push(extra);
                tally.monotone += usize::from(!is_redundant(&dt, &bigger, vi, n)?);
            }
        }
        if vs.len() < 2 {
            continue;
        }
        let rest: Vec<Vertex> = vs.iter().copied().filter(|&v| v != vi).collect();
        let hull = convex_hull(t, &rest)?;
        let (proj, path) = projection(t, &hull, vi);
        if proj == vi {
            tally.in_hull_cases += 1;
            tally.in_hull += usize::from(!r);
            continue;
        }
        let interior_ordinary = path[1..path.len() - 1].iter().all(|&w| t.degree(w) == 2);
        let away = subtree(t, proj, vi)?;
        let dp = t.bfs(proj);
        let near_inside = (0..n)
            .filter(|&w| dp[w].is_some_and(|d| d <= 2) && away.contains(w))
            .all(|w| hull.contains(&w));
        if interior_ordinary && near_inside {
            tally.ordinary_path_cases += 1;
            tally.ordinary_path += usize::from(!r);
        }
    }
    if vs.len() >= 2 {
        for _ in 0..3 {
            let i = rng.random_range(0..vs.len());
            let j = rng.random_range(0..vs.len());
            if i == j {
                continue;
            }
            tally.replaceable_pairs += 1;
            let mr = mutually_replaceable(&dt, vs, vs[i], vs[j], n)?;
            tally.replaceable += usize::from(mr != (redundant[i] && redundant[j]));
        }
    }
    let core = redundant_core(t, vs)?;
    let full = reconstruct_from(&dt, vs, n, ReconstructMode::ThresholdLe1)?;
    let reduced = reconstruct_from(&dt, &core, n, ReconstructMode::ThresholdLe1)?;
    tally.core += usize::from(full != reduced);
    Ok(tally)
}

fn redundancy_suite(opts: &SuiteOptions) -> Result<Vec<TheoryRow>> {
    let parts = (0..opts.random_trees)
        .into_par_iter()
        .map(|i| {
            let s = seed::derive(opts.seed, i as u64);
            let mut rng = seed::rng(s);
            let n = rng.random_range(8..=30);
            let t = gen_er_tree(n, seed::derive(s, 1))?;
            let k = rng.random_range(1..=n);
            let vs = pick_sources(n, k, seed::derive(s, 2));
            check_redundancy(&t, &vs, seed::derive(s, 3))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = RedundancyTally::default();
    for p in &parts {
        t.add(p);
    }
    let base = format!("random trees n=8..30; trees={}", opts.random_trees);
    Ok(vec![
        TheoryRow::violations(
            "redundant_iff_criterion",
            format!("{base}; members={}", t.members),
            t.criterion,
        ),
        TheoryRow::violations("redundancy_monotone", base.clone(), t.monotone),
        TheoryRow::violations(
            "replaceable_iff_both_redundant",
            format!("{base}; pairs={}", t.replaceable_pairs),
            t.replaceable,
        ),
        TheoryRow::violations(
            "inside_hull_redundant",
            format!("{base}; cases={}", t.in_hull_cases),
            t.in_hull,
        ),
        TheoryRow::violations(
            "ordinary_path_redundant",
            format!("{base}; cases={}", t.ordinary_path_cases),
            t.ordinary_path,
        ),
        TheoryRow::violations("core_reconstructs_same", base, t.core),
    ])
}

/// A small connected graph with at least one non-bridge edge, and that edge.
fn cyclic_instance(seed: u64) -> Result<(Graph, Vertex, Vertex)> {
    for attempt in 0.. {
        let s = seed::derive(seed, attempt);
        let mut rng = seed::rng(s);
        let n = rng.random_range(4..=10);
        let g =
            gen_er_graph_with_retries(n, 3.0_f64.min(n as f64 - 1.5), 10_000, seed::derive(s, 1))?;
        let candidates: Vec<_> = g
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| {
                g.without_edge(u, v)
                    .map(|h| h.is_connected())
                    .unwrap_or(false)
            })
            .collect();
        if !candidates.is_empty() {
            let (u, v) = candidates[rng.random_range(0..candidates.len())];
            return Ok((g, u, v));
        }
    }
    unreachable!()
}

fn moments_suite(opts: &SuiteOptions) -> Result<Vec<TheoryRow>> {
    let mut rows = Vec::new();

    // Closed-form detour survival on the triangle with unit exponential delays.
    let triangle = Graph::complete(3);
    let exp1 = DelaySpec::homogeneous(DelayFamily::exponential(1.0))?;
    let gamma2 = DetourSurvival::Gamma {
        shape: 2.0,
        scale: 1.0,
    };
    let mut tri_bounds = Vec::new();
    for k in [1, 2] {
        let r = moment_gap(
            &triangle,
            0,
            1,
            &exp1,
            k,
            1.0,
            0.5,
            opts.gap_samples * 5,
            seed::derive(opts.seed, k as u64),
            gamma2,
        )?;
        rows.push(TheoryRow::new(
            "moment_gap_triangle",
            format!(
                "k={k}; eps0=1; eps1=0.5; samples={}; se={:.3e}",
                r.samples, r.std_error
            ),
            r.gap,
            r.bound,
            r.pass,
        ));
        tri_bounds.push(r.gap);
    }

    let gaps = (0..opts.gap_instances)
        .into_par_iter()
        .map(|i| {
            let s = seed::derive(opts.seed ^ 0x6a9, i as u64);
            let (g, u, v) = cyclic_instance(s)?;
            let family = if i % 2 == 0 {
                DelayFamily::exponential(1.0)
            } else {
                DelayFamily::Gamma {
                    shape: 2.0,
                    scale: 0.5,
                }
            };
            let k = (i % 3) as u32 + 1;
            let spec = DelaySpec::homogeneous(family)?;
            moment_gap(
                &g,
                u,
                v,
                &spec,
                k,
                1.0,
                0.5,
                opts.gap_samples,
                seed::derive(s, 99),
                DetourSurvival::Empirical,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let below = gaps.iter().filter(|r| !r.pass).count();
    let nonpositive = gaps.iter().filter(|r| r.gap <= 0.0).count();
    let min_margin = gaps
        .iter()
        .map(|r| (r.gap - r.bound) / r.std_error.max(f64::MIN_POSITIVE))
        .fold(f64::INFINITY, f64::min);
    rows.push(TheoryRow::violations(
        "moment_gap_above_bound",
        format!(
            "instances={}; k=1..3; samples={}; min_margin_se={min_margin:.2}",
            gaps.len(),
            opts.gap_samples
        ),
        below,
    ));
    rows.push(TheoryRow::violations(
        "moment_gap_positive",
        format!("instances={}", gaps.len()),
        nonpositive,
    ));

    let paths = (0..opts.path_instances)
        .into_par_iter()
        .map(|i| {
            let s = seed::derive(opts.seed ^ 0x64f, i as u64);
            let g = gen_er_graph_with_retries(20, 3.0, 10_000, seed::derive(s, 1))?;
            let mut rng = seed::rng(s);
            let picks = rand::seq::index::sample(&mut rng, 20, 3);
            let k = (i % 3) as u32 + 1;
            let spec = DelaySpec::homogeneous(DelayFamily::exponential(1.0))?;
            path_moment_inequality(
                &g,
                picks.index(0),
                picks.index(1),
                picks.index(2),
                &spec,
                k,
                opts.path_samples,
                seed::derive(s, 2),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    rows.push(TheoryRow::violations(
        "path_moment_inequality",
        format!(
            "instances={}; n=20; k=1..3; samples={}",
            paths.len(),
            opts.path_samples
        ),
        paths.iter().filter(|r| !r.holds).count(),
    ));

    // The generalized weight with orders 1 and 2 summed is the graph weight.
    let g = gen_er_graph_with_retries(30, 4.0, 10_000, seed::derive(opts.seed, 7))?;
    let spec = DelaySpec::homogeneous(DelayFamily::exponential(1.0))?;
    let cascades = (0..10)
        .map(|s| simulate_cascade(&g, s, &spec, seed::derive(opts.seed, 100 + s as u64), None))
        .collect::<Result<Vec<_>>>()?;
    let a = graph_weights(&cascades, 1.0, 2.0, 0.2)?;
    let b = generalized_weights(
        &cascades,
        &[(1, 1.0), (2, 2.0)],
        Combiner::Sum,
        Deviation::PerSource,
        0.2,
    )?;
    let mismatched = a
        .iter()
        .zip(b.iter())
        .filter(|(x, y)| x.2.to_bits() != y.2.to_bits())
        .count();
    rows.push(TheoryRow::violations(
        "generalized_weight_specialization",
        "n=30; cascades=10",
        mismatched,
    ));

    let pairs = [
        (DelayFamily::exponential(1.0), DelayFamily::exponential(1.0)),
        (
            DelayFamily::exponential(0.5),
            DelayFamily::Gamma {
                shape: 2.0,
                scale: 1.0,
            },
        ),
        (
            DelayFamily::Gamma {
                shape: 3.0,
                scale: 1.0,
            },
            DelayFamily::exponential(2.0),
        ),
    ];
    for (i, (x, y)) in pairs.iter().enumerate() {
        let r = min_tv_check(x, y, 200_000, 50, seed::derive(opts.seed, 200 + i as u64))?;
        rows.push(TheoryRow::new(
            "min_total_variation",
            format!("x={x}; y={y}; slack={:.4}", r.slack),
            r.tv_estimate,
            r.bound,
            r.holds,
        ));
    }
    Ok(rows)
}

fn tv_suite(opts: &SuiteOptions) -> Result<Vec<TheoryRow>> {
    let grid = default_eps_grid();
    let mut rows = Vec::new();
    // The infimum over all eps > 0 is at most 1 (eps -> 0); a grid starting
    // at eps_min can only certify 1 + eps_min.
    let ceiling = 1.0 + grid[0];
    let v = tv_upper_bound(opts.l, opts.k, &grid)?;
    rows.push(TheoryRow::new(
        "tv_upper_bound",
        format!("l={}; k={}", opts.l, opts.k),
        v,
        ceiling,
        v <= ceiling,
    ));
    let example = tv_upper_bound(2, 100, &grid)?;
    rows.push(TheoryRow::new(
        "tv_upper_bound",
        "l=2; k=100",
        example,
        0.3,
        example < 0.3,
    ));

    let mut above_one = 0;
    let mut not_monotone = 0;
    for l in 1..=6 {
        let mut prev = vec![f64::INFINITY; grid.len()];
        for k in [1, 2, 5, 10, 50, 100, 1000] {
            above_one += usize::from(tv_upper_bound(l, k, &grid)? > ceiling);
            for (p, &e) in prev.iter_mut().zip(&grid) {
                let x = tv_bound_at(l, k, e);
                not_monotone += usize::from(x > *p + 1e-12);
                *p = x;
            }
        }
    }
    rows.push(TheoryRow::violations(
        "tv_bound_at_most_one",
        "l=1..6; k=1..1000; tolerance=eps_min",
        above_one,
    ));
    rows.push(TheoryRow::violations(
        "tv_bound_monotone_in_k",
        "l=1..6; k=1..1000; grid=400",
        not_monotone,
    ));

    let exp1 = DelayFamily::exponential(1.0);
    let ks2 = edge_vs_path_distribution_distinct(
        2,
        &exp1,
        opts.ks_samples,
        0.01,
        seed::derive(opts.seed, 300),
    )?;
    rows.push(TheoryRow::new(
        "edge_vs_path_ks",
        format!("l=2; samples={}; alpha=0.01", opts.ks_samples),
        ks2.statistic,
        ks2.critical,
        ks2.reject,
    ));
    let ks0 = edge_vs_path_distribution_distinct(
        0,
        &exp1,
        opts.ks_samples,
        0.01,
        seed::derive(opts.seed, 301),
    )?;
    rows.push(TheoryRow::new(
        "edge_vs_edge_ks",
        format!("l=0; samples={}; alpha=0.01", opts.ks_samples),
        ks0.statistic,
        ks0.critical,
        !ks0.reject,
    ));
    let ks5 = edge_vs_path_distribution_distinct(
        5,
        &exp1,
        opts.ks_samples,
        0.01,
        seed::derive(opts.seed, 302),
    )?;
    rows.push(TheoryRow::new(
        "longer_detour_closer",
        format!("l=5 vs l=2; samples={}", opts.ks_samples),
        ks5.statistic,
        ks2.statistic,
        ks5.statistic < ks2.statistic,
    ));
    Ok(rows)
}

fn separating_suite(opts: &SuiteOptions) -> Result<Vec<TheoryRow>> {
    let mut rows = Vec::new();
    let star = Graph::star(4);
    let b = separating_size_bound(&star, LeafReading::AllLeaves)?;
    rows.push(TheoryRow::new(
        "separating_bound_star",
        "K_1_4; all leaves",
        b as f64,
        4.0,
        b == 4,
    ));

    // Brute force over all labeled trees: the hull criterion must agree with
    // uniqueness, the minimum must be attained, and every uniquely
    // determining source set should respect the size bound.
    let mut cases = 0;
    let mut unique = 0;
    let mut criterion_bad = 0;
    let mut min_bad = 0;
    let mut bound_bad = [0usize; 2];
    let readings = [LeafReading::AllLeaves, LeafReading::LongLeaves];
    for n in 1..=opts.max_n_unique {
        let labeled = labeled_tree_distances(n);
        for t in all_trees(n) {
            let bounds = [
                separating_size_bound(&t, readings[0])?,
                separating_size_bound(&t, readings[1])?,
            ];
            let mut smallest = usize::MAX;
            for vs in subsets(n) {
                cases += 1;
                let u = has_unique_reconstruction(&t, &vs, &labeled);
                criterion_bad += usize::from(u != is_uniquely_determined(&t, &vs)?);
                if u {
                    unique += 1;
                    smallest = smallest.min(vs.len());
                    for (bad, b) in bound_bad.iter_mut().zip(bounds) {
                        *bad += usize::from(vs.len() < b);
                    }
                }
            }
            min_bad += usize::from(min_unique_source_count(&t)? != smallest);
        }
    }
    let p = format!(
        "trees n<={}; cases={cases}; unique={unique}",
        opts.max_n_unique
    );
    rows.push(TheoryRow::violations(
        "hull_uniqueness_criterion",
        p.clone(),
        criterion_bad,
    ));
    rows.push(TheoryRow::violations(
        "min_unique_source_count",
        p.clone(),
        min_bad,
    ));
    rows.push(TheoryRow::violations(
        "separating_bound_necessary",
        format!("all leaves; {p}"),
        bound_bad[0],
    ));
    rows.push(TheoryRow::violations(
        "separating_bound_necessary",
        format!("long leaves; {p}"),
        bound_bad[1],
    ));
    Ok(rows)
}
