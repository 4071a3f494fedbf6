//! `casctopo`: generate networks, simulate cascades, infer and score edge
//! sets, run sweeps and the theory suites.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use cascade_topology::diffusion::{
    load_cascades, make_heterogeneous, write_cascades, DelayFamily, DelaySpec,
};
use cascade_topology::evaluation::{
    edge_recovery_rate, infer, pick_sources, reconstruct_from_cascades, run_trials, simulate_batch,
    sweep, write_sweep_csv, write_trials_csv, Algorithm, DelayChoice, Experiment, GraphSource,
    SweepAxis,
};
use cascade_topology::generators::{GeneratorSpec, DEFAULT_CONNECT_RETRIES};
use cascade_topology::graph::{load_edge_list, load_edge_set, write_edge_list};
use cascade_topology::inference::{
    edge_count_for, fuse_scores, gi_detailed, iti_detailed, likelihood_scores, load_score_file,
    DegreeChoice, InferenceConfig,
};
use cascade_topology::theory::{run_suite, write_report, Suite, SuiteOptions};
use cascade_topology::{seed, EdgeSet, Graph};
use clap::{Args, Parser, Subcommand};

use config::Config;

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing arguments: exit code 2.
    Usage(String),
    /// Anything that failed while running: exit code 1.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<cascade_topology::Error> for CliError {
    fn from(e: cascade_topology::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Library validation failures while resolving arguments are usage errors.
fn usage<T>(r: cascade_topology::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Parser, Debug)]
#[command(
    name = "casctopo",
    version,
    about = "Network topology inference from information cascades"
)]
struct Cli {
    /// key=value settings (generator.*, delay.*, infer.*); flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random network and write its edge list.
    Generate(GenerateArgs),
    /// Simulate cascades over a network and write the cascade file.
    Simulate(SimulateArgs),
    /// Infer an edge set from a cascade file.
    Infer(InferArgs),
    /// Score an edge set against the truth, or run a batch of seeded trials.
    Evaluate(EvaluateArgs),
    /// Run trials over a parameter grid and write the aggregate CSV.
    Sweep(SweepArgs),
    /// Run a theory property suite and write its report CSV.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct GeneratorArgs {
    /// er_tree, er_graph or forest_fire.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    avg_degree: Option<f64>,
    #[arg(long)]
    p_forward: Option<f64>,
    #[arg(long)]
    p_backward: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct DelayArgs {
    /// Delay law: det:v, exp:mean, gamma:shape:scale, normal:mean:sd,
    /// bimodal:m1:m2:sd or mix:w:mean:sd[:...].
    #[arg(long)]
    delay: Option<String>,
    /// Per-edge means drawn uniformly from LO:HI, rescaling --delay.
    #[arg(long, value_name = "LO:HI")]
    hetero: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
struct MomentArgs {
    /// Declared first moment of the edge delay.
    #[arg(long)]
    mean: Option<f64>,
    /// Declared second moment of the edge delay.
    #[arg(long)]
    mean2: Option<f64>,
    /// Support threshold: pairs timed by fewer than tau * |V_c| cascades are skipped.
    #[arg(long)]
    tau: Option<f64>,
    /// Average degree for graph inference: a number or `auto`.
    #[arg(long)]
    deg_ave: Option<String>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Edge list of the network.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    delay: DelayArgs,
    /// Explicit comma-separated sources; otherwise --vc-frac picks them.
    #[arg(long, value_delimiter = ',')]
    sources: Option<Vec<usize>>,
    #[arg(long)]
    vc_frac: Option<f64>,
    #[arg(long)]
    kappa: Option<usize>,
    /// Drop arrivals later than this time.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InferArgs {
    /// Cascade file.
    #[arg(long)]
    cascades: PathBuf,
    /// Vertex count (default: taken from the cascade file).
    #[arg(long)]
    n: Option<usize>,
    /// iti, general_iti, gi or reconstruct_from.
    #[arg(long)]
    algo: Option<String>,
    /// Delay law to take the moments from when --mean/--mean2 are absent.
    #[arg(long)]
    delay: Option<String>,
    #[command(flatten)]
    moments: MomentArgs,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    ms: Option<usize>,
    /// Rounds of general ITI.
    #[arg(long, default_value_t = 3)]
    rounds: usize,
    /// Write the normalized pair scores here.
    #[arg(long)]
    scores_out: Option<PathBuf>,
    /// Average our scores with this external score file before selecting.
    #[arg(long)]
    fuse: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct ExperimentArgs {
    /// Fixed network instead of a generator.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    generator: GeneratorArgs,
    #[command(flatten)]
    delay: DelayArgs,
    #[command(flatten)]
    moments: MomentArgs,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for trials.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Inferred edge list to score (with --truth).
    #[arg(long, requires = "truth")]
    estimated: Option<PathBuf>,
    /// True edge list.
    #[arg(long, requires = "estimated")]
    truth: Option<PathBuf>,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long)]
    vc_frac: Option<f64>,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    ms: Option<usize>,
    /// Per-trial CSV.
    #[arg(long)]
    trials_out: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Comma-separated grid values; every list given becomes an axis.
    #[arg(long, value_delimiter = ',')]
    vc_frac: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    algo: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    iterations: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    ms: Vec<usize>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// thm-3.7, redundancy, moments, tv-bound or appendix-b.
    suite: String,
    /// Largest exhaustively enumerated tree.
    #[arg(long)]
    max_n: Option<usize>,
    /// Detour length of the total-variation bound.
    #[arg(long)]
    l: Option<u32>,
    /// Detour count of the total-variation bound.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit with status 1 when any row fails.
    #[arg(long)]
    strict: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(1)
        }
    }
}

/// The error chain joined by `: `, skipping causes already quoted by
/// their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !msg.contains(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
    }
    msg
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let done = |r: CliResult<()>| r.map(|()| ExitCode::SUCCESS);
    match cli.command {
        Command::Generate(a) => done(cmd_generate(&cfg, a)),
        Command::Simulate(a) => done(cmd_simulate(&cfg, a)),
        Command::Infer(a) => done(cmd_infer(&cfg, a)),
        Command::Evaluate(a) => done(cmd_evaluate(&cfg, a)),
        Command::Sweep(a) => done(cmd_sweep(&cfg, a)),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Opens `path`, or stdout when absent, and runs `body` on it.
fn write_out(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|()| w.flush())
                .with_context(|| format!("cannot write {}", p.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            match body(&mut w) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                r => r.context("cannot write to stdout")?,
            }
        }
    }
    Ok(())
}

fn require_seed(cfg: &Config, flag: Option<u64>) -> CliResult<u64> {
    cfg.pick(flag, "seed")?
        .ok_or_else(|| CliError::Usage("--seed is required for randomized commands".into()))
}

fn generator_spec(cfg: &Config, a: &GeneratorArgs) -> CliResult<GeneratorSpec> {
    let family: String = cfg.require(a.family.clone(), "generator.family", "--family")?;
    let n: usize = cfg.require(a.n, "generator.n", "--n")?;
    let spec = match family.as_str() {
        "er_tree" => GeneratorSpec::ErTree { n },
        "er_graph" => GeneratorSpec::ErGraph {
            n,
            avg_degree: cfg.require(a.avg_degree, "generator.avg_degree", "--avg-degree")?,
            max_retries: DEFAULT_CONNECT_RETRIES,
        },
        "forest_fire" => GeneratorSpec::ForestFire {
            n,
            p_forward: cfg.require(a.p_forward, "generator.p_forward", "--p-forward")?,
            p_backward: cfg.require(a.p_backward, "generator.p_backward", "--p-backward")?,
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown family {other:?} (expected er_tree, er_graph or forest_fire)"
            )))
        }
    };
    usage(spec.validate())?;
    Ok(spec)
}

fn parse_family(s: &str) -> CliResult<DelayFamily> {
    usage(s.parse())
}

fn parse_range(s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Usage(format!("expected LO:HI, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(CliError::Usage(format!("need 0 < LO <= HI, got {s:?}")));
    }
    Ok((lo, hi))
}

fn delay_choice(cfg: &Config, a: &DelayArgs) -> CliResult<DelayChoice> {
    let family = parse_family(&cfg.require(a.delay.clone(), "delay.spec", "--delay")?)?;
    Ok(match cfg.pick(a.hetero.clone(), "delay.hetero")? {
        Some(r) => {
            let (lo, hi) = parse_range(&r)?;
            DelayChoice::Heterogeneous {
                base: family,
                lo,
                hi,
            }
        }
        None => DelayChoice::Homogeneous(family),
    })
}

fn parse_algorithm(s: &str, rounds: usize) -> CliResult<Algorithm> {
    match usage(s.parse::<Algorithm>())? {
        Algorithm::GeneralIti { .. } => Ok(Algorithm::GeneralIti { rounds }),
        a => Ok(a),
    }
}

fn parse_deg_ave(s: &str) -> CliResult<DegreeChoice> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(DegreeChoice::Estimate);
    }
    s.parse()
        .map(DegreeChoice::Given)
        .map_err(|_| CliError::Usage(format!("--deg-ave takes a number or `auto`, got {s:?}")))
}

/// Applies the shared inference flags on top of `base`.
fn inference_settings(
    cfg: &Config,
    m: &MomentArgs,
    iterations: Option<usize>,
    ms: Option<usize>,
    base: InferenceConfig,
) -> CliResult<InferenceConfig> {
    let mut out = base;
    if let Some(i) = cfg.pick(iterations, "infer.iterations")? {
        out.iterations = i;
    }
    if let Some(ms) = cfg.pick(ms, "infer.ms")? {
        out.ms = Some(ms);
    }
    if let Some(tau) = cfg.pick(m.tau, "infer.tau")? {
        out.tau = tau;
    }
    if let Some(d) = cfg.pick(m.deg_ave.clone(), "infer.deg_ave")? {
        out.deg_ave = parse_deg_ave(&d)?;
    }
    Ok(out)
}

fn cmd_generate(cfg: &Config, a: GenerateArgs) -> CliResult<()> {
    let spec = generator_spec(cfg, &a.generator)?;
    let seed = require_seed(cfg, a.seed)?;
    let g = spec.generate(seed)?;
    write_out(a.out.as_deref(), |w| {
        write_edge_list(g.edges().iter().copied(), w)
    })
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    Ok(load_edge_list(path)?)
}

fn cmd_simulate(cfg: &Config, a: SimulateArgs) -> CliResult<()> {
    let delay = delay_choice(cfg, &a.delay)?;
    let seed = require_seed(cfg, a.seed)?;
    let kappa: usize = cfg.pick(a.kappa, "infer.kappa")?.unwrap_or(1);
    let horizon = cfg.pick(a.horizon, "delay.horizon")?;
    let vc_frac = cfg.pick(a.vc_frac, "infer.vc_frac")?;
    if a.sources.is_some() && vc_frac.is_some() {
        return Err(CliError::Usage(
            "give either --sources or --vc-frac, not both".into(),
        ));
    }
    let g = load_graph(&a.graph)?;
    let n = g.n();
    let spec = match &delay {
        DelayChoice::Homogeneous(f) => usage(DelaySpec::homogeneous(f.clone()))?,
        DelayChoice::Heterogeneous { base, lo, hi } => {
            make_heterogeneous(&g, base, *lo, *hi, seed::derive(seed, 1))?
        }
    };
    let sources = match a.sources {
        Some(s) => {
            if let Some(&bad) = s.iter().find(|&&v| v >= n) {
                return Err(CliError::Usage(format!("source {bad} outside 0..{n}")));
            }
            s
        }
        None => {
            let frac = vc_frac.unwrap_or(1.0);
            if !(frac > 0.0 && frac <= 1.0) {
                return Err(CliError::Usage(format!(
                    "--vc-frac must lie in (0, 1], got {frac}"
                )));
            }
            pick_sources(
                n,
                ((frac * n as f64).round() as usize).clamp(1, n),
                seed::derive(seed, 2),
            )
        }
    };
    let cascades = usage(simulate_batch(
        &g,
        &spec,
        &sources,
        kappa,
        seed::derive(seed, 3),
        horizon,
    ))?;
    write_out(a.out.as_deref(), |w| write_cascades(&cascades, w))
}

/// First and second moments from the flags, the config, or a delay law.
fn declared_moments(
    cfg: &Config,
    m: &MomentArgs,
    delay: Option<String>,
) -> CliResult<(Option<f64>, Option<f64>)> {
    let mut mu1 = cfg.pick(m.mean, "delay.mean")?;
    let mut mu2 = cfg.pick(m.mean2, "delay.mean2")?;
    if let Some(d) = cfg.pick(delay, "delay.spec")? {
        let spec = usage(DelaySpec::homogeneous(parse_family(&d)?))?;
        mu1.get_or_insert(spec.mu1());
        mu2.get_or_insert(spec.mu2());
    }
    Ok((mu1, mu2))
}

fn cmd_infer(cfg: &Config, a: InferArgs) -> CliResult<()> {
    let algo_name = cfg
        .pick(a.algo.clone(), "infer.algo")?
        .unwrap_or_else(|| "iti".into());
    let algo = parse_algorithm(&algo_name, a.rounds)?;
    let (mu1, mu2) = declared_moments(cfg, &a.moments, a.delay.clone())?;
    let needs_mu1 = !matches!(algo, Algorithm::GeneralIti { .. });
    if needs_mu1 && mu1.is_none() {
        return Err(CliError::Usage(format!("{algo} needs --mean (or --delay)")));
    }
    if algo == Algorithm::Gi && mu2.is_none() {
        return Err(CliError::Usage("gi needs --mean2 (or --delay)".into()));
    }
    let wants_scores = a.scores_out.is_some() || a.fuse.is_some();
    if wants_scores && !matches!(algo, Algorithm::Iti | Algorithm::Gi) {
        return Err(CliError::Usage(
            "--scores-out and --fuse need --algo iti or gi".into(),
        ));
    }
    let mut base = InferenceConfig::new(mu1.unwrap_or(1.0));
    base.mu2 = mu2;
    let icfg = inference_settings(cfg, &a.moments, a.iterations, a.ms, base)?;
    usage(icfg.validate())?;

    let cascades = load_cascades(&a.cascades, a.n)?;
    let n = match a.n {
        Some(n) => n,
        None => cascades.first().map(|c| c.n()).ok_or_else(|| {
            CliError::Runtime(anyhow::anyhow!(
                "{} holds no cascades",
                a.cascades.display()
            ))
        })?,
    };

    let edges: EdgeSet = if wants_scores {
        let (out, count) = if algo == Algorithm::Gi {
            let out = gi_detailed(&cascades, n, &icfg)?;
            let count = edge_count_for(n, out.deg_ave.expect("graph inference reports its degree"));
            (out, count)
        } else {
            (iti_detailed(&cascades, n, &icfg)?, n.saturating_sub(1))
        };
        let ours = likelihood_scores(&out.weights, count)?;
        if let Some(p) = &a.scores_out {
            ours.save(p)?;
        }
        match &a.fuse {
            Some(p) => fuse_scores(&ours, &load_score_file(p, n)?, count)?,
            None => out.edges,
        }
    } else if algo == Algorithm::Reconstruct {
        reconstruct_from_cascades(&cascades, n, icfg.mu1)?
    } else {
        let (edges, deg) = infer(&cascades, n, algo, &icfg)?;
        if let Some(d) = deg {
            log::info!("average degree used: {d}");
        }
        edges
    };
    write_out(a.out.as_deref(), |w| {
        write_edge_list(edges.iter().copied(), w)
    })
}

/// The experiment shared by `evaluate` and `sweep`, before per-command
/// single values are applied.
fn base_experiment(cfg: &Config, a: &ExperimentArgs, algo: Algorithm) -> CliResult<Experiment> {
    let graph = match &a.graph {
        Some(p) => GraphSource::Fixed(load_graph(p)?),
        None => GraphSource::Generate(generator_spec(cfg, &a.generator)?),
    };
    let delay = delay_choice(cfg, &a.delay)?;
    let seed = require_seed(cfg, a.seed)?;
    let mut exp = Experiment::new(graph, delay, algo, seed);
    exp.mu1 = cfg.pick(a.moments.mean, "delay.mean")?;
    exp.mu2 = cfg.pick(a.moments.mean2, "delay.mean2")?;
    exp.horizon = cfg.pick(a.horizon, "delay.horizon")?;
    exp.trials = cfg.pick(a.trials, "trials")?.unwrap_or(1);
    exp.inference = inference_settings(cfg, &a.moments, None, None, exp.inference.clone())?;
    Ok(exp)
}

fn jobs(cfg: &Config, a: &ExperimentArgs) -> CliResult<Option<usize>> {
    cfg.pick(a.jobs, "jobs")
}

fn cmd_evaluate(cfg: &Config, a: EvaluateArgs) -> CliResult<()> {
    if let (Some(est), Some(truth)) = (&a.estimated, &a.truth) {
        // Ids are kept as written: an estimate may leave vertices uncovered.
        let est = load_edge_set(est)?;
        let truth = load_edge_set(truth)?;
        let r = edge_recovery_rate(&est, &truth)?;
        return write_out(a.out.as_deref(), |w| writeln!(w, "{r:.6}"));
    }
    let algo_name = cfg
        .pick(a.algo.clone(), "infer.algo")?
        .unwrap_or_else(|| "iti".into());
    let mut exp = base_experiment(cfg, &a.experiment, parse_algorithm(&algo_name, 3)?)?;
    if let Some(f) = cfg.pick(a.vc_frac, "infer.vc_frac")? {
        exp.vc_frac = f;
    }
    if let Some(k) = cfg.pick(a.kappa, "infer.kappa")? {
        exp.kappa = k;
    }
    exp.inference = inference_settings(
        cfg,
        &MomentArgs::default(),
        a.iterations,
        a.ms,
        exp.inference,
    )?;
    usage(exp.validate())?;
    let (reports, agg) = run_trials(&exp, jobs(cfg, &a.experiment)?)?;
    if let Some(p) = &a.trials_out {
        write_out(Some(p), |w| write_trials_csv(&reports, w))?;
    }
    write_out(a.out.as_deref(), |w| {
        writeln!(
            w,
            "graph,delay,algo,vc_frac,kappa,mean_R,sd_R,n_trials,mean_wall_ms"
        )?;
        writeln!(
            w,
            "\"{}\",\"{}\",{},{},{},{:.6},{:.6},{},{:.3}",
            exp.graph,
            exp.delay,
            exp.algorithm,
            exp.vc_frac,
            exp.kappa,
            agg.mean_r,
            agg.sd_r,
            agg.n_trials,
            agg.mean_wall_ms
        )
    })?;
    if agg.failed > 0 {
        log::warn!("{} of {} trials failed", agg.failed, exp.trials);
    }
    Ok(())
}

fn cmd_sweep(cfg: &Config, a: SweepArgs) -> CliResult<()> {
    let base_algo = cfg
        .pick(None::<String>, "infer.algo")?
        .unwrap_or_else(|| "iti".into());
    let mut exp = base_experiment(cfg, &a.experiment, parse_algorithm(&base_algo, 3)?)?;
    if let Some(f) = cfg.pick(None, "infer.vc_frac")? {
        exp.vc_frac = f;
    }
    if let Some(k) = cfg.pick(None, "infer.kappa")? {
        exp.kappa = k;
    }
    let mut axes = Vec::new();
    if !a.vc_frac.is_empty() {
        axes.push(SweepAxis::VcFrac(a.vc_frac));
    }
    if !a.kappa.is_empty() {
        axes.push(SweepAxis::Kappa(a.kappa));
    }
    if !a.algo.is_empty() {
        let algos = a
            .algo
            .iter()
            .map(|s| parse_algorithm(s, 3))
            .collect::<CliResult<Vec<_>>>()?;
        axes.push(SweepAxis::Algorithm(algos));
    }
    if !a.iterations.is_empty() {
        axes.push(SweepAxis::Iterations(a.iterations));
    }
    if !a.ms.is_empty() {
        axes.push(SweepAxis::Ms(a.ms));
    }
    if axes.is_empty() {
        return Err(CliError::Usage(
            "sweep needs at least one grid flag (--vc-frac, --kappa, --algo, --iterations, --ms)"
                .into(),
        ));
    }
    usage(exp.validate())?;
    let rows = sweep(&exp, &axes, jobs(cfg, &a.experiment)?)?;
    write_out(a.out.as_deref(), |w| write_sweep_csv(&axes, &rows, w))
}

fn cmd_verify(a: VerifyArgs) -> CliResult<ExitCode> {
    let suite: Suite = usage(a.suite.parse())?;
    let mut opts = SuiteOptions {
        seed: a.seed,
        ..SuiteOptions::default()
    };
    if let Some(m) = a.max_n {
        match suite {
            Suite::SeparatingBound => opts.max_n_unique = m,
            _ => opts.max_n = m,
        }
    }
    if let Some(l) = a.l {
        opts.l = l;
    }
    if let Some(k) = a.k {
        opts.k = k;
    }
    let rows = run_suite(suite, &opts)?;
    write_out(a.out.as_deref(), |w| write_report(&rows, w))?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        eprintln!("{}: {failed} of {} rows failed", suite.name(), rows.len());
        if a.strict {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}
