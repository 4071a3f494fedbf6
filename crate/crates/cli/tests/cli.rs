use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cascade_topology::diffusion::{load_cascades, DelayFamily, DelaySpec};
use cascade_topology::evaluation::{
    pick_sources, run_trials, simulate_batch, Algorithm, DelayChoice, Experiment, GraphSource,
};
use cascade_topology::generators::GeneratorSpec;
use cascade_topology::graph::{load_edge_list, save_edge_list};
use cascade_topology::inference::{
    estimate_avg_degree, fuse_scores, iti_detailed, likelihood_scores, load_score_file,
    InferenceConfig,
};
use cascade_topology::{seed, Graph};
use tempfile::TempDir;

fn casctopo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casctopo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = casctopo(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    casctopo(args).status.code().expect("exit code")
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_tree_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (p(&dir, "a.el"), p(&dir, "b.el"));
    for out in [&a, &b] {
        ok(&[
            "generate",
            "--family",
            "er_tree",
            "--n",
            "500",
            "--seed",
            "7",
            "-o",
            s(out),
        ]);
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(text).unwrap().lines().count(), 499);
    assert!(load_edge_list(&a).unwrap().is_tree());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        code(&["generate", "--family", "er_tree", "--n", "0", "--seed", "1"]),
        2
    );
    assert_eq!(code(&["generate", "--family", "er_tree", "--n", "5"]), 2);
    assert_eq!(
        code(&["generate", "--family", "lattice", "--n", "5", "--seed", "1"]),
        2
    );
    assert_eq!(code(&["verify", ""]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn unreadable_graph_exits_1() {
    let dir = TempDir::new().unwrap();
    let out = casctopo(&[
        "simulate",
        "--graph",
        s(&p(&dir, "missing.el")),
        "--delay",
        "exp:1",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.el"));
}

#[test]
fn deterministic_delays_give_hop_counts() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "path.el");
    save_edge_list(&Graph::path(6), &g).unwrap();
    let c = p(&dir, "c.txt");
    ok(&[
        "simulate",
        "--graph",
        s(&g),
        "--delay",
        "det:1",
        "--sources",
        "0",
        "--seed",
        "1",
        "-o",
        s(&c),
    ]);
    let cascades = load_cascades(&c, None).unwrap();
    assert_eq!(cascades.len(), 1);
    for v in 0..6 {
        assert_eq!(cascades[0].time(v), Some(v as f64));
    }
}

#[test]
fn simulate_matches_library_and_reloads_exactly() {
    let dir = TempDir::new().unwrap();
    let gp = p(&dir, "g.el");
    ok(&[
        "generate",
        "--family",
        "er_graph",
        "--n",
        "60",
        "--avg-degree",
        "4",
        "--seed",
        "2",
        "-o",
        s(&gp),
    ]);
    let c = p(&dir, "c.txt");
    ok(&[
        "simulate",
        "--graph",
        s(&gp),
        "--delay",
        "normal:5:1",
        "--vc-frac",
        "0.3",
        "--kappa",
        "2",
        "--seed",
        "11",
        "-o",
        s(&c),
    ]);
    let g = load_edge_list(&gp).unwrap();
    let spec = DelaySpec::homogeneous(DelayFamily::Normal { mean: 5.0, sd: 1.0 }).unwrap();
    let sources = pick_sources(60, 18, seed::derive(11, 2));
    let direct = simulate_batch(&g, &spec, &sources, 2, seed::derive(11, 3), None).unwrap();
    assert_eq!(load_cascades(&c, None).unwrap(), direct);
}

#[test]
fn horizon_censors_late_vertices() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "path.el");
    save_edge_list(&Graph::path(10), &g).unwrap();
    let lines = |extra: &[&str]| {
        let mut args = vec![
            "simulate",
            "--graph",
            s(&g),
            "--delay",
            "det:1",
            "--sources",
            "0",
            "--seed",
            "1",
        ];
        args.extend_from_slice(extra);
        ok(&args).lines().count()
    };
    assert!(lines(&["--horizon", "4.5"]) < lines(&[]));
}

#[test]
fn iti_recovers_tree_from_deterministic_cascades() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "t.el");
    ok(&[
        "generate",
        "--family",
        "er_tree",
        "--n",
        "40",
        "--seed",
        "3",
        "-o",
        s(&g),
    ]);
    let c = p(&dir, "c.txt");
    ok(&[
        "simulate",
        "--graph",
        s(&g),
        "--delay",
        "det:1",
        "--seed",
        "4",
        "-o",
        s(&c),
    ]);
    let truth = std::fs::read_to_string(&g).unwrap();
    // Transfers along the extra non-edge pairs of the default m_s perturb
    // noiseless times, so select exactly n - 1 pairs per round.
    for extra in [["--iterations", "0"], ["--ms", "39"]] {
        let e = p(&dir, "e.el");
        let mut args = vec![
            "infer",
            "--cascades",
            s(&c),
            "--algo",
            "iti",
            "--mean",
            "1",
            "-o",
            s(&e),
        ];
        args.extend_from_slice(&extra);
        ok(&args);
        assert_eq!(std::fs::read_to_string(&e).unwrap(), truth);
        assert_eq!(
            ok(&["evaluate", "--estimated", s(&e), "--truth", s(&g)]).trim(),
            "1.000000"
        );
    }
}

#[test]
fn missing_moment_names_the_flag() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "path.el");
    save_edge_list(&Graph::path(5), &g).unwrap();
    let c = p(&dir, "c.txt");
    ok(&[
        "simulate",
        "--graph",
        s(&g),
        "--delay",
        "det:1",
        "--seed",
        "1",
        "-o",
        s(&c),
    ]);
    let out = casctopo(&["infer", "--cascades", s(&c), "--algo", "gi", "--mean", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mean2"));
    let out = casctopo(&["infer", "--cascades", s(&c), "--algo", "iti"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mean"));
}

#[test]
fn gi_auto_degree_uses_the_estimator() {
    let dir = TempDir::new().unwrap();
    let gp = p(&dir, "g.el");
    ok(&[
        "generate",
        "--family",
        "er_graph",
        "--n",
        "80",
        "--avg-degree",
        "4",
        "--seed",
        "5",
        "-o",
        s(&gp),
    ]);
    let c = p(&dir, "c.txt");
    ok(&[
        "simulate",
        "--graph",
        s(&gp),
        "--delay",
        "exp:1",
        "--vc-frac",
        "0.5",
        "--seed",
        "6",
        "-o",
        s(&c),
    ]);
    let out = ok(&[
        "infer",
        "--cascades",
        s(&c),
        "--algo",
        "gi",
        "--delay",
        "exp:1",
        "--deg-ave",
        "auto",
    ]);
    let deg = estimate_avg_degree(
        &load_cascades(&c, None).unwrap(),
        1.0,
        InferenceConfig::new(1.0).trim,
    )
    .unwrap();
    assert_eq!(out.lines().count(), (80.0 * deg / 2.0).round() as usize);
    let given = ok(&[
        "infer",
        "--cascades",
        s(&c),
        "--algo",
        "gi",
        "--mean",
        "1",
        "--mean2",
        "2",
        "--deg-ave",
        "3",
    ]);
    assert_eq!(given.lines().count(), 120);
}

#[test]
fn fuse_matches_library() {
    let dir = TempDir::new().unwrap();
    let gp = p(&dir, "t.el");
    ok(&[
        "generate",
        "--family",
        "er_tree",
        "--n",
        "30",
        "--seed",
        "8",
        "-o",
        s(&gp),
    ]);
    let c = p(&dir, "c.txt");
    ok(&[
        "simulate",
        "--graph",
        s(&gp),
        "--delay",
        "exp:1",
        "--vc-frac",
        "0.6",
        "--seed",
        "9",
        "-o",
        s(&c),
    ]);
    let ext = p(&dir, "ext.scores");
    let mut text = String::from("# external\n");
    for u in 0..30 {
        for v in u + 1..30 {
            text.push_str(&format!("{u} {v} {}\n", ((u * 7 + v * 3) % 11) as f64));
        }
    }
    std::fs::write(&ext, text).unwrap();
    let ours = p(&dir, "ours.scores");
    let out = ok(&[
        "infer",
        "--cascades",
        s(&c),
        "--algo",
        "iti",
        "--mean",
        "1",
        "--scores-out",
        s(&ours),
        "--fuse",
        s(&ext),
    ]);

    let cascades = load_cascades(&c, None).unwrap();
    let w = iti_detailed(&cascades, 30, &InferenceConfig::new(1.0))
        .unwrap()
        .weights;
    let a = likelihood_scores(&w, 29).unwrap();
    let b = load_score_file(&ext, 30).unwrap();
    let expected: Vec<String> = fuse_scores(&a, &b, 29)
        .unwrap()
        .iter()
        .map(|(u, v)| format!("{u} {v}"))
        .collect();
    assert_eq!(out.lines().collect::<Vec<_>>(), expected);
    let written = load_score_file(&ours, 30).unwrap();
    assert!((written.sum() - 1.0).abs() < 1e-9);
    assert_eq!(written.ranked()[..29], a.ranked()[..29]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let conf = p(&dir, "gen.conf");
    std::fs::write(
        &conf,
        "# tree\ngenerator.family = er_tree\ngenerator.n = 20\nseed = 3\n",
    )
    .unwrap();
    let from_file = ok(&["--config", s(&conf), "generate"]);
    assert_eq!(from_file.lines().count(), 19);
    let overridden = ok(&["--config", s(&conf), "generate", "--n", "12"]);
    assert_eq!(overridden.lines().count(), 11);
    std::fs::write(&conf, "generator.size = 20\n").unwrap();
    assert_eq!(code(&["--config", s(&conf), "generate"]), 2);
}

#[test]
fn evaluate_and_one_point_sweep_agree_with_library() {
    let common = [
        "--family",
        "er_tree",
        "--n",
        "40",
        "--delay",
        "exp:1",
        "--trials",
        "4",
        "--seed",
        "21",
        "--iterations",
        "1",
    ];
    let mut eval = vec!["evaluate", "--vc-frac", "0.5", "--algo", "iti"];
    eval.extend_from_slice(&common);
    let eval_out = ok(&eval);
    let mut sw = vec!["sweep", "--vc-frac", "0.5", "--algo", "iti"];
    sw.extend_from_slice(&common);
    let sweep_out = ok(&sw);

    let mut exp = Experiment::new(
        GraphSource::Generate(GeneratorSpec::ErTree { n: 40 }),
        DelayChoice::Homogeneous(DelayFamily::exponential(1.0)),
        Algorithm::Iti,
        21,
    );
    exp.trials = 4;
    exp.inference.iterations = 1;
    let (_, agg) = run_trials(&exp, None).unwrap();
    let mean = format!("{:.6}", agg.mean_r);

    let sweep_lines: Vec<&str> = sweep_out.lines().collect();
    assert_eq!(
        sweep_lines[0],
        "vc_frac,algo,iterations,mean_R,sd_R,n_trials,mean_wall_ms"
    );
    assert!(sweep_lines[1].starts_with(&format!("0.5,iti,1,{mean},")));
    assert!(eval_out
        .lines()
        .nth(1)
        .unwrap()
        .contains(&format!(",{mean},")));
}

#[test]
fn verify_small_suites() {
    let out = ok(&["verify", "thm-3.7", "--max-n", "6"]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.ends_with(",pass")), "{out}");

    let out = ok(&["verify", "tv-bound", "--l", "2", "--k", "100"]);
    assert_eq!(
        out.lines().next().unwrap(),
        "operation,parameters,statistic,bound,pass"
    );
    let row = out
        .lines()
        .find(|r| r.contains(",0.3,"))
        .expect("row against 0.3");
    let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!(value < 0.3);
}

#[test]
fn verify_reports_failures_as_rows() {
    let out = casctopo(&["verify", "appendix-b", "--max-n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|r| r.ends_with(",fail")));
    assert_eq!(
        code(&["verify", "appendix-b", "--max-n", "6", "--strict"]),
        1
    );
}

#[test]
fn scoring_keeps_vertex_ids() {
    // The estimate never touches vertex 0, so a dense relabelling would shift every id.
    let dir = TempDir::new().unwrap();
    let (est, truth) = (p(&dir, "est.el"), p(&dir, "truth.el"));
    std::fs::write(&truth, "0 1\n1 2\n2 3\n").unwrap();
    std::fs::write(&est, "1 2\n2 3\n").unwrap();
    let r: f64 = ok(&["evaluate", "--estimated", s(&est), "--truth", s(&truth)])
        .trim()
        .parse()
        .unwrap();
    assert!((r - (1.0 - 1.0 / 6.0)).abs() < 1e-6, "{r}");
}
