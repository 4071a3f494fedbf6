use cascade_topology::diffusion::{
    make_heterogeneous, parse_cascades, simulate_cascade, write_cascades, Cascade, DelayFamily,
    DelayMode, DelaySpec, Simulator,
};
use cascade_topology::generators::{gen_er_graph, gen_er_tree};
use cascade_topology::graph::{DistanceTable, Graph};
use cascade_topology::seed;
use proptest::prelude::*;
use std::path::Path;

fn exp1() -> DelaySpec {
    DelaySpec::homogeneous(DelayFamily::exponential(1.0)).unwrap()
}

/// Composite Simpson rule on `[0, hi]`.
fn simpson(f: impl Fn(f64) -> f64, hi: f64, steps: usize) -> f64 {
    let h = hi / steps as f64;
    let mut acc = f(0.0) + f(hi);
    for i in 1..steps {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn triangle_race_matches_integration() {
    // T_u(v) = min(X, Y1 + Y2); E = integral of P(X > t) P(Y1 + Y2 > t).
    let survival = |t: f64| (-t).exp() * (1.0 + t) * (-t).exp();
    let expected = simpson(survival, 40.0, 20_000);
    assert!((expected - 0.75).abs() < 1e-9);

    let g = Graph::cycle(3).unwrap();
    let sim = Simulator::new(&g, &exp1()).unwrap();
    let mut rng = seed::rng(17);
    let runs = 100_000;
    let mut sum = 0.0;
    let mut sq = 0.0;
    for _ in 0..runs {
        let t = sim.run(0, &mut rng, None).unwrap().time(1).unwrap();
        sum += t;
        sq += t * t;
    }
    let mean = sum / runs as f64;
    let se = ((sq / runs as f64 - mean * mean) / runs as f64).sqrt();
    assert!(
        (mean - expected).abs() < 4.0 * se,
        "mean {mean}, expected {expected}, se {se}"
    );
}

#[test]
fn deterministic_delays_give_hops() {
    let g = gen_er_graph(60, 4.0, 3).unwrap();
    let spec = DelaySpec::homogeneous(DelayFamily::Deterministic { value: 1.0 }).unwrap();
    let d = DistanceTable::all_pairs(&g).unwrap();
    for s in [0, 17, 59] {
        let c = simulate_cascade(&g, s, &spec, 1, None).unwrap();
        assert_eq!(c.time(s), Some(0.0));
        for v in 0..g.n() {
            assert_eq!(c.time(v), d.get(s, v).map(f64::from));
        }
    }
}

#[test]
fn averaging_examples() {
    let mut a = Cascade::new(0, vec![Some(0.0), Some(2.0), None]).unwrap();
    let same = a.clone();
    let mut b = a.clone();
    b.average_into(&same).unwrap();
    assert_eq!(b.times(), a.times());
    assert_eq!(b.merged(), 2);

    let fresh = Cascade::new(0, vec![Some(0.0), Some(4.0), Some(1.5)]).unwrap();
    a.average_into(&fresh).unwrap();
    assert_eq!(a.times(), &[Some(0.0), Some(3.0), Some(1.5)]);
    assert_eq!(a.merged(), 2);

    let other = Cascade::new(1, vec![Some(1.0), Some(0.0), None]).unwrap();
    assert!(a.average_into(&other).is_err());
}

#[test]
fn averaging_shrinks_variance() {
    let g = gen_er_tree(30, 4).unwrap();
    let sim = Simulator::new(&g, &exp1()).unwrap();
    let mut rng = seed::rng(5);
    let reps = 2000;
    let vertex = 29;
    let mut var_at = |k: usize| {
        let samples: Vec<f64> = (0..reps)
            .map(|_| {
                let mut acc = sim.run(0, &mut rng, None).unwrap();
                for _ in 1..k {
                    acc.average_into(&sim.run(0, &mut rng, None).unwrap())
                        .unwrap();
                }
                acc.time(vertex).unwrap()
            })
            .collect();
        let m = samples.iter().sum::<f64>() / reps as f64;
        samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (reps - 1) as f64
    };
    let v1 = var_at(1);
    for k in [4, 16] {
        let ratio = var_at(k) * k as f64 / v1;
        assert!((ratio - 1.0).abs() < 0.2, "k={k}: k*var/var1 = {ratio}");
    }
}

#[test]
fn heterogeneous_moments() {
    let g = gen_er_graph(500, 4.0, 8).unwrap();
    assert_eq!(g.edge_count(), 1000);
    for s in 0..20 {
        let spec = make_heterogeneous(&g, &DelayFamily::exponential(1.0), 0.5, 1.5, s).unwrap();
        assert!((0.95..=1.05).contains(&spec.mu1()), "mu1 {}", spec.mu1());
        let DelayMode::PerEdge(laws) = spec.mode() else {
            panic!("expected per-edge laws")
        };
        let means: Vec<f64> = laws
            .values()
            .map(|f| match f {
                DelayFamily::Exponential { mean } => *mean,
                other => panic!("unexpected law {other:?}"),
            })
            .collect();
        assert!(means.iter().all(|m| (0.5..=1.5).contains(m)));
        let mu1 = means.iter().sum::<f64>() / means.len() as f64;
        let mu2 = means.iter().map(|m| 2.0 * m * m).sum::<f64>() / means.len() as f64;
        assert!((spec.mu1() - mu1).abs() < 1e-9);
        assert!((spec.mu2() - mu2).abs() < 1e-9);
    }
    let flat = make_heterogeneous(&g, &DelayFamily::exponential(3.0), 1.0, 1.0, 0).unwrap();
    assert_eq!(flat.mu1(), 1.0);
    assert!(make_heterogeneous(&g, &DelayFamily::exponential(1.0), 1.5, 0.5, 0).is_err());
}

#[test]
fn declared_moment_examples() {
    let spec = exp1();
    assert_eq!(spec.declared_moment(1).unwrap(), 1.0);
    assert_eq!(spec.declared_moment(2).unwrap(), 2.0);
    let mix = DelaySpec::homogeneous(DelayFamily::bimodal(3.0, 7.0, 1.0)).unwrap();
    assert!((mix.mu1() - 5.0).abs() < 1e-12);
    // 0.5 (9 + 1) + 0.5 (49 + 1)
    assert!((mix.mu2() - 30.0).abs() < 1e-12);
    let gamma = DelaySpec::homogeneous(DelayFamily::Gamma {
        shape: 2.0,
        scale: 1.5,
    })
    .unwrap();
    assert!((gamma.mu1() - 3.0).abs() < 1e-12);
    assert!((gamma.mu2() - 2.0 * 3.0 * 1.5 * 1.5).abs() < 1e-12);
}

#[test]
fn sample_means_match_declared() {
    let fams = [
        DelayFamily::exponential(2.0),
        DelayFamily::Gamma {
            shape: 3.0,
            scale: 0.5,
        },
        DelayFamily::Normal { mean: 5.0, sd: 1.0 },
        DelayFamily::bimodal(3.0, 7.0, 1.0),
    ];
    let mut rng = seed::rng(21);
    for f in fams {
        let k = 200_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..k {
            let x = f.sample(&mut rng);
            assert!(x > 0.0 && x.is_finite());
            s1 += x;
            s2 += x * x;
        }
        let m1 = f.raw_moment(1).unwrap();
        let m2 = f.raw_moment(2).unwrap();
        assert!((s1 / k as f64 - m1).abs() < 0.01 * m1, "{f}: mean");
        assert!((s2 / k as f64 - m2).abs() < 0.02 * m2, "{f}: second moment");
    }
}

#[test]
fn horizon_censors() {
    let g = Graph::path(6);
    let spec = DelaySpec::homogeneous(DelayFamily::Deterministic { value: 1.0 }).unwrap();
    let c = simulate_cascade(&g, 0, &spec, 0, Some(2.5)).unwrap();
    assert_eq!(c.coverage(), 3);
    assert!(!c.is_full());
    assert_eq!(c.time(3), None);
    assert_eq!(c.t_min(), Some(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arrivals_are_a_shortest_path_fixpoint(n in 2usize..40, s in any::<u64>()) {
        let g = gen_er_graph(n, (n as f64 - 1.0).min(3.0), s).unwrap();
        let sim = Simulator::new(&g, &exp1()).unwrap();
        let delays = sim.sample_delays(&mut seed::rng(s));
        let t = sim.arrival_times(0, &delays, None);
        prop_assert_eq!(t[0], 0.0);
        for &(u, v) in g.edges() {
            let e = sim.edge_index(u, v).unwrap();
            prop_assert!(t[v] <= t[u] + delays[e] + 1e-12);
            prop_assert!(t[u] <= t[v] + delays[e] + 1e-12);
        }
        // Every non-source vertex is reached through some tight edge.
        for v in 1..n {
            let tight = g.neighbors(v).iter().any(|&w| {
                let e = sim.edge_index(w, v).unwrap();
                (t[w] + delays[e] - t[v]).abs() < 1e-9
            });
            prop_assert!(tight);
        }
    }

    #[test]
    fn removing_an_edge_never_speeds_arrival(n in 3usize..40, s in any::<u64>(), pick in any::<usize>()) {
        let g = gen_er_graph(n, (n as f64 - 1.0).min(4.0), s).unwrap();
        let sim = Simulator::new(&g, &exp1()).unwrap();
        let delays = sim.sample_delays(&mut seed::rng(s ^ 1));
        let e = pick % g.edge_count();
        let with = sim.arrival_times(0, &delays, None);
        let without = sim.arrival_times(0, &delays, Some(e));
        for v in 0..n {
            prop_assert!(with[v] <= without[v]);
        }
    }

    #[test]
    fn cascades_reload_bit_exact(n in 2usize..30, s in any::<u64>(), h in proptest::option::of(0.5f64..3.0)) {
        let g = gen_er_tree(n, s).unwrap();
        let spec = DelaySpec::homogeneous(DelayFamily::Gamma { shape: 0.7, scale: 1.3 }).unwrap();
        let cs: Vec<Cascade> = (0..3)
            .map(|i| simulate_cascade(&g, i % n, &spec, seed::derive(s, i as u64), h).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_cascades(&cs, &mut buf).unwrap();
        let back = parse_cascades(std::str::from_utf8(&buf).unwrap(), Path::new("mem"), None).unwrap();
        prop_assert_eq!(back.len(), cs.len());
        for (a, b) in cs.iter().zip(&back) {
            prop_assert_eq!(a.source(), b.source());
            for v in 0..n {
                prop_assert_eq!(a.time(v).map(f64::to_bits), b.time(v).map(f64::to_bits));
            }
        }
    }

    #[test]
    fn simulation_is_reproducible(n in 2usize..40, s in any::<u64>(), src in any::<usize>()) {
        let g = gen_er_tree(n, s).unwrap();
        let spec = DelaySpec::homogeneous(DelayFamily::bimodal(3.0, 7.0, 1.0)).unwrap();
        let a = simulate_cascade(&g, src % n, &spec, s, None).unwrap();
        let b = simulate_cascade(&g, src % n, &spec, s, None).unwrap();
        prop_assert_eq!(a, b);
    }
}
