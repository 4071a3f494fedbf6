use cascade_topology::diffusion::{DelayFamily, DelaySpec};
use cascade_topology::generators::gen_er_graph;
use cascade_topology::graph::Graph;
use cascade_topology::seed;
use cascade_topology::theory::{
    default_eps_grid, edge_vs_path_distribution_distinct, ks_statistic, min_tv_check, moment_gap,
    path_moment_inequality, tv_bound_at, tv_upper_bound, DetourSurvival,
};
use proptest::prelude::*;
use rand::Rng as _;

fn exp1() -> DelaySpec {
    DelaySpec::homogeneous(DelayFamily::exponential(1.0)).unwrap()
}

#[test]
fn triangle_moment_gap() {
    let g = Graph::cycle(3).unwrap();
    let gamma2 = DetourSurvival::Gamma {
        shape: 2.0,
        scale: 1.0,
    };
    let r1 = moment_gap(&g, 0, 1, &exp1(), 1, 1.0, 0.5, 50_000, 3, gamma2).unwrap();
    // eps1 * F(eps0 - eps1) * Hbar(eps0) with F = Exp(1) cdf and Hbar the Gamma(2, 1) survival.
    let closed = 0.5 * (1.0 - (-0.5f64).exp()) * 2.0 * (-1.0f64).exp();
    assert!(
        (r1.bound - closed).abs() < 1e-12,
        "{} vs {closed}",
        r1.bound
    );
    assert!(r1.gap > 0.0 && r1.pass);
    // E[Y] = 2 and E[min(X, Y)] = 3/4.
    assert!((r1.gap - 1.25).abs() < 4.0 * r1.std_error, "{r1:?}");

    let r2 = moment_gap(&g, 0, 1, &exp1(), 2, 1.0, 0.5, 50_000, 3, gamma2).unwrap();
    assert!(r2.pass);
    assert!(r2.gap > r1.bound);
    assert!(r2.moment_without_edge > r2.moment_with_edge);

    let emp = moment_gap(
        &g,
        0,
        1,
        &exp1(),
        1,
        1.0,
        0.5,
        50_000,
        3,
        DetourSurvival::Empirical,
    )
    .unwrap();
    assert!((emp.bound - closed).abs() < 0.01);
    assert!(moment_gap(&Graph::path(3), 0, 1, &exp1(), 1, 1.0, 0.5, 100, 3, gamma2).is_err());
}

#[test]
fn path_moment_examples() {
    let g = gen_er_graph(20, 4.0, 1).unwrap();
    // w = u: Jensen.
    for k in 1..=3 {
        let r = path_moment_inequality(&g, 0, 5, 0, &exp1(), k, 20_000, 4).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.lhs <= r.rhs);
    }
    // Middle of a path: the two sides cancel.
    let p = Graph::path(3);
    let r = path_moment_inequality(&p, 0, 2, 1, &exp1(), 1, 20_000, 5).unwrap();
    assert!(r.lhs < 4.0 * r.std_error, "{r:?}");
    assert!((r.rhs - 2.0).abs() < 0.05);
    assert!(r.holds);
}

#[test]
fn path_moment_on_random_triples() {
    let mut rng = seed::rng(6);
    for t in 0..30 {
        let g = gen_er_graph(20, 4.0, seed::derive(7, t)).unwrap();
        let u = rng.random_range(0..20);
        let v = (u + rng.random_range(1..20)) % 20;
        let w = rng.random_range(0..20);
        for k in 1..=3 {
            let r =
                path_moment_inequality(&g, u, v, w, &exp1(), k, 2000, seed::derive(8, t)).unwrap();
            assert!(r.holds, "trial {t} k={k}: {r:?}");
        }
    }
}

/// The bound for one epsilon, written out for `l = 2`.
fn two_edge_bound(k: i32, eps: f64) -> f64 {
    ((-eps).exp() * (1.0 + eps)).powi(k) + 1.0 - (-eps).exp()
}

#[test]
fn tv_bound_examples() {
    let grid = default_eps_grid();
    assert!(tv_upper_bound(2, 100, &grid).unwrap() < 0.3);
    // Fine-grid oracle over the same epsilon range.
    let fine = |k: i32| {
        let (a, b) = (1e-4f64.ln(), 10f64.ln());
        let m = 1_000_000;
        (0..=m)
            .map(|i| two_edge_bound(k, (a + (b - a) * i as f64 / m as f64).exp()))
            .fold(f64::INFINITY, f64::min)
    };
    assert!((tv_upper_bound(2, 1, &grid).unwrap() - fine(1)).abs() < 1e-6);
    assert!((tv_upper_bound(2, 100, &grid).unwrap() - fine(100)).abs() < 1e-3);
    for eps in [1e-3, 0.1, 1.0, 5.0] {
        assert!((tv_bound_at(2, 7, eps) - two_edge_bound(7, eps)).abs() < 1e-12);
    }
    assert!(tv_upper_bound(0, 1, &grid).is_err());
    assert!(tv_upper_bound(2, 1, &[]).is_err());
}

proptest! {
    #[test]
    fn tv_bound_is_at_most_one_and_monotone(l in 1u32..8, k in 1u32..200, eps in 1e-4f64..10.0) {
        let grid = default_eps_grid();
        let b = tv_upper_bound(l, k, &grid).unwrap();
        // The first grid point contributes at most 1 + grid[0].
        prop_assert!(b <= 1.0 + grid[0]);
        prop_assert!(tv_bound_at(l, k + 1, eps) <= tv_bound_at(l, k, eps));
        prop_assert!(tv_upper_bound(l, k + 1, &grid).unwrap() <= b);
    }
}

#[test]
fn ks_examples() {
    let e = DelayFamily::exponential(1.0);
    let two = edge_vs_path_distribution_distinct(2, &e, 100_000, 0.01, 9).unwrap();
    assert!(two.reject, "{two:?}");
    let same = edge_vs_path_distribution_distinct(0, &e, 100_000, 0.01, 9).unwrap();
    assert!(!same.reject, "{same:?}");
    let five = edge_vs_path_distribution_distinct(5, &e, 100_000, 0.01, 9).unwrap();
    assert!(five.statistic < two.statistic);
    assert!(edge_vs_path_distribution_distinct(1, &e, 10, 0.01, 9).is_err());
    assert_eq!(ks_statistic(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
    assert_eq!(ks_statistic(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
}

#[test]
fn min_tv_bound_on_exponential_and_gamma_pairs() {
    let pairs = [
        (DelayFamily::exponential(1.0), DelayFamily::exponential(1.0)),
        (
            DelayFamily::exponential(1.0),
            DelayFamily::Gamma {
                shape: 2.0,
                scale: 1.0,
            },
        ),
        (
            DelayFamily::exponential(0.5),
            DelayFamily::Gamma {
                shape: 3.0,
                scale: 2.0,
            },
        ),
        (
            DelayFamily::Gamma {
                shape: 2.0,
                scale: 1.0,
            },
            DelayFamily::exponential(3.0),
        ),
    ];
    for (i, (x, y)) in pairs.iter().enumerate() {
        let r = min_tv_check(x, y, 200_000, 100, i as u64).unwrap();
        assert!(r.holds, "{x} / {y}: {r:?}");
        assert!(r.bound <= 1.0 + x.cdf(1e-4));
    }
}
