mod common;

use common::{random_path, rng};
use locsko::sim::{ode_family, OdeSpec};
use locsko::timechange::{
    build_regularizing_g, clock, compose_check, globalize, in_continuity_set, time_change, GFunction, GSpec, Region,
    RegularizeOptions,
};
use locsko::StepPath;
use proptest::prelude::*;

fn rates() -> Vec<GFunction> {
    vec![
        GFunction::Constant(0.7),
        GFunction::custom(|a| 1.0 / (1.0 + a.iter().map(|v| v * v).sum::<f64>())),
        GFunction::custom(|a| 1.0 + a[0] * a[0]),
        GFunction::custom(|a| a[0].abs().min(1.0)),
        GSpec::Expr { expr: "2 + math::sin(x0)".into() }.try_into().unwrap(),
    ]
}

/// `∫_0^t ds / g(x_s)` by the midpoint rule on a uniform grid.
fn clock_by_quadrature(g: &GFunction, x: &StepPath, t: f64, n: usize) -> f64 {
    let h = t / n as f64;
    (0..n)
        .map(|i| {
            let s = (i as f64 + 0.5) * h;
            h / g.eval(x.eval_coords(s).unwrap()).unwrap()
        })
        .sum()
}

fn path(seed: u64, dim: usize) -> StepPath {
    random_path(&mut rng(seed), 5, dim, 2.0, 3.0, 0.4)
}

#[test]
fn clock_agrees_with_quadrature() {
    for seed in 0..200u64 {
        let x = path(seed, 1);
        for g in rates() {
            let c = clock(&g, &x).unwrap();
            let t = 0.9 * c.tau_inf.min(4.0);
            if t <= 0.0 {
                continue;
            }
            let q = clock_by_quadrature(&g, &x, t, 20_000);
            let a = c.a(t);
            assert!((a - q).abs() <= 1e-3 * a.max(1.0), "seed {seed}: clock {a} quadrature {q}");
        }
    }
}

#[test]
fn unit_rate_is_identity() {
    for seed in 0..100u64 {
        let x = path(seed, 2);
        assert_eq!(time_change(&GFunction::Constant(1.0), &x).unwrap(), x);
    }
}

#[test]
fn absorbing_rate_freezes_path() {
    let x = StepPath::scalar(&[(0.0, 2.0), (1.0, 0.0), (2.0, 3.0)], 4.0).unwrap();
    let y = time_change(&GFunction::custom(|a| a[0].abs()), &x).unwrap();
    // rate 2 on [0, 1) puts the absorbing segment at A = 1/2
    assert_eq!(y, StepPath::scalar(&[(0.0, 2.0), (0.5, 0.0)], f64::INFINITY).unwrap());
    let (_, rep) = globalize(&x, &GFunction::custom(|a| a[0].abs())).unwrap();
    assert_eq!(rep.explosion_time, None);
}

#[test]
fn regularizing_profile_for_exploding_family() {
    let template = OdeSpec { base_step: 0.02, growth: 0.1, ..OdeSpec::default() };
    let family = ode_family(&[1.5, 2.5, 4.0], &template).unwrap();
    let profile = build_regularizing_g(&family, &Region::Whole, &RegularizeOptions { n_max: 8, j_max: 40 }).unwrap();
    // φ is nondecreasing and vanishes at the cemetery
    assert_eq!(profile.phi(0.0), 0.0);
    let grid: Vec<f64> = (0..=400).map(|i| i as f64 * 0.005).collect();
    assert!(grid.windows(2).all(|w| profile.phi(w[0]) <= profile.phi(w[1])));
    assert!(profile.eta.windows(2).all(|w| w[1] <= w[0]));
    let g = GFunction::Radial(profile);
    for x in &family {
        let (_, rep) = globalize(x, &g).unwrap();
        assert!(rep.in_global_space);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_identity(seed in any::<u64>(), i in 0usize..5, j in 0usize..5, dim in 1usize..=2) {
        let gs = rates();
        let x = path(seed, dim);
        prop_assert!(compose_check(&gs[i], &gs[j], &x).unwrap());
    }

    #[test]
    fn values_follow_the_clock(seed in any::<u64>(), i in 0usize..5) {
        let g = &rates()[i];
        let x = path(seed, 1);
        let c = clock(g, &x).unwrap();
        let y = time_change(g, &x).unwrap();
        for k in 0..x.len() {
            let mid = 0.5 * (x.times()[k] + x.segment_end(k).min(x.times()[k] + 1.0));
            if mid < c.tau_inf {
                prop_assert_eq!(y.eval_coords(c.a(mid)), x.eval_coords(mid));
                prop_assert!((c.tau(c.a(mid)) - mid).abs() <= 1e-12 * mid.max(1.0));
            }
        }
    }

    #[test]
    fn bounded_rates_keep_infinite_lifetime(seed in any::<u64>(), i in 0usize..5, c in 0.1f64..10.0) {
        let x = path(seed, 1).with_xi(f64::INFINITY).unwrap();
        // every rate in the list except 1 + x^2 is bounded
        prop_assume!(i != 2);
        let g = GFunction::product(GFunction::Constant(c), rates()[i].clone());
        prop_assert!(time_change(&g, &x).unwrap().xi().is_infinite());
    }

    #[test]
    fn constant_rate_rescales_time(seed in any::<u64>(), c in 0.1f64..10.0) {
        let x = path(seed, 2);
        let y = time_change(&GFunction::Constant(c), &x).unwrap();
        prop_assert_eq!(y.values(), x.values());
        for (a, b) in y.times().iter().zip(x.times()) {
            prop_assert!((a - b / c).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn step_paths_lie_in_the_continuity_set(seed in any::<u64>(), i in 0usize..5) {
        prop_assert!(in_continuity_set(&rates()[i], &path(seed, 1)).unwrap());
    }

    #[test]
    fn gspec_round_trips(value in 0.0f64..100.0, index in 0usize..4) {
        for spec in [GSpec::Constant { value }, GSpec::Coordinate { index }, GSpec::Expr { expr: format!("{value} + r") }] {
            let text = serde_json::to_string(&spec).unwrap();
            prop_assert_eq!(serde_json::from_str::<GSpec>(&text).unwrap(), spec);
        }
    }
}
