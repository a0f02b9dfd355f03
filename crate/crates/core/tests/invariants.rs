mod common;

use nlse_core::asym_box::{box_tf_estimate, solve_layer_ode};
use nlse_core::asym_harmonic::{tf_estimate, tf_profile_eval, unit_ball_volume};
use nlse_core::quad::gauss_legendre_composite;
use nlse_core::regimes::{
    classify_bifurcation, classify_existence, estimate_best_constant, gn_quotient, BestConstant,
    BifurcationClass, Clause, Verdict,
};
use nlse_core::{chemical_potential, energy, quad_norm_sq, FlowConfig, Grid, Params, PotentialSpec, WaveFunction};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Smooth random profile on a 1D or 2D grid built from a few Gaussian bumps.
fn bumps(grid: &Grid, bumps: &[(f64, f64, f64, f64)]) -> WaveFunction {
    let c = grid.center();
    let half = 0.5 * grid.axis(0).length();
    WaveFunction::from_fn(grid.clone(), |x| {
        bumps
            .iter()
            .map(|&(a, cx, cy, w)| {
                let dx = x[0] - c[0] - cx * half * 0.3;
                let dy = if x.len() > 1 { x[1] - c[1] - cy * half * 0.3 } else { 0.0 };
                a * (-(dx * dx + dy * dy) / (w * w)).exp()
            })
            .sum()
    })
    .unwrap()
}

fn bump_strategy() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((0.2f64..2.0, -1.0f64..1.0, -1.0f64..1.0, 0.5f64..2.0), 1..4)
}

fn potential_strategy() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![
        (0.5f64..4.0).prop_map(PotentialSpec::harmonic),
        Just(PotentialSpec::Box),
        (0.5f64..2.0, 0.0f64..5.0, 0.5f64..4.0).prop_map(|(g, a, k)| PotentialSpec::lattice(g, a, k)),
    ]
}

fn grid_for(dim: usize, v: &PotentialSpec) -> Grid {
    let n = if dim == 1 { 127 } else { 31 };
    match v {
        PotentialSpec::Box => Grid::boxed(&vec![4.0; dim], n).unwrap(),
        _ => Grid::centered(dim, 5.0, n).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalized_profiles_have_unit_norm(dim in 1usize..=2, b in bump_strategy()) {
        let grid = Grid::centered(dim, 6.0, if dim == 1 { 255 } else { 63 }).unwrap();
        let phi = bumps(&grid, &b).normalized().unwrap();
        prop_assert!((quad_norm_sq(&phi).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mu_minus_energy_is_interaction_gap(
        dim in 1usize..=2,
        b in bump_strategy(),
        v in potential_strategy(),
        beta in 0.0f64..100.0,
        sigma in 0.0f64..5.0,
    ) {
        let grid = grid_for(dim, &v);
        let phi = bumps(&grid, &b).normalized().unwrap();
        let p = Params::new(beta, sigma).unwrap();
        let gap = chemical_potential(&phi, &v, &p).unwrap() - energy(&phi, &v, &p).unwrap();
        let w = grid.cell_volume();
        let lq: f64 = w * phi.values().iter().map(|x| x.abs().powf(2.0 * sigma + 2.0)).sum::<f64>();
        let expect = sigma * beta / (sigma + 1.0) * lq;
        prop_assert!(gap >= 0.0);
        prop_assert!((gap - expect).abs() <= 1e-12 * (1.0 + expect), "{} vs {}", gap, expect);
    }

    #[test]
    fn energy_is_reflection_invariant(
        dim in 1usize..=2,
        b in bump_strategy(),
        v in potential_strategy(),
        beta in -5.0f64..50.0,
        sigma in 0.5f64..3.0,
    ) {
        let grid = grid_for(dim, &v);
        let phi = bumps(&grid, &b);
        let vals = phi.values();
        let reflected: Vec<f64> = (0..vals.len()).map(|i| vals[grid.reflect(i)]).collect();
        let psi = WaveFunction::new(grid.clone(), reflected).unwrap();
        let p = Params::new(beta, sigma).unwrap();
        let (e1, e2) = (energy(&phi, &v, &p).unwrap(), energy(&psi, &v, &p).unwrap());
        prop_assert!((e1 - e2).abs() <= 1e-12 * e1.abs().max(1.0), "{} vs {}", e1, e2);
    }

    #[test]
    fn sigma_zero_adds_beta(
        dim in 1usize..=2,
        b in bump_strategy(),
        v in potential_strategy(),
        beta in -10.0f64..10.0,
    ) {
        let grid = grid_for(dim, &v);
        let phi = bumps(&grid, &b).normalized().unwrap();
        let lin = energy(&phi, &v, &Params::new(0.0, 0.0).unwrap()).unwrap();
        let p = Params::new(beta, 0.0).unwrap();
        let e = energy(&phi, &v, &p).unwrap();
        prop_assert!((e - lin - beta).abs() <= 1e-12 * (1.0 + lin.abs() + beta.abs()));
        prop_assert_eq!(chemical_potential(&phi, &v, &p).unwrap(), e);
    }

    #[test]
    fn tf_energy_ratio_identity(d in 1usize..=3, sigma in 0.1f64..10.0, gamma in 0.1f64..10.0, beta in 1.0f64..1e4) {
        let tf = tf_estimate(d, gamma, beta, sigma).unwrap();
        let df = d as f64;
        let expect = (2.0 + df * sigma) / (2.0 * sigma + 2.0 + df * sigma);
        prop_assert!((tf.energy_tf / tf.mu_tf - expect).abs() <= 1e-14);
        prop_assert!((tf.support_radius - (2.0 * tf.mu_tf).sqrt() / gamma).abs() <= 1e-14 * tf.support_radius);
    }

    #[test]
    fn tf_profile_is_normalized(d in 1usize..=3, sigma in 0.2f64..8.0, gamma in 0.2f64..8.0, beta in 1.0f64..1e4) {
        let tf = tf_estimate(d, gamma, beta, sigma).unwrap();
        let r = tf.support_radius;
        let shell = d as f64 * unit_ball_volume(d);
        let f = |s: f64| {
            let mut x = [0.0; 3];
            x[0] = s;
            tf_profile_eval(&tf, &x[..d]).powi(2) * s.powi(d as i32 - 1)
        };
        // the integrand has an r^{1/sigma}-type edge, so refine toward the support radius
        let mut mass = 0.0;
        let mut a = 0.0;
        let mut b = 0.5 * r;
        for _ in 0..40 {
            mass += gauss_legendre_composite(&f, a, b, 8);
            a = b;
            b = r - 0.5 * (r - b);
        }
        mass += gauss_legendre_composite(&f, a, r, 8);
        let total = if d == 1 { 2.0 * mass } else { shell * mass };
        prop_assert!((total - 1.0).abs() <= 1e-8, "mass {}", total);
    }

    #[test]
    fn box_tf_ratio_is_sigma_plus_one(len in prop::collection::vec(0.2f64..5.0, 1..=3), beta in 0.1f64..1e4, sigma in 0.1f64..10.0) {
        let est = box_tf_estimate(&len, beta, sigma).unwrap();
        prop_assert!((est.mu / est.energy - (sigma + 1.0)).abs() <= 1e-13 * (sigma + 1.0));
    }

    #[test]
    fn classifier_is_total_and_deterministic(d in 1usize..=3, sigma in 0.01f64..5.0, beta in -100.0f64..100.0, cb in 1.0f64..20.0) {
        let bc = BestConstant { d, sigma, value: cb, method: "given".into() };
        let a = classify_existence(d, sigma, beta, Some(&bc)).unwrap();
        let b = classify_existence(d, sigma, beta, Some(&bc)).unwrap();
        prop_assert_eq!(a, b);
        let ds = d as f64 * sigma;
        let expect = if ds < 2.0 {
            if beta >= 0.0 { Verdict::ExistsUnique } else { Verdict::Exists }
        } else if beta >= 0.0 {
            Verdict::ExistsUnique
        } else {
            Verdict::NotExists
        };
        prop_assert_eq!(a.verdict, expect);
        let c = classify_existence(d, sigma, beta, None).unwrap();
        prop_assert!(!matches!(c.clause, Clause::CriticalUndetermined));
    }

    #[test]
    fn classifier_critical_line(sigma in prop::sample::select(vec![(1usize, 2.0f64), (2, 1.0)]), frac in -3.0f64..3.0, cb in 1.0f64..20.0) {
        let (d, s) = sigma;
        let bc = BestConstant { d, sigma: s, value: cb, method: "given".into() };
        let threshold = -(s + 1.0) / 2.0 * cb;
        let beta = frac * threshold.abs();
        let got = classify_existence(d, s, beta, Some(&bc)).unwrap();
        if beta > threshold {
            prop_assert_eq!(got.clause, Clause::CriticalAboveThreshold);
            prop_assert!(matches!(got.verdict, Verdict::Exists | Verdict::ExistsUnique));
        } else {
            prop_assert_eq!(got, nlse_core::regimes::ExistenceVerdict { verdict: Verdict::NotExists, clause: Clause::CriticalBelowThreshold });
        }
        if beta < 0.0 {
            let open = classify_existence(d, s, beta, None).unwrap();
            prop_assert_eq!(open.clause, Clause::CriticalUndetermined);
            let factor = match open.verdict {
                Verdict::ConditionalOnBestConstant { threshold_factor } => threshold_factor,
                other => panic!("unexpected verdict {other:?}"),
            };
            prop_assert!((factor + (s + 1.0) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bifurcation_classifier_is_total(
        peaks in prop::collection::vec(0.0f64..2.0, 0..8),
        widths in prop::collection::vec(0.0f64..2.0, 0..8),
        cell in 1e-4f64..1e-1,
    ) {
        let c = classify_bifurcation(&peaks, &widths, cell);
        prop_assert!(matches!(c, BifurcationClass::LinearLimit | BifurcationClass::FlatTop | BifurcationClass::Unresolved));
        if peaks.is_empty() || widths.is_empty() {
            prop_assert_eq!(c, BifurcationClass::Unresolved);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn layer_is_monotone_bounded_and_conservative(sigma in 0.2f64..20.0) {
        let lp = solve_layer_ode(sigma, 40.0).unwrap();
        let mut prev = (-1.0f64, -1.0f64);
        for (x, p, dp) in lp.samples() {
            prop_assert!(x > prev.0 && p > prev.1 || prev.0 < 0.0);
            prop_assert!((0.0..1.0).contains(&p));
            let fi = -0.5 * dp * dp + p.powf(2.0 * sigma + 2.0) / (sigma + 1.0) + sigma / (sigma + 1.0) - p * p;
            prop_assert!(fi.abs() <= 1e-8);
            prev = (x, p);
        }
        prop_assert!((lp.slope0 - (2.0 * sigma / (sigma + 1.0)).sqrt()).abs() <= 1e-14);
    }
}

fn cb_1d() -> &'static BestConstant {
    static CB: OnceLock<BestConstant> = OnceLock::new();
    CB.get_or_init(|| estimate_best_constant(1, 2.0).unwrap())
}

fn cb_2d() -> &'static BestConstant {
    static CB: OnceLock<BestConstant> = OnceLock::new();
    CB.get_or_init(|| estimate_best_constant(2, 1.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn best_constant_is_a_lower_bound(b in bump_strategy()) {
        let cb = cb_1d();
        let grid = Grid::centered(1, 12.0, 1023).unwrap();
        let q = gn_quotient(&bumps(&grid, &b), 2.0);
        prop_assert!(cb.value > 0.0);
        prop_assert!(q >= cb.value * (1.0 - 1e-10), "{} < {}", q, cb.value);

        let cb = cb_2d();
        let grid = Grid::centered(2, 12.0, 191).unwrap();
        let q = gn_quotient(&bumps(&grid, &b), 1.0);
        prop_assert!(q >= cb.value * (1.0 - 1e-10), "{} < {}", q, cb.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn flow_keeps_norm_descent_and_symmetry(
        v in potential_strategy(),
        beta in 0.0f64..50.0,
        sigma in 0.5f64..4.0,
        dt in 0.01f64..0.1,
    ) {
        let grid = grid_for(1, &v);
        let cfg = FlowConfig { dt: Some(dt), tol: 1e-9, ..FlowConfig::default() };
        let (r, a) = common::audited_solve(&grid, &v, &Params::new(beta, sigma).unwrap(), &cfg);
        let r = r.unwrap();
        prop_assert!(r.converged);
        prop_assert!(a.max_norm_dev <= 1e-12);
        prop_assert!(a.max_energy_rise <= 1e-12);
        prop_assert!(a.max_asymmetry <= 1e-10);
        prop_assert!(r.mu >= r.energy);
        prop_assert!(r.phi.values().iter().all(|&x| x >= -1e-12));
    }
}

#[test]
fn quadrature_is_second_order() {
    // box mode energy converges as h^2 toward pi^2/2
    let mut errs = Vec::new();
    for n in [31usize, 63, 127, 255] {
        let grid = Grid::boxed(&[1.0], n).unwrap();
        let phi = WaveFunction::from_fn(grid, |x| 2f64.sqrt() * (PI * x[0]).sin()).unwrap();
        let e = energy(&phi, &PotentialSpec::Box, &Params::new(0.0, 1.0).unwrap()).unwrap();
        errs.push((e - 0.5 * PI * PI).abs());
    }
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 3.5 && ratio < 4.5, "{errs:?}");
    }
    // and the norm of a normalized trap Gaussian converges at least as fast
    let mut errs = Vec::new();
    for n in [15usize, 31, 63, 127] {
        let grid = Grid::centered(1, 3.0, n).unwrap();
        let phi = WaveFunction::from_fn(grid, |x| {
            let c = (1.0 / PI).powf(0.25) * (-0.5 * x[0] * x[0]).exp();
            c * (1.0 - (x[0] / 3.0).powi(2))
        })
        .unwrap();
        let f = |x: f64| (-x * x).exp() * (1.0 - (x / 3.0).powi(2)).powi(2) / PI.sqrt();
        let exact = gauss_legendre_composite(&f, -3.0, 3.0, 200);
        errs.push((quad_norm_sq(&phi).unwrap() - exact).abs());
    }
    assert!(errs.windows(2).all(|w| w[0] / w[1] >= 3.5), "{errs:?}");
}
