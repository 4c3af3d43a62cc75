use approx::assert_relative_eq;
use proptest::prelude::*;
use starlab::model::*;
use starlab::quadrature::uniform_grid;
use starlab_testkit as oracle;
use std::f64::consts::PI;

fn finite(c: f64) -> ModelParams<f64> {
    ModelParams::units(LightSpeed::Finite(c)).unwrap()
}

fn limit() -> ModelParams<f64> {
    ModelParams::units(LightSpeed::Infinite).unwrap()
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn closed_forms_match_momentum_quadrature_on_log_grid() {
    let mut worst: f64 = 0.0;
    for &rho in &log_space(1e-6, 1e3, 20) {
        for &c in &log_space(1.0, 1e4, 20) {
            let p = finite(c);
            let j = kinetic_density(rho, &p);
            let j_ref = oracle::kinetic_density_quadrature(rho, 1.0, 1.0, Some(c));
            let jb = kinetic_density_bar(rho, &p).unwrap();
            let jb_ref = oracle::kinetic_density_bar_quadrature(rho, 1.0, 1.0, c);
            worst = worst
                .max(((j - j_ref) / j_ref).abs())
                .max(((jb - jb_ref) / jb_ref).abs());
        }
    }
    assert!(worst <= 1e-10, "worst relative error {worst:e}");
}

#[test]
fn unit_point_matches_quadrature() {
    let p = finite(2.0);
    let j = kinetic_density(1.0, &p);
    assert_relative_eq!(
        j,
        oracle::kinetic_density_quadrature(1.0, 1.0, 1.0, Some(2.0)),
        max_relative = 1e-10
    );
    let jb = kinetic_density_bar(1.0, &p).unwrap();
    assert_relative_eq!(
        jb,
        oracle::kinetic_density_bar_quadrature(1.0, 1.0, 1.0, 2.0),
        max_relative = 1e-10
    );
}

#[test]
fn limit_density_matches_quadrature_for_other_constants() {
    let p = ModelParams::new(1.7, 2.0, 0.3, LightSpeed::Infinite).unwrap();
    for rho in [1e-4, 0.2, 30.0] {
        let expected = oracle::kinetic_density_quadrature(rho, 1.7, 2.0, None);
        assert_relative_eq!(kinetic_density(rho, &p), expected, max_relative = 1e-12);
    }
    let p = ModelParams::new(1.7, 2.0, 0.3, LightSpeed::Finite(5.0)).unwrap();
    for rho in [1e-4, 0.2, 30.0] {
        let expected = oracle::kinetic_density_quadrature(rho, 1.7, 2.0, Some(5.0));
        assert_relative_eq!(kinetic_density(rho, &p), expected, max_relative = 1e-10);
    }
}

#[test]
fn gap_ratio_at_unit_density_matches_oracle() {
    let gap = |c: f64| {
        oracle::kinetic_density_quadrature(1.0, 1.0, 1.0, None)
            - oracle::kinetic_density_quadrature(1.0, 1.0, 1.0, Some(c))
    };
    let ratio = gap(10.0) / gap(20.0);
    let ours = (kinetic_density(1.0, &limit()) - kinetic_density(1.0, &finite(10.0)))
        / (kinetic_density(1.0, &limit()) - kinetic_density(1.0, &finite(20.0)));
    assert_relative_eq!(ours, ratio, max_relative = 1e-8);
    assert!((ratio - 3.836111).abs() < 1e-5);
}

#[test]
fn seeded_inequality_suite_has_no_violations() {
    let report = dispersion_bound_check(100_000, 42, &BoundRanges::default()).unwrap();
    assert_eq!(report.violations, 0, "{report:?}");
    assert!(report.worst_violation <= 1e-12);
}

#[test]
fn uniform_ball_potential_and_energy() {
    let ball = DensityProfile::uniform_ball(1.0, 1.0, 401).unwrap();
    let v = newton_potential(&ball).unwrap();
    assert_relative_eq!(v.values()[0], 2.0 * PI, max_relative = 1e-13);
    assert_relative_eq!(v.values()[200], 11.0 * PI / 6.0, max_relative = 1e-13);
    for r in [1.0, 2.0, 10.0] {
        assert_relative_eq!(v.at(r) * r, 4.0 * PI / 3.0, max_relative = 1e-13);
    }
    let unit = DensityProfile::uniform_ball(3.0 / (4.0 * PI), 1.0, 2001).unwrap();
    assert_relative_eq!(coulomb_energy(&unit).unwrap(), 0.6, max_relative = 1e-12);
}

fn smooth_profile(nodes: usize) -> DensityProfile<f64> {
    let grid: Vec<f64> = uniform_grid(1.5, nodes);
    let values = grid
        .iter()
        .map(|&r| (1.0f64 - (r / 1.2).powi(2)).max(0.0).powf(1.5))
        .collect();
    DensityProfile::new(grid, values).unwrap()
}

#[test]
fn coulomb_energy_scales_linearly_under_dilation() {
    let p = smooth_profile(3001);
    let d = coulomb_energy(&p).unwrap();
    for lambda in [0.5f64, 2.0, 7.0] {
        let scaled = p.rescaled(lambda.powi(3), lambda).unwrap();
        assert_relative_eq!(coulomb_energy(&scaled).unwrap(), lambda * d, max_relative = 1e-8);
    }
}

#[test]
fn potential_respects_newton_tail() {
    let p = smooth_profile(1501);
    let v = newton_potential(&p).unwrap();
    let n = p.mass();
    for (&r, &val) in p.grid().iter().zip(v.values()).skip(1) {
        assert!(val * r <= n * (1.0 + 1e-12));
        if r >= p.support_radius() {
            assert_relative_eq!(val * r, n, max_relative = 1e-10);
        }
    }
    assert!(v.values().windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn energy_sandwich_on_fixed_profile() {
    let p = smooth_profile(1201);
    let e_inf = total_energy(&p, &limit()).unwrap();
    for c in [1.5f64, 10.0, 300.0] {
        let params = finite(c);
        let e_c = total_energy(&p, &params).unwrap();
        let (sharp, coarse) = energy_gap_bounds(&p, &params).unwrap();
        assert!(e_inf.total >= e_c.total);
        assert!(e_c.total >= e_inf.total - sharp);
        assert!(sharp <= coarse);
        assert_eq!(e_c.total, e_c.kinetic - e_c.coulomb);
    }
}

#[test]
fn gns_ratio_bounds_the_critical_mass() {
    let p = smooth_profile(2001);
    let ratio = gns_ratio(&p, &limit()).unwrap();
    let n_star = oracle::ultrarelativistic_mass(1.0, 1.0, 1.0);
    assert!(ratio.powf(1.5) >= n_star);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn dispersion_round_trip(w in 0.0f64..1e4, c in 0.5f64..1e4) {
        let p = finite(c);
        let rho = inverse_dispersion(w, &p).unwrap();
        let back = dispersion(p.fermi_momentum(rho), &p);
        prop_assert!((back - w).abs() <= 1e-12 * w.max(f64::MIN_POSITIVE) * 4.0, "{back} vs {w}");
    }

    #[test]
    fn inverse_dispersion_is_monotone(w in 0.0f64..1e3, dw in 1e-6f64..1.0, c in 1.0f64..100.0) {
        let p = finite(c);
        prop_assert!(inverse_dispersion(w + dw, &p).unwrap() > inverse_dispersion(w, &p).unwrap());
    }

    #[test]
    fn dispersion_sandwich(p in 1e-6f64..1e6, c in 1.0f64..1e5) {
        let params = finite(c);
        let gap = p * p / 2.0 - dispersion(p, &params);
        let lo = p.powi(4) / (8.0 * (p * p + 1.0) * c * c);
        let hi = p.powi(4) / (8.0 * c * c);
        // The subtraction above costs digits; allow for its rounding.
        let slack = 4.0 * f64::EPSILON * p * p;
        prop_assert!(gap >= lo - slack && gap <= hi + slack);
    }

    #[test]
    fn operator_lower_bound(p in 0.0f64..1e5, delta in 1e-6f64..1e3, c in 0.1f64..1e4) {
        let params = finite(c);
        let slope = (2.0 * delta.sqrt() / (2.0 * 5f64.sqrt()).sqrt()).min(0.5 * c);
        prop_assert!(dispersion(p, &params) + delta >= slope * p * (1.0 - 1e-12));
    }

    #[test]
    fn defect_is_nonnegative(rho in 0.0f64..1e6, c in 0.5f64..1e4) {
        prop_assert!(kinetic_defect(rho, &finite(c)).unwrap() >= 0.0);
    }

    #[test]
    fn kinetic_density_is_convex(rho in 1e-6f64..1e3, c in 1.0f64..1e3) {
        let p = finite(c);
        let h = rho * 1e-3;
        let second = kinetic_density(rho + h, &p) - 2.0 * kinetic_density(rho, &p) + kinetic_density(rho - h, &p);
        prop_assert!(second >= -1e-12 * kinetic_density(rho, &p));
    }

    #[test]
    fn gns_running_minimum_never_increases(widths in proptest::collection::vec(0.2f64..3.0, 1..6)) {
        let mut tracker = GnsTracker::new();
        let mut last = f64::INFINITY;
        for w in widths {
            let grid: Vec<f64> = uniform_grid(w, 401);
            let values = grid.iter().map(|&r| (1.0 - (r / w).powi(2)).powf(1.0 + w)).collect();
            let prof = DensityProfile::new(grid, values).unwrap();
            let best = tracker.observe(&prof, &limit()).unwrap();
            prop_assert!(best <= last && best.is_finite() && best > 0.0);
            last = best;
        }
    }
}
