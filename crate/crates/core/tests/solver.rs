use approx::assert_relative_eq;
use starlab::model::*;
use starlab::solver::*;
use starlab::StarError;
use starlab_testkit as oracle;
use std::f64::consts::PI;

fn params(c: Option<f64>) -> ModelParams<f64> {
    ModelParams::units(c.map_or(LightSpeed::Infinite, LightSpeed::Finite)).unwrap()
}

fn cfg() -> SolverConfig<f64> {
    SolverConfig::default()
}

#[test]
fn limit_star_matches_lane_emden_oracle() {
    let le = oracle::lane_emden_zero(1.5, 1e-4);
    assert!((le.xi1 - 3.65375).abs() < 1e-5);
    assert!((le.mass - 2.71406).abs() < 1e-5);
    let p = params(None);
    let sol = solve_star(&p, 1.0, &cfg()).unwrap();
    let a = natural_length(&p, sol.central_potential);
    let rho0 = density_from_potential(sol.central_potential, &p);
    assert_relative_eq!(sol.radius / a, le.xi1, max_relative = 1e-7);
    assert_relative_eq!(sol.mass / (4.0 * PI * rho0 * a.powi(3)), le.mass, max_relative = 1e-7);
}

#[test]
fn mass_bookkeeping_and_residuals() {
    for c in [None, Some(4.0), Some(8.0), Some(64.0)] {
        for n in [0.5, 1.0, 2.0] {
            let sol = solve_star(&params(c), n, &cfg()).unwrap();
            assert_relative_eq!(sol.mass, n, max_relative = 1e-9);
            assert_relative_eq!(sol.profile.mass(), n, max_relative = 1e-9);
            assert!(
                sol.relative_virial_residual() <= 1e-8,
                "virial {:e}",
                sol.relative_virial_residual()
            );
            assert!(
                sol.multiplier_residual <= 1e-8,
                "multiplier {:e}",
                sol.multiplier_residual
            );
            assert!(sol.boundary_residual <= 1e-10, "boundary {:e}", sol.boundary_residual);
            assert_eq!(sol.total_energy, sol.kinetic_energy - sol.coulomb_energy);
        }
    }
}

#[test]
fn limit_rescaling_reproduces_direct_solves() {
    let p = params(None);
    let base = solve_star(&p, 1.0, &cfg()).unwrap();
    for n in [0.25, 2.0, 10.0] {
        let direct = solve_star(&p, n, &cfg()).unwrap();
        let scaled = limit_rescale(&base, n).unwrap();
        for (a, b) in [
            (direct.total_energy, scaled.total_energy),
            (direct.mu, scaled.mu),
            (direct.radius, scaled.radius),
            (direct.sup_density(), scaled.sup_density()),
        ] {
            assert_relative_eq!(a, b, max_relative = 1e-8);
        }
    }
    assert!(matches!(
        limit_rescale(&solve_star(&params(Some(8.0)), 1.0, &cfg()).unwrap(), 2.0),
        Err(StarError::UnsupportedModel(_))
    ));
}

#[test]
fn central_potential_follows_homology() {
    // Limit homology: N ~ u0^(3/4), R ~ u0^(-1/4).
    let p = params(None);
    let (n1, r1) = shoot_mass(&p, 1.0, &cfg()).unwrap();
    let (n2, r2) = shoot_mass(&p, 16.0, &cfg()).unwrap();
    assert_relative_eq!(n2 / n1, 8.0, max_relative = 1e-8);
    assert_relative_eq!(r1 / r2, 2.0, max_relative = 1e-8);
}

#[test]
fn limit_multiplier_identity() {
    let p = params(None);
    for n in [0.5, 1.0, 3.0] {
        let sol = solve_star(&p, n, &cfg()).unwrap();
        assert_relative_eq!(
            sol.mu,
            7.0 * p.kappa() * sol.coulomb_energy / (6.0 * n),
            max_relative = 1e-8
        );
    }
}

#[test]
fn backends_agree() {
    for c in [None, Some(8.0)] {
        let p = params(c);
        let shot = solve_star(&p, 1.0, &cfg()).unwrap();
        let fixed = picard_solve(&p, 1.0, &cfg()).unwrap();
        let cmp = compare_backends(&shot, &fixed, &cfg()).unwrap();
        assert!(cmp.within(1e-8), "{cmp}");
        let both = solve_star(&p, 1.0, &cfg().with_backend(Backend::Both)).unwrap();
        assert_eq!(both.backend, Backend::Both);
    }
}

#[test]
fn picard_restarted_from_its_fixed_point_stops_quickly() {
    let p = params(Some(8.0));
    let first = picard_solve(&p, 1.0, &cfg()).unwrap();
    let again = picard_solve_from(&p, 1.0, &first.profile, &cfg()).unwrap();
    assert!(again.stats.iterations <= 2, "{} sweeps", again.stats.iterations);
    assert_relative_eq!(again.total_energy, first.total_energy, max_relative = 1e-9);
}

#[test]
fn finite_c_energy_sits_in_the_sandwich() {
    let limit = solve_star(&params(None), 1.0, &cfg()).unwrap();
    for c in [2.0, 8.0, 32.0] {
        let p = params(Some(c));
        let sol = solve_star(&p, 1.0, &cfg()).unwrap();
        let (sharp, coarse) = energy_gap_bounds(&sol.profile, &p).unwrap();
        let gap = limit.total_energy - sol.total_energy;
        let lower = limit.total_energy - total_energy(&limit.profile, &p).unwrap().total;
        assert!(gap > 0.0);
        assert!(gap >= lower * (1.0 - 1e-8), "c={c}: {gap} < {lower}");
        assert!(gap <= sharp * (1.0 + 1e-8), "c={c}: {gap} > {sharp}");
        assert!(sharp <= coarse);
    }
}

#[test]
fn results_are_stable_under_tighter_tolerances() {
    let p = params(Some(8.0));
    let loose = solve_star(&p, 1.0, &cfg()).unwrap();
    let mut tight = cfg();
    tight.ode_rtol /= 2.0;
    tight.ode_atol /= 2.0;
    tight.mass_tol /= 2.0;
    tight.event_tol /= 2.0;
    let tight = solve_star(&p, 1.0, &tight).unwrap();
    for (a, b) in [
        (loose.total_energy, tight.total_energy),
        (loose.mu, tight.mu),
        (loose.radius, tight.radius),
    ] {
        assert_relative_eq!(a, b, max_relative = 1e-9);
    }
}

#[test]
fn relativity_softens_the_star_monotonically() {
    let ladder = [None, Some(64.0), Some(16.0), Some(4.0), Some(2.0)];
    let sols: Vec<_> = ladder
        .iter()
        .map(|&c| solve_star(&params(c), 1.0, &cfg()).unwrap())
        .collect();
    for w in sols.windows(2) {
        assert!(w[1].total_energy < w[0].total_energy);
        assert!(w[1].radius < w[0].radius);
        assert!(w[1].sup_density() > w[0].sup_density());
    }
}

#[test]
fn critical_mass_matches_ultrarelativistic_oracle() {
    let expected = oracle::ultrarelativistic_mass(1.0, 1.0, 1.0);
    assert!((expected - 4.381).abs() < 2e-3);
    match solve_star(&params(Some(1.0)), 100.0, &cfg()) {
        Err(StarError::CriticalMassExceeded { largest_mass, .. }) => {
            assert!(largest_mass < expected * (1.0 + 1e-3));
            assert!(largest_mass > expected * (1.0 - 1e-2), "{largest_mass}");
        }
        other => panic!("expected critical mass error, got {other:?}"),
    }
    assert!(solve_star(&params(Some(1.0)), 4.0, &cfg()).is_ok());
}

#[test]
fn c_scaling_identity_holds() {
    let p = params(Some(1.0));
    for c in [4.0, 16.0] {
        assert!(verify_c_scaling(&p, 1.0, c, &cfg()).unwrap() <= 1e-8);
    }
}

#[test]
fn perturbed_multiplier_is_detected() {
    let sol = solve_star(&params(Some(8.0)), 1.0, &cfg()).unwrap();
    let off = sol.with_mu(sol.mu * 1.01).unwrap();
    assert!(off.multiplier_residual > 5e-3, "{:e}", off.multiplier_residual);
    assert!(off.boundary_residual > 5e-3);
    assert!(sol.with_mu(-1.0).is_err());
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(ModelParams::new(-1.0, 1.0, 1.0, LightSpeed::Infinite).is_err());
    assert!(ModelParams::new(1.0, 1.0, 1.0, LightSpeed::Finite(0.0)).is_err());
    assert!(solve_star(&params(None), -1.0, &cfg()).is_err());
    let mut bad = cfg();
    bad.picard_damping = 1.5;
    assert!(bad.validate().is_err());
    assert!(cfg().validate_for_ladder(1e4).is_err());
}

#[test]
fn single_precision_smoke() {
    let p = ModelParams::<f32>::units(LightSpeed::Finite(8.0)).unwrap();
    let c = SolverConfig::<f32> {
        ode_rtol: 1e-5,
        ode_atol: 1e-7,
        event_tol: 1e-6,
        mass_tol: 1e-5,
        ..Default::default()
    };
    let sol = solve_star(&p, 1.0f32, &c).unwrap();
    let reference = solve_star(&params(Some(8.0)), 1.0, &cfg()).unwrap();
    assert!(((sol.total_energy as f64 - reference.total_energy) / reference.total_energy).abs() < 1e-3);
}

#[test]
fn rescaling_exponents_and_invariants() {
    let base = solve_star(&params(None), 1.0, &cfg()).unwrap();
    let same = limit_rescale(&base, base.mass).unwrap();
    assert_eq!(same.radius, base.radius);
    assert_eq!(same.total_energy, base.total_energy);
    let big = limit_rescale(&base, 8.0 * base.mass).unwrap();
    assert_relative_eq!(big.radius, base.radius / 2.0, max_relative = 1e-14);
    assert_relative_eq!(big.mu, base.mu * 16.0, max_relative = 1e-14);
    assert_relative_eq!(big.sup_density(), base.sup_density() * 64.0, max_relative = 1e-14);
    assert_relative_eq!(
        big.total_energy,
        base.total_energy * 8f64.powf(7.0 / 3.0),
        max_relative = 1e-14
    );
    assert!((big.relative_virial_residual() - base.relative_virial_residual()).abs() <= 1e-12);
}

#[test]
fn unit_c_scaling_is_trivial() {
    assert_eq!(verify_c_scaling(&params(Some(1.0)), 1.0, 1.0, &cfg()).unwrap(), 0.0);
    assert!(verify_c_scaling(&params(Some(1.0)), 1.0, f64::INFINITY, &cfg()).is_err());
}

#[test]
fn multiplier_and_kinetic_moment_exceed_the_limit() {
    let limit = solve_star(&params(None), 1.0, &cfg()).unwrap();
    let mut prev = (limit.mu, limit.kinetic_moment);
    for c in [64.0, 16.0, 4.0] {
        let s = solve_star(&params(Some(c)), 1.0, &cfg()).unwrap();
        assert!(s.mu > prev.0 && s.kinetic_moment > prev.1, "c={c}");
        prev = (s.mu, s.kinetic_moment);
    }
}

#[test]
fn adaptive_step_radii_are_kept() {
    let s = solve_star(&params(Some(8.0)), 1.0, &cfg()).unwrap();
    assert!(s.stats.step_radii.len() > 10);
    assert!(s.stats.step_radii.windows(2).all(|w| w[1] > w[0]));
    assert!(*s.stats.step_radii.last().unwrap() <= s.radius * (1.0 + 1e-12));
}
