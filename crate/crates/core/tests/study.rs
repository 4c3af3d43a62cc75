use starlab::model::*;
use starlab::solver::SolverConfig;
use starlab::study::*;
use starlab::StarError;
use starlab_testkit as oracle;

const LADDER: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];

fn units(c: LightSpeed<f64>) -> ModelParams<f64> {
    ModelParams::units(c).unwrap()
}

fn cfg() -> SolverConfig<f64> {
    SolverConfig::default()
}

#[test]
fn power_law_fit_recovers_synthetic_exponent() {
    let samples: Vec<(f64, f64)> = LADDER.iter().map(|&c| (c, 3.5 * c.powf(-2.0))).collect();
    let fit = fit_power_law("y", &samples).unwrap();
    assert!((fit.exponent + 2.0).abs() < 1e-12);
    assert!((fit.amplitude - 3.5).abs() < 1e-12);
    assert!(fit.r_squared > 1.0 - 1e-12);
    assert!((fit.predict(10.0) - 0.035).abs() < 1e-14);
}

#[test]
fn short_or_bad_ladders_are_refused() {
    assert!(matches!(
        fit_power_law("y", &[(1.0, 1.0), (2.0, 0.5)]),
        Err(StarError::FitDomain(_))
    ));
    assert!(matches!(
        fit_power_law("y", &[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]),
        Err(StarError::FitDomain(_))
    ));
    let base = units(LightSpeed::Infinite);
    assert!(sweep_c(&base, 1.0, &[], &cfg()).is_err());
    assert!(sweep_c(&base, 1.0, &[4.0, f64::INFINITY], &cfg()).is_err());
    assert!(sweep_c(&base, 1.0, &[8.0, 4.0], &cfg()).is_err());
    let single = sweep_c(&base, 1.0, &[8.0], &cfg()).unwrap();
    assert!(matches!(
        fit_rate(&single.records, Observable::DeltaEnergy),
        Err(StarError::FitDomain(_))
    ));
}

#[test]
fn c_ladder_rates_are_inverse_square() {
    let sweep = sweep_c(&units(LightSpeed::Infinite), 1.0, &LADDER, &cfg()).unwrap();
    assert!(sweep.all_ok());
    for obs in Observable::DELTAS {
        let fit = fit_rate(&sweep.records, obs).unwrap();
        assert!((fit.exponent + 2.0).abs() <= 0.05, "{}: {}", obs.name(), fit.exponent);
        assert!(fit.r_squared >= 0.999, "{}: {}", obs.name(), fit.r_squared);
    }
    for r in &sweep.records {
        assert!(r.radius_identity.unwrap() <= RADIUS_IDENTITY_TOL);
    }
}

#[test]
fn failing_ladder_point_keeps_the_rest() {
    // Mass 5 exceeds the critical mass at c = 1 but not above it.
    let sweep = sweep_c(&units(LightSpeed::Infinite), 5.0, &[1.0, 4.0, 8.0, 16.0], &cfg()).unwrap();
    assert!(!sweep.all_ok());
    assert!(matches!(sweep.records[0].status, RecordStatus::Failed(_)));
    assert!(sweep.records[1..].iter().all(|r| r.status.is_ok()));
    match fit_rate(&sweep.records, Observable::DeltaEnergy) {
        Err(StarError::FitDomain(msg)) => assert!(msg.contains("c = 1"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert!(fit_rate(&sweep.records[1..], Observable::DeltaEnergy).is_ok());
}

#[test]
fn limit_mass_laws_are_exact() {
    let sweep = sweep_n(&units(LightSpeed::Infinite), &[0.25, 0.5, 1.0, 2.0, 4.0], &cfg()).unwrap();
    let [sup, radius, mu] = sweep.fits.clone().unwrap();
    assert!((sup.exponent - 2.0).abs() < 1e-6);
    assert!((radius.exponent + 1.0 / 3.0).abs() < 1e-6);
    assert!((mu.exponent - 4.0 / 3.0).abs() < 1e-6);
    assert!(sweep.rescale_discrepancy.unwrap() <= 1e-8);
}

#[test]
fn finite_c_mass_laws_drift_slightly() {
    let sweep = sweep_n(&units(LightSpeed::Finite(64.0)), &[0.25, 0.5, 1.0, 2.0, 4.0], &cfg()).unwrap();
    let [sup, _, _] = sweep.fits.clone().unwrap();
    assert!(sup.exponent > 2.0 && sup.exponent < 2.01);
    assert!(sweep.rescale_discrepancy.is_none());
}

#[test]
fn corner_layer_is_contained_and_decays() {
    let study = corner_layer_study(&units(LightSpeed::Infinite), 1.0, &LADDER, &cfg()).unwrap();
    assert!(study.k1 > 0.0);
    assert!(study.contained());
    assert!(study.resolved());
    let decay = study.decay_fit.unwrap();
    assert!((decay.exponent + 3.0).abs() < 0.1, "{}", decay.exponent);
}

#[test]
fn dilation_probe_verdicts() {
    let span = LambdaSpan::default();
    let mut tracker = GnsTracker::new();
    let stable = critical_probe(&units(LightSpeed::Finite(8.0)), 1.0, &span, &mut tracker, &cfg()).unwrap();
    assert_eq!(stable.verdict, Verdict::Stable);
    let unbounded = critical_probe(&units(LightSpeed::Finite(2.0)), 1e6, &span, &mut tracker, &cfg()).unwrap();
    assert_eq!(unbounded.verdict, Verdict::UnboundedBelow);
    let limit = critical_probe(&units(LightSpeed::Infinite), 1.0, &span, &mut tracker, &cfg()).unwrap();
    assert_eq!(limit.verdict, Verdict::Stable);
    // Any trial profile bounds the sharp constant from above.
    let n_star = oracle::ultrarelativistic_mass(1.0, 1.0, 1.0);
    assert!(limit.critical_mass_bound >= n_star);
    assert!(tracker.profiles_seen() == 3);
    assert!(LambdaSpan { samples: 4, ..span }.validate().is_err());
}

#[test]
fn limit_energy_grows_quadratically_under_compression() {
    let mut tracker = GnsTracker::new();
    let est = critical_probe(
        &units(LightSpeed::Infinite),
        1.0,
        &LambdaSpan::default(),
        &mut tracker,
        &cfg(),
    )
    .unwrap();
    let [.., a, b] = est.samples.as_slice() else { panic!() };
    let slope = (b.energy / a.energy).ln() / (b.lambda / a.lambda).ln();
    assert!((slope - 2.0).abs() < 1e-2, "{slope}");
}
