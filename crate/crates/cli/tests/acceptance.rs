//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use starlab::model::*;
use starlab::solver::*;
use starlab::study::*;
use starlab_testkit as oracle;

const DENSITY_ORACLE_TOL: f64 = 1e-10;
const BOUND_SAMPLES: usize = 100_000;
const BOUND_SEED: u64 = 20_240_617;
const BOUND_SLACK: f64 = 1e-12;
const VIRIAL_TOL: f64 = 1e-6;
const MULTIPLIER_TOL: f64 = 1e-6;
const BOUNDARY_TOL: f64 = 1e-8;
const BACKEND_DENSITY_TOL: f64 = 1e-6;
const BACKEND_SCALAR_TOL: f64 = 1e-8;
const LANE_EMDEN_XI1: f64 = 3.65375;
const LANE_EMDEN_MASS: f64 = 2.71406;
const LANE_EMDEN_TOL: f64 = 1e-3;
const RATE_WINDOW: (f64, f64) = (-2.1, -1.9);
const MIN_R_SQUARED: f64 = 0.999;
const DELTA_FLOOR: f64 = -1e-9;
const IDENTITY_TOL: f64 = 1e-6;
const C_SCALING_TOL: f64 = 1e-6;
const MASS_LAW_TOL_LIMIT: f64 = 1e-6;
const MASS_LAW_TOL_FINITE: f64 = 0.05;
const RESCALE_TOL: f64 = 1e-8;
const CORNER_WINDOW: (f64, f64) = (-3.3, -2.7);

const C_LADDER: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];
const N_LADDER: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn units(c: Option<f64>) -> ModelParams<f64> {
    ModelParams::units(c.map_or(LightSpeed::Infinite, LightSpeed::Finite)).unwrap()
}

fn cfg() -> SolverConfig<f64> {
    SolverConfig::default()
}

fn require(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn closed_form_oracles() -> Outcome {
    let mut worst: f64 = 0.0;
    for &rho in &log_space(1e-6, 1e3, 20) {
        for &c in &log_space(1.0, 1e4, 20) {
            let p = units(Some(c));
            let j_ref = oracle::kinetic_density_quadrature(rho, 1.0, 1.0, Some(c));
            let jb_ref = oracle::kinetic_density_bar_quadrature(rho, 1.0, 1.0, c);
            let j = kinetic_density(rho, &p);
            let jb = kinetic_density_bar(rho, &p).map_err(|e| e.to_string())?;
            worst = worst
                .max(((j - j_ref) / j_ref).abs())
                .max(((jb - jb_ref) / jb_ref).abs());
        }
    }
    require(
        worst <= DENSITY_ORACLE_TOL,
        format!("max relative error {worst:.2e} on 400 points"),
    )
}

fn operator_inequalities() -> Outcome {
    let r = dispersion_bound_check(BOUND_SAMPLES, BOUND_SEED, &BoundRanges::default()).map_err(|e| e.to_string())?;
    require(
        r.violations == 0 && r.worst_violation <= BOUND_SLACK,
        format!(
            "{} samples, {} violations, worst {:.2e}",
            r.samples, r.violations, r.worst_violation
        ),
    )
}

fn solver_identities() -> Outcome {
    let (mut virial, mut mult, mut boundary, mut emax) = (0f64, 0f64, 0f64, f64::NEG_INFINITY);
    let speeds: Vec<Option<f64>> = C_LADDER.iter().map(|&c| Some(c)).chain([None]).collect();
    for c in speeds {
        for n in [0.5, 1.0, 2.0] {
            let s = solve_star(&units(c), n, &cfg()).map_err(|e| format!("c={c:?} N={n}: {e}"))?;
            virial = virial.max(s.relative_virial_residual());
            mult = mult.max(s.multiplier_residual);
            boundary = boundary.max(s.boundary_residual);
            emax = emax.max(s.total_energy);
        }
    }
    require(
        virial <= VIRIAL_TOL && mult <= MULTIPLIER_TOL && boundary <= BOUNDARY_TOL && emax < 0.0,
        format!("18 stars: virial {virial:.1e}, multiplier {mult:.1e}, boundary {boundary:.1e}, max E {emax:.4}"),
    )
}

fn backend_equivalence() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for c in [Some(8.0), None] {
        let p = units(c);
        let shot = solve_star(&p, 1.0, &cfg()).map_err(|e| e.to_string())?;
        let fixed = picard_solve(&p, 1.0, &cfg()).map_err(|e| e.to_string())?;
        let d = compare_backends(&shot, &fixed, &cfg()).map_err(|e| e.to_string())?;
        ok &= d.density <= BACKEND_DENSITY_TOL
            && d.energy <= BACKEND_SCALAR_TOL
            && d.mu <= BACKEND_SCALAR_TOL
            && d.radius <= BACKEND_SCALAR_TOL;
        detail.push(format!("c={}: {d}", p.c()));
    }
    require(ok, detail.join("; "))
}

fn lane_emden() -> Outcome {
    let le = oracle::lane_emden_zero(1.5, 1e-4);
    let p = units(None);
    let s = solve_star(&p, 1.0, &cfg()).map_err(|e| e.to_string())?;
    let a = natural_length(&p, s.central_potential);
    let rho0 = density_from_potential(s.central_potential, &p);
    let xi1 = s.radius / a;
    let mass = s.mass / (4.0 * std::f64::consts::PI * rho0 * a.powi(3));
    require(
        (xi1 - LANE_EMDEN_XI1).abs() <= LANE_EMDEN_TOL
            && (mass - LANE_EMDEN_MASS).abs() <= LANE_EMDEN_TOL
            && (xi1 - le.xi1).abs() <= LANE_EMDEN_TOL
            && (mass - le.mass).abs() <= LANE_EMDEN_TOL,
        format!(
            "xi1 = {xi1:.7} (oracle {:.7}), -xi^2 theta' = {mass:.7} (oracle {:.7})",
            le.xi1, le.mass
        ),
    )
}

fn c_rates() -> Outcome {
    let sweep = sweep_c(&units(None), 1.0, &C_LADDER, &cfg()).map_err(|e| e.to_string())?;
    let mut ok = sweep.all_ok();
    let mut parts = Vec::new();
    for obs in Observable::DELTAS {
        let f = fit_rate(&sweep.records, obs).map_err(|e| e.to_string())?;
        ok &= f.exponent >= RATE_WINDOW.0 && f.exponent <= RATE_WINDOW.1 && f.r_squared >= MIN_R_SQUARED;
        parts.push(format!("{} {:.4} (R2 {:.6})", f.observable, f.exponent, f.r_squared));
    }
    let min_delta = sweep
        .records
        .iter()
        .flat_map(|r| [r.d_energy, r.d_kinetic, r.d_mu, r.d_radius])
        .map(|d| d.unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    let identity = sweep
        .records
        .iter()
        .map(|r| r.radius_identity.unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    ok &= min_delta >= DELTA_FLOOR && identity <= IDENTITY_TOL;
    parts.push(format!("min delta {min_delta:.2e}, identity {identity:.1e}"));
    require(ok, parts.join(", "))
}

fn c_scaling() -> Outcome {
    let p = units(Some(1.0));
    let mut worst: f64 = 0.0;
    for c in [4.0, 16.0] {
        worst = worst.max(verify_c_scaling(&p, 1.0, c, &cfg()).map_err(|e| e.to_string())?);
    }
    require(
        worst <= C_SCALING_TOL,
        format!("max residual {worst:.1e} at c in {{4, 16}}"),
    )
}

fn mass_laws() -> Outcome {
    let expected = [2.0, -1.0 / 3.0, 4.0 / 3.0];
    let mut ok = true;
    let mut parts = Vec::new();
    for (c, tol) in [(None, MASS_LAW_TOL_LIMIT), (Some(64.0), MASS_LAW_TOL_FINITE)] {
        let sweep = sweep_n(&units(c), &N_LADDER, &cfg()).map_err(|e| e.to_string())?;
        let fits = sweep.fits.ok_or("no fits")?;
        let exps: Vec<f64> = fits.iter().map(|f| f.exponent).collect();
        ok &= exps.iter().zip(expected).all(|(e, x)| (e - x).abs() <= tol);
        parts.push(format!(
            "c={}: {:.7} {:.7} {:.7}",
            units(c).c(),
            exps[0],
            exps[1],
            exps[2]
        ));
        if let Some(d) = sweep.rescale_discrepancy {
            ok &= d <= RESCALE_TOL;
            parts.push(format!("rescale {d:.1e}"));
        } else if c.is_none() {
            ok = false;
        }
    }
    require(ok, parts.join(", "))
}

fn corner_layer() -> Outcome {
    let study = corner_layer_study(&units(None), 1.0, &C_LADDER[1..], &cfg()).map_err(|e| e.to_string())?;
    let decay = study.decay_fit.as_ref().ok_or("layer unresolved at some c")?;
    require(
        study.contained() && decay.exponent >= CORNER_WINDOW.0 && decay.exponent <= CORNER_WINDOW.1,
        format!(
            "contained at {} points, K1 = {:.4}, rho_inf(R_c) exponent {:.4}",
            study.points.iter().filter(|p| p.contained).count(),
            study.k1,
            decay.exponent
        ),
    )
}

fn stability_probe() -> Outcome {
    let span = LambdaSpan::default();
    let mut tracker = GnsTracker::new();
    let mut bounds = Vec::new();
    let mut ok = true;
    let mut probe = |c: Option<f64>, n: f64, want: Verdict| -> Result<(), String> {
        let est = critical_probe(&units(c), n, &span, &mut tracker, &cfg()).map_err(|e| e.to_string())?;
        ok &= est.verdict == want;
        bounds.push(est.critical_mass_bound);
        Ok(())
    };
    for n in N_LADDER {
        probe(None, n, Verdict::Stable)?;
    }
    probe(Some(8.0), 1.0, Verdict::Stable)?;
    probe(Some(2.0), 1e6, Verdict::UnboundedBelow)?;
    let valid = bounds.iter().all(|b| b.is_finite() && *b > 0.0);
    let monotone = bounds.windows(2).all(|w| w[1] <= w[0]);
    let last = *bounds.last().unwrap();
    require(
        ok && valid && monotone,
        format!(
            "verdicts as expected: {ok}, N_* bound {last:.5} (monotone over {} profiles: {monotone})",
            bounds.len()
        ),
    )
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .map(|e| {
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    std::env::set_var("SOURCE_DATE_EPOCH", "0");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for mode in [vec!["check"], vec!["sweep-c", "--n", "1", "--ladder", "4,8,16,32,64"]] {
        let out = tmp.path().join(mode[0]);
        let out = out.to_str().unwrap();
        let argv = |_: ()| {
            std::iter::once("starlab")
                .chain(mode.iter().copied())
                .chain(["--out", out])
        };
        let first_code = starlab_cli::run(argv(()));
        let first = snapshot(Path::new(out));
        let second_code = starlab_cli::run(argv(()));
        let second = snapshot(Path::new(out));
        let same = first == second && first.keys().any(|k| k.ends_with(".csv"));
        ok &= first_code == 0 && second_code == 0 && same;
        parts.push(format!(
            "{}: {} files identical {same} (exit {first_code}/{second_code})",
            mode[0],
            first.len()
        ));
    }
    std::env::remove_var("SOURCE_DATE_EPOCH");
    require(ok, parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("closed-form densities vs quadrature", closed_form_oracles),
        ("operator inequality suite", operator_inequalities),
        ("solver identity suite", solver_identities),
        ("shooting vs fixed-point backends", backend_equivalence),
        ("Lane-Emden oracle", lane_emden),
        ("c-ladder rates", c_rates),
        ("c-scaling identity", c_scaling),
        ("mass-law exponents", mass_laws),
        ("corner layer", corner_layer),
        ("stability probe", stability_probe),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
