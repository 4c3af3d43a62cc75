//! The six run modes. Each fills the bundle with tables, charts and gates.

use rayon::prelude::*;
use starlab::model::{dispersion_bound_check, BoundRanges, GnsTracker, LightSpeed};
use starlab::solver::{solve_star, verify_c_scaling, StarSolution};
use starlab::study::{
    corner_layer_study, critical_probe, fit_rate, sweep_c, sweep_n, LambdaSpan, Observable, RateFit, RecordStatus,
    SweepRecord,
};

use crate::bundle::{Bundle, Gate};
use crate::chart::rate_chart;
use crate::config::{Mode, RunConfig};
use crate::table::{Cell, Table};
use crate::CliError;

/// Window for the c-ladder rate exponents.
pub const RATE_WINDOW: (f64, f64) = (-2.1, -1.9);
pub const MIN_R_SQUARED: f64 = 0.999;
/// Deltas may dip below zero by solver noise only.
pub const DELTA_FLOOR: f64 = -1e-9;
/// Exact mass-law exponents of the limit model: `sup rho`, `R`, `mu`.
pub const MASS_LAW_EXPONENTS: [f64; 3] = [2.0, -1.0 / 3.0, 4.0 / 3.0];
pub const MASS_LAW_TOL_LIMIT: f64 = 1e-6;
pub const MASS_LAW_TOL_FINITE: f64 = 0.05;
pub const RESCALE_TOL: f64 = 1e-8;
pub const CORNER_WINDOW: (f64, f64) = (-3.3, -2.7);
pub const VIRIAL_TOL: f64 = 1e-6;
pub const MULTIPLIER_TOL: f64 = 1e-6;
pub const BOUNDARY_TOL: f64 = 1e-8;
pub const C_SCALING_TOL: f64 = 1e-6;
/// Masses of the identity suite in `check`.
pub const CHECK_MASSES: [f64; 3] = [0.5, 1.0, 2.0];
/// Values of `c` for the scaling identity in `check`.
pub const CHECK_SCALING_C: [f64; 2] = [4.0, 16.0];

pub fn run_mode(cfg: &RunConfig, bundle: &mut Bundle) -> Result<(), CliError> {
    match cfg.mode {
        Mode::Solve => solve(cfg, bundle),
        Mode::SweepC => sweep_c_mode(cfg, bundle),
        Mode::SweepN => sweep_n_mode(cfg, bundle),
        Mode::Corner => corner(cfg, bundle),
        Mode::Critical => critical(cfg, bundle),
        Mode::Check => check(cfg, bundle),
    }
}

const SOLUTION_COLUMNS: [&str; 10] = [
    "c",
    "n",
    "mu",
    "radius",
    "kinetic",
    "coulomb",
    "total",
    "virial_res",
    "mult_res",
    "boundary_res",
];

fn solution_table() -> Table {
    Table::new("solutions", &SOLUTION_COLUMNS)
}

fn solution_row(s: &StarSolution<f64>) -> Vec<Cell> {
    vec![
        s.params.c().into(),
        s.mass.into(),
        s.mu.into(),
        s.radius.into(),
        s.kinetic_energy.into(),
        s.coulomb_energy.into(),
        s.total_energy.into(),
        s.relative_virial_residual().into(),
        s.multiplier_residual.into(),
        s.boundary_residual.into(),
    ]
}

fn sweep_table(records: &[SweepRecord]) -> Table {
    let mut t = Table::new("sweeps", &["c", "n", "dE", "dKin", "dMu", "dR", "status"]);
    for r in records {
        t.push(vec![
            r.c.into(),
            r.n.into(),
            r.d_energy.into(),
            r.d_kinetic.into(),
            r.d_mu.into(),
            r.d_radius.into(),
            r.status.to_string().into(),
        ]);
    }
    t
}

fn rate_table(fits: &[RateFit]) -> Table {
    let mut t = Table::new("rates", &["observable", "exponent", "amplitude", "r2"]);
    for f in fits {
        t.push(vec![
            f.observable.as_str().into(),
            f.exponent.into(),
            f.amplitude.into(),
            f.r_squared.into(),
        ]);
    }
    t
}

fn chart_name(observable: &str) -> String {
    let clean: String = observable
        .chars()
        .map(|ch| if ch.is_ascii_alphanumeric() { ch } else { '_' })
        .collect();
    format!("rate_{}", clean.trim_matches('_'))
}

fn emit_fits(bundle: &mut Bundle, fits: &[RateFit], x_label: &str) {
    bundle.add_table(&rate_table(fits));
    for f in fits {
        bundle.add_chart(&chart_name(&f.observable), rate_chart(f, x_label));
    }
}

fn note_failed_records(bundle: &mut Bundle, records: &[SweepRecord]) {
    for r in records {
        if let RecordStatus::Failed(msg) = &r.status {
            bundle.record_failure(format!("c = {}, N = {}: {msg}", r.c, r.n));
        }
    }
}

fn solve(cfg: &RunConfig, bundle: &mut Bundle) -> Result<(), CliError> {
    let params = cfg.params()?;
    let mut table = solution_table();
    let mut profile = Table::new("profile", &["r", "rho", "u"]);
    let result = solve_star(&params, cfg.n, &cfg.solver_config());
    if let Ok(s) = &result {
        table.push(solution_row(s));
        for (i, (&r, &rho)) in s.profile.grid().iter().zip(s.profile.values()).enumerate() {
            profile.push(vec![r.into(), rho.into(), s.potential[i].into()]);
        }
        bundle.gate(Gate::at_most("virial", s.relative_virial_residual(), VIRIAL_TOL));
        bundle.gate(Gate::at_most("multiplier", s.multiplier_residual, MULTIPLIER_TOL));
        bundle.gate(Gate::at_most("boundary", s.boundary_residual, BOUNDARY_TOL));
    }
    bundle.add_table(&table);
    bundle.add_table(&profile);
    result.map(|_| ()).map_err(Into::into)
}

fn sweep_c_mode(cfg: &RunConfig, bundle: &mut Bundle) -> Result<(), CliError> {
    let params = cfg.params()?;
    let sweep = sweep_c(&params, cfg.n, &cfg.ladder, &cfg.solver_config())?;
    let mut table = solution_table();
    table.push(solution_row(&sweep.limit));
    for s in sweep.solutions.iter().flatten() {
        table.push(solution_row(s));
    }
    bundle.add_table(&table);
    bundle.add_table(&sweep_table(&sweep.records));
    note_failed_records(bundle, &sweep.records);
    for r in &sweep.records {
        if let Some(id) = r.radius_identity {
            bundle.gate(Gate::at_most(
                format!("radius_identity c={}", r.c),
                id,
                starlab::study::RADIUS_IDENTITY_TOL,
            ));
        }
        for (name, d) in [
            ("dE", r.d_energy),
            ("dKin", r.d_kinetic),
            ("dMu", r.d_mu),
            ("dR", r.d_radius),
        ] {
            if let Some(d) = d {
                bundle.gate(Gate::at_least(format!("{name} c={}", r.c), d, DELTA_FLOOR));
            }
        }
    }
    let mut fits = Vec::new();
    for obs in Observable::DELTAS {
        match fit_rate(&sweep.records, obs) {
            Ok(f) => {
                bundle.gate(Gate::within(
                    format!("{} exponent", f.observable),
                    f.exponent,
                    RATE_WINDOW.0,
                    RATE_WINDOW.1,
                ));
                bundle.gate(Gate::at_least(
                    format!("{} r2", f.observable),
                    f.r_squared,
                    MIN_R_SQUARED,
                ));
                fits.push(f);
            }
            Err(e) => bundle.gate(Gate::within(
                format!("{} exponent ({e})", obs.name()),
                f64::NAN,
                RATE_WINDOW.0,
                RATE_WINDOW.1,
            )),
        }
    }
    emit_fits(bundle, &fits, "c");
    Ok(())
}

fn sweep_n_mode(cfg: &RunConfig, bundle: &mut Bundle) -> Result<(), CliError> {
    let params = cfg.params()?;
    let sweep = sweep_n(&params, &cfg.ladder, &cfg.solver_config())?;
    let mut table = solution_table();
    for s in sweep.solutions.iter().flatten() {
        table.push(solution_row(s));
    }
    bundle.add_table(&table);
    bundle.add_table(&sweep_table(&sweep.records));
    note_failed_records(bundle, &sweep.records);
    let tol = if params.c().is_infinite() {
        MASS_LAW_TOL_LIMIT
    } else {
        MASS_LAW_TOL_FINITE
    };
    match &sweep.fits {
        Some(fits) => {
            for (f, expected) in fits.iter().zip(MASS_LAW_EXPONENTS) {
                bundle.gate(Gate::within(
                    format!("{} exponent", f.observable),
                    f.exponent,
                    expected - tol,
                    expected + tol,
                ));
            }
            emit_fits(bundle, fits, "N");
        }
        None => bundle.add_table(&rate_table(&[])),
    }
    if let Some(d) = sweep.rescale_discrepancy {
        bundle.gate(Gate::at_most("rescale discrepancy", d, RESCALE_TOL));
    }
    Ok(())
}

fn corner(cfg: &RunConfig, bundle: &mut Bundle) -> Result<(), CliError> {
    let params = cfg.params()?;
    let study = corner_layer_study(&params, cfg.n, &cfg.ladder, &cfg.solver_config())?;
    let mut t = Table::new(
        "corner",
        &[
            "c",
            "radius_c",
            "radius_limit",
            "inner_radius",
            "limit_density_at_edge",
            "density_at_inner",
            "contained",
            "status",
        ],
    );
    for p in &study.points {
        t.push(vec![
            p.c.into(),
            p.radius_c.into(),
            p.radius_limit.into(),
            p.inner_radius.into(),
            p.limit_density_at_edge.into(),
            p.density_at_inner.into(),
            p.contained.into(),
            format!("{:?}", p.status).to_lowercase().into(),
        ]);
        bundle.gate(Gate::at_least(
            format!("contained c={}", p.c),
            f64::from(u8::from(p.contained)),
            1.0,
        ));
    }
    bundle.add_table(&t);
    let mut fits = vec![study.radius_fit.clone()];
    match &study.decay_fit {
        Some(f) => {
            bundle.gate(Gate::within(
                "decay exponent",
                f.exponent,
                CORNER_WINDOW.0,
                CORNER_WINDOW.1,
            ));
            fits.push(f.clone());
        }
        None => bundle.gate(Gate::within(
            "decay exponent (unresolved)",
            f64::NAN,
            CORNER_WINDOW.0,
            CORNER_WINDOW.1,
        )),
    }
    emit_fits(bundle, &fits, "c");
    Ok(())
}

fn critical(cfg: &RunConfig, bundle: &mut Bundle) -> Result<(), CliError> {
    let params = cfg.params()?;
    let span = LambdaSpan::from(cfg.lambda_span);
    let solver = cfg.solver_config();
    let mut tracker = GnsTracker::new();
    let mut summary = Table::new("critical", &["c", "n", "verdict", "gns_ratio", "critical_mass_bound"]);
    let mut energies = Table::new("critical_energy", &["n", "lambda", "kinetic", "coulomb", "energy"]);
    let mut previous = f64::INFINITY;
    for &n in &cfg.ladder {
        let est = critical_probe(&params, n, &span, &mut tracker, &solver)?;
        summary.push(vec![
            params.c().into(),
            n.into(),
            est.verdict.to_string().into(),
            est.gns_ratio.into(),
            est.critical_mass_bound.into(),
        ]);
        for s in &est.samples {
            energies.push(vec![
                n.into(),
                s.lambda.into(),
                s.kinetic.into(),
                s.coulomb.into(),
                s.energy.into(),
            ]);
        }
        let bound = est.critical_mass_bound;
        bundle.gate(Gate::within(format!("bound N={n}"), bound, f64::MIN_POSITIVE, f64::MAX));
        bundle.gate(Gate::at_most(format!("bound monotone N={n}"), bound, previous));
        bundle.gate(Gate::at_least(
            format!("verdict decided N={n}"),
            f64::from(u8::from(est.verdict != starlab::study::Verdict::Inconclusive)),
            1.0,
        ));
        previous = bound;
    }
    bundle.add_table(&summary);
    bundle.add_table(&energies);
    Ok(())
}

fn check(cfg: &RunConfig, bundle: &mut Bundle) -> Result<(), CliError> {
    let base = cfg.params()?;
    let solver = cfg.solver_config();
    let mut speeds: Vec<LightSpeed<f64>> = cfg.ladder.iter().map(|&c| LightSpeed::Finite(c)).collect();
    speeds.push(LightSpeed::Infinite);
    let cases: Vec<(LightSpeed<f64>, f64)> = speeds
        .iter()
        .flat_map(|&c| CHECK_MASSES.iter().map(move |&n| (c, n)))
        .collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(c, n)| base.with_c(c).and_then(|p| solve_star(&p, n, &solver)))
        .collect();
    let mut table = solution_table();
    for (&(c, n), r) in cases.iter().zip(&results) {
        match r {
            Ok(s) => {
                table.push(solution_row(s));
                bundle.gate(Gate::at_most(
                    format!("virial c={c} N={n}"),
                    s.relative_virial_residual(),
                    VIRIAL_TOL,
                ));
                bundle.gate(Gate::at_most(
                    format!("multiplier c={c} N={n}"),
                    s.multiplier_residual,
                    MULTIPLIER_TOL,
                ));
                bundle.gate(Gate::at_most(
                    format!("boundary c={c} N={n}"),
                    s.boundary_residual,
                    BOUNDARY_TOL,
                ));
                bundle.gate(Gate::at_most(
                    format!("energy negative c={c} N={n}"),
                    s.total_energy,
                    -f64::MIN_POSITIVE,
                ));
            }
            Err(e) => bundle.record_failure(format!("c = {c}, N = {n}: {e}")),
        }
    }
    bundle.add_table(&table);
    let unit_c = base.with_c(LightSpeed::Finite(1.0))?;
    for c in CHECK_SCALING_C {
        match verify_c_scaling(&unit_c, cfg.n, c, &solver) {
            Ok(res) => bundle.gate(Gate::at_most(format!("c-scaling c={c}"), res, C_SCALING_TOL)),
            Err(e) => bundle.record_failure(format!("c-scaling at c = {c}: {e}")),
        }
    }
    let report = dispersion_bound_check(cfg.samples, cfg.seed, &BoundRanges::default())?;
    bundle.gate(Gate::at_most(
        "dispersion bound violations",
        report.violations as f64,
        0.0,
    ));
    Ok(())
}
