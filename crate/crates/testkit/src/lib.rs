//! Reference computations that share no code with the library under test.
//!
//! Everything here is deliberately naive: adaptive Gauss-Kronrod for the
//! momentum-space integrals, and a fixed-step RK4 march for Lane-Emden
//! polytropes. They are slow but easy to audit.

use std::f64::consts::PI;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = K15_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let s = f(mid - dx) + f(mid + dx);
        kronrod += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// Bisects until every panel's Kronrod-Gauss gap is below its share of
/// `rel_tol * |total|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (whole, _) = gk15(&f, a, b);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    let mut compensation = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, err) = gk15(&f, lo, hi);
        let share = rel_tol * scale * (hi - lo) / (b - a);
        if err <= share.max(1e-300) || depth >= 48 {
            // Kahan summation keeps the panel sum honest at 1e-15.
            let y = value - compensation;
            let t = total + y;
            compensation = (t - total) - y;
            total = t;
        } else {
            let m = 0.5 * (lo + hi);
            stack.push((lo, m, depth + 1));
            stack.push((m, hi, depth + 1));
        }
    }
    total
}

/// Kinetic energy density of a Fermi ball, `q/(2 pi^2) * int_0^eta T(p) p^2 dp`,
/// with the relativistic kinetic symbol evaluated by plain subtraction in
/// long form. `c = None` selects `p^2 / 2m`.
pub fn kinetic_density_quadrature(rho: f64, m: f64, q: f64, c: Option<f64>) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let eta = (6.0 * PI * PI * rho / q).cbrt();
    let symbol = |p: f64| match c {
        None => p * p / (2.0 * m),
        Some(c) => {
            // Rationalised only to keep the oracle usable at c = 1e4; the
            // rationalisation is the textbook one, not the library's code path.
            let rest = m * c * c;
            let energy = (c * c * p * p + rest * rest).sqrt();
            c * c * p * p / (energy + rest)
        }
    };
    q / (2.0 * PI * PI) * integrate(|p| symbol(p) * p * p, 0.0, eta, 1e-14)
}

/// `q/(2 pi^2) * int_0^eta p^2 / sqrt(c^2 p^2 + m^2 c^4) dp`.
pub fn kinetic_density_bar_quadrature(rho: f64, m: f64, q: f64, c: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let eta = (6.0 * PI * PI * rho / q).cbrt();
    let rest = m * c * c;
    q / (2.0 * PI * PI) * integrate(|p| p * p / (c * c * p * p + rest * rest).sqrt(), 0.0, eta, 1e-14)
}

/// First zero of a Lane-Emden polytrope and its mass integral.
#[derive(Debug, Clone, Copy)]
pub struct LaneEmdenZero {
    /// First zero of theta.
    pub xi1: f64,
    /// `-xi1^2 theta'(xi1)`.
    pub mass: f64,
}

/// Integrates `theta'' + 2 theta'/xi + theta^n = 0`, `theta(0) = 1`,
/// `theta'(0) = 0` with classical RK4 at a fixed step and locates the first
/// zero by cubic Hermite interpolation over the crossing step.
pub fn lane_emden_zero(index: f64, step: f64) -> LaneEmdenZero {
    let rhs = |xi: f64, y: [f64; 2]| -> [f64; 2] {
        let theta = y[0].max(0.0);
        [y[1], -theta.powf(index) - 2.0 * y[1] / xi]
    };
    // Series start: theta = 1 - xi^2/6 + n xi^4/120.
    let mut xi = step;
    let mut y = [
        1.0 - xi * xi / 6.0 + index * xi.powi(4) / 120.0,
        -xi / 3.0 + index * xi.powi(3) / 30.0,
    ];
    loop {
        let k1 = rhs(xi, y);
        let k2 = rhs(xi + 0.5 * step, [y[0] + 0.5 * step * k1[0], y[1] + 0.5 * step * k1[1]]);
        let k3 = rhs(xi + 0.5 * step, [y[0] + 0.5 * step * k2[0], y[1] + 0.5 * step * k2[1]]);
        let k4 = rhs(xi + step, [y[0] + step * k3[0], y[1] + step * k3[1]]);
        let next = [
            y[0] + step / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + step / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if next[0] <= 0.0 {
            // Hermite cubic on [xi, xi + step] for theta; bisect its root.
            let (t0, t1, d0, d1) = (y[0], next[0], y[1] * step, next[1] * step);
            let hermite = |s: f64| {
                let s2 = s * s;
                let s3 = s2 * s;
                (2.0 * s3 - 3.0 * s2 + 1.0) * t0
                    + (s3 - 2.0 * s2 + s) * d0
                    + (-2.0 * s3 + 3.0 * s2) * t1
                    + (s3 - s2) * d1
            };
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if hermite(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s = 0.5 * (lo + hi);
            let xi1 = xi + s * step;
            let slope = y[1] + s * (next[1] - y[1]);
            return LaneEmdenZero {
                xi1,
                mass: -xi1 * xi1 * slope,
            };
        }
        y = next;
        xi += step;
    }
}

/// Mass of the ultra-relativistic (index 3) star at `c` for unit `m`,
/// gravitational coupling `kappa` and degeneracy `q`:
/// `omega_3 * sqrt(3 pi c^3 / (2 q kappa^3))`.
pub fn ultrarelativistic_mass(c: f64, q: f64, kappa: f64) -> f64 {
    let zero = lane_emden_zero(3.0, 1e-4);
    zero.mass * (3.0 * PI * c.powi(3) / (2.0 * q * kappa.powi(3))).sqrt()
}
