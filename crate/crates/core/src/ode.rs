//! Adaptive Dormand-Prince 5(4) integration with terminal events and
//! mandatory output nodes.
//!
//! Steps are clipped so that every requested node is hit exactly (no dense
//! interpolation), and a sign change of the event component is located by
//! bisecting the length of a single step taken from the last accepted state.

use crate::error::{Result, StarError};
use crate::scalar::{lit, Scalar};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Step-size control for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct StepControl<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

/// Terminal event: stop where `y[component]` first drops to zero.
#[derive(Debug, Clone, Copy)]
pub struct ZeroCrossing<T> {
    pub component: usize,
    /// The located state satisfies `|y[component]| <= tolerance`, unless the
    /// bracketing step has shrunk to rounding level first.
    pub tolerance: T,
}

/// Final state of an integration.
#[derive(Debug, Clone, Copy)]
pub struct Outcome<T, const N: usize> {
    pub r: T,
    pub y: [T; N],
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
    /// True if the event terminated the run; false if `r_end` was reached.
    pub hit_event: bool,
}

struct Step<T, const N: usize> {
    y: [T; N],
    err: [T; N],
    k_last: [T; N],
}

fn dp_step<T, F, const N: usize>(f: &F, r: T, y: &[T; N], k1: &[T; N], h: T) -> Step<T, N>
where
    T: Scalar,
    F: Fn(T, &[T; N]) -> [T; N],
{
    let mut k = [[T::zero(); N]; 7];
    k[0] = *k1;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                let a = lit::<T>(a) * h;
                for i in 0..N {
                    ys[i] = ys[i] + a * kj[i];
                }
            }
        }
        k[s] = f(r + lit::<T>(C[s]) * h, &ys);
    }
    // Stage 7 is evaluated at the fifth-order solution (FSAL).
    let mut y_new = *y;
    for j in 0..6 {
        let b = lit::<T>(A[6][j]) * h;
        for i in 0..N {
            y_new[i] = y_new[i] + b * k[j][i];
        }
    }
    let mut err = [T::zero(); N];
    for (j, kj) in k.iter().enumerate() {
        let e = lit::<T>(E[j]) * h;
        for i in 0..N {
            err[i] = err[i] + e * kj[i];
        }
    }
    Step {
        y: y_new,
        err,
        k_last: k[6],
    }
}

fn error_norm<T: Scalar, const N: usize>(ctl: &StepControl<T>, y0: &[T; N], step: &Step<T, N>) -> T {
    let mut acc = T::zero();
    for ((&a, &b), &err) in y0.iter().zip(&step.y).zip(&step.err) {
        let scale = ctl.atol + ctl.rtol * a.abs().max(b.abs());
        let e = err / scale;
        acc = acc + e * e;
    }
    (acc / T::from_usize_lossy(N)).sqrt()
}

/// Integrates `y' = f(r, y)` from `r0` towards `r_end`.
///
/// `nodes` must be sorted; nodes at or below `r0` and beyond the stopping
/// point are ignored. `on_node(index, r, y)` fires on each node reached and
/// `on_step(r)` after every accepted step.
#[allow(clippy::too_many_arguments)]
pub fn integrate<T, F, const N: usize>(
    f: &F,
    r0: T,
    y0: [T; N],
    h0: T,
    r_end: T,
    ctl: &StepControl<T>,
    event: Option<ZeroCrossing<T>>,
    nodes: &[T],
    mut on_node: impl FnMut(usize, T, &[T; N]),
    mut on_step: impl FnMut(T),
) -> Result<Outcome<T, N>>
where
    T: Scalar,
    F: Fn(T, &[T; N]) -> [T; N],
{
    let mut r = r0;
    let mut y = y0;
    let mut k1 = f(r, &y);
    let mut evaluations = 1;
    let mut h = h0;
    let mut accepted = 0;
    let mut rejected = 0;
    let mut next_node = nodes.partition_point(|&x| x <= r0);
    let safety = lit::<T>(0.9);
    let min_factor = lit::<T>(0.2);
    let max_factor = lit::<T>(5.0);
    let order_exp = lit::<T>(-0.2);
    let tiny = lit::<T>(64.0) * T::epsilon();

    while r < r_end {
        if accepted + rejected >= ctl.max_steps {
            return Err(StarError::Stiffness { radius: r.as_f64() });
        }
        let target = if next_node < nodes.len() {
            nodes[next_node].min(r_end)
        } else {
            r_end
        };
        let clipped = h >= target - r;
        let h_try = if clipped { target - r } else { h };
        if h_try <= tiny * r.abs().max(T::one()) {
            if clipped {
                // Degenerate node spacing: treat as reached.
                r = target;
                while next_node < nodes.len() && nodes[next_node] <= r {
                    on_node(next_node, r, &y);
                    next_node += 1;
                }
                continue;
            }
            return Err(StarError::Stiffness { radius: r.as_f64() });
        }
        let step = dp_step(f, r, &y, &k1, h_try);
        evaluations += 6;
        let err = error_norm(ctl, &y, &step);
        if !(err <= T::one()) {
            rejected += 1;
            let factor = if err.is_finite() {
                (safety * err.powf(order_exp)).max(min_factor)
            } else {
                min_factor
            };
            h = h_try * factor;
            continue;
        }

        if let Some(ev) = event {
            let c = ev.component;
            if y[c] > T::zero() && step.y[c] <= T::zero() {
                let (mut lo, mut hi) = (T::zero(), h_try);
                let mut best = step;
                let mut best_h = h_try;
                for _ in 0..200 {
                    if best.y[c].abs() <= ev.tolerance || hi - lo <= tiny * (r + hi).abs() {
                        break;
                    }
                    let mid = (lo + hi) * lit(0.5);
                    let trial = dp_step(f, r, &y, &k1, mid);
                    evaluations += 6;
                    if trial.y[c] > T::zero() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    best = trial;
                    best_h = mid;
                }
                accepted += 1;
                let r_event = r + best_h;
                on_step(r_event);
                return Ok(Outcome {
                    r: r_event,
                    y: best.y,
                    accepted_steps: accepted,
                    rejected_steps: rejected,
                    evaluations,
                    hit_event: true,
                });
            }
        }

        accepted += 1;
        r = if clipped { target } else { r + h_try };
        y = step.y;
        k1 = step.k_last;
        on_step(r);
        while next_node < nodes.len() && nodes[next_node] <= r {
            on_node(next_node, r, &y);
            next_node += 1;
        }
        let grow = (safety * err.max(lit(1e-10)).powf(order_exp))
            .min(max_factor)
            .max(min_factor);
        // A clipped step says nothing about how large the next one may be.
        h = if clipped { h.max(h_try * grow) } else { h_try * grow };
    }
    Ok(Outcome {
        r,
        y,
        accepted_steps: accepted,
        rejected_steps: rejected,
        evaluations,
        hit_event: false,
    })
}
