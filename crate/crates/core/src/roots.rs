//! Bracketed scalar root finding (Brent's method).

use crate::error::{Result, StarError};
use crate::scalar::{lit, Scalar};

/// Stopping rule for [`brent`].
#[derive(Debug, Clone, Copy)]
pub struct RootTolerance<T> {
    /// Absolute tolerance on the abscissa.
    pub x_abs: T,
    /// Stop as soon as `|f| <= f_abs`.
    pub f_abs: T,
    pub max_iterations: usize,
}

/// A located root together with the function value there.
#[derive(Debug, Clone, Copy)]
pub struct Root<T> {
    pub x: T,
    pub fx: T,
    pub evaluations: usize,
}

/// Brent's method on `[a, b]` given `fa = f(a)` and `fb = f(b)` of opposite sign.
///
/// `f` may fail; its error aborts the search.
pub fn brent<T, F>(mut f: F, a: T, b: T, fa: T, fb: T, tol: RootTolerance<T>) -> Result<Root<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    if fa == T::zero() {
        return Ok(Root {
            x: a,
            fx: fa,
            evaluations: 0,
        });
    }
    if fb == T::zero() {
        return Ok(Root {
            x: b,
            fx: fb,
            evaluations: 0,
        });
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(StarError::Bracket(format!(
            "f({:e}) = {:e} and f({:e}) = {:e} have the same sign",
            a.as_f64(),
            fa.as_f64(),
            b.as_f64(),
            fb.as_f64()
        )));
    }
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let mut evaluations = 0;
    for _ in 0..tol.max_iterations {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol.x_abs;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb.abs() <= tol.f_abs {
            return Ok(Root {
                x: b,
                fx: fb,
                evaluations,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else if xm > T::zero() {
            b + tol1
        } else {
            b - tol1
        };
        fb = f(b)?;
        evaluations += 1;
    }
    Ok(Root {
        x: b,
        fx: fb,
        evaluations,
    })
}
