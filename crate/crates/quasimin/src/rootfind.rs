//! Bracketed scalar root finding: bisection with an optional Newton
//! acceleration that falls back to bisection whenever a step leaves the
//! bracket or fails to shrink it.

use crate::error::{Error, Result};

pub(crate) struct RootOpts {
    /// Stop when |f(x)| <= f_tol.
    pub f_tol: f64,
    /// Stop when the bracket width falls below x_tol times the bracket
    /// magnitude, so roots of any scale are resolved to full relative
    /// precision (the bracket collapses onto the root, so its magnitude
    /// tracks the root's).
    pub x_tol: f64,
    pub max_iter: u32,
}

impl Default for RootOpts {
    fn default() -> Self {
        RootOpts {
            f_tol: 0.0,
            x_tol: 1e-16,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in [lo, hi], which must bracket a sign change
/// (endpoints with f = 0 are accepted as roots immediately).
///
/// When `df` is provided, Newton steps from the current best point are taken
/// whenever they stay inside the bracket; otherwise the step is a bisection.
/// The bracket invariant guarantees convergence regardless of `df` quality.
pub(crate) fn bracketed_root<F, D>(f: F, df: Option<D>, lo: f64, hi: f64, opts: &RootOpts) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::domain(format!(
            "function not finite at bracket endpoints: f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::domain(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }

    let mut x = 0.5 * (a + b);
    for _ in 0..opts.max_iter {
        let fx = f(x);
        if fx == 0.0 || fx.abs() <= opts.f_tol {
            return Ok(x);
        }
        if fx.is_nan() {
            return Err(Error::convergence(format!("f({x}) is NaN during root search")));
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        if b - a <= opts.x_tol * scale {
            return Ok(if fa.abs() <= fb.abs() { a } else { b });
        }

        let mut next = f64::NAN;
        if let Some(ref d) = df {
            let dx = d(x);
            if dx != 0.0 && dx.is_finite() {
                let candidate = x - fx / dx;
                if candidate > a && candidate < b {
                    next = candidate;
                }
            }
        }
        if !next.is_finite() {
            next = 0.5 * (a + b);
        }
        x = next;
    }
    // The bracket kept shrinking but the tolerances were not reached.
    let best = if fa.abs() <= fb.abs() { a } else { b };
    if b - a <= 1e-8 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
        return Ok(best);
    }
    Err(Error::convergence(format!(
        "root search exhausted {} iterations on [{a}, {b}]",
        opts.max_iter
    )))
}
