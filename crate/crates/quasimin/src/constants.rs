//! The optimal quasiminimizing constant of log-power profiles and the
//! composition bounds for minima of two quasisuperminimizers.
//!
//! For p > 1 and alpha > 1 - 1/p the profile built from the alpha-th power of
//! the logarithm has optimal constant
//!
//! ```text
//! Q(alpha, p) = alpha^p / (p*alpha - p + 1),
//! ```
//!
//! which equals 1 exactly at alpha = 1 (the minimizer), is strictly
//! decreasing on (1 - 1/p, 1), strictly increasing on (1, infinity), and
//! blows up at both ends. Every level q > 1 is therefore attained on exactly
//! two branches, one on each side of 1.

use crate::error::{Error, Result};
use crate::rootfind::{bracketed_root, RootOpts};
use serde::Serialize;

fn check_p(p: f64) -> Result<()> {
    if !p.is_finite() || !(p > 1.0) {
        return Err(Error::domain(format!("exponent p = {p} must be finite and > 1")));
    }
    Ok(())
}

/// Optimal constant Q(alpha, p) = alpha^p / (p*alpha - p + 1).
///
/// Domain: p > 1 and alpha > 1 - 1/p (the denominator is positive there).
pub fn q_of_alpha(alpha: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    let denom = p * alpha - p + 1.0;
    if !alpha.is_finite() || denom <= 0.0 {
        return Err(Error::domain(format!(
            "alpha = {alpha} outside (1 - 1/p, inf) for p = {p}"
        )));
    }
    Ok(alpha.powf(p) / denom)
}

/// d/dalpha of Q(alpha, p); shares the domain of `q_of_alpha`.
fn q_of_alpha_deriv(alpha: f64, p: f64) -> f64 {
    let denom = p * alpha - p + 1.0;
    p * (p - 1.0) * (alpha - 1.0) * alpha.powf(p - 1.0) / (denom * denom)
}

/// The two alpha branches attaining a given constant q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBranches {
    pub q: f64,
    pub p: f64,
    /// Branch in (1 - 1/p, 1].
    pub alpha_lower: f64,
    /// Branch in [1, infinity).
    pub alpha_upper: f64,
}

/// Inverts Q(., p) on both branches for q >= 1.
///
/// Returns (1, 1) exactly when |q - 1| < 1e-12, where the two branches merge
/// at the double root alpha = 1.
pub fn alphas_of_q(q: f64, p: f64) -> Result<AlphaBranches> {
    check_p(p)?;
    if !q.is_finite() || q < 1.0 {
        return Err(Error::domain(format!("q = {q} must be >= 1")));
    }
    if (q - 1.0).abs() < 1e-12 {
        return Ok(AlphaBranches {
            q,
            p,
            alpha_lower: 1.0,
            alpha_upper: 1.0,
        });
    }

    let f = |a: f64| q_of_alpha(a, p).map_or(f64::INFINITY, |v| v - q);
    let df = |a: f64| q_of_alpha_deriv(a, p);
    let opts = RootOpts {
        f_tol: 1e-14 * q,
        ..RootOpts::default()
    };

    // Lower branch: Q decreases from +inf to 1 as alpha runs from the
    // singular end 1 - 1/p up to 1. Shrink toward the singular end until the
    // value exceeds q.
    let singular = 1.0 - 1.0 / p;
    let mut eps = 0.5 / p;
    let mut guard = 0;
    while f(singular + eps) < 0.0 {
        eps *= 0.5;
        guard += 1;
        if guard > 2000 {
            return Err(Error::convergence(format!(
                "no lower bracket for q = {q}, p = {p}"
            )));
        }
    }
    let alpha_lower = bracketed_root(f, Some(df), singular + eps, 1.0, &opts)?;

    // Upper branch: Q increases from 1 to +inf on [1, inf). Double the right
    // endpoint until the value exceeds q.
    let mut hi = 2.0;
    guard = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::convergence(format!(
                "no upper bracket for q = {q}, p = {p}"
            )));
        }
    }
    let alpha_upper = bracketed_root(f, Some(df), 1.0, hi, &opts)?;

    Ok(AlphaBranches {
        q,
        p,
        alpha_lower,
        alpha_upper,
    })
}

/// Sharp composition bound (q1 + q2 - 2) q1 q2 / (q1 q2 - 1) for the minimum
/// of a q1- and a q2-quasisuperminimizer; equals 1 when q1 = q2 = 1.
pub fn q_bar(q1: f64, q2: f64) -> Result<f64> {
    for q in [q1, q2] {
        if !q.is_finite() || q < 1.0 {
            return Err(Error::domain(format!("constant q = {q} must be >= 1")));
        }
    }
    if q1 == 1.0 && q2 == 1.0 {
        return Ok(1.0);
    }
    // Grouping the product keeps the result bit-identical under swapping
    // q1 and q2; every operation is then symmetric in its rounded inputs.
    Ok((q1 + q2 - 2.0) * (q1 * q2) / (q1 * q2 - 1.0))
}

/// Older composition bound min(q1 + q2, q1 q2); never better than `q_bar`.
pub fn q_kinnunen_martio(q1: f64, q2: f64) -> Result<f64> {
    for q in [q1, q2] {
        if !q.is_finite() || q < 1.0 {
            return Err(Error::domain(format!("constant q = {q} must be >= 1")));
        }
    }
    Ok((q1 + q2).min(q1 * q2))
}
