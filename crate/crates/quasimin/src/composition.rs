//! Composition constant for the pointwise minimum of two radial
//! quasisuperminimizers.
//!
//! Normalize both profiles to run from 0 on the inner boundary of the
//! standard annulus to 1 on the outer one, in the logarithmic coordinate
//! t = 1 + ln r on [0, 1]: the first is t^alpha1 with alpha1 > 1, the second
//! is the reflected 1 - (1-t)^alpha2 with alpha2 < 1. The two graphs cross
//! exactly once at an interior t = x0; the minimum follows the first branch
//! below x0 and the second above it. Splitting the Dirichlet energy there
//! yields an explicit quasisuperminimizing constant for the minimum,
//!
//! ```text
//! q_hat = q1 * x0^m1 + q2 * (1 - x0)^m2,   m_i = p*(alpha_i - 1) + 1,
//! ```
//!
//! which always lies strictly between max(q1, q2) and the a-priori bound
//! q_bar.
//!
//! Numerical note: for strongly lopsided pairs the crossing sits within a few
//! hundred ulps of an endpoint (for q1 = 100 at p = 1.2 the gap 1 - x0 is
//! around 3e-13, and it shrinks below one ulp of 1 for harsher inputs), while
//! the composed constant still depends on the *gap* to full relative
//! precision. The solver therefore works in the logarithm of whichever of
//! x0 or 1 - x0 is small, and the result carries both quantities so that
//! downstream powers never subtract neighbouring floats.

use crate::constants::{alphas_of_q, q_bar};
use crate::error::{Error, Result};
use crate::params::ConformalParams;
use crate::profile::{Annulus, RadialFunction};
use crate::rootfind::{bracketed_root, RootOpts};
use serde::Serialize;

/// Largest residual |1 - (1-x0)^alpha2 - x0^alpha1| accepted at a computed
/// crossing. The stable evaluation keeps actual residuals near 1e-16.
const CROSSING_RESIDUAL_TOL: f64 = 1e-14;

/// Lower end of the log-space search window, slightly inside
/// ln(f64::MIN_POSITIVE) ~ -708.4.
const LOG_FLOOR: f64 = -708.0;

/// A pair of quasisuperminimizing constants to compose, with the exponent
/// context they live in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositionInput {
    pub q1: f64,
    pub q2: f64,
    pub p: f64,
    /// Ambient dimension for radial work; `None` for purely one-dimensional
    /// interval work.
    pub n: Option<u32>,
}

impl CompositionInput {
    /// Interval composition with exponent p > 1.
    pub fn general(q1: f64, q2: f64, p: f64) -> Result<Self> {
        let params = ConformalParams::general(p)?;
        Self::build(q1, q2, params)
    }

    /// Radial composition on an annulus in R^n, with the conformal coupling
    /// p = n.
    pub fn conformal(q1: f64, q2: f64, n: u32) -> Result<Self> {
        let params = ConformalParams::conformal(n)?;
        Self::build(q1, q2, params)
    }

    fn build(q1: f64, q2: f64, params: ConformalParams) -> Result<Self> {
        for (name, q) in [("q1", q1), ("q2", q2)] {
            if !q.is_finite() || !(q > 1.0) {
                return Err(Error::domain(format!(
                    "{name} = {q} must be finite and > 1 for a nontrivial composition"
                )));
            }
        }
        Ok(CompositionInput {
            q1,
            q2,
            p: params.p,
            n: params.n,
        })
    }

    pub fn params(&self) -> ConformalParams {
        ConformalParams {
            p: self.p,
            n: self.n,
        }
    }
}

/// Composition constant together with the crossing geometry it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositionResult {
    /// Upper exponent branch realizing q1.
    pub alpha1: f64,
    /// Lower exponent branch realizing q2.
    pub alpha2: f64,
    /// Crossing coordinate in [0, 1] (logarithmic variable t = 1 + ln r).
    pub x0: f64,
    /// The gap 1 - x0 at full relative precision; `x0` alone cannot resolve
    /// it once the crossing is within a few ulps of 1.
    pub one_minus_x0: f64,
    /// Crossing radius e^(x0 - 1) in the standard annulus.
    pub r0: f64,
    /// The composed constant.
    pub q_hat: f64,
    /// A-priori upper bound for the pair.
    pub q_bar: f64,
    /// Whether q_hat exceeds max(q1, q2), i.e. whether the minimum is
    /// genuinely worse than both inputs.
    pub exceeds_max: bool,
}

/// Crossing coordinate with its complement, both accurate to relative
/// rounding error.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Crossing {
    pub x0: f64,
    /// 1 - x0, solved in its own variable when x0 > 1/2.
    pub eps: f64,
}

/// Gap between the two normalized branches at coordinate x:
/// 1 - (1-x)^alpha2 - x^alpha1, positive below the crossing and negative
/// above it. Written through exp_m1/ln_1p so it stays accurate when x is
/// many orders of magnitude below 1.
fn branch_gap(x: f64, alpha1: f64, alpha2: f64) -> f64 {
    -(alpha2 * (-x).ln_1p()).exp_m1() - x.powf(alpha1)
}

/// The same gap seen from the other endpoint, as a function of eps = 1 - x
/// and negated: (1-eps)^alpha1 + eps^alpha2 - 1, positive below the root
/// eps = 1 - x0 and negative above it.
fn complement_gap(eps: f64, alpha1: f64, alpha2: f64) -> f64 {
    (alpha1 * (-eps).ln_1p()).exp_m1() + eps.powf(alpha2)
}

/// Solves for the unique interior crossing of the two branches.
pub(crate) fn solve_crossing(alpha1: f64, alpha2: f64) -> Result<Crossing> {
    if !alpha1.is_finite() || !(alpha1 > 1.0) {
        return Err(Error::domain(format!(
            "alpha1 = {alpha1} must be finite and > 1"
        )));
    }
    if !alpha2.is_finite() || !(alpha2 > 0.0 && alpha2 < 1.0) {
        return Err(Error::domain(format!(
            "alpha2 = {alpha2} must lie strictly inside (0, 1)"
        )));
    }

    let opts = RootOpts::default();
    let half_log = 0.5f64.ln();
    let v_half = branch_gap(0.5, alpha1, alpha2);

    if v_half == 0.0 {
        return Ok(Crossing { x0: 0.5, eps: 0.5 });
    }

    if v_half < 0.0 {
        // Crossing below 1/2: solve for ln x0. The gap is positive on all of
        // (0, x0), so the log floor brackets the root whenever the root is
        // representable at all.
        let g = |l: f64| branch_gap(l.exp(), alpha1, alpha2);
        let dg = |l: f64| {
            let x = l.exp();
            alpha2 * x * ((alpha2 - 1.0) * (-x).ln_1p()).exp() - alpha1 * (alpha1 * l).exp()
        };
        if g(LOG_FLOOR) <= 0.0 {
            return Err(Error::convergence(format!(
                "crossing point underflows double precision for alpha1 = {alpha1}, \
                 alpha2 = {alpha2} (alpha1 too close to 1 for this alpha2)"
            )));
        }
        let l0 = bracketed_root(g, Some(dg), LOG_FLOOR, half_log, &opts)?;
        let x0 = l0.exp();
        let residual = branch_gap(x0, alpha1, alpha2);
        if !(residual.abs() <= CROSSING_RESIDUAL_TOL) {
            return Err(Error::convergence(format!(
                "crossing residual {residual:e} exceeds {CROSSING_RESIDUAL_TOL:e} at x0 = {x0}"
            )));
        }
        Ok(Crossing { x0, eps: 1.0 - x0 })
    } else {
        // Crossing above 1/2: solve for ln(1 - x0).
        let h = |m: f64| complement_gap(m.exp(), alpha1, alpha2);
        let dh = |m: f64| {
            let e = m.exp();
            alpha2 * (alpha2 * m).exp() - alpha1 * e * ((alpha1 - 1.0) * (-e).ln_1p()).exp()
        };
        if h(LOG_FLOOR) <= 0.0 {
            // The complement gap is already negative at the smallest
            // representable scale: the true crossing lies within one ulp of
            // 1. Report the nearest interior point; the residual there is
            // still far below the acceptance threshold.
            let x0 = 1.0f64.next_down();
            let eps = 1.0 - x0;
            let residual = complement_gap(eps, alpha1, alpha2);
            if !(residual.abs() <= CROSSING_RESIDUAL_TOL) {
                return Err(Error::convergence(format!(
                    "crossing collapsed onto 1 with residual {residual:e} for \
                     alpha1 = {alpha1}, alpha2 = {alpha2}"
                )));
            }
            return Ok(Crossing { x0, eps });
        }
        let m0 = bracketed_root(h, Some(dh), LOG_FLOOR, half_log, &opts)?;
        let eps = m0.exp();
        let residual = complement_gap(eps, alpha1, alpha2);
        if !(residual.abs() <= CROSSING_RESIDUAL_TOL) {
            return Err(Error::convergence(format!(
                "crossing residual {residual:e} exceeds {CROSSING_RESIDUAL_TOL:e} at \
                 1 - x0 = {eps:e}"
            )));
        }
        Ok(Crossing {
            x0: 1.0 - eps,
            eps,
        })
    }
}

/// Interior coordinate where the two normalized branches cross.
///
/// Requires alpha1 > 1 and alpha2 in (0, 1). The result always lies strictly
/// between the two critical points of the gap; when the true crossing is
/// closer to 1 than one ulp, the nearest representable interior point is
/// returned (see `CompositionResult::one_minus_x0` for the full-precision
/// gap).
pub fn solve_x0(alpha1: f64, alpha2: f64) -> Result<f64> {
    Ok(solve_crossing(alpha1, alpha2)?.x0)
}

fn compose(input: &CompositionInput) -> Result<CompositionResult> {
    let b1 = alphas_of_q(input.q1, input.p)?;
    let b2 = alphas_of_q(input.q2, input.p)?;
    let alpha1 = b1.alpha_upper;
    let alpha2 = b2.alpha_lower;
    if !(alpha1 > 1.0) || !(alpha2 < 1.0) {
        return Err(Error::domain(format!(
            "the exponent branches merge at alpha = 1 for q1 = {} or q2 = {}; \
             the composition needs both constants strictly above 1 + 1e-12",
            input.q1, input.q2
        )));
    }

    let crossing = solve_crossing(alpha1, alpha2)?;
    let (x0, eps) = (crossing.x0, crossing.eps);
    let p = input.p;
    let m1 = p * (alpha1 - 1.0) + 1.0;
    let m2 = p * (alpha2 - 1.0) + 1.0;

    // Evaluate x0^m1 and (1-x0)^m2 from whichever of (x0, eps) carries full
    // relative accuracy, reaching the complement through ln_1p.
    let (pow1, pow2) = if x0 >= 0.5 {
        ((m1 * (-eps).ln_1p()).exp(), eps.powf(m2))
    } else {
        (x0.powf(m1), (m2 * (-x0).ln_1p()).exp())
    };
    let q_hat = input.q1 * pow1 + input.q2 * pow2;
    let bound = q_bar(input.q1, input.q2)?;

    Ok(CompositionResult {
        alpha1,
        alpha2,
        x0,
        one_minus_x0: eps,
        r0: (-eps).exp(),
        q_hat,
        q_bar: bound,
        exceeds_max: q_hat > input.q1.max(input.q2),
    })
}

/// Composed constant via the one-dimensional interval split (any p > 1).
pub fn q_tilde(input: &CompositionInput) -> Result<CompositionResult> {
    compose(input)
}

/// Composed constant via the radial split of the annulus at r0 = e^(x0 - 1),
/// in the conformal case p = n.
///
/// This route maps the crossing back to a radius and re-derives the constant
/// from the split energies; it must agree with the interval route to 1e-12
/// relative, and the call fails if it does not. The two agree exactly in
/// exact arithmetic.
pub fn q_hat(input: &CompositionInput) -> Result<CompositionResult> {
    let (n, _) = input.params().require_conformal()?;
    let mut result = compose(input)?;

    let p = f64::from(n);
    let m1 = p * (result.alpha1 - 1.0) + 1.0;
    let m2 = p * (result.alpha2 - 1.0) + 1.0;
    let log_r0 = result.r0.ln();
    let le = 1.0 + log_r0;
    let ml = -log_r0;
    let geometric = input.q1 * le.powf(m1) + input.q2 * ml.powf(m2);

    let rel = ((geometric - result.q_hat) / result.q_hat).abs();
    if !(rel < 1e-12) {
        return Err(Error::convergence(format!(
            "radial and interval routes disagree: {geometric} vs {} \
             (relative gap {rel:e})",
            result.q_hat
        )));
    }
    result.q_hat = geometric;
    result.exceeds_max = geometric > input.q1.max(input.q2);
    Ok(result)
}

/// The pointwise minimum of the two normalized branches on the standard
/// annulus [1/e, 1] in R^n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinProfile {
    pub alpha1: f64,
    pub alpha2: f64,
    pub x0: f64,
    pub r0: f64,
    annulus: Annulus,
}

/// Builds the minimum profile for a composition pair (requires p = n).
pub fn min_profile(input: &CompositionInput) -> Result<MinProfile> {
    let (n, _) = input.params().require_conformal()?;
    let result = compose(input)?;
    Ok(MinProfile {
        alpha1: result.alpha1,
        alpha2: result.alpha2,
        x0: result.x0,
        r0: result.r0,
        annulus: Annulus::standard(n)?,
    })
}

impl MinProfile {
    pub fn annulus(&self) -> Annulus {
        self.annulus
    }

    /// Value at radius r: t^alpha1 below the crossing, 1 - (1-t)^alpha2
    /// above it, in the coordinate t = 1 + ln r.
    pub fn value(&self, r: f64) -> Result<f64> {
        if !self.annulus.contains(r) {
            return Err(Error::domain(format!(
                "r = {r} outside the annulus [{}, {}]",
                self.annulus.r1, self.annulus.r2
            )));
        }
        let t = 1.0 + r.ln();
        if t <= self.x0 {
            Ok(t.max(0.0).powf(self.alpha1))
        } else {
            // 1 - t computed directly from the radius, not as a difference.
            let s = (-r.ln()).max(0.0);
            Ok(1.0 - s.powf(self.alpha2))
        }
    }
}

impl RadialFunction for MinProfile {
    fn value(&self, r: f64) -> Result<f64> {
        MinProfile::value(self, r)
    }

    fn domain(&self) -> Annulus {
        self.annulus
    }
}

/// One ordered pair in an asymmetry scan: the composed constant is not
/// symmetric in (q1, q2), and the scan records both orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymmetryRow {
    pub q1: f64,
    pub q2: f64,
    /// Composed constant for (q1, q2).
    pub forward: f64,
    /// Composed constant for (q2, q1).
    pub reverse: f64,
    pub difference: f64,
}

/// Composes every pair in both orders at a common exponent p.
pub fn asymmetry_scan(pairs: &[(f64, f64)], p: f64) -> Result<Vec<AsymmetryRow>> {
    pairs
        .iter()
        .map(|&(q1, q2)| {
            let forward = q_tilde(&CompositionInput::general(q1, q2, p)?)?.q_hat;
            let reverse = q_tilde(&CompositionInput::general(q2, q1, p)?)?.q_hat;
            Ok(AsymmetryRow {
                q1,
                q2,
                forward,
                reverse,
                difference: forward - reverse,
            })
        })
        .collect()
}
