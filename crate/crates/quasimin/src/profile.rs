//! Radial profiles: annular domains, the log-power family, and the trait
//! used by the discretization layer to sample arbitrary radial functions.

use crate::error::{Error, Result};
use serde::Serialize;

/// Relative slack used when testing membership of a radius in an annulus,
/// so that exp/log round trips of boundary radii do not fall outside.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Spherical shell `{x in R^n : r1 < |x| < r2}` together with its dimension.
///
/// `r1 = 0` and `r2 = +inf` are permitted for the type itself; operations
/// that need a bounded shell validate separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annulus {
    pub r1: f64,
    pub r2: f64,
    pub n: u32,
}

impl Annulus {
    pub fn new(r1: f64, r2: f64, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
        }
        if r1.is_nan() || r2.is_nan() || r1 < 0.0 || !(r1 < r2) {
            return Err(Error::domain(format!(
                "annulus radii must satisfy 0 <= r1 < r2, got ({r1}, {r2})"
            )));
        }
        Ok(Annulus { r1, r2, n })
    }

    /// The standard working shell (1/e, 1), on which both log-power
    /// orientations take boundary values 0 and 1.
    pub fn standard(n: u32) -> Result<Self> {
        Annulus::new((-1.0f64).exp(), 1.0, n)
    }

    /// Closed-interval membership with a tiny relative slack at both ends,
    /// so profiles can be evaluated at their boundary radii.
    pub fn contains(&self, r: f64) -> bool {
        if r.is_nan() {
            return false;
        }
        let lo = self.r1 - BOUNDARY_SLACK * self.r1.max(1.0);
        let hi = self.r2 + BOUNDARY_SLACK * self.r2.max(1.0);
        lo <= r && r <= hi
    }

    /// log(r2/r1); requires a bounded shell with r1 > 0.
    pub fn log_width(&self) -> Result<f64> {
        if self.r1 <= 0.0 || !self.r2.is_finite() {
            return Err(Error::domain(format!(
                "log width needs 0 < r1 < r2 < inf, got ({}, {})",
                self.r1, self.r2
            )));
        }
        Ok((self.r2 / self.r1).ln())
    }
}

/// Which boundary of the standard shell the power law is anchored to.
///
/// `Inner`: u(r) = log^alpha(e r), vanishing at r = 1/e, rising to 1 at r = 1.
/// `Outer`: u(r) = 1 - (-log r)^alpha, also 0 at r = 1/e and 1 at r = 1, but
/// with the power-law behavior at the outer boundary instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Inner,
    Outer,
}

/// A radial log-power function restricted to an annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogPowerProfile {
    pub alpha: f64,
    pub orientation: Orientation,
    pub annulus: Annulus,
}

impl LogPowerProfile {
    pub fn new(alpha: f64, orientation: Orientation, annulus: Annulus) -> Result<Self> {
        let n = annulus.n;
        let singular = 1.0 - 1.0 / f64::from(n);
        if !alpha.is_finite() || alpha <= singular {
            return Err(Error::domain(format!(
                "exponent alpha must exceed 1 - 1/n = {singular}, got {alpha}"
            )));
        }
        if !annulus.r2.is_finite() || annulus.r1 <= 0.0 {
            return Err(Error::domain(
                "log-power profiles need a bounded annulus with r1 > 0".to_string(),
            ));
        }
        // Keep the annulus inside the natural domain of the chosen formula:
        // log(e r) >= 0 for Inner, -log r >= 0 for Outer.
        let e_inv = (-1.0f64).exp();
        match orientation {
            Orientation::Inner if annulus.r1 < e_inv * (1.0 - BOUNDARY_SLACK) => {
                return Err(Error::domain(format!(
                    "Inner profile needs r1 >= 1/e, got {}",
                    annulus.r1
                )))
            }
            Orientation::Outer if annulus.r2 > 1.0 + BOUNDARY_SLACK => {
                return Err(Error::domain(format!(
                    "Outer profile needs r2 <= 1, got {}",
                    annulus.r2
                )))
            }
            _ => {}
        }
        Ok(LogPowerProfile {
            alpha,
            orientation,
            annulus,
        })
    }

    /// Inner profile on the standard shell (1/e, 1).
    pub fn inner(alpha: f64, n: u32) -> Result<Self> {
        LogPowerProfile::new(alpha, Orientation::Inner, Annulus::standard(n)?)
    }

    /// Outer profile on the standard shell (1/e, 1).
    pub fn outer(alpha: f64, n: u32) -> Result<Self> {
        LogPowerProfile::new(alpha, Orientation::Outer, Annulus::standard(n)?)
    }

    /// Value at radius r (boundary radii included).
    pub fn value(&self, r: f64) -> Result<f64> {
        if !self.annulus.contains(r) {
            return Err(Error::domain(format!(
                "radius {r} outside annulus ({}, {})",
                self.annulus.r1, self.annulus.r2
            )));
        }
        Ok(match self.orientation {
            // max(.., 0) absorbs roundoff at the boundary radius where the
            // log argument crosses zero.
            Orientation::Inner => (1.0 + r.ln()).max(0.0).powf(self.alpha),
            Orientation::Outer => 1.0 - (-r.ln()).max(0.0).powf(self.alpha),
        })
    }

    /// Radial derivative du/dr; may diverge at the boundary where the log
    /// argument vanishes (when alpha < 1).
    pub fn slope(&self, r: f64) -> Result<f64> {
        if !self.annulus.contains(r) {
            return Err(Error::domain(format!(
                "radius {r} outside annulus ({}, {})",
                self.annulus.r1, self.annulus.r2
            )));
        }
        let a = self.alpha;
        Ok(match self.orientation {
            Orientation::Inner => a * (1.0 + r.ln()).max(0.0).powf(a - 1.0) / r,
            Orientation::Outer => a * (-r.ln()).max(0.0).powf(a - 1.0) / r,
        })
    }
}

/// Anything that can be evaluated at a radius; implemented by the log-power
/// family and by composed profiles, and consumed by the sampling layer.
pub trait RadialFunction {
    fn value(&self, r: f64) -> Result<f64>;
    fn domain(&self) -> Annulus;
}

impl RadialFunction for LogPowerProfile {
    fn value(&self, r: f64) -> Result<f64> {
        LogPowerProfile::value(self, r)
    }

    fn domain(&self) -> Annulus {
        self.annulus
    }
}
