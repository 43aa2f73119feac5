//! Exponent/dimension bundle shared by the energy operations.
//!
//! The p-Dirichlet energy of a radial function on an annulus in R^n reduces
//! to a weighted one-dimensional integral; in the conformal case p = n the
//! weight in logarithmic coordinates is identically 1 and every radial energy
//! splits off the sphere-area factor 2*pi^(n/2)/Gamma(n/2).

use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Exponent p and (optionally) the ambient dimension n.
///
/// Radial energy work requires the conformal coupling p = n; purely
/// one-dimensional interval work only needs p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConformalParams {
    pub p: f64,
    pub n: Option<u32>,
}

impl ConformalParams {
    /// Conformal case: p = n with n an integer dimension >= 2.
    pub fn conformal(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension n = {n} must be >= 2")));
        }
        Ok(ConformalParams {
            p: f64::from(n),
            n: Some(n),
        })
    }

    /// Interval case: exponent p > 1, no ambient dimension.
    pub fn general(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("exponent p = {p} must be finite and > 1")));
        }
        Ok(ConformalParams { p, n: None })
    }

    /// Surface area of the unit sphere in R^n, if n is set.
    pub fn c_sphere(&self) -> Option<f64> {
        self.n.map(unit_sphere_area)
    }

    /// Dimension and sphere area, or a domain error when the params are not
    /// conformal (n unset or p != n).
    pub fn require_conformal(&self) -> Result<(u32, f64)> {
        match self.n {
            Some(n) if self.p == f64::from(n) => Ok((n, unit_sphere_area(n))),
            Some(n) => Err(Error::domain(format!(
                "radial energies need the conformal coupling p = n, got p = {} with n = {n}",
                self.p
            ))),
            None => Err(Error::domain(
                "radial energies need a dimension n; these params carry only p",
            )),
        }
    }
}

/// Gamma(n/2) for integer n >= 1, by the half-integer recursion
/// Gamma(1/2) = sqrt(pi), Gamma(1) = 1, Gamma(x+1) = x Gamma(x).
fn gamma_half(n: u32) -> f64 {
    let even = n.is_multiple_of(2);
    let mut value = if even { 1.0 } else { PI.sqrt() };
    let mut k = if even { 2 } else { 1 };
    while k + 2 <= n {
        value *= f64::from(k) / 2.0;
        k += 2;
    }
    value
}

/// Surface area 2*pi^(n/2)/Gamma(n/2) of the unit sphere in R^n.
pub fn unit_sphere_area(n: u32) -> f64 {
    2.0 * PI.powf(f64::from(n) / 2.0) / gamma_half(n)
}
