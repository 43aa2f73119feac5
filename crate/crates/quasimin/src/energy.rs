//! Energies of radial log-power profiles in the conformal case p = n:
//! closed forms in logarithmic coordinates, adaptive-quadrature cross
//! checks, the boundary-matched energy quotient k, the radial p-Laplacian
//! of log-powers, and the optimal-constant classification.

use crate::constants::q_of_alpha;
use crate::error::{Error, Result};
use crate::params::ConformalParams;
use crate::profile::{LogPowerProfile, Orientation};
use crate::quad::{integrate_graded, QuadOpts};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnergyMethod {
    ClosedForm,
    Quadrature,
}

/// A computed energy together with enough context to interpret it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyReport {
    pub alpha: f64,
    pub n: u32,
    /// Radial interval (r1, r2) the energy was taken over.
    pub domain: [f64; 2],
    pub value: f64,
    pub method: EnergyMethod,
    /// Whether `value` includes the surface-area factor of the unit sphere.
    pub sphere_factor: bool,
}

/// Energy of t -> t^alpha over a log-radius interval [s1, s2]:
/// the antiderivative of alpha^p t^{p(alpha-1)} evaluated at the endpoints.
/// Shared by the public closed form (which insists on s1 > 0) and the
/// composed-profile identities (whose first piece is anchored at s1 = 0,
/// where the value extends continuously because p(alpha-1)+1 > 0).
pub(crate) fn log_interval_energy(alpha: f64, s1: f64, s2: f64, p: f64) -> Result<f64> {
    let q = q_of_alpha(alpha, p)?;
    if !(s1 >= 0.0) || !(s2 > s1) || !s2.is_finite() {
        return Err(Error::domain(format!(
            "log-radius interval must satisfy 0 <= s1 < s2 < inf, got ({s1}, {s2})"
        )));
    }
    let m = p * (alpha - 1.0) + 1.0;
    Ok(q * (s2.powf(m) - s1.powf(m)))
}

/// Closed-form energy of log^alpha r over the radial interval
/// (e^{s1}, e^{s2}), weighted by r^{n-1}, without the sphere factor:
/// Q_{alpha,n} (s2^m - s1^m) with m = n(alpha-1)+1.
pub fn closed_form_energy(alpha: f64, s1: f64, s2: f64, params: &ConformalParams) -> Result<f64> {
    let (n, _) = params.require_conformal()?;
    let p = f64::from(n);
    if s1 < 0.0 {
        return Err(Error::domain(format!(
            "log-radius s1 must be nonnegative, got {s1}"
        )));
    }
    log_interval_energy(alpha, s1, s2, p)
}

/// Energy of an arbitrary radial derivative over (r1, r2), by adaptive
/// quadrature of |f(r)|^n r^{n-1}; integrable endpoint blowups are fine.
pub fn quadrature_energy<F: Fn(f64) -> f64>(
    phi_prime: F,
    r1: f64,
    r2: f64,
    params: &ConformalParams,
) -> Result<f64> {
    let (n, _) = params.require_conformal()?;
    let ni = n as i32;
    let result = integrate_graded(
        |r: f64| phi_prime(r).abs().powi(ni) * r.powi(ni - 1),
        r1,
        r2,
        &QuadOpts::default(),
    )?;
    Ok(result.value)
}

/// Energy of a log-power profile over its own annulus, by either method.
pub fn profile_energy(profile: &LogPowerProfile, method: EnergyMethod) -> Result<EnergyReport> {
    let annulus = profile.annulus;
    let params = ConformalParams::conformal(annulus.n)?;
    let value = match method {
        EnergyMethod::ClosedForm => {
            // Move to the log coordinate in which the profile is a pure
            // power: s = log(e r) for Inner, s = -log r for Outer (the
            // latter reverses orientation, hence the swapped endpoints).
            let (s_lo, s_hi) = match profile.orientation {
                Orientation::Inner => (1.0 + annulus.r1.ln(), 1.0 + annulus.r2.ln()),
                Orientation::Outer => (-annulus.r2.ln(), -annulus.r1.ln()),
            };
            log_interval_energy(profile.alpha, s_lo.max(0.0), s_hi, f64::from(annulus.n))?
        }
        EnergyMethod::Quadrature => {
            let p = *profile;
            quadrature_energy(
                move |r| p.slope(r).unwrap_or(f64::NAN),
                annulus.r1,
                annulus.r2,
                &params,
            )?
        }
    };
    Ok(EnergyReport {
        alpha: profile.alpha,
        n: annulus.n,
        domain: [annulus.r1, annulus.r2],
        value,
        method,
        sphere_factor: false,
    })
}

/// Threshold below which k is evaluated by its quadratic series in (S-1).
/// The direct expression is a ratio of quantities vanishing like S - 1, so
/// its noise floor grows like eps / (S-1)^3 relative to k - 1, while the
/// series truncation error shrinks like S - 1; the curves cross near 7e-4.
const K_SERIES_CUTOFF: f64 = 1e-4;

/// Energy quotient of log^alpha against the affine-in-log minimizer with
/// the same boundary values, on a log-radius interval with endpoint ratio S:
/// Q (S^m - 1)/(S - 1) ((S - 1)/(S^alpha - 1))^n, with m = n(alpha-1)+1.
///
/// Evaluated in log space so that huge S (up to e.g. 1e10 with large m)
/// neither overflows nor loses the cancellation structure; tends to 1 as
/// S -> 1+ and increases to its supremum Q as S -> infinity.
pub fn k_of_s(s_ratio: f64, alpha: f64, params: &ConformalParams) -> Result<f64> {
    let (n, _) = params.require_conformal()?;
    let q = q_of_alpha(alpha, f64::from(n))?;
    if !(s_ratio > 1.0) || !s_ratio.is_finite() {
        return Err(Error::domain(format!(
            "endpoint ratio must satisfy 1 < S < inf, got {s_ratio}"
        )));
    }
    if alpha == 1.0 {
        return Ok(1.0);
    }
    let nf = f64::from(n);
    let sm1 = s_ratio - 1.0;
    if sm1 < K_SERIES_CUTOFF {
        // k = 1 + n(n-1)(alpha-1)^2 (S-1)^2 / 24 + O((S-1)^3)
        return Ok(1.0 + nf * (nf - 1.0) * (alpha - 1.0).powi(2) * sm1 * sm1 / 24.0);
    }
    let t = s_ratio.ln();
    // ln(S^e - 1) = e t + ln(1 - e^{-e t}); the second term is what l1 returns.
    let l1 = |e: f64| (-(-e * t).exp()).ln_1p();
    let m = nf * (alpha - 1.0) + 1.0;
    let ln_k = q.ln() + l1(m) + (nf - 1.0) * l1(1.0) - nf * l1(alpha);
    Ok(ln_k.exp())
}

/// Negated radial p-Laplacian -div(|grad u|^{n-2} grad u) of u = log^alpha r
/// at radius r > 1:
/// alpha(1-alpha)|alpha|^{n-2}(n-1) (log r)^{(n-1)alpha - n} r^{-n}.
/// Positive exactly when 0 < alpha < 1 (supersolution), negative for
/// alpha > 1 (subsolution), zero at alpha = 1.
pub fn plap_of_logpower(alpha: f64, r: f64, params: &ConformalParams) -> Result<f64> {
    let (n, _) = params.require_conformal()?;
    check_alpha(alpha, n)?;
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must satisfy r > 1, got {r}")));
    }
    let ni = n as i32;
    let nf = f64::from(n);
    let coeff = alpha * (1.0 - alpha) * alpha.abs().powi(ni - 2) * (nf - 1.0);
    if coeff == 0.0 {
        return Ok(0.0);
    }
    Ok(coeff * r.ln().powf((nf - 1.0) * alpha - nf) * r.powi(-ni))
}

/// Scaled radial flux F(r) = |u'|^{n-2} u' r^{n-1} of u = log^alpha r for
/// r > 1, in closed form: |alpha|^{n-2} alpha (log r)^{(alpha-1)(n-1)}.
/// Its derivative satisfies F'(r) = -plap_of_logpower(..) r^{n-1}, which the
/// test suite verifies by central differences.
pub fn log_power_flux(alpha: f64, r: f64, params: &ConformalParams) -> Result<f64> {
    let (n, _) = params.require_conformal()?;
    check_alpha(alpha, n)?;
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must satisfy r > 1, got {r}")));
    }
    let ni = n as i32;
    let nf = f64::from(n);
    Ok(alpha.abs().powi(ni - 2) * alpha * r.ln().powf((alpha - 1.0) * (nf - 1.0)))
}

fn check_alpha(alpha: f64, n: u32) -> Result<()> {
    let singular = 1.0 - 1.0 / f64::from(n);
    if !alpha.is_finite() || alpha <= singular {
        return Err(Error::domain(format!(
            "exponent alpha must exceed 1 - 1/n = {singular}, got {alpha}"
        )));
    }
    Ok(())
}

/// Energy of log^alpha r on the shell between radius 1 and gamma (gamma > 1),
/// or of the mirrored outer power on (gamma, 1) when 0 < gamma < 1, together
/// with the energy of the boundary-matching minimizer and their quotient.
/// The quotient is Q_{alpha,n} exactly: the profile realizes the largest
/// energy its quasiminimizing constant allows.
pub fn max_energy_check(
    alpha: f64,
    gamma: f64,
    params: &ConformalParams,
) -> Result<(f64, f64, f64)> {
    let (n, _) = params.require_conformal()?;
    check_alpha(alpha, n)?;
    if !(gamma > 0.0) || gamma == 1.0 || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "gamma must lie in (0, 1) or (1, inf), got {gamma}"
        )));
    }
    let p = f64::from(n);
    let width = gamma.ln().abs();
    let m = p * (alpha - 1.0) + 1.0;
    let q = q_of_alpha(alpha, p)?;
    let energy_minimizer = width.powf(m);
    let energy_profile = q * energy_minimizer;
    Ok((energy_profile, energy_minimizer, q))
}

/// The optimal quasiminimizing, quasisubminimizing and quasisuperminimizing
/// constants of log^alpha r on shells at p = n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalConstants {
    pub qmin: f64,
    pub qsub: f64,
    pub qsuper: f64,
}

/// Classify a log-power: below alpha = 1 the profile is a supersolution
/// (one-sided constant 1 on the nonnegative side), above it a subsolution,
/// and at alpha = 1 a genuine minimizer.
pub fn optimal_constants(alpha: f64, params: &ConformalParams) -> Result<OptimalConstants> {
    let (n, _) = params.require_conformal()?;
    check_alpha(alpha, n)?;
    let q = q_of_alpha(alpha, f64::from(n))?;
    Ok(if alpha < 1.0 {
        OptimalConstants {
            qmin: q,
            qsub: q,
            qsuper: 1.0,
        }
    } else if alpha == 1.0 {
        OptimalConstants {
            qmin: 1.0,
            qsub: 1.0,
            qsuper: 1.0,
        }
    } else {
        OptimalConstants {
            qmin: q,
            qsub: 1.0,
            qsuper: q,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn p2() -> ConformalParams {
        ConformalParams::conformal(2).unwrap()
    }

    #[test]
    fn closed_form_minimizer_case() {
        // alpha = 1 on (e, e^2): Q = 1, s2 - s1 = 1.
        let v = closed_form_energy(1.0, 1.0, 2.0, &p2()).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_square_log() {
        // alpha = 2, n = 2: integral of 4 t^2 over (1, 2) = 28/3.
        let v = closed_form_energy(2.0, 1.0, 2.0, &p2()).unwrap();
        assert!((v - 28.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn closed_form_fractional_power() {
        let v = closed_form_energy(0.75, 0.5, 1.0, &p2()).unwrap();
        assert!((v - 0.32950487116513404).abs() < 1e-15);
        // = Q_{0.75,2} (1 - 0.5^{1/2}) with Q_{0.75,2} = 1.125
        let direct = 1.125 * (1.0 - 0.5f64.sqrt());
        assert!((v - direct).abs() < 1e-15);
    }

    #[test]
    fn closed_form_accepts_zero_left_endpoint() {
        let v = closed_form_energy(2.0, 0.0, 1.0, &p2()).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-15);
        assert!(closed_form_energy(2.0, -0.1, 1.0, &p2()).is_err());
    }

    #[test]
    fn closed_form_domain_errors() {
        assert!(closed_form_energy(0.4, 1.0, 2.0, &p2()).is_err()); // alpha <= 1/2
        assert!(closed_form_energy(2.0, 2.0, 1.0, &p2()).is_err()); // s2 < s1
        let general = ConformalParams::general(2.5).unwrap();
        assert!(closed_form_energy(2.0, 1.0, 2.0, &general).is_err()); // not conformal
    }

    #[test]
    fn quadrature_reproduces_minimizer_energy() {
        // phi'(r) = 1/r on (1/e, 1), n = 2: integral of r^{-2} r dr = 1.
        let v = quadrature_energy(|r| 1.0 / r, (-1.0f64).exp(), 1.0, &p2()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_closed_form_square_log() {
        let v = quadrature_energy(|r: f64| 2.0 * r.ln() / r, E, E * E, &p2()).unwrap();
        assert!((v - 28.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_of_zero_is_zero() {
        let v = quadrature_energy(|_| 0.0, 1.0, 2.0, &p2()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn profile_energy_scaling_invariance() {
        // The Inner profile on (1/e, 1) and log^alpha on (1, e) are related
        // by the scaling r -> e r, which preserves the conformal energy.
        let alpha = 0.75;
        let inner = LogPowerProfile::inner(alpha, 2).unwrap();
        let closed = profile_energy(&inner, EnergyMethod::ClosedForm).unwrap();
        let quad = profile_energy(&inner, EnergyMethod::Quadrature).unwrap();
        let shifted = quadrature_energy(
            |r: f64| alpha * r.ln().powf(alpha - 1.0) / r,
            1.0,
            E,
            &p2(),
        )
        .unwrap();
        // Both equal Q_{alpha,2} (log-width 1 to the power m). The quadrature
        // route sees an integrand blowing up like (distance)^{-1/2} at a
        // nonzero radius, where one ulp of the abscissa caps the attainable
        // agreement near sqrt(ulp) ~ 1e-8.
        assert!((closed.value - 1.125).abs() < 1e-14);
        assert!((quad.value - closed.value).abs() < 1e-7 * closed.value);
        assert!((shifted - closed.value).abs() < 1e-7 * closed.value);
    }

    #[test]
    fn k_at_alpha_one_is_one() {
        assert_eq!(k_of_s(7.3, 1.0, &p2()).unwrap(), 1.0);
    }

    #[test]
    fn k_spot_values() {
        // Rational points: k(2) = 28/27 and k(4) = 28/25 for alpha = 2, n = 2.
        let k2 = k_of_s(2.0, 2.0, &p2()).unwrap();
        assert!((k2 - 28.0 / 27.0).abs() < 1e-14, "k(2) = {k2}");
        let k4 = k_of_s(4.0, 2.0, &p2()).unwrap();
        assert!((k4 - 1.12).abs() < 1e-13, "k(4) = {k4}");
        let k075 = k_of_s(4.0, 0.75, &p2()).unwrap();
        assert!((k075 - 1.0095282263680976).abs() < 1e-13);
        let p3 = ConformalParams::conformal(3).unwrap();
        let k15 = k_of_s(10.0, 1.5, &p3).unwrap();
        assert!((k15 - 1.2003545781959873).abs() < 1e-12);
    }

    #[test]
    fn k_near_one_is_one_plus_quadratic() {
        let k = k_of_s(1.0 + 1e-6, 2.0, &p2()).unwrap();
        assert!(k > 1.0, "k just above S=1 must stay above 1, got {k}");
        assert!(k < 1.0 + 1e-4);
        // Quadratic coefficient n(n-1)(alpha-1)^2/24 = 1/12 for alpha=2, n=2,
        // recovered from the direct branch at a point where its noise floor
        // (~eps/(S-1)) sits well below the quadratic term.
        let kd = k_of_s(1.0 + 1e-3, 2.0, &p2()).unwrap();
        let c = (kd - 1.0) / 1e-6;
        assert!(
            (c - 1.0 / 12.0).abs() < 0.02 / 12.0,
            "quadratic coefficient {c}"
        );
        // Same check inside the series branch, with parameters large enough
        // that the quadratic term is representable next to 1: alpha = 5,
        // n = 10 gives coefficient 60, so k - 1 = 60 (9e-9)^2 = 4.86e-15.
        let p10 = ConformalParams::conformal(10).unwrap();
        let ks = k_of_s(1.0 + 9e-9, 5.0, &p10).unwrap();
        assert!((ks - 1.0 - 4.86e-15).abs() < 5e-16, "series branch k = {ks}");
    }

    #[test]
    fn k_approaches_supremum_for_large_s() {
        let k = k_of_s(1e8, 2.0, &p2()).unwrap();
        assert!((k - 4.0 / 3.0).abs() < 1e-5);
        assert!(k < 4.0 / 3.0, "quotient must stay strictly below Q");
    }

    #[test]
    fn k_supremum_approach_is_slow_for_small_m() {
        // With m = n(alpha-1)+1 small the approach to the supremum is slow:
        // at alpha = 0.6, n = 2 (m = 0.2) the quotient at S = 1e10 is still
        // visibly below Q, by about 0.018.
        let q = q_of_alpha(0.6, 2.0).unwrap();
        let k = k_of_s(1e10, 0.6, &p2()).unwrap();
        assert!(k < q - 1e-3);
        assert!(k > q - 0.05);
    }

    #[test]
    fn k_domain_errors() {
        assert!(k_of_s(1.0, 2.0, &p2()).is_err());
        assert!(k_of_s(0.5, 2.0, &p2()).is_err());
        assert!(k_of_s(f64::INFINITY, 2.0, &p2()).is_err());
        assert!(k_of_s(2.0, 0.5, &p2()).is_err());
    }

    #[test]
    fn plap_sign_and_values() {
        let v = plap_of_logpower(0.9, E, &p2()).unwrap();
        assert!((v - 0.012180175491295142).abs() < 1e-17);
        let v = plap_of_logpower(2.0, E, &p2()).unwrap();
        assert!((v - (-2.0 * (-2.0f64).exp())).abs() < 1e-15);
        let p3 = ConformalParams::conformal(3).unwrap();
        assert_eq!(plap_of_logpower(1.0, 2.0, &p3).unwrap(), 0.0);
        assert!(plap_of_logpower(2.0, 1.0, &p2()).is_err());
        assert!(plap_of_logpower(2.0, 0.5, &p2()).is_err());
    }

    #[test]
    fn flux_derivative_matches_plap() {
        let params = ConformalParams::conformal(3).unwrap();
        for &alpha in &[0.7, 0.9, 1.0, 1.5, 3.0] {
            for &r in &[1.7, 2.5, 4.0] {
                let h = 1e-5;
                let fd = (log_power_flux(alpha, r + h, &params).unwrap()
                    - log_power_flux(alpha, r - h, &params).unwrap())
                    / (2.0 * h);
                let exact = -plap_of_logpower(alpha, r, &params).unwrap() * r.powi(2);
                assert!(
                    (fd - exact).abs() <= 1e-5 * exact.abs().max(1e-12),
                    "alpha={alpha} r={r}: fd={fd} exact={exact}"
                );
            }
        }
    }

    #[test]
    fn max_energy_ratio_is_exactly_q() {
        let (ep, em, ratio) = max_energy_check(1.0, E, &p2()).unwrap();
        assert_eq!((ep, em, ratio), (1.0, 1.0, 1.0));
        let (ep, em, ratio) = max_energy_check(2.0, E, &p2()).unwrap();
        assert!((ep - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(em, 1.0);
        assert!((ratio - 4.0 / 3.0).abs() < 1e-15);
        // alpha = 2 + sqrt(2) has Q = 2.
        let (_, _, ratio) = max_energy_check(2.0 + 2.0f64.sqrt(), E, &p2()).unwrap();
        assert!((ratio - 2.0).abs() < 1e-14);
        // Mirrored outer case on (1/e, 1).
        let (ep, em, ratio) = max_energy_check(2.0, 1.0 / E, &p2()).unwrap();
        assert!((ep - 4.0 / 3.0).abs() < 1e-15 && em == 1.0 && ratio > 1.0);
        assert!(max_energy_check(2.0, 1.0, &p2()).is_err());
        assert!(max_energy_check(2.0, 0.0, &p2()).is_err());
    }

    #[test]
    fn constant_classification() {
        let c = optimal_constants(1.0, &p2()).unwrap();
        assert_eq!((c.qmin, c.qsub, c.qsuper), (1.0, 1.0, 1.0));
        let c = optimal_constants(2.0, &p2()).unwrap();
        assert!((c.qmin - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.qsub, 1.0);
        assert_eq!(c.qsuper, c.qmin);
        let c = optimal_constants(0.75, &p2()).unwrap();
        assert!((c.qmin - 1.125).abs() < 1e-15);
        assert_eq!(c.qsub, c.qmin);
        assert_eq!(c.qsuper, 1.0);
    }

    #[test]
    fn profile_energy_reports_metadata() {
        let u = LogPowerProfile::outer(0.8, 2).unwrap();
        let rep = profile_energy(&u, EnergyMethod::ClosedForm).unwrap();
        assert_eq!(rep.n, 2);
        assert_eq!(rep.method, EnergyMethod::ClosedForm);
        assert!(!rep.sphere_factor);
        assert!(rep.value > 0.0);
        // The outer profile's energy on the standard shell also equals Q:
        // the mirrored log-interval is again (0, 1).
        assert!((rep.value - q_of_alpha(0.8, 2.0).unwrap()).abs() < 1e-14);
        let quad = profile_energy(&u, EnergyMethod::Quadrature).unwrap();
        assert!((quad.value - rep.value).abs() < 1e-9 * rep.value);
    }
}
