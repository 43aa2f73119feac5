//! Tensor-product extension of interval profiles to long strips.
//!
//! An interval profile u(x) extended constantly across a strip [0, L] x [0,1]
//! keeps its 1-D energy ratio only in the limit L -> infinity: any admissible
//! 2-D perturbation must be ramped down to zero near the strip ends, and the
//! two transition slabs pay an extra cost that vanishes relative to the
//! interior as the strip grows. `strip_ratio` computes the exact energy ratio
//! for the separable competitor phi(x) * ramp(t) on a strip of interior
//! length m, and `exhaustion_check` verifies it climbs monotonically to the
//! 1-D ratio.

use crate::config::OracleConfig;
use crate::error::{Error, Result};
use crate::oracle::{restricted_energies, support_ranges, Coordinate, PiecewiseLinearProfile, RadialGrid};
use crate::quad::{integrate, QuadOpts};
use serde::Serialize;

/// Trapezoidal cutoff in the strip coordinate: rises 0 -> 1 over [0, 1],
/// holds 1 on [1, m+1], falls back to 0 over [m+1, m+2], and vanishes
/// outside. The interior plateau has length m; each transition slab length 1.
pub fn ramp_phi2(t: f64, m: f64) -> f64 {
    t.min(1.0).min(m + 2.0 - t).max(0.0)
}

/// A strip comparison problem: interval profile, interval perturbation
/// (nonnegative, vanishing at both ends), interior length, and energy
/// exponent.
#[derive(Debug, Clone)]
pub struct StripTestConfig {
    base_profile: PiecewiseLinearProfile,
    base_phi: PiecewiseLinearProfile,
    m: f64,
    p: f64,
}

impl StripTestConfig {
    pub fn new(
        base_profile: PiecewiseLinearProfile,
        base_phi: PiecewiseLinearProfile,
        m: f64,
        p: f64,
    ) -> Result<Self> {
        if base_profile.grid() != base_phi.grid() {
            return Err(Error::grid_mismatch(
                "profile and perturbation must share a grid",
            ));
        }
        if base_profile.grid().coordinate != Coordinate::LogRadius {
            return Err(Error::domain(
                "strip profiles live on unit-weight (log-coordinate) grids",
            ));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::domain(format!(
                "interior length m = {m} must be finite and > 0"
            )));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("exponent p = {p} must be finite and > 1")));
        }
        let pv = base_phi.values();
        if pv[0] != 0.0 || *pv.last().unwrap() != 0.0 {
            return Err(Error::domain(
                "perturbation must vanish at both interval endpoints",
            ));
        }
        if pv.iter().any(|&x| x < 0.0) {
            return Err(Error::domain("perturbation must be nonnegative"));
        }
        Ok(StripTestConfig {
            base_profile,
            base_phi,
            m,
            p,
        })
    }

    pub fn base_profile(&self) -> &PiecewiseLinearProfile {
        &self.base_profile
    }

    pub fn base_phi(&self) -> &PiecewiseLinearProfile {
        &self.base_phi
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Breakdown of one strip comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StripRatio {
    /// Interior plateau length.
    pub m: f64,
    /// 1-D energy of the profile on the perturbation's support.
    pub energy_base: f64,
    /// 1-D energy of profile + perturbation on the same support.
    pub energy_competitor: f64,
    /// Energy of one transition slab (gradient in both directions).
    pub transition: f64,
    /// energy_base / energy_competitor: the ratio the strip approaches.
    pub ratio_1d: f64,
    /// (m+2) energy_base / (m energy_competitor + 2 transition).
    pub strip_ratio: f64,
    /// True when the perturbation vanishes identically (both ratios 1).
    pub degenerate: bool,
}

/// Exact energy of one transition slab. The separable competitor
/// u(x) + t phi(x) on the slab has gradient (u' + t phi', phi), so each
/// interval cell contributes the double integral of
/// ((u' + t phi')^2 + phi(x)^2)^{p/2} over the cell and t in (0, 1).
/// For p = 2 that is a polynomial with a closed form per cell; otherwise the
/// x-integral is computed adaptively per cell inside an adaptive t-integral.
fn transition_energy(
    grid: &RadialGrid,
    u: &[f64],
    phi: &[f64],
    support: &[[usize; 2]],
    p: f64,
) -> Result<f64> {
    if p == 2.0 {
        let mut sum = 0.0;
        for r in support {
            for i in r[0]..r[1] {
                let w = grid.cell_width(i);
                let du = (u[i + 1] - u[i]) / w;
                let dp = (phi[i + 1] - phi[i]) / w;
                let slope_part = du * du + du * dp + dp * dp / 3.0;
                let value_part =
                    (phi[i] * phi[i] + phi[i] * phi[i + 1] + phi[i + 1] * phi[i + 1]) / 3.0;
                sum += w * (slope_part + value_part);
            }
        }
        return Ok(sum);
    }
    transition_energy_quadrature(grid, u, phi, support, p)
}

fn transition_energy_quadrature(
    grid: &RadialGrid,
    u: &[f64],
    phi: &[f64],
    support: &[[usize; 2]],
    p: f64,
) -> Result<f64> {
    struct Cell {
        w: f64,
        du: f64,
        dphi: f64,
        phi0: f64,
    }
    let mut cells = Vec::new();
    for r in support {
        for i in r[0]..r[1] {
            let w = grid.cell_width(i);
            cells.push(Cell {
                w,
                du: (u[i + 1] - u[i]) / w,
                dphi: (phi[i + 1] - phi[i]) / w,
                phi0: phi[i],
            });
        }
    }
    let inner_opts = QuadOpts {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_depth: 40,
    };
    let half_p = p / 2.0;
    let slab = |t: f64| -> f64 {
        let mut s = 0.0;
        for c in &cells {
            let slope = c.du + t * c.dphi;
            let c2 = slope * slope;
            if c.dphi == 0.0 {
                s += c.w * (c2 + c.phi0 * c.phi0).powf(half_p);
                continue;
            }
            let (phi0, dphi) = (c.phi0, c.dphi);
            match integrate(
                |x| {
                    let v = phi0 + dphi * x;
                    (c2 + v * v).powf(half_p)
                },
                0.0,
                c.w,
                &inner_opts,
            ) {
                Ok(q) => s += q.value,
                Err(_) => return f64::NAN,
            }
        }
        s
    };
    let outer_opts = QuadOpts {
        abs_tol: 0.0,
        rel_tol: 1e-11,
        max_depth: 40,
    };
    Ok(integrate(slab, 0.0, 1.0, &outer_opts)?.value)
}

fn ratio_or_unit(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Energy ratio of the profile against the ramped separable competitor on a
/// strip with interior length `m`. Degenerate (identically zero)
/// perturbations report both ratios as 1.
pub fn strip_ratio(cfg: &StripTestConfig) -> Result<StripRatio> {
    let grid = cfg.base_profile.grid();
    let u = cfg.base_profile.values();
    let phi = cfg.base_phi.values();
    let support = support_ranges(phi);
    if support.is_empty() {
        return Ok(StripRatio {
            m: cfg.m,
            energy_base: 0.0,
            energy_competitor: 0.0,
            transition: 0.0,
            ratio_1d: 1.0,
            strip_ratio: 1.0,
            degenerate: true,
        });
    }
    let (a, b) = restricted_energies(grid, u, phi, &support, cfg.p);
    let r = transition_energy(grid, u, phi, &support, cfg.p)?;
    Ok(StripRatio {
        m: cfg.m,
        energy_base: a,
        energy_competitor: b,
        transition: r,
        ratio_1d: ratio_or_unit(a, b),
        strip_ratio: ratio_or_unit((cfg.m + 2.0) * a, cfg.m * b + 2.0 * r),
        degenerate: false,
    })
}

/// One line of an exhaustion report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StripRow {
    pub m: f64,
    pub ratio_1d: f64,
    pub strip_ratio: f64,
    pub claimed_q: f64,
}

/// Verdict of an exhaustion run: strip ratios over increasing interior
/// lengths, checked for monotone approach to the claimed constant.
#[derive(Debug, Clone, Serialize)]
pub struct ExhaustionReport {
    pub claimed_q: f64,
    pub rows: Vec<StripRow>,
    /// Ratios never decrease with length (1e-9 slack).
    pub nondecreasing: bool,
    /// Every ratio stays at or below the claimed constant.
    pub all_within: bool,
    /// Relative gap between the final ratio and the claimed constant.
    pub final_gap: f64,
    pub pass: bool,
}

/// Compute strip ratios for every interior length in `lengths` (strictly
/// increasing) and check they climb toward `claimed_q` without overshooting:
/// each within claimed_q (1 + ratio_tol), nondecreasing, and the last within
/// 1% of the claim.
pub fn exhaustion_check(
    base_profile: &PiecewiseLinearProfile,
    base_phi: &PiecewiseLinearProfile,
    p: f64,
    claimed_q: f64,
    lengths: &[f64],
    cfg: &OracleConfig,
) -> Result<ExhaustionReport> {
    if !(claimed_q > 0.0) || !claimed_q.is_finite() {
        return Err(Error::domain(format!(
            "claimed constant must be positive and finite, got {claimed_q}"
        )));
    }
    if lengths.is_empty() {
        return Err(Error::domain("exhaustion needs at least one length"));
    }
    if lengths.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("lengths must be strictly increasing"));
    }
    // Validates grids, signs, and the exponent once; energies are shared by
    // every length.
    let base = StripTestConfig::new(base_profile.clone(), base_phi.clone(), lengths[0], p)?;
    let first = strip_ratio(&base)?;
    if first.degenerate {
        return Err(Error::domain(
            "exhaustion needs a perturbation that is not identically zero",
        ));
    }
    let (a, b, r) = (first.energy_base, first.energy_competitor, first.transition);
    let rows: Vec<StripRow> = lengths
        .iter()
        .map(|&m| StripRow {
            m,
            ratio_1d: first.ratio_1d,
            strip_ratio: ratio_or_unit((m + 2.0) * a, m * b + 2.0 * r),
            claimed_q,
        })
        .collect();
    let nondecreasing = rows
        .windows(2)
        .all(|w| w[1].strip_ratio >= w[0].strip_ratio - 1e-9);
    let bound = claimed_q * (1.0 + cfg.ratio_tol);
    let all_within = rows.iter().all(|row| row.strip_ratio <= bound);
    let final_gap = ((claimed_q - rows.last().unwrap().strip_ratio) / claimed_q).abs();
    Ok(ExhaustionReport {
        claimed_q,
        rows,
        nondecreasing,
        all_within,
        final_gap,
        pass: nondecreasing && all_within && final_gap <= 0.01,
    })
}
