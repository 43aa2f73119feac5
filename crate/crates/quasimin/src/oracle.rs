//! Discrete verification layer: piecewise-linear radial profiles on explicit
//! grids, exact cell-wise energies, closed-form discrete minimization, and
//! randomized stress tests of the defining energy-comparison inequality
//! E(u; {phi != 0}) <= Q * E(u + phi; {phi != 0}).

use crate::composition::{q_hat, CompositionInput};
use crate::config::OracleConfig;
use crate::error::{Error, Result};
use crate::parallel;
use crate::profile::RadialFunction;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Which variable grid nodes are expressed in.
///
/// `LogRadius` nodes are s = 1 + log r; in the conformal coupling p = n the
/// radial energy weight becomes identically 1 there, making piecewise-linear
/// energies exact sums. `Radius` nodes are plain radii with weight r^(n-1),
/// also integrated exactly per cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coordinate {
    Radius,
    LogRadius,
}

/// A strictly increasing 1-D grid carrying the ambient dimension and the
/// coordinate its nodes live in.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    pub n: u32,
    pub coordinate: Coordinate,
}

impl RadialGrid {
    pub fn new(nodes: Vec<f64>, n: u32, coordinate: Coordinate) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
        }
        if nodes.len() < 3 {
            return Err(Error::domain(format!(
                "grid needs at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("grid nodes must be finite"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("grid nodes must be strictly increasing"));
        }
        if coordinate == Coordinate::Radius && nodes[0] <= 0.0 {
            return Err(Error::domain(format!(
                "radius-coordinate grids need positive radii, got first node {}",
                nodes[0]
            )));
        }
        Ok(RadialGrid {
            nodes,
            n,
            coordinate,
        })
    }

    /// Uniform grid with `cells` cells over [lo, hi]; the endpoints are hit
    /// exactly.
    pub fn uniform(lo: f64, hi: f64, cells: usize, n: u32, coordinate: Coordinate) -> Result<Self> {
        if cells < 2 {
            return Err(Error::domain(format!("need at least 2 cells, got {cells}")));
        }
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(Error::domain(format!("invalid grid interval ({lo}, {hi})")));
        }
        let mut nodes: Vec<f64> = (0..=cells)
            .map(|i| lo + (hi - lo) * (i as f64) / (cells as f64))
            .collect();
        nodes[0] = lo;
        nodes[cells] = hi;
        RadialGrid::new(nodes, n, coordinate)
    }

    pub fn into_shared(self) -> Arc<RadialGrid> {
        Arc::new(self)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn cell_width(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    pub fn max_cell_width(&self) -> f64 {
        (0..self.cells())
            .map(|i| self.cell_width(i))
            .fold(0.0, f64::max)
    }

    /// Integral of the energy weight over cell i: the plain width for
    /// `LogRadius` (unit weight), (r_{i+1}^n - r_i^n)/n for `Radius`.
    pub fn cell_weight(&self, i: usize) -> f64 {
        match self.coordinate {
            Coordinate::LogRadius => self.cell_width(i),
            Coordinate::Radius => {
                let ni = self.n as i32;
                (self.nodes[i + 1].powi(ni) - self.nodes[i].powi(ni)) / f64::from(self.n)
            }
        }
    }

    /// Radius of node i: the node itself for `Radius`, exp(s - 1) for
    /// `LogRadius` (so s = 0 and s = 1 bound the standard shell (1/e, 1)).
    pub fn node_radius(&self, i: usize) -> f64 {
        match self.coordinate {
            Coordinate::Radius => self.nodes[i],
            Coordinate::LogRadius => (self.nodes[i] - 1.0).exp(),
        }
    }
}

/// Nodal values over a shared grid, interpolated linearly between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearProfile {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl PiecewiseLinearProfile {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes().len() {
            return Err(Error::grid_mismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.nodes().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("profile values must be finite"));
        }
        Ok(PiecewiseLinearProfile { grid, values })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn grid_handle(&self) -> Arc<RadialGrid> {
        Arc::clone(&self.grid)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Boundary values (first node, last node).
    pub fn boundary(&self) -> (f64, f64) {
        (self.values[0], *self.values.last().unwrap())
    }
}

#[inline]
fn pow_p(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

/// Exact energy of the profile with its grid's conformal exponent p = n:
/// per cell, |slope|^p times the integrated weight, summed.
pub fn exact_energy_pl(profile: &PiecewiseLinearProfile) -> f64 {
    energy_with_exponent(profile, f64::from(profile.grid.n))
}

/// Exact energy with an explicit exponent; used where p is decoupled from
/// the grid's dimension (1-D interval studies, the strip construction).
pub fn energy_with_exponent(profile: &PiecewiseLinearProfile, p: f64) -> f64 {
    let grid = &*profile.grid;
    let v = &profile.values;
    let mut sum = 0.0;
    for i in 0..grid.cells() {
        let d = (v[i + 1] - v[i]) / grid.cell_width(i);
        if d != 0.0 {
            sum += pow_p(d.abs(), p) * grid.cell_weight(i);
        }
    }
    sum
}

/// Nodal interpolation of a radial function onto a grid. Fails if any node
/// falls outside the function's annulus.
pub fn sample_profile<U: RadialFunction + ?Sized>(
    u: &U,
    grid: &Arc<RadialGrid>,
) -> Result<PiecewiseLinearProfile> {
    let mut values = Vec::with_capacity(grid.nodes().len());
    for i in 0..grid.nodes().len() {
        values.push(u.value(grid.node_radius(i))?);
    }
    PiecewiseLinearProfile::new(Arc::clone(grid), values)
}

/// The unique minimizer of the exact p-energy over nodal values with the
/// given boundary pair. The optimality condition makes the discrete flux
/// |slope|^{p-2} slope * weight / width constant across cells, which yields
/// the increments in closed form - no iteration, and exact affinity in s for
/// unit-weight grids.
pub fn discrete_minimizer(
    grid: &Arc<RadialGrid>,
    boundary: (f64, f64),
    p: f64,
) -> Result<PiecewiseLinearProfile> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("exponent p = {p} must be finite and > 1")));
    }
    let (v_left, v_right) = boundary;
    if !v_left.is_finite() || !v_right.is_finite() {
        return Err(Error::domain("boundary values must be finite"));
    }
    let cells = grid.cells();
    let diff = v_right - v_left;
    let mut values = Vec::with_capacity(cells + 1);
    if diff == 0.0 {
        values.resize(cells + 1, v_left);
        return PiecewiseLinearProfile::new(Arc::clone(grid), values);
    }
    // Increment of cell i is proportional to g_i = (width^p / weight)^(1/(p-1)).
    // Unit-weight grids short-circuit to g_i = width exactly; otherwise g_i is
    // formed in log space so that large p cannot underflow width^p.
    let ln_g: Vec<f64> = (0..cells)
        .map(|i| match grid.coordinate {
            Coordinate::LogRadius => f64::NAN, // unused, see below
            Coordinate::Radius => {
                (p * grid.cell_width(i).ln() - grid.cell_weight(i).ln()) / (p - 1.0)
            }
        })
        .collect();
    let g: Vec<f64> = match grid.coordinate {
        Coordinate::LogRadius => (0..cells).map(|i| grid.cell_width(i)).collect(),
        Coordinate::Radius => {
            let top = ln_g.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            ln_g.iter().map(|&l| (l - top).exp()).collect()
        }
    };
    let total: f64 = g.iter().sum();
    values.push(v_left);
    let mut acc = 0.0;
    for &gi in g.iter().take(cells - 1) {
        acc += gi;
        values.push(v_left + diff * (acc / total));
    }
    values.push(v_right);
    PiecewiseLinearProfile::new(Arc::clone(grid), values)
}

/// Sign constraint imposed on perturbations: `NonNegative` probes the
/// superminimizing constant, `NonPositive` the subminimizing one, `Any`
/// the full quasiminimizing constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PerturbationSign {
    Any,
    NonNegative,
    NonPositive,
}

/// Outcome of one energy-comparison test.
#[derive(Debug, Clone, Serialize)]
pub struct RatioVerdict {
    pub energy_u: f64,
    pub energy_competitor: f64,
    /// energy_u / energy_competitor on the support, 1 when vacuous.
    pub ratio: f64,
    /// Half-open cell index ranges where the perturbation is not identically
    /// zero; energies count only these cells.
    pub support: Vec<[usize; 2]>,
    pub claimed_q: f64,
    pub pass: bool,
    /// Pass threshold minus ratio (negative on failure).
    pub slack: f64,
}

pub(crate) fn support_ranges(phi: &[f64]) -> Vec<[usize; 2]> {
    let cells = phi.len() - 1;
    let mut ranges = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..cells {
        let active = phi[i] != 0.0 || phi[i + 1] != 0.0;
        match (active, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                ranges.push([s, i]);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        ranges.push([s, cells]);
    }
    ranges
}

pub(crate) fn restricted_energies(
    grid: &RadialGrid,
    u: &[f64],
    phi: &[f64],
    support: &[[usize; 2]],
    p: f64,
) -> (f64, f64) {
    let mut eu = 0.0;
    let mut ec = 0.0;
    for r in support {
        for i in r[0]..r[1] {
            let w = grid.cell_width(i);
            let wt = grid.cell_weight(i);
            let du = (u[i + 1] - u[i]) / w;
            let dc = du + (phi[i + 1] - phi[i]) / w;
            eu += pow_p(du.abs(), p) * wt;
            ec += pow_p(dc.abs(), p) * wt;
        }
    }
    (eu, ec)
}

/// Test E(u; supp phi) <= claimed_q * E(u + phi; supp phi) with the default
/// relative tolerance and no discretization allowance.
pub fn quasi_inequality_test(
    u: &PiecewiseLinearProfile,
    phi: &PiecewiseLinearProfile,
    claimed_q: f64,
    mode: PerturbationSign,
) -> Result<RatioVerdict> {
    let cfg = OracleConfig::default();
    quasi_inequality_test_with(u, phi, claimed_q, mode, cfg.ratio_tol, 0.0)
}

/// As `quasi_inequality_test`, with an explicit relative tolerance on the
/// claimed constant and an additive allowance on the pass threshold.
pub fn quasi_inequality_test_with(
    u: &PiecewiseLinearProfile,
    phi: &PiecewiseLinearProfile,
    claimed_q: f64,
    mode: PerturbationSign,
    ratio_tol: f64,
    allowance: f64,
) -> Result<RatioVerdict> {
    if !Arc::ptr_eq(&u.grid, &phi.grid) && u.grid != phi.grid {
        return Err(Error::grid_mismatch(
            "perturbation lives on a different grid than the profile",
        ));
    }
    if !(claimed_q > 0.0) || !claimed_q.is_finite() {
        return Err(Error::domain(format!(
            "claimed constant must be positive and finite, got {claimed_q}"
        )));
    }
    let pv = phi.values();
    if pv[0] != 0.0 || *pv.last().unwrap() != 0.0 {
        return Err(Error::domain(
            "perturbation must vanish at both boundary nodes",
        ));
    }
    match mode {
        PerturbationSign::NonNegative if pv.iter().any(|&x| x < 0.0) => {
            return Err(Error::domain(
                "perturbation must be nonnegative at every node in NonNegative mode",
            ));
        }
        PerturbationSign::NonPositive if pv.iter().any(|&x| x > 0.0) => {
            return Err(Error::domain(
                "perturbation must be nonpositive at every node in NonPositive mode",
            ));
        }
        _ => {}
    }
    let support = support_ranges(pv);
    let p = f64::from(u.grid.n);
    let (eu, ec) = restricted_energies(&u.grid, u.values(), pv, &support, p);
    let threshold = claimed_q * (1.0 + ratio_tol) + allowance;
    let (ratio, pass) = if support.is_empty() || (ec == 0.0 && eu == 0.0) {
        (1.0, true)
    } else if ec > 0.0 {
        let r = eu / ec;
        (r, r <= threshold)
    } else {
        (f64::INFINITY, false)
    };
    Ok(RatioVerdict {
        energy_u: eu,
        energy_competitor: ec,
        ratio,
        support,
        claimed_q,
        pass,
        slack: threshold - ratio,
    })
}

/// A failing (or otherwise notable) trial, reconstructible from the suite
/// seed and the trial index.
#[derive(Debug, Clone, Serialize)]
pub struct TrialWitness {
    pub trial: u32,
    pub style: &'static str,
    pub ratio: f64,
    pub slack: f64,
    /// Largest absolute nodal value of the perturbation.
    pub phi_sup: f64,
    pub support: Vec<[usize; 2]>,
}

/// Aggregate outcome of a randomized perturbation suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub profile: String,
    pub claimed_q: f64,
    pub trials: u32,
    pub seed: u64,
    pub max_ratio: f64,
    pub failures: Vec<TrialWitness>,
    /// Additive discretization allowance C * h applied to the threshold.
    pub allowance: f64,
    /// Cell count of the uniform working grid.
    pub resolution: usize,
    /// Lowest trial index attaining max_ratio.
    pub max_ratio_trial: u32,
    pub pass: bool,
}

/// Knobs of a single suite run.
#[derive(Debug, Clone, Copy)]
pub struct SuiteParams {
    pub claimed_q: f64,
    pub trials: u32,
    pub seed: u64,
    pub mode: PerturbationSign,
    /// Cells of the uniform log-coordinate grid the profile is sampled onto.
    pub cells: usize,
}

#[inline]
fn clip_sign(x: f64, mode: PerturbationSign) -> f64 {
    match mode {
        PerturbationSign::Any => x,
        PerturbationSign::NonNegative => x.max(0.0),
        PerturbationSign::NonPositive => x.min(0.0),
    }
}

/// Build the perturbation for one trial. Trial 0 is deterministic: the
/// whole-domain affine competitor (discrete minimizer with u's boundary
/// values) minus u, the profile's worst adversary. Later trials draw a
/// random support whose left endpoint is log-uniform toward the inner
/// boundary - near-extremal competitors concentrate there - and fill it in
/// one of three styles: local chord replacement, a tent bump, or nodal noise
/// with heights up to twice the profile's value range.
fn build_phi(
    trial: usize,
    u: &[f64],
    chord: &[f64],
    grid: &RadialGrid,
    mode: PerturbationSign,
    amp: f64,
    seed: u64,
) -> (Vec<f64>, &'static str) {
    let nodes = u.len();
    let mut phi = vec![0.0; nodes];
    if trial == 0 {
        for j in 1..nodes - 1 {
            phi[j] = clip_sign(chord[j] - u[j], mode);
        }
        return (phi, "affine-competitor");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let cells = nodes - 1;
    let frac: f64 = rng.random_range((1e-5f64).ln()..=(0.5f64).ln()).exp();
    let a = ((frac * cells as f64) as usize).min(cells - 2);
    let b = rng.random_range(a + 2..=cells);
    let s = grid.nodes();
    match trial % 3 {
        1 => {
            let scale: f64 = rng.random_range(0.25..=1.0);
            let slope = (u[b] - u[a]) / (s[b] - s[a]);
            for j in a + 1..b {
                let c_j = u[a] + slope * (s[j] - s[a]);
                phi[j] = scale * clip_sign(c_j - u[j], mode);
            }
            (phi, "local-replacement")
        }
        2 => {
            let peak = rng.random_range(a + 1..b);
            let height: f64 = rng.random_range(0.0..=amp);
            let height = match mode {
                PerturbationSign::NonPositive => -height,
                PerturbationSign::Any if rng.random_range(0..2) == 1 => -height,
                _ => height,
            };
            for j in a + 1..b {
                let up = (s[j] - s[a]) / (s[peak] - s[a]);
                let down = (s[b] - s[j]) / (s[b] - s[peak]);
                phi[j] = height * up.min(down).min(1.0);
            }
            (phi, "tent")
        }
        _ => {
            for slot in &mut phi[a + 1..b] {
                *slot = match mode {
                    PerturbationSign::Any => rng.random_range(-amp..=amp),
                    PerturbationSign::NonNegative => rng.random_range(0.0..=amp),
                    PerturbationSign::NonPositive => -rng.random_range(0.0..=amp),
                };
            }
            (phi, "noise")
        }
    }
}

/// Sample `u` onto a uniform log-coordinate grid and stress the energy
/// inequality with `trials` perturbations (trial 0 being the deterministic
/// whole-domain affine competitor). Deterministic for a given seed; trials
/// run in parallel and are merged in index order.
pub fn random_perturbation_suite<U: RadialFunction + Sync + ?Sized>(
    u: &U,
    label: &str,
    params: &SuiteParams,
    cfg: &OracleConfig,
) -> Result<SuiteReport> {
    if params.trials < 1 {
        return Err(Error::domain("suite needs at least 1 trial"));
    }
    if params.cells < 4 {
        return Err(Error::domain(format!(
            "suite needs at least 4 cells, got {}",
            params.cells
        )));
    }
    let annulus = u.domain();
    if annulus.r1 <= 0.0 || !annulus.r2.is_finite() {
        return Err(Error::domain(
            "suite needs a bounded annulus with r1 > 0".to_string(),
        ));
    }
    let s_lo = 1.0 + annulus.r1.ln();
    let s_hi = 1.0 + annulus.r2.ln();
    let grid = RadialGrid::uniform(s_lo, s_hi, params.cells, annulus.n, Coordinate::LogRadius)?
        .into_shared();
    let u_pl = sample_profile(u, &grid)?;
    let chord = discrete_minimizer(&grid, u_pl.boundary(), f64::from(annulus.n))?;
    let (lo, hi) = u_pl
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let amp = 2.0 * (hi - lo);
    let allowance = cfg.allowance_c * grid.max_cell_width();

    let outcomes: Vec<Result<(f64, &'static str, Option<TrialWitness>)>> =
        parallel::map_indexed(params.trials as usize, |t| {
            let (phi_values, style) = build_phi(
                t,
                u_pl.values(),
                chord.values(),
                &grid,
                params.mode,
                amp,
                params.seed,
            );
            let phi_sup = phi_values.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let phi = PiecewiseLinearProfile::new(Arc::clone(&grid), phi_values)?;
            let verdict = quasi_inequality_test_with(
                &u_pl,
                &phi,
                params.claimed_q,
                params.mode,
                cfg.ratio_tol,
                allowance,
            )?;
            let witness = if verdict.pass {
                None
            } else {
                Some(TrialWitness {
                    trial: t as u32,
                    style,
                    ratio: verdict.ratio,
                    slack: verdict.slack,
                    phi_sup,
                    support: verdict.support.clone(),
                })
            };
            Ok((verdict.ratio, style, witness))
        });

    let mut max_ratio = f64::NEG_INFINITY;
    let mut max_ratio_trial = 0u32;
    let mut failures = Vec::new();
    for (t, outcome) in outcomes.into_iter().enumerate() {
        let (ratio, _style, witness) = outcome?;
        if ratio > max_ratio {
            max_ratio = ratio;
            max_ratio_trial = t as u32;
        }
        if let Some(w) = witness {
            failures.push(w);
        }
    }
    Ok(SuiteReport {
        profile: label.to_string(),
        claimed_q: params.claimed_q,
        trials: params.trials,
        seed: params.seed,
        max_ratio,
        pass: failures.is_empty(),
        failures,
        allowance,
        resolution: params.cells,
        max_ratio_trial,
    })
}

/// Exact-energy certificate that the two-branch composition spends more than
/// any q2-quasiminimizer could: its energy on the standard shell against the
/// q2-scaled energy of the affine competitor with the same boundary values.
/// A positive margin certifies the composition is not a q2-quasiminimizer.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExcessCertificate {
    /// Exact energy of the composed profile (its superminimizing constant).
    pub composed_energy: f64,
    /// q2 times the affine competitor's energy (which is exactly 1).
    pub scaled_minimizer_energy: f64,
    /// composed_energy - scaled_minimizer_energy; positive when the
    /// composition genuinely exceeds the q2 budget.
    pub margin: f64,
}

pub fn excess_certificate(input: &CompositionInput) -> Result<ExcessCertificate> {
    let result = q_hat(input)?;
    Ok(ExcessCertificate {
        composed_energy: result.q_hat,
        scaled_minimizer_energy: input.q2,
        margin: result.q_hat - input.q2,
    })
}
