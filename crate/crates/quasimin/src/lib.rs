//! Sharp quasisuperminimizing constants for minima of radial power profiles.
//!
//! A function is a q-quasisuperminimizer when every nonnegative perturbation
//! can lower its p-Dirichlet energy by at most the factor 1/q. The crate
//! computes, for log-power profiles on the standard annulus [1/e, 1] in R^n,
//! the exact constant attached to the pointwise minimum of two such
//! profiles, together with the supporting machinery: exponent/constant
//! branch inversion, closed-form and quadrature energies, a discrete
//! variational oracle that stress-tests claimed constants against random
//! competitors, and a fattened-annulus extension that carries interval
//! profiles into higher dimensions.

// Domain guards are negated comparisons on purpose (they must reject NaN),
// and reference decimals keep their full printed length even where f64
// cannot resolve the last digit.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod composition;
pub mod config;
pub mod constants;
pub mod energy;
pub mod error;
pub mod oracle;
pub mod parallel;
pub mod params;
pub mod profile;
pub mod tables;
pub mod tensor;

mod quad;
mod rootfind;

pub use composition::{
    asymmetry_scan, min_profile, q_hat, q_tilde, solve_x0, AsymmetryRow, CompositionInput,
    CompositionResult, MinProfile,
};
pub use constants::{alphas_of_q, q_bar, q_kinnunen_martio, q_of_alpha, AlphaBranches};
pub use energy::{
    closed_form_energy, k_of_s, log_power_flux, max_energy_check, optimal_constants,
    plap_of_logpower, profile_energy, quadrature_energy, EnergyMethod, EnergyReport,
    OptimalConstants,
};
pub use config::OracleConfig;
pub use error::{Error, Result};
pub use oracle::{
    discrete_minimizer, exact_energy_pl, energy_with_exponent, excess_certificate,
    quasi_inequality_test, quasi_inequality_test_with, random_perturbation_suite, sample_profile,
    Coordinate, ExcessCertificate, PerturbationSign, PiecewiseLinearProfile, RadialGrid,
    RatioVerdict, SuiteParams, SuiteReport, TrialWitness,
};
pub use params::{unit_sphere_area, ConformalParams};
pub use profile::{Annulus, LogPowerProfile, Orientation, RadialFunction};
pub use tables::{
    equal_constant_table, format_fixed, format_sig, pair_constant_table, EqualTable,
    EqualTableRow, PairTable, PairTableRow,
};
pub use tensor::{
    exhaustion_check, ramp_phi2, strip_ratio, ExhaustionReport, StripRatio, StripRow,
    StripTestConfig,
};
