//! Reference tables of composed constants over dimension and exponent
//! grids, plus the fixed-precision decimal formatting used to reproduce
//! their printed form.

use crate::composition::{q_hat, q_tilde, CompositionInput};
use crate::constants::q_bar;
use crate::error::{Error, Result};
use crate::parallel;
use serde::Serialize;

/// One row of the equal-constant table: the composed constant of
/// min(u_Q, scaled u_Q) across dimensions, with the general upper bound.
#[derive(Debug, Clone, Serialize)]
pub struct EqualTableRow {
    pub q: f64,
    /// Composed constant per dimension, in the order of `EqualTable::dims`.
    pub cells: Vec<f64>,
    pub q_bar: f64,
}

/// Composed constants for equal branch constants Q over conformal dimensions.
#[derive(Debug, Clone, Serialize)]
pub struct EqualTable {
    pub dims: Vec<u32>,
    pub rows: Vec<EqualTableRow>,
}

pub fn equal_constant_table(qs: &[f64], dims: &[u32]) -> Result<EqualTable> {
    if qs.is_empty() || dims.is_empty() {
        return Err(Error::domain("table needs at least one q and one dimension"));
    }
    if let Some(&bad) = dims.iter().find(|&&n| n < 2) {
        return Err(Error::domain(format!("dimensions must be >= 2, got {bad}")));
    }
    if let Some(&bad) = qs.iter().find(|&&q| !(q > 1.0) || !q.is_finite()) {
        return Err(Error::domain(format!("table constants must be > 1, got {bad}")));
    }
    let rows: Vec<Result<EqualTableRow>> = parallel::map_indexed(qs.len(), |i| {
        let q = qs[i];
        let mut cells = Vec::with_capacity(dims.len());
        for &n in dims {
            let input = CompositionInput::conformal(q, q, n)?;
            cells.push(q_hat(&input)?.q_hat);
        }
        Ok(EqualTableRow {
            q,
            cells,
            q_bar: q_bar(q, q)?,
        })
    });
    Ok(EqualTable {
        dims: dims.to_vec(),
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// One row of the pair table: a fixed ordered pair (q1, q2) across exponents.
#[derive(Debug, Clone, Serialize)]
pub struct PairTableRow {
    pub q1: f64,
    pub q2: f64,
    /// Composed constant per exponent, in the order of `PairTable::ps`.
    pub cells: Vec<f64>,
    pub q_bar: f64,
}

/// Composed constants for ordered pairs (q1, q2) over general exponents p.
/// Each input pair contributes both orderings as adjacent rows.
#[derive(Debug, Clone, Serialize)]
pub struct PairTable {
    pub ps: Vec<f64>,
    pub rows: Vec<PairTableRow>,
}

pub fn pair_constant_table(ps: &[f64], pairs: &[(f64, f64)]) -> Result<PairTable> {
    if ps.is_empty() || pairs.is_empty() {
        return Err(Error::domain("table needs at least one p and one pair"));
    }
    if let Some(&bad) = ps.iter().find(|&&p| !(p > 1.0) || !p.is_finite()) {
        return Err(Error::domain(format!("table exponents must be > 1, got {bad}")));
    }
    let ordered: Vec<(f64, f64)> = pairs
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect();
    if let Some(&(a, b)) = ordered
        .iter()
        .find(|(a, b)| !(*a > 1.0) || !(*b > 1.0) || !a.is_finite() || !b.is_finite())
    {
        return Err(Error::domain(format!(
            "pair constants must be > 1, got ({a}, {b})"
        )));
    }
    let rows: Vec<Result<PairTableRow>> = parallel::map_indexed(ordered.len(), |i| {
        let (q1, q2) = ordered[i];
        let mut cells = Vec::with_capacity(ps.len());
        for &p in ps {
            let input = CompositionInput::general(q1, q2, p)?;
            cells.push(q_tilde(&input)?.q_hat);
        }
        Ok(PairTableRow {
            q1,
            q2,
            cells,
            q_bar: q_bar(q1, q2)?,
        })
    });
    Ok(PairTable {
        ps: ps.to_vec(),
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// Round-half-even decimal rendering with a fixed number of significant
/// digits, e.g. 10 digits: 2.6191357210180883 -> "2.619135721",
/// 196.39485369 -> "196.3948537". The digit position adapts to the rounded
/// magnitude, so values that round up across a power of ten stay at the
/// requested significance.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // The exponent after rounding to `digits` significant digits.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .split_once('e')
        .map(|(_, e)| e.parse().unwrap())
        .unwrap();
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Fixed-point rendering with `decimals` fractional digits (round-half-even).
pub fn format_fixed(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}
