//! Closed-form dimensions and supersmoothness orders for the standard cell
//! families. Integer arithmetic only; the caller decides which family a cell
//! belongs to.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

fn input<T>(msg: impl Into<String>) -> Result<T, FormulaError> {
    Err(FormulaError::Input(msg.into()))
}

/// Cell families with a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cell2d,
    Alfeld,
    FacetAligned,
    TwoCell,
    WfBounds,
}

/// Integer parameters a formula was evaluated at.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FormulaInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub r: usize,
}

/// A formula value; `upper` is set only for the bounds family, where `value`
/// is the lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaResult {
    pub value: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<usize>,
    pub family: Family,
    pub inputs: FormulaInputs,
}

/// `C(a, b)`, zero when `a < b` or `a < 0`.
pub fn binom(a: i64, b: i64) -> usize {
    if b < 0 || a < b || a < 0 {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

pub fn dim_pi(n: usize, d: i64) -> usize {
    binom(d + n as i64, n as i64)
}

/// `tau_{v,j} = j (m_v - 1) - (r + 1)`.
pub fn tau(m_v: usize, r: usize, j: usize) -> i64 {
    j as i64 * (m_v as i64 - 1) - (r as i64 + 1)
}

fn check_2d(m: usize, m_v: usize) -> Result<(), FormulaError> {
    if m < 3 {
        return input(format!("a planar cell needs m >= 3, got {m}"));
    }
    if m_v < 2 || m_v > m {
        return input(format!("need 2 <= m_v <= m, got m_v = {m_v}, m = {m}"));
    }
    Ok(())
}

fn check_rd(d: usize, r: usize) -> Result<(), FormulaError> {
    if r > d {
        return input(format!("need r <= d, got r = {r}, d = {d}"));
    }
    Ok(())
}

/// Sum form: `dim Pi_d + (m - m_v) dim Pi_{d-r-1} + sum (tau_j)_+`.
pub fn dim_2d_cell_sum(m: usize, m_v: usize, d: usize, r: usize) -> usize {
    let positive: i64 = (1..=d - r).map(|j| tau(m_v, r, j).max(0)).sum();
    dim_pi(2, d as i64) + (m - m_v) * dim_pi(2, d as i64 - r as i64 - 1) + positive as usize
}

/// Binomial form: `C(r+2, 2) + m C(d-r+1, 2) + sum (-tau_j)_+`.
pub fn dim_2d_cell_binomial(m: usize, m_v: usize, d: usize, r: usize) -> usize {
    let negative: i64 = (1..=d - r).map(|j| (-tau(m_v, r, j)).max(0)).sum();
    binom(r as i64 + 2, 2) + m * binom((d - r) as i64 + 1, 2) + negative as usize
}

/// `dim S_d^r` on a planar cell with `m` triangles and `m_v` slopes. Both
/// forms are evaluated and must agree.
pub fn dim_2d_cell(m: usize, m_v: usize, d: usize, r: usize) -> Result<usize, FormulaError> {
    check_2d(m, m_v)?;
    check_rd(d, r)?;
    let a = dim_2d_cell_sum(m, m_v, d, r);
    let b = dim_2d_cell_binomial(m, m_v, d, r);
    if a != b {
        return Err(FormulaError::Internal(format!(
            "planar cell forms disagree: {a} != {b} at m={m} m_v={m_v} d={d} r={r}"
        )));
    }
    Ok(a)
}

pub fn mos_2d(m: usize, m_v: usize, r: usize) -> Result<usize, FormulaError> {
    check_2d(m, m_v)?;
    Ok(if m_v == m { r + (r + 1) / (m - 1) } else { r })
}

/// `rho_{n,r} = r + (n - 1) floor((r + 1) / 2)`.
pub fn rho(n: usize, r: usize) -> usize {
    assert!(n >= 1, "rho needs n >= 1");
    r + (n - 1) * r.div_ceil(2)
}

fn check_n(n: usize) -> Result<(), FormulaError> {
    if n < 2 {
        return input(format!("need n >= 2, got {n}"));
    }
    Ok(())
}

pub fn alfeld_a(n: usize, d: usize, r: usize) -> Result<usize, FormulaError> {
    check_n(n)?;
    check_rd(d, r)?;
    let (n, d, r) = (n as i64, d as i64, r as i64);
    Ok(if r % 2 == 1 {
        n as usize * binom(d + n - (r + 1) * (n + 1) / 2, n)
    } else {
        (0..n).map(|t| binom(d + t - r * (n + 1) / 2, n)).sum()
    })
}

pub fn dim_alfeld(n: usize, d: usize, r: usize) -> Result<usize, FormulaError> {
    Ok(dim_pi(n, d as i64) + alfeld_a(n, d, r)?)
}

pub fn mos_alfeld(n: usize, r: usize) -> Result<usize, FormulaError> {
    check_n(n)?;
    Ok(rho(n, r))
}

/// `(rho_{k,r}, rho_{n,r})`.
pub fn wf_bounds(k: usize, n: usize, r: usize) -> Result<(usize, usize), FormulaError> {
    if k < 2 || k > n {
        return input(format!("bounds need 2 <= k <= n, got k = {k}, n = {n}"));
    }
    Ok((rho(k, r), rho(n, r)))
}

pub fn facet_p(n: usize, d: usize, r: usize) -> Result<usize, FormulaError> {
    check_n(n)?;
    check_rd(d, r)?;
    let (n, d, r) = (n as i64, d as i64, r as i64);
    Ok(if r % 2 == 1 {
        (n - 1) as usize * binom(d + n - (r + 1) * n / 2, n)
    } else {
        (1..n).map(|t| binom(d + t - r * n / 2, n)).sum()
    })
}

pub fn dim_facet_aligned(n: usize, d: usize, r: usize) -> Result<usize, FormulaError> {
    Ok(dim_pi(n, d as i64) + alfeld_a(n, d, r)? + (n + 1) * facet_p(n, d, r)?)
}

pub fn mos_facet(n: usize, r: usize) -> Result<usize, FormulaError> {
    check_n(n)?;
    Ok(rho(n - 1, r))
}

pub fn dim_two_cell(n: usize, d: usize, r: usize) -> Result<usize, FormulaError> {
    check_n(n)?;
    check_rd(d, r)?;
    Ok(dim_pi(n, d as i64) + dim_pi(n, d as i64 - (n * (r + 1)) as i64))
}

pub fn mos_two_cell(n: usize, r: usize) -> Result<usize, FormulaError> {
    check_n(n)?;
    Ok(n * (r + 1) - 1)
}

impl FormulaResult {
    pub fn cell_2d(m: usize, m_v: usize, d: usize, r: usize) -> Result<Self, FormulaError> {
        Ok(FormulaResult {
            value: dim_2d_cell(m, m_v, d, r)?,
            upper: None,
            family: Family::Cell2d,
            inputs: FormulaInputs {
                n: Some(2),
                m: Some(m),
                m_v: Some(m_v),
                d: Some(d),
                r,
                ..Default::default()
            },
        })
    }

    pub fn alfeld(n: usize, d: usize, r: usize) -> Result<Self, FormulaError> {
        Ok(Self::with_n(dim_alfeld(n, d, r)?, Family::Alfeld, n, d, r))
    }

    pub fn facet_aligned(n: usize, d: usize, r: usize) -> Result<Self, FormulaError> {
        Ok(Self::with_n(dim_facet_aligned(n, d, r)?, Family::FacetAligned, n, d, r))
    }

    pub fn two_cell(n: usize, d: usize, r: usize) -> Result<Self, FormulaError> {
        Ok(Self::with_n(dim_two_cell(n, d, r)?, Family::TwoCell, n, d, r))
    }

    pub fn bounds(k: usize, n: usize, r: usize) -> Result<Self, FormulaError> {
        let (lo, hi) = wf_bounds(k, n, r)?;
        Ok(FormulaResult {
            value: lo,
            upper: Some(hi),
            family: Family::WfBounds,
            inputs: FormulaInputs {
                n: Some(n),
                k: Some(k),
                r,
                ..Default::default()
            },
        })
    }

    fn with_n(value: usize, family: Family, n: usize, d: usize, r: usize) -> Self {
        FormulaResult {
            value,
            upper: None,
            family,
            inputs: FormulaInputs {
                n: Some(n),
                d: Some(d),
                r,
                ..Default::default()
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_examples() {
        assert_eq!(tau(3, 1, 1), 0);
        assert_eq!(tau(3, 1, 2), 2);
        assert_eq!(tau(1, 0, 5), -1);
    }

    #[test]
    fn planar_examples() {
        assert_eq!(dim_2d_cell(3, 3, 3, 1), Ok(12));
        assert_eq!(dim_2d_cell(6, 3, 2, 1), Ok(9));
        for r in 0..5 {
            assert_eq!(dim_2d_cell(5, 4, r, r), Ok(dim_pi(2, r as i64)));
        }
        assert_eq!(mos_2d(3, 3, 1), Ok(2));
        assert_eq!(mos_2d(4, 3, 2), Ok(2));
        assert_eq!(mos_2d(5, 5, 4), Ok(5));
        assert!(dim_2d_cell(2, 2, 3, 1).is_err());
        assert!(dim_2d_cell(3, 3, 1, 2).is_err());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(3, 1), 3);
        assert_eq!(rho(4, 3), 9);
        for r in 0..6 {
            assert_eq!(rho(2, r), r + r.div_ceil(2));
        }
    }

    #[test]
    fn alfeld_examples() {
        assert_eq!(alfeld_a(3, 2, 1), Ok(0));
        assert_eq!(alfeld_a(3, 4, 1), Ok(3));
        assert_eq!(alfeld_a(2, 3, 1), Ok(2));
        assert_eq!(dim_alfeld(3, 2, 1), Ok(10));
        assert_eq!(dim_alfeld(3, 4, 1), Ok(38));
        assert_eq!(mos_alfeld(3, 1), Ok(3));
        assert_eq!(mos_alfeld(3, 2), Ok(4));
        assert_eq!(mos_alfeld(2, 1), Ok(2));
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(wf_bounds(2, 3, 1), Ok((2, 3)));
        assert_eq!(wf_bounds(2, 4, 2), Ok((3, 5)));
        assert_eq!(wf_bounds(3, 3, 2), Ok((rho(3, 2), rho(3, 2))));
        assert!(wf_bounds(1, 3, 1).is_err());
    }

    #[test]
    fn facet_and_two_cell_examples() {
        assert_eq!(facet_p(3, 2, 1), Ok(0));
        assert_eq!(dim_facet_aligned(3, 2, 1), Ok(10));
        assert_eq!(facet_p(3, 3, 1), Ok(2));
        assert_eq!(dim_facet_aligned(3, 3, 1), Ok(28));
        assert_eq!(mos_facet(3, 1), Ok(2));
        assert_eq!(dim_two_cell(2, 2, 0), Ok(7));
        assert_eq!(dim_two_cell(2, 1, 0), Ok(3));
        for r in 0..5 {
            assert_eq!(mos_two_cell(2, r), Ok(2 * r + 1));
            assert_eq!(mos_two_cell(3, r), Ok(3 * r + 2));
        }
    }

    #[test]
    fn result_serializes_with_family_tag() {
        let json = serde_json::to_string(&FormulaResult::bounds(2, 3, 1).unwrap()).unwrap();
        assert_eq!(json, r#"{"value":2,"upper":3,"family":"wf_bounds","inputs":{"n":3,"k":2,"r":1}}"#);
    }
}
