//! Pairing cells with closed-form formulas.

use supersmooth_core::formulas::{self, FormulaError};
use supersmooth_core::geometry::{Cell, CellFamily};

use crate::CliError;

/// Formula choice on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormulaArg {
    /// Use the generator stamp in the cell file.
    Auto,
    None,
    Cell2d,
    Alfeld,
    FacetAligned,
    TwoCell,
    WfBounds,
}

/// A formula family bound to the parameters of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    Cell2d { m: usize, m_v: usize },
    Alfeld { n: usize },
    FacetAligned { n: usize },
    /// Non-aligned facet split: dimension and mos known only for `r = 1`,
    /// bounds otherwise.
    Facet { n: usize },
    TwoCell { n: usize },
    Bounds { k: usize, n: usize },
}

/// Closed-form mos: a value or an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MosFormula {
    Exact(usize),
    Bounds(usize, usize),
}

impl MosFormula {
    pub fn admits(&self, mos: usize) -> bool {
        match *self {
            MosFormula::Exact(v) => v == mos,
            MosFormula::Bounds(lo, hi) => lo <= mos && mos <= hi,
        }
    }
}

impl std::fmt::Display for MosFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MosFormula::Exact(v) => write!(f, "{v}"),
            MosFormula::Bounds(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

fn internal(e: FormulaError) -> CliError {
    match e {
        FormulaError::Input(m) => CliError::Input(m),
        FormulaError::Internal(m) => CliError::Internal(m),
    }
}

impl Formula {
    pub fn dim(&self, d: usize, r: usize) -> Result<Option<usize>, CliError> {
        let value = match *self {
            Formula::Cell2d { m, m_v } => formulas::dim_2d_cell(m, m_v, d, r),
            Formula::Alfeld { n } => formulas::dim_alfeld(n, d, r),
            Formula::FacetAligned { n } => formulas::dim_facet_aligned(n, d, r),
            Formula::Facet { n } if r == 1 => formulas::dim_facet_aligned(n, d, r),
            Formula::TwoCell { n } => formulas::dim_two_cell(n, d, r),
            Formula::Facet { .. } | Formula::Bounds { .. } => return Ok(None),
        };
        value.map(Some).map_err(internal)
    }

    pub fn mos(&self, r: usize) -> Result<Option<MosFormula>, CliError> {
        let exact = |v: Result<usize, FormulaError>| v.map(|x| Some(MosFormula::Exact(x))).map_err(internal);
        let bounds = |k, n| {
            formulas::wf_bounds(k, n, r)
                .map(|(lo, hi)| Some(MosFormula::Bounds(lo, hi)))
                .map_err(internal)
        };
        match *self {
            Formula::Cell2d { m, m_v } => exact(formulas::mos_2d(m, m_v, r)),
            Formula::Alfeld { n } => exact(formulas::mos_alfeld(n, r)),
            Formula::FacetAligned { n } => exact(formulas::mos_facet(n, r)),
            Formula::Facet { n } if r == 1 => exact(formulas::mos_facet(n, r)),
            Formula::Facet { n } if n >= 3 => bounds(n - 1, n),
            Formula::Facet { .. } => Ok(None),
            Formula::TwoCell { n } => exact(formulas::mos_two_cell(n, r)),
            Formula::Bounds { k, n } => bounds(k, n),
        }
    }
}

fn stamped_k(cell: &Cell) -> Option<usize> {
    match cell.family {
        Some(CellFamily::SplitKn { k, .. }) => Some(k),
        Some(CellFamily::Facet { .. }) => Some(cell.dimension - 1),
        Some(CellFamily::Alfeld) | Some(CellFamily::CloughTocher) => Some(cell.dimension),
        _ => None,
    }
}

fn planar(cell: &Cell) -> Result<Formula, CliError> {
    if cell.dimension != 2 {
        return Err(CliError::Input(format!(
            "the planar cell formula needs dimension 2, the cell has dimension {}",
            cell.dimension
        )));
    }
    if cell.is_two_cell() {
        return Err(CliError::Input("the planar cell formula does not apply to a 2-cell".into()));
    }
    let m_v = cell.count_distinct_slopes_2d().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Formula::Cell2d {
        m: cell.elements.len(),
        m_v,
    })
}

/// The formula for `cell` under `choice`. `expected_n`, when given, must
/// match the cell dimension.
pub fn resolve(cell: &Cell, choice: FormulaArg, expected_n: Option<usize>) -> Result<Option<Formula>, CliError> {
    let n = cell.dimension;
    if let Some(e) = expected_n {
        if e != n {
            return Err(CliError::Input(format!("formula dimension {e} does not match the cell dimension {n}")));
        }
    }
    let needs_n2 = |f: Formula| {
        if n < 2 {
            Err(CliError::Input("closed forms need dimension at least 2".into()))
        } else {
            Ok(Some(f))
        }
    };
    match choice {
        FormulaArg::None => Ok(None),
        FormulaArg::Cell2d => planar(cell).map(Some),
        FormulaArg::Alfeld => needs_n2(Formula::Alfeld { n }),
        FormulaArg::FacetAligned => needs_n2(Formula::FacetAligned { n }),
        FormulaArg::TwoCell => needs_n2(Formula::TwoCell { n }),
        FormulaArg::WfBounds => match stamped_k(cell) {
            Some(k) if k >= 2 && k <= n => Ok(Some(Formula::Bounds { k, n })),
            _ => Err(CliError::Input("bounds need a split cell stamped with 2 <= k <= n".into())),
        },
        FormulaArg::Auto => Ok(match &cell.family {
            None => None,
            Some(CellFamily::CloughTocher) | Some(CellFamily::Star2d) => Some(planar(cell)?),
            Some(CellFamily::Alfeld) => Some(Formula::Alfeld { n }),
            Some(CellFamily::TwoCell) => Some(Formula::TwoCell { n }),
            Some(CellFamily::Facet { aligned: true }) => Some(Formula::FacetAligned { n }),
            Some(CellFamily::Facet { aligned: false }) => Some(Formula::Facet { n }),
            Some(CellFamily::SplitKn { k, aligned }) => {
                let k = *k;
                if k == n {
                    Some(Formula::Alfeld { n })
                } else if k + 1 == n && *aligned == Some(true) && n >= 2 {
                    Some(Formula::FacetAligned { n })
                } else if k + 1 == n && n >= 2 {
                    Some(Formula::Facet { n })
                } else if k >= 2 {
                    Some(Formula::Bounds { k, n })
                } else {
                    None
                }
            }
        }),
    }
}
