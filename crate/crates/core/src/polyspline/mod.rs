//! Polynomial pieces, C^r face constraints, spline space dimensions and the
//! supersmoothness search.

mod constraints;
mod mos;
mod multi_index;
mod piecewise;
mod polynomial;
mod space;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use constraints::{
    smoothness_constraints, violated_face, ConstraintRow, ConstraintSystem,
};
pub use mos::{
    default_cap, find_witness, first_vertex_mismatch, mos_oracle, vertex_smoothness_order,
    Mismatch, MosReport,
};
pub use multi_index::{binomial, homogeneous, homogeneous_count, monomials, MultiIndex};
pub use piecewise::PiecewisePolynomial;
pub use polynomial::Polynomial;
pub use space::{basis_spline_space, dim_spline_space, SpaceReport, SplineSpace};

#[derive(Debug, Error)]
pub enum SplineError {
    #[error("invalid smoothness: r = {r} exceeds d = {d}")]
    InvalidSmoothness { d: usize, r: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate through the search cap {cap}; mos >= {cap}")]
    CapReached { cap: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// `dim Pi_d = C(d + n, n)`, and 0 for negative `d`.
pub fn dim_pi(n: usize, d: i64) -> usize {
    if d < 0 {
        0
    } else {
        binomial(d as usize + n, n)
    }
}
