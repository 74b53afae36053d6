//! Exact computations on polynomial spline spaces over simplicial cells.
//!
//! A cell is a set of simplices sharing one center vertex `v`. For a cell,
//! a degree `d` and a smoothness `r`, the crate computes the dimension of
//! the space `S_d^r` of piecewise polynomials of degree at most `d` that are
//! `C^r` across interior faces, decides whether that space is degenerate
//! (contains only global polynomials), and finds the maximal order of
//! supersmoothness at `v`: the largest `d` for which `S_d^r` is degenerate.
//! Everything is exact rational arithmetic.
//!
//! Closed-form dimension and supersmoothness formulas for the standard cell
//! families live in [`formulas`] and serve as an independent check on the
//! rank computations in [`polyspline`].

pub mod formulas;
pub mod geometry;
pub mod linalg;
pub mod polyspline;
pub mod scalar;
pub mod taylor;

pub use geometry::{Cell, Element, ElementKind, Face, GeometryError, LinearForm, Point};
pub use linalg::RationalMatrix;
pub use polyspline::{
    MosReport, MultiIndex, PiecewisePolynomial, Polynomial, SpaceReport, SplineError,
};
pub use scalar::Scalar;
