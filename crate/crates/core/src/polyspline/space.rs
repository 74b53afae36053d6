//! Dimensions and bases of `S_d^r`, computed one homogeneous degree at a time.
//!
//! The conditions of degree `k` only involve the degree-`k` parts of the
//! pieces. Replicated polynomials always satisfy them and can be made to
//! take any value on the last element, so the degree-`k` solutions are the
//! replicated monomials plus the solutions that vanish on the last element.
//! The second set is the nullspace of a smaller matrix, which is empty
//! exactly when degree `k` adds nothing beyond polynomials.

use num_traits::Zero;
use serde::Serialize;

use super::constraints::{ensure_valid, FaceTransform};
use super::multi_index::{homogeneous, homogeneous_count};
use super::{dim_pi, PiecewisePolynomial, Polynomial, SplineError};
use crate::geometry::{Cell, Point};
use crate::linalg::{self, RationalMatrix};
use crate::scalar::Scalar;

/// Dimension of one spline space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceReport {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub dimension: usize,
    pub degenerate: bool,
}

/// The C^r conditions of a validated cell, ready to be split by degree.
#[derive(Debug, Clone)]
pub struct SplineSpace {
    center: Point,
    n: usize,
    elements: usize,
    r: usize,
    faces: Vec<(usize, usize, FaceTransform)>,
}

impl SplineSpace {
    pub fn new(cell: &Cell, r: usize) -> Result<Self, SplineError> {
        ensure_valid(cell)?;
        let faces = cell
            .interior_faces()
            .into_iter()
            .map(|(a, b, face)| (a, b, FaceTransform::new(&face.form)))
            .collect();
        Ok(SplineSpace {
            center: cell.center_point().clone(),
            n: cell.dimension,
            elements: cell.elements.len(),
            r,
            faces,
        })
    }

    pub fn smoothness(&self) -> usize {
        self.r
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    /// Degree-`k` conditions on all pieces but the last, whose degree-`k`
    /// part is held at zero.
    pub fn reduced_block(&self, k: usize) -> RationalMatrix {
        let h = homogeneous_count(self.n, k);
        let last = self.elements - 1;
        let mut rows = Vec::new();
        for (a, b, t) in &self.faces {
            let mut t = t.clone();
            t.extend_to(k);
            for (_, coeffs) in t.rows(k, self.r) {
                let mut row = Vec::with_capacity(2 * coeffs.len());
                for (alpha, c) in &coeffs {
                    if *a != last {
                        row.push((a * h + alpha, c.clone()));
                    }
                    if *b != last {
                        row.push((b * h + alpha, -c));
                    }
                }
                rows.push(row);
            }
        }
        RationalMatrix::from_sparse_rows(h * last, rows)
    }

    /// Number of degree-`k` solutions beyond the replicated monomials.
    pub fn extra(&self, k: usize) -> usize {
        let m = self.reduced_block(k);
        m.cols() - linalg::rank(&m)
    }

    /// Degree-`k` solutions vanishing on the last element, as homogeneous
    /// splines of degree bound `k`.
    pub fn extra_basis(&self, k: usize) -> Vec<PiecewisePolynomial> {
        let m = self.reduced_block(k);
        linalg::nullspace(&m)
            .iter()
            .map(|x| self.decode_homogeneous(k, x, k))
            .collect()
    }

    /// `dim S_d^r` from the per-degree counts.
    pub fn dimension(&self, d: usize) -> usize {
        (0..=d).map(|k| homogeneous_count(self.n, k) + self.extra(k)).sum()
    }

    pub fn report(&self, d: usize) -> Result<SpaceReport, SplineError> {
        if self.r > d {
            return Err(SplineError::InvalidSmoothness { d, r: self.r });
        }
        let dimension = self.dimension(d);
        Ok(SpaceReport {
            n: self.n,
            d,
            r: self.r,
            dimension,
            degenerate: dimension == dim_pi(self.n, d as i64),
        })
    }

    /// Basis of `S_d^r`: for each degree `k`, the replicated monomials of
    /// degree `k` followed by the degree-`k` solutions vanishing on the last
    /// element.
    pub fn basis(&self, d: usize) -> Result<Vec<PiecewisePolynomial>, SplineError> {
        if self.r > d {
            return Err(SplineError::InvalidSmoothness { d, r: self.r });
        }
        let mut out = Vec::new();
        for k in 0..=d {
            for alpha in homogeneous(self.n, k) {
                let p = Polynomial::monomial(alpha, Scalar::from_integer(1.into())).with_degree(d);
                out.push(PiecewisePolynomial::replicate(self.center.clone(), p, self.elements));
            }
            out.extend(self.extra_basis(k).into_iter().map(|s| s.map_pieces(|p| p.with_degree(d))));
        }
        Ok(out)
    }

    fn decode_homogeneous(&self, k: usize, x: &[Scalar], degree: usize) -> PiecewisePolynomial {
        let h = homogeneous_count(self.n, k);
        let monos = homogeneous(self.n, k);
        let pieces = (0..self.elements)
            .map(|e| {
                let terms: Vec<_> = if e + 1 == self.elements {
                    Vec::new()
                } else {
                    monos
                        .iter()
                        .zip(&x[e * h..(e + 1) * h])
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(m, c)| (m.clone(), c.clone()))
                        .collect()
                };
                Polynomial::from_terms(self.n, degree, terms)
            })
            .collect();
        PiecewisePolynomial::new(self.center.clone(), pieces)
    }
}

/// Dimension and degeneracy of `S_d^r` on a cell.
pub fn dim_spline_space(cell: &Cell, d: usize, r: usize) -> Result<SpaceReport, SplineError> {
    if r > d {
        return Err(SplineError::InvalidSmoothness { d, r });
    }
    SplineSpace::new(cell, r)?.report(d)
}

/// A basis of `S_d^r`, of length `dim S_d^r`.
pub fn basis_spline_space(cell: &Cell, d: usize, r: usize) -> Result<Vec<PiecewisePolynomial>, SplineError> {
    if r > d {
        return Err(SplineError::InvalidSmoothness { d, r });
    }
    SplineSpace::new(cell, r)?.basis(d)
}
