//! C^r conditions across faces through the center.
//!
//! Every face of the cell contains `v`, so in the local variables `y = x - v`
//! its form is `l(y) = y_i + sum_{j != i} c_j y_j` with lead index `i`. Two
//! pieces join with C^r smoothness across the face exactly when their
//! difference is divisible by `l^{r+1}`. Substituting `y_i = z_i - sum c_j z_j`
//! turns `l` into `z_i`, and divisibility into the vanishing of every
//! `z^beta` coefficient with `beta_i <= r`. The substitution is linear, so it
//! maps each homogeneous degree to itself and the conditions split by degree.

use num_traits::{One, Zero};

use super::multi_index::{binomial, homogeneous, homogeneous_count, MultiIndex};
use super::{PiecewisePolynomial, Polynomial, SplineError};
use crate::geometry::{validate_cell, Cell, Face, LinearForm, Point};
use crate::linalg::RationalMatrix;
use crate::scalar::Scalar;

/// The substitution sending a face form to its lead variable, tabulated per
/// homogeneous degree.
#[derive(Debug, Clone)]
pub(crate) struct FaceTransform {
    nvars: usize,
    lead: usize,
    /// `images[k][a][b]`: coefficient of the `b`-th degree-`k` monomial in `z`
    /// in the image of the `a`-th degree-`k` monomial in `y`.
    images: Vec<Vec<Vec<Scalar>>>,
    /// Image of each `y_j` as a linear form in `z`.
    linear: Vec<Vec<Scalar>>,
}

impl FaceTransform {
    pub(crate) fn new(form: &LinearForm) -> Self {
        let n = form.coefficients().len();
        let lead = form.lead_index();
        let linear = (0..n)
            .map(|j| {
                if j == lead {
                    form.coefficients()
                        .iter()
                        .enumerate()
                        .map(|(t, c)| if t == lead { Scalar::one() } else { -c })
                        .collect()
                } else {
                    (0..n).map(|t| if t == j { Scalar::one() } else { Scalar::zero() }).collect()
                }
            })
            .collect();
        FaceTransform {
            nvars: n,
            lead,
            images: vec![vec![vec![Scalar::one()]]],
            linear,
        }
    }

    /// Tabulates images up to degree `k`.
    pub(crate) fn extend_to(&mut self, k: usize) {
        let n = self.nvars;
        while self.images.len() <= k {
            let deg = self.images.len();
            let prev = &self.images[deg - 1];
            let next: Vec<Vec<Scalar>> = homogeneous(n, deg)
                .iter()
                .map(|alpha| {
                    let j = alpha.exponents().iter().position(|&e| e > 0).expect("positive degree");
                    let lower = alpha.checked_sub(&MultiIndex::unit(n, j)).expect("divisible");
                    multiply_linear(&prev[lower.homogeneous_index()], deg - 1, &self.linear[j])
                })
                .collect();
            self.images.push(next);
        }
    }

    /// Degree-`k` rows: for each `beta` with `beta_lead <= r`, the map from
    /// the coefficients of a homogeneous piece to that `z^beta` coefficient.
    pub(crate) fn rows(&self, k: usize, r: usize) -> Vec<(MultiIndex, Vec<(usize, Scalar)>)> {
        let table = &self.images[k];
        homogeneous(self.nvars, k)
            .into_iter()
            .enumerate()
            .filter(|(_, beta)| beta.exponents()[self.lead] as usize <= r)
            .map(|(b, beta)| {
                let entries = table
                    .iter()
                    .enumerate()
                    .filter(|(_, img)| !img[b].is_zero())
                    .map(|(a, img)| (a, img[b].clone()))
                    .collect();
                (beta, entries)
            })
            .collect()
    }
}

/// Product of a degree-`deg` homogeneous vector with a linear form.
fn multiply_linear(v: &[Scalar], deg: usize, form: &[Scalar]) -> Vec<Scalar> {
    let n = form.len();
    let mut out = vec![Scalar::zero(); homogeneous_count(n, deg + 1)];
    for (beta, c) in homogeneous(n, deg).iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        for (t, f) in form.iter().enumerate() {
            if !f.is_zero() {
                let raised = beta.add(&MultiIndex::unit(n, t));
                out[raised.homogeneous_index()] += c * f;
            }
        }
    }
    out
}

/// Bookkeeping for one constraint row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintRow {
    /// Index into [`ConstraintSystem::faces`].
    pub face: usize,
    /// Exponent in the face-adapted variables whose coefficient must vanish.
    pub beta: MultiIndex,
}

/// The linear system on stacked piece coefficients whose nullspace is
/// `S_d^r`. Column `e * dim Pi_d + j` holds the `j`-th graded coefficient of
/// piece `e`.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    center: Point,
    elements: usize,
    d: usize,
    r: usize,
    faces: Vec<(usize, usize, Face)>,
    rows: Vec<ConstraintRow>,
    matrix: RationalMatrix,
}

impl ConstraintSystem {
    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn faces(&self) -> &[(usize, usize, Face)] {
        &self.faces
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn smoothness(&self) -> usize {
        self.r
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.cols()
    }

    fn block(&self) -> usize {
        binomial(self.d + self.center.dim(), self.center.dim())
    }

    pub fn encode(&self, s: &PiecewisePolynomial) -> Result<Vec<Scalar>, SplineError> {
        if s.pieces().len() != self.elements || s.nvars() != self.center.dim() {
            return Err(SplineError::Input("spline does not match the cell".into()));
        }
        if s.center() != &self.center {
            return Err(SplineError::Input("spline is expanded about a different center".into()));
        }
        let block = self.block();
        let mut out = Vec::with_capacity(block * self.elements);
        for p in s.pieces() {
            if p.total_degree().is_some_and(|t| t > self.d) {
                return Err(SplineError::Input(format!("piece exceeds degree {}", self.d)));
            }
            out.extend_from_slice(p.with_degree(self.d).coeffs());
        }
        Ok(out)
    }

    pub fn decode(&self, x: &[Scalar]) -> PiecewisePolynomial {
        let block = self.block();
        assert_eq!(x.len(), block * self.elements);
        let n = self.center.dim();
        let pieces = x
            .chunks(block)
            .map(|c| Polynomial::from_coeffs(n, self.d, c.to_vec()))
            .collect();
        PiecewisePolynomial::new(self.center.clone(), pieces)
    }

    /// Exact membership test through the assembled matrix.
    pub fn is_satisfied_by(&self, s: &PiecewisePolynomial) -> bool {
        self.encode(s).is_ok_and(|x| self.matrix.annihilates(&x))
    }
}

/// Assembles the C^r conditions of `S_d^r` on a valid cell.
///
/// Rows are ordered by face, then by degree, then by `beta`.
pub fn smoothness_constraints(cell: &Cell, d: usize, r: usize) -> Result<ConstraintSystem, SplineError> {
    if r > d {
        return Err(SplineError::InvalidSmoothness { d, r });
    }
    ensure_valid(cell)?;
    let n = cell.dimension;
    let block = binomial(d + n, n);
    let faces = cell.interior_faces();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (f, (a, b, face)) in faces.iter().enumerate() {
        let mut t = FaceTransform::new(&face.form);
        t.extend_to(d);
        for k in 0..=d {
            let offset = if k == 0 { 0 } else { binomial(k - 1 + n, n) };
            for (beta, coeffs) in t.rows(k, r) {
                let mut row = Vec::with_capacity(2 * coeffs.len());
                for (alpha, c) in &coeffs {
                    row.push((a * block + offset + alpha, c.clone()));
                    row.push((b * block + offset + alpha, -c));
                }
                rows.push(ConstraintRow { face: f, beta });
                entries.push(row);
            }
        }
    }
    let matrix = RationalMatrix::from_sparse_rows(block * cell.elements.len(), entries);
    Ok(ConstraintSystem {
        center: cell.center_point().clone(),
        elements: cell.elements.len(),
        d,
        r,
        faces,
        rows,
        matrix,
    })
}

pub(crate) fn ensure_valid(cell: &Cell) -> Result<(), SplineError> {
    match validate_cell(cell).violation {
        None => Ok(()),
        Some(msg) => Err(SplineError::Geometry(crate::geometry::GeometryError::InvalidGeometry(msg))),
    }
}

/// First interior face across which `s` is not C^r, checked by substituting
/// the face-adapted variables into the difference of the adjacent pieces.
/// Works for any degree and does not go through the constraint matrix.
pub fn violated_face(cell: &Cell, s: &PiecewisePolynomial, r: usize) -> Option<(usize, usize, Face)> {
    let n = cell.dimension;
    cell.interior_faces().into_iter().find(|(a, b, face)| {
        let diff = s.piece(*a) - s.piece(*b);
        let lead = face.form.lead_index();
        let a_map: Vec<Vec<Scalar>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|t| match (j == lead, t == j) {
                        (true, true) => Scalar::one(),
                        (true, false) => -&face.form.coefficients()[t],
                        (false, same) => if same { Scalar::one() } else { Scalar::zero() },
                    })
                    .collect()
            })
            .collect();
        let q = diff.compose_affine(&a_map, &vec![Scalar::zero(); n]);
        q.terms().iter().any(|(beta, _)| beta.exponents()[lead] as usize <= r)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_clough_tocher, make_two_cell, standard_simplex};
    use crate::linalg::{nullspace, rank};
    use crate::polyspline::dim_pi;
    use crate::scalar::{int, ratio};

    fn ct() -> Cell {
        make_clough_tocher(&standard_simplex(2), &Point::new(vec![ratio(1, 4), ratio(1, 4)])).unwrap()
    }

    #[test]
    fn transform_sends_form_to_lead_variable() {
        let form = LinearForm::new(vec![int(2), int(-3)], int(0)).unwrap();
        let mut t = FaceTransform::new(&form);
        t.extend_to(3);
        // l(y)^3 in z must be z_0^3
        let l = Polynomial::linear(form.coefficients(), int(0)).pow(3);
        let mut image = vec![Scalar::zero(); 4];
        for (alpha, c) in l.terms() {
            for (b, v) in t.images[3][alpha.homogeneous_index()].iter().enumerate() {
                image[b] += c * v;
            }
        }
        assert_eq!(image, vec![int(1), int(0), int(0), int(0)]);
    }

    #[test]
    fn r_equal_d_is_degenerate() {
        let cell = ct();
        for r in 0..=3 {
            let sys = smoothness_constraints(&cell, r, r).unwrap();
            assert_eq!(sys.unknowns() - rank(sys.matrix()), dim_pi(2, r as i64));
        }
    }

    #[test]
    fn rejects_r_above_d() {
        assert!(matches!(
            smoothness_constraints(&ct(), 1, 2),
            Err(SplineError::InvalidSmoothness { d: 1, r: 2 })
        ));
    }

    #[test]
    fn kernel_agrees_with_direct_check() {
        let cell = ct();
        let sys = smoothness_constraints(&cell, 3, 1).unwrap();
        let basis = nullspace(sys.matrix());
        assert_eq!(basis.len(), 12);
        for x in &basis {
            let s = sys.decode(x);
            assert!(violated_face(&cell, &s, 1).is_none());
            assert!(sys.is_satisfied_by(&s));
        }
    }

    #[test]
    fn continuity_holds_at_sampled_edge_points() {
        let cell = ct();
        let sys = smoothness_constraints(&cell, 2, 0).unwrap();
        for x in nullspace(sys.matrix()) {
            let s = sys.decode(&x);
            for (a, b, face) in sys.faces() {
                let p = &cell.points[face.vertices[0]];
                let q = &cell.points[face.vertices[1]];
                for t in [ratio(1, 7), ratio(2, 9), ratio(1, 2), ratio(5, 8), ratio(13, 14)] {
                    let one_minus = Scalar::one() - &t;
                    let x = Point::combination(&[p, q], &[t, one_minus]);
                    assert_eq!(s.eval_piece(*a, &x), s.eval_piece(*b, &x));
                }
            }
        }
    }

    #[test]
    fn two_cell_kernel_is_divisible_by_face_product() {
        let cell = make_two_cell(2, &standard_simplex(2), &Point::new(vec![ratio(1, 4), ratio(1, 4)]), 2).unwrap();
        let sys = smoothness_constraints(&cell, 2, 0).unwrap();
        let basis = nullspace(sys.matrix());
        assert_eq!(basis.len(), dim_pi(2, 2) + dim_pi(2, 0));
        // l_1 l_2 on the simplex, zero on the complement
        let forms: Vec<Polynomial> = sys
            .faces()
            .iter()
            .map(|(_, _, f)| Polynomial::linear(f.form.coefficients(), int(0)))
            .collect();
        let product = &forms[0] * &forms[1];
        let s = PiecewisePolynomial::new(
            cell.center_point().clone(),
            vec![product.with_degree(2), Polynomial::zero(2, 2)],
        );
        assert!(sys.is_satisfied_by(&s));
        let half = PiecewisePolynomial::new(
            cell.center_point().clone(),
            vec![forms[0].with_degree(2), Polynomial::zero(2, 2)],
        );
        assert!(!sys.is_satisfied_by(&half));
        assert!(violated_face(&cell, &half, 0).is_some());
    }
}
