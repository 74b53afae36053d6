//! Exact sign tests and affine coordinates.

use num_traits::{One, Zero};

use super::Point;
use crate::linalg::{self, RationalMatrix};
use crate::scalar::Scalar;

/// Determinant by rational Gaussian elimination (small matrices only).
pub fn determinant(mut rows: Vec<Vec<Scalar>>) -> Scalar {
    let n = rows.len();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&i| !rows[i][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let lead = rows[col][col].clone();
        det *= &lead;
        for i in col + 1..n {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] / &lead;
            let (upper, lower) = rows.split_at_mut(i);
            for (target, pivot) in lower[0][col..n].iter_mut().zip(&upper[col][col..n]) {
                *target -= &factor * pivot;
            }
        }
    }
    det
}

/// Signed volume (times n!) of the simplex `points[0..=n]`.
pub fn orientation(points: &[&Point]) -> Scalar {
    let base = points[0];
    let rows = points[1..]
        .iter()
        .map(|p| p.sub(base))
        .collect();
    determinant(rows)
}

pub fn cross2(a: &[Scalar], b: &[Scalar]) -> Scalar {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Affine coordinates of `x` with respect to `vertices`, which must be
/// affinely independent. `None` when `x` is outside their affine hull.
pub fn affine_coordinates(vertices: &[&Point], x: &Point) -> Option<Vec<Scalar>> {
    let n = x.dim();
    let k = vertices.len();
    let mut rows: Vec<Vec<Scalar>> = (0..n)
        .map(|i| vertices.iter().map(|v| v.coords()[i].clone()).collect())
        .collect();
    rows.push(vec![Scalar::one(); k]);
    let mut rhs: Vec<Scalar> = x.coords().to_vec();
    rhs.push(Scalar::one());
    linalg::solve(&RationalMatrix::from_dense_rows(k, rows), &rhs)
}

/// Whether `x` lies in the relative interior of the simplex spanned by `vertices`.
pub fn in_relative_interior(vertices: &[&Point], x: &Point) -> bool {
    affine_coordinates(vertices, x)
        .is_some_and(|lambda| lambda.iter().all(|l| l > &Scalar::zero()))
}

/// Dimension of the affine hull of `points`.
pub fn affine_rank(points: &[&Point]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Scalar>> = points[1..].iter().map(|p| p.sub(points[0])).collect();
    let cols = points[0].dim();
    linalg::rank(&RationalMatrix::from_dense_rows(cols, rows))
}
