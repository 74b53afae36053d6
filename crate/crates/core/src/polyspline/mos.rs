use serde::Serialize;

use super::multi_index::{homogeneous, homogeneous_count};
use super::space::{SpaceReport, SplineSpace};
use super::{dim_pi, MultiIndex, PiecewisePolynomial, SplineError};
use crate::geometry::Cell;

/// Default search cap `r + n(r+2)`, above every known closed-form value.
pub fn default_cap(n: usize, r: usize) -> usize {
    r + n * (r + 2)
}

/// Result of the supersmoothness search.
#[derive(Debug, Clone, Serialize)]
pub struct MosReport {
    pub r: usize,
    /// The maximal order, or the cap when `exact` is false.
    pub mos: usize,
    pub exact: bool,
    pub cap: usize,
    /// `S_d^r` for `d = r ..` up to the first non-degenerate degree or the cap.
    pub trace: Vec<SpaceReport>,
    #[serde(skip)]
    pub witness: Option<PiecewisePolynomial>,
}

/// Where two pieces first disagree at the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// Total order `|alpha|` of the first differing derivative.
    pub order: usize,
    pub alpha: MultiIndex,
    pub pieces: (usize, usize),
}

/// Lowest-order derivative at the center on which some piece differs from
/// piece 0. Derivatives are compared through the local coefficients, which
/// are `D^alpha f(v) / alpha!`.
pub fn first_vertex_mismatch(s: &PiecewisePolynomial) -> Option<Mismatch> {
    let n = s.nvars();
    let top = s.pieces().iter().map(|p| p.degree()).max().unwrap_or(0);
    for k in 0..=top {
        for alpha in homogeneous(n, k) {
            let base = s.piece(0).coeff(&alpha);
            if let Some(e) = s.pieces().iter().position(|p| p.coeff(&alpha) != base) {
                return Some(Mismatch {
                    order: k,
                    alpha,
                    pieces: (0, e),
                });
            }
        }
    }
    None
}

/// Largest `rho <= rho_max` with all derivatives of order at most `rho`
/// equal across pieces at the center. `None` when the values already differ.
pub fn vertex_smoothness_order(s: &PiecewisePolynomial, rho_max: usize) -> Option<usize> {
    match first_vertex_mismatch(s) {
        None => Some(rho_max),
        Some(m) if m.order == 0 => None,
        Some(m) => Some((m.order - 1).min(rho_max)),
    }
}

/// Scans `d = r, r+1, ..` for the first non-degenerate `S_d^r`.
pub fn mos_oracle(cell: &Cell, r: usize, cap: usize) -> Result<MosReport, SplineError> {
    if cap < r {
        return Err(SplineError::Input(format!("search cap {cap} is below r = {r}")));
    }
    let space = SplineSpace::new(cell, r)?;
    let n = space.nvars();
    let mut dimension = 0;
    let mut trace = Vec::new();
    for k in 0..=cap {
        let extra = space.extra(k);
        dimension += homogeneous_count(n, k) + extra;
        if k < r {
            if extra > 0 {
                return Err(SplineError::Internal(format!(
                    "degree {k} conditions are not degenerate below r"
                )));
            }
            continue;
        }
        let degenerate = dimension == dim_pi(n, k as i64);
        trace.push(SpaceReport {
            n,
            d: k,
            r,
            dimension,
            degenerate,
        });
        if !degenerate {
            if k == r {
                return Err(SplineError::Internal("S_r^r is not degenerate".into()));
            }
            let witness = space.extra_basis(k).into_iter().next();
            debug_assert!(witness.as_ref().is_some_and(|w| !w.all_pieces_equal()));
            return Ok(MosReport {
                r,
                mos: k - 1,
                exact: true,
                cap,
                trace,
                witness,
            });
        }
    }
    Ok(MosReport {
        r,
        mos: cap,
        exact: false,
        cap,
        trace,
        witness: None,
    })
}

/// A spline in `S_{mos+1}^r` whose pieces first differ at order `mos + 1`.
pub fn find_witness(cell: &Cell, r: usize, cap: usize) -> Result<PiecewisePolynomial, SplineError> {
    let report = mos_oracle(cell, r, cap)?;
    match report.witness {
        Some(w) if report.exact => Ok(w),
        _ => Err(SplineError::CapReached { cap }),
    }
}

/// Every piece is homogeneous of degree `k`.
#[cfg(test)]
fn is_homogeneous(s: &PiecewisePolynomial, k: usize) -> bool {
    s.pieces()
        .iter()
        .all(|p| p.terms().iter().all(|(a, _)| a.degree() == k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_clough_tocher, make_star_cell_2d, make_two_cell, standard_simplex, Point};
    use crate::polyspline::{violated_face, Polynomial};
    use crate::scalar::{int, ratio};

    fn ct() -> Cell {
        make_clough_tocher(&standard_simplex(2), &Point::new(vec![ratio(1, 4), ratio(1, 4)])).unwrap()
    }

    fn square_star() -> Cell {
        let dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        let boundary: Vec<Point> = dirs.iter().map(|&(a, b)| Point::new(vec![int(a), int(b)])).collect();
        make_star_cell_2d(&Point::origin(2), &boundary).unwrap()
    }

    #[test]
    fn clough_tocher_mos() {
        assert_eq!(mos_oracle(&ct(), 1, 10).unwrap().mos, 2);
        let rep = mos_oracle(&ct(), 2, 10).unwrap();
        assert_eq!((rep.mos, rep.exact), (3, true));
        assert_eq!(rep.trace.first().unwrap().d, 2);
        assert!(!rep.trace.last().unwrap().degenerate);
    }

    #[test]
    fn square_star_mos_is_r() {
        for r in 0..=2 {
            assert_eq!(mos_oracle(&square_star(), r, 10).unwrap().mos, r);
        }
    }

    #[test]
    fn cap_is_reported() {
        let rep = mos_oracle(&ct(), 2, 2).unwrap();
        assert_eq!((rep.mos, rep.exact), (2, false));
        assert!(matches!(find_witness(&ct(), 2, 2), Err(SplineError::CapReached { cap: 2 })));
        assert!(mos_oracle(&ct(), 2, 1).is_err());
    }

    #[test]
    fn witness_mismatch_order() {
        let w = find_witness(&ct(), 1, 10).unwrap();
        assert_eq!(first_vertex_mismatch(&w).unwrap().order, 3);
        assert_eq!(vertex_smoothness_order(&w, 10), Some(2));
        assert!(violated_face(&ct(), &w, 1).is_none());
        assert!(is_homogeneous(&w, 3));
    }

    #[test]
    fn two_cell_witness_is_product_of_faces() {
        let cell = make_two_cell(2, &standard_simplex(2), &Point::new(vec![ratio(1, 4), ratio(1, 4)]), 2).unwrap();
        let w = find_witness(&cell, 0, 10).unwrap();
        assert_eq!(first_vertex_mismatch(&w).unwrap().order, 2);
        assert!(w.piece(1).is_zero());
        let faces = cell.interior_faces();
        let l1 = Polynomial::linear(faces[0].2.form.coefficients(), int(0));
        let l2 = Polynomial::linear(faces[1].2.form.coefficients(), int(0));
        let product = &l1 * &l2;
        // proportional to l_1 l_2
        let (alpha, c) = product.terms()[0].clone();
        let scale = w.piece(0).coeff(&alpha) / c;
        assert_eq!(product.scale(&scale), *w.piece(0));
    }

    #[test]
    fn smoothness_order_markers() {
        let v = Point::origin(2);
        let same = PiecewisePolynomial::replicate(v.clone(), Polynomial::constant(2, int(3)), 3);
        assert_eq!(vertex_smoothness_order(&same, 7), Some(7));
        let differ = PiecewisePolynomial::new(
            v,
            vec![Polynomial::constant(2, int(1)), Polynomial::constant(2, int(2))],
        );
        assert_eq!(vertex_smoothness_order(&differ, 7), None);
    }
}
