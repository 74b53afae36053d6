//! Taylor truncation about a point, and exact checks of the identities it
//! satisfies.

use num_traits::Zero;

use crate::geometry::Point;
use crate::linalg::{self, RationalMatrix};
use crate::polyspline::{MultiIndex, PiecewisePolynomial, Polynomial, SplineError};
use crate::scalar::Scalar;

/// `T_{v,rho}`: truncation to order `rho` of the expansion about `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorOperator {
    pub center: Point,
    pub order: usize,
}

impl TaylorOperator {
    pub fn new(center: Point, order: usize) -> Self {
        TaylorOperator { center, order }
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        taylor_poly(p, &self.center, self.order)
    }
}

/// `sum_{|alpha| <= rho} D^alpha p(v) / alpha! (x - v)^alpha`, in the same
/// coordinates as `p`, with degree bound `rho`.
pub fn taylor_poly(p: &Polynomial, v: &Point, rho: usize) -> Polynomial {
    let local = p.translate(v.coords()).with_degree(rho);
    let back: Vec<Scalar> = v.coords().iter().map(|c| -c).collect();
    local.translate(&back)
}

/// Truncates every piece about the cell center. Pieces are stored in local
/// coordinates, so this is a coefficient cut.
pub fn piecewise_taylor(s: &PiecewisePolynomial, rho: usize) -> PiecewisePolynomial {
    s.map_pieces(|p| p.with_degree(rho))
}

/// `D^beta T_{v,rho} p == T_{v,rho-|beta|} D^beta p`.
pub fn check_commutation(p: &Polynomial, v: &Point, rho: usize, beta: &MultiIndex) -> Result<bool, SplineError> {
    let order = beta.degree();
    if order > rho {
        return Err(SplineError::Input(format!("|beta| = {order} exceeds rho = {rho}")));
    }
    let lhs = taylor_poly(p, v, rho).derivative(beta);
    let rhs = taylor_poly(&p.derivative(beta), v, rho - order);
    Ok(lhs == rhs)
}

/// Restriction of `p` to the line `v + t (w - v)` as a polynomial in `t`.
pub fn restrict_to_segment(p: &Polynomial, v: &Point, w: &Point) -> Polynomial {
    let direction: Vec<Vec<Scalar>> = w.sub(v).into_iter().map(|c| vec![c]).collect();
    p.compose_affine(&direction, v.coords())
}

/// For every `|beta| <= r`, compares `D^beta T_{v,rho} f` and
/// `D^beta T_{v,rho} g` on the segment from `v` to `w`.
pub fn check_segment_restriction(
    f: &Polynomial,
    g: &Polynomial,
    v: &Point,
    w: &Point,
    r: usize,
    rho: usize,
) -> Result<bool, SplineError> {
    if v == w {
        return Err(SplineError::Input("segment endpoints coincide".into()));
    }
    let tf = taylor_poly(f, v, rho);
    let tg = taylor_poly(g, v, rho);
    let n = v.dim();
    Ok(crate::polyspline::monomials(n, r).iter().all(|beta| {
        restrict_to_segment(&tf.derivative(beta), v, w) == restrict_to_segment(&tg.derivative(beta), v, w)
    }))
}

/// Linear forms `c . (x - v)` whose common zero set is the line through `v`
/// and `w`.
pub fn line_forms(v: &Point, w: &Point) -> Result<Vec<Polynomial>, SplineError> {
    if v == w {
        return Err(SplineError::Input("segment endpoints coincide".into()));
    }
    let dir = w.sub(v);
    let normals = linalg::nullspace(&RationalMatrix::from_dense_rows(dir.len(), vec![dir]));
    Ok(normals
        .into_iter()
        .map(|c| {
            let constant = -c.iter().zip(v.coords()).fold(Scalar::zero(), |acc, (a, b)| acc + a * b);
            Polynomial::linear(&c, constant)
        })
        .collect())
}

/// `f + sum_j l_j^{r+1} h_j` over the forms of [`line_forms`]; the result
/// agrees with `f` to order `r` along the whole line.
pub fn segment_hypothesis(
    f: &Polynomial,
    hs: &[Polynomial],
    v: &Point,
    w: &Point,
    r: usize,
) -> Result<Polynomial, SplineError> {
    let forms = line_forms(v, w)?;
    if hs.len() != forms.len() {
        return Err(SplineError::Input(format!("need {} multipliers, got {}", forms.len(), hs.len())));
    }
    Ok(forms
        .iter()
        .zip(hs)
        .fold(f.clone(), |acc, (l, h)| &acc + &(&l.pow(r as u32 + 1) * h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn xy(terms: &[((u32, u32), i64)], degree: usize) -> Polynomial {
        Polynomial::from_terms(
            2,
            degree,
            terms.iter().map(|&((a, b), c)| (MultiIndex::new(vec![a, b]), int(c))),
        )
    }

    #[test]
    fn truncation_examples() {
        let p = xy(&[((2, 0), 1), ((1, 0), 1), ((0, 1), 1)], 2);
        let o = Point::origin(2);
        assert_eq!(taylor_poly(&p, &o, 1), xy(&[((1, 0), 1), ((0, 1), 1)], 1));
        assert_eq!(taylor_poly(&p, &o, 5), p);
        let v = Point::new(vec![ratio(1, 2), int(3)]);
        assert_eq!(taylor_poly(&p, &v, 0), Polynomial::constant(2, p.eval_at(&v)));
    }

    #[test]
    fn commutation_example() {
        let p = xy(&[((2, 1), 1)], 3);
        let o = Point::origin(2);
        assert!(check_commutation(&p, &o, 2, &MultiIndex::new(vec![1, 0])).unwrap());
        assert!(check_commutation(&p, &o, 2, &MultiIndex::zero(2)).unwrap());
        assert!(check_commutation(&p, &o, 1, &MultiIndex::new(vec![1, 1])).is_err());
    }

    #[test]
    fn segment_restriction_along_axis() {
        let v = Point::origin(2);
        let w = Point::new(vec![int(1), int(0)]);
        let f = xy(&[((3, 0), 2), ((1, 2), -1), ((0, 1), 5)], 3);
        let h = xy(&[((1, 1), 3), ((0, 0), 1)], 2);
        for r in 0..=2 {
            let g = segment_hypothesis(&f, std::slice::from_ref(&h), &v, &w, r).unwrap();
            for rho in 0..=6 {
                assert!(check_segment_restriction(&f, &g, &v, &w, r, rho).unwrap());
            }
        }
        assert!(check_segment_restriction(&f, &f, &v, &v, 1, 1).is_err());
    }

    #[test]
    fn violated_hypothesis_is_detected() {
        let v = Point::origin(2);
        let w = Point::new(vec![int(1), int(0)]);
        let f = xy(&[((2, 0), 1)], 2);
        let g = xy(&[((2, 0), 1), ((0, 1), 1)], 2);
        assert!(!check_segment_restriction(&f, &g, &v, &w, 1, 2).unwrap());
    }
}
