use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::multi_index::{binomial, monomials, MultiIndex};
use crate::geometry::Point;
use crate::scalar::{format_scalar, Scalar};

/// Polynomial in `nvars` variables of degree at most `degree`, stored as a
/// dense coefficient vector in graded monomial order.
///
/// Equality compares the functions, not the degree bounds.
#[derive(Debug, Clone)]
pub struct Polynomial {
    nvars: usize,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Polynomial {
            nvars,
            degree,
            coeffs: vec![Scalar::zero(); binomial(degree + nvars, nvars)],
        }
    }

    pub fn constant(nvars: usize, value: Scalar) -> Self {
        let mut p = Self::zero(nvars, 0);
        p.coeffs[0] = value;
        p
    }

    pub fn monomial(exponent: MultiIndex, coeff: Scalar) -> Self {
        let mut p = Self::zero(exponent.nvars(), exponent.degree());
        let idx = exponent.graded_index();
        p.coeffs[idx] = coeff;
        p
    }

    /// `c . x + c0`.
    pub fn linear(coefficients: &[Scalar], constant: Scalar) -> Self {
        let n = coefficients.len();
        let mut p = Self::zero(n, 1);
        p.coeffs[0] = constant;
        p.coeffs[1..].clone_from_slice(coefficients);
        p
    }

    /// Builds from a dense vector in graded order; its length fixes the degree.
    pub fn from_coeffs(nvars: usize, degree: usize, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(coeffs.len(), binomial(degree + nvars, nvars), "coefficient count");
        Polynomial { nvars, degree, coeffs }
    }

    pub fn from_terms<I>(nvars: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        let mut p = Self::zero(nvars, degree);
        for (alpha, c) in terms {
            assert!(alpha.degree() <= degree && alpha.nvars() == nvars, "term out of range");
            p.coeffs[alpha.graded_index()] += c;
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The degree bound.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Scalar {
        if alpha.degree() > self.degree {
            return Scalar::zero();
        }
        self.coeffs[alpha.graded_index()].clone()
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> Vec<(MultiIndex, &Scalar)> {
        monomials(self.nvars, self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Actual degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms().last().map(|(a, _)| a.degree())
    }

    /// Same function with degree bound `degree`; drops terms above it.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(binomial(degree + self.nvars, self.nvars), Scalar::zero());
        Polynomial {
            nvars: self.nvars,
            degree,
            coeffs,
        }
    }

    /// Terms of total degree at most `rho`; degree bound `min(degree, rho)`.
    pub fn truncate(&self, rho: usize) -> Self {
        self.with_degree(rho.min(self.degree))
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars, k);
        if k <= self.degree {
            let start = if k == 0 { 0 } else { binomial(k - 1 + self.nvars, self.nvars) };
            let end = binomial(k + self.nvars, self.nvars);
            out.coeffs[start..end].clone_from_slice(&self.coeffs[start..end]);
        }
        out
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Scalar::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative `D^beta`.
    pub fn derivative(&self, beta: &MultiIndex) -> Self {
        assert_eq!(beta.nvars(), self.nvars);
        let degree = self.degree.saturating_sub(beta.degree());
        let mut out = Self::zero(self.nvars, degree);
        for (alpha, c) in self.terms() {
            if let Some(rest) = alpha.checked_sub(beta) {
                let falling: u128 = alpha
                    .exponents()
                    .iter()
                    .zip(beta.exponents())
                    .map(|(&a, &b)| ((a - b + 1)..=a).map(u128::from).product::<u128>())
                    .product();
                out.coeffs[rest.graded_index()] += c * Scalar::from_integer(falling.into());
            }
        }
        out
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars);
        self.terms()
            .into_iter()
            .fold(Scalar::zero(), |acc, (alpha, c)| {
                let mono = alpha
                    .exponents()
                    .iter()
                    .zip(x)
                    .fold(Scalar::one(), |m, (&e, xi)| m * num_traits::pow(xi.clone(), e as usize));
                acc + c * mono
            })
    }

    pub fn eval_at(&self, x: &Point) -> Scalar {
        self.eval(x.coords())
    }

    /// `p(A t + b)` as a polynomial in `t`; `a` has one row per variable of `p`.
    pub fn compose_affine(&self, a: &[Vec<Scalar>], b: &[Scalar]) -> Self {
        assert_eq!(a.len(), self.nvars);
        assert_eq!(b.len(), self.nvars);
        let m = a.first().map_or(0, Vec::len);
        let images: Vec<Polynomial> = a
            .iter()
            .zip(b)
            .map(|(row, shift)| Polynomial::linear(row, shift.clone()))
            .collect();
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|l| vec![Polynomial::constant(m, Scalar::one()), l.clone()])
            .collect();
        let mut out = Polynomial::zero(m, self.degree);
        for (alpha, c) in self.terms() {
            let mut term = Polynomial::constant(m, c.clone());
            for (j, &e) in alpha.exponents().iter().enumerate() {
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().expect("power list") * &images[j];
                    powers[j].push(next);
                }
                if e > 0 {
                    term = &term * &powers[j][e as usize];
                }
            }
            out = &out + &term;
        }
        out.with_degree(self.degree)
    }

    /// `p(x + shift)`.
    pub fn translate(&self, shift: &[Scalar]) -> Self {
        let n = self.nvars;
        let identity: Vec<Vec<Scalar>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        self.compose_affine(&identity, shift)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let (short, long) = if self.coeffs.len() <= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        short.iter().zip(long.iter()).all(|(a, b)| a == b)
            && long[short.len()..].iter().all(Zero::is_zero)
    }
}

impl Eq for Polynomial {}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let degree = self.degree.max(rhs.degree);
        let mut out = self.with_degree(degree);
        for (o, c) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o += c;
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars, self.degree + rhs.degree);
        let right = rhs.terms();
        for (a, ca) in self.terms() {
            for (b, cb) in &right {
                out.coeffs[a.add(b).graded_index()] += ca * *cb;
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(alpha, c)| {
                let vars: Vec<String> = alpha
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                if vars.is_empty() {
                    format_scalar(c)
                } else {
                    format!("{}*{}", format_scalar(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
