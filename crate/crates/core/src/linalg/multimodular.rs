//! Nullspace by reduction modulo several primes, Chinese remaindering,
//! rational reconstruction and exact verification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::{bigint_mod_u64, inverse_mod, primes_62, rref, Montgomery, Rref};
use super::IntRow;
use crate::scalar::Scalar;

/// Primes used for the rank filter.
const FILTER_PRIMES: usize = 2;

/// Upper limit on lifting primes before giving up (a bug if ever reached).
const MAX_PRIMES: usize = 4096;

fn reduce_rows(field: &Montgomery, rows: &[IntRow], cols: usize) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|row| {
            let mut dense = vec![0u64; cols];
            for (c, v) in row {
                dense[*c] = field.reduce_bigint(v);
            }
            dense
        })
        .collect()
}

/// Largest rank seen modulo a couple of primes; never above the rational rank.
pub(super) fn rank_lower_bound(rows: &[IntRow], cols: usize) -> usize {
    primes_62()
        .take(FILTER_PRIMES)
        .map(|p| {
            let field = Montgomery::new(p);
            rref(&field, reduce_rows(&field, rows, cols), cols).pivots.len()
        })
        .max()
        .unwrap_or(0)
}

struct Lift {
    pivots: Vec<usize>,
    free: Vec<usize>,
    modulus: BigInt,
    /// Entry `(i, j)` of the reduced form at pivot row `i`, free column `free[j]`.
    residues: Vec<BigInt>,
}

impl Lift {
    fn start(field: &Montgomery, rr: &Rref, cols: usize) -> Self {
        let free = free_columns(&rr.pivots, cols);
        let residues = rr
            .rows
            .iter()
            .flat_map(|row| free.iter().map(|&f| BigInt::from(field.from_mont(row[f]))))
            .collect();
        Lift {
            pivots: rr.pivots.clone(),
            free,
            modulus: BigInt::from(field.modulus()),
            residues,
        }
    }

    fn absorb(&mut self, field: &Montgomery, rr: &Rref) {
        let p = field.modulus();
        let m_inv = inverse_mod(bigint_mod_u64(&self.modulus, p), p);
        let nfree = self.free.len();
        for (i, row) in rr.rows.iter().enumerate() {
            for (j, &f) in self.free.iter().enumerate() {
                let u = &mut self.residues[i * nfree + j];
                let v = field.from_mont(row[f]);
                let u_mod = bigint_mod_u64(u, p);
                let diff = if v >= u_mod { v - u_mod } else { v + p - u_mod };
                let t = ((diff as u128 * m_inv as u128) % p as u128) as u64;
                if t != 0 {
                    *u += &self.modulus * BigInt::from(t);
                }
            }
        }
        self.modulus *= BigInt::from(p);
    }

    fn reconstruct(&self) -> Option<Vec<Vec<Scalar>>> {
        let bound = (&self.modulus >> 1u32).sqrt();
        let nfree = self.free.len();
        let cols = self.pivots.len() + nfree;
        let mut basis: Vec<Vec<Scalar>> = self
            .free
            .iter()
            .map(|&f| {
                let mut x = vec![Scalar::zero(); cols];
                x[f] = Scalar::one();
                x
            })
            .collect();
        for (i, &pc) in self.pivots.iter().enumerate() {
            for (j, x) in basis.iter_mut().enumerate() {
                let value = rational_reconstruct(&self.residues[i * nfree + j], &self.modulus, &bound)?;
                x[pc] = -value;
            }
        }
        Some(basis)
    }
}

fn free_columns(pivots: &[usize], cols: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

/// Finds `a/b` with `a = u b (mod m)`, `|a| <= bound`, `0 < b <= bound`.
pub(crate) fn rational_reconstruct(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Scalar> {
    if u.is_zero() {
        return Some(Scalar::zero());
    }
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || &t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Scalar::new(r1, t1))
}

/// Exact check of every candidate against every row, in integer arithmetic.
fn verify(rows: &[IntRow], basis: &[Vec<Scalar>]) -> bool {
    basis.iter().all(|x| {
        let lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
        rows.iter().all(|row| {
            row.iter()
                .fold(BigInt::zero(), |acc, (c, v)| acc + v * &scaled[*c])
                .is_zero()
        })
    })
}

pub(super) fn nullspace(rows: &[IntRow], cols: usize) -> Vec<Vec<Scalar>> {
    let mut lift: Option<Lift> = None;
    for p in primes_62().take(MAX_PRIMES) {
        let field = Montgomery::new(p);
        let rr = rref(&field, reduce_rows(&field, rows, cols), cols);
        if rr.pivots.len() == cols {
            return Vec::new();
        }
        match &mut lift {
            Some(l) if l.pivots == rr.pivots => l.absorb(&field, &rr),
            Some(l)
                if rr.pivots.len() < l.pivots.len()
                    || (rr.pivots.len() == l.pivots.len() && rr.pivots > l.pivots) => {}
            _ => lift = Some(Lift::start(&field, &rr, cols)),
        }
        let l = lift.as_ref().expect("lift state");
        if let Some(basis) = l.reconstruct() {
            if verify(rows, &basis) {
                return basis;
            }
        }
    }
    panic!("multimodular nullspace did not converge after {MAX_PRIMES} primes");
}
