//! Arithmetic modulo 62-bit primes (Montgomery form) and dense reduced row
//! echelon form over such fields.

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

/// Largest modulus accepted; keeps `t + m p` inside `u128` during reduction.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Montgomery arithmetic for an odd modulus below 2^62, with R = 2^64.
#[derive(Debug, Clone, Copy)]
pub struct Montgomery {
    p: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p > 2 && p < MAX_MODULUS, "unsupported modulus {p}");
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let r = (1u128 << 64) % p as u128;
        let r2 = ((r * r) % p as u128) as u64;
        Montgomery { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// `x mod p` in Montgomery form.
    pub fn reduce_bigint(&self, x: &BigInt) -> u64 {
        let residue = (x % BigInt::from(self.p)).to_i128().expect("residue fits");
        let residue = residue.rem_euclid(self.p as i128) as u64;
        self.to_mont(residue)
    }

    /// Multiplicative inverse of a nonzero element (both in Montgomery form).
    pub fn inv(&self, a: u64) -> u64 {
        let x = self.from_mont(a);
        assert!(x != 0, "inverse of zero");
        self.to_mont(inverse_mod(x, self.p))
    }
}

/// Inverse of `x` modulo `p` by the extended Euclidean algorithm.
pub fn inverse_mod(x: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (x % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{x} is not invertible modulo {p}");
    t0.rem_euclid(p as i128) as u64
}

/// Reduced row echelon form modulo a prime, with leftmost pivots.
#[derive(Debug, Clone)]
pub struct Rref {
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
    /// The nonzero rows in Montgomery form; pivot entries equal one.
    pub rows: Vec<Vec<u64>>,
}

/// Gauss-Jordan elimination of dense rows already in Montgomery form.
pub fn rref(field: &Montgomery, mut rows: Vec<Vec<u64>>, cols: usize) -> Rref {
    let one = field.to_mont(1);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = field.inv(rows[rank][col]);
        if inv != one {
            for v in rows[rank][col..].iter_mut() {
                *v = field.mul(*v, inv);
            }
        }
        let (before, rest) = rows.split_at_mut(rank);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for (v, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if pv != 0 {
                    *v = field.sub(*v, field.mul(factor, pv));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Rref { pivots, rows }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62 in decreasing order.
pub fn primes_62() -> impl Iterator<Item = u64> {
    (0..)
        .map(|i: u64| MAX_MODULUS - 1 - 2 * i)
        .filter(|&n| is_prime(n))
}

/// Signed residue helper used by reconstruction.
pub(crate) fn bigint_mod_u64(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.sign() == Sign::Minus { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits")
}
