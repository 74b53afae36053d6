//! Exact rank, nullspace and solve over the rationals.
//!
//! Small systems are reduced with fraction-free integer elimination. Larger
//! ones are reduced modulo a handful of 62-bit primes, the reduced form is
//! lifted back to the rationals by Chinese remaindering and rational
//! reconstruction, and the lifted nullspace is checked exactly against every
//! row before it is returned. A rank is never reported without that
//! certificate: `rank mod p <= rank over Q` always, and an exactly verified
//! nullspace of size `cols - rank mod p` pins the rational rank from above.

mod fraction_free;
pub mod modular;
mod multimodular;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Matrices with at least this fraction of nonzero entries are stored densely.
pub const DENSE_FILL_NUMERATOR: usize = 1;
pub const DENSE_FILL_DENOMINATOR: usize = 4;

/// Above this many stored entries (`rows * cols`) elimination goes modular.
pub const MULTIMODULAR_THRESHOLD: usize = 6_000;

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Dense(Vec<Scalar>),
    Sparse(Vec<Vec<(usize, Scalar)>>),
}

/// A rows x cols matrix of exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

/// Which elimination route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Pick by size.
    Auto,
    /// Fraction-free elimination over the integers.
    FractionFree,
    /// Modular reduction, rational reconstruction and exact verification.
    Multimodular,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_sparse_rows(cols, vec![Vec::new(); rows])
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i, Scalar::one())]).collect();
        Self::from_sparse_rows(n, rows)
    }

    /// Builds from dense rows; every row must have the same length.
    pub fn from_dense_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let sparse = rows
            .into_iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "ragged matrix row");
                row.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Self::from_sparse_rows(cols, sparse)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_dense_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_integer(v.into())).collect())
                .collect(),
        )
    }

    /// Builds from `(column, value)` lists. Entries are sorted, duplicate
    /// columns summed and zeros dropped. Storage is chosen by fill ratio.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, Scalar)>>) -> Self {
        let mut cleaned: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(rows.len());
        let mut nnz = 0;
        for mut row in rows {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                assert!(c < cols, "column {c} out of range for {cols} columns");
                match merged.last_mut() {
                    Some((last, acc)) if *last == c => *acc += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            nnz += merged.len();
            cleaned.push(merged);
        }
        let rows = cleaned.len();
        let total = rows * cols;
        let dense = total > 0 && nnz * DENSE_FILL_DENOMINATOR >= total * DENSE_FILL_NUMERATOR;
        let storage = if dense {
            let mut data = vec![Scalar::zero(); total];
            for (i, row) in cleaned.into_iter().enumerate() {
                for (c, v) in row {
                    data[i * cols + c] = v;
                }
            }
            Storage::Dense(data)
        } else {
            Storage::Sparse(cleaned)
        };
        RationalMatrix { rows, cols, storage }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Storage::Sparse(s) => s.iter().map(Vec::len).sum(),
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        assert!(row < self.rows && col < self.cols);
        match &self.storage {
            Storage::Dense(d) => d[row * self.cols + col].clone(),
            Storage::Sparse(s) => s[row]
                .binary_search_by_key(&col, |(c, _)| *c)
                .map(|i| s[row][i].1.clone())
                .unwrap_or_else(|_| Scalar::zero()),
        }
    }

    /// Nonzero entries of one row in column order.
    pub fn row_entries(&self, row: usize) -> Vec<(usize, &Scalar)> {
        match &self.storage {
            Storage::Dense(d) => d[row * self.cols..(row + 1) * self.cols]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            Storage::Sparse(s) => s[row].iter().map(|(c, v)| (*c, v)).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row_entries(i)
                    .into_iter()
                    .fold(Scalar::zero(), |acc, (c, v)| acc + v * &x[c])
            })
            .collect()
    }

    /// Exact check that `self * x == 0`.
    pub fn annihilates(&self, x: &[Scalar]) -> bool {
        self.mul_vec(x).iter().all(Zero::is_zero)
    }

    /// Row-stacks `self` over `other`.
    pub fn vstack(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.cols);
        let rows = (0..self.rows)
            .map(|i| self.owned_row(i))
            .chain((0..other.rows).map(|i| other.owned_row(i)))
            .collect();
        Self::from_sparse_rows(self.cols, rows)
    }

    /// The matrix with rows and columns reordered: new row `i` is old row
    /// `row_order[i]`, old column `j` moves to `col_map[j]`.
    pub fn permuted(&self, row_order: &[usize], col_map: &[usize]) -> RationalMatrix {
        assert_eq!(row_order.len(), self.rows);
        assert_eq!(col_map.len(), self.cols);
        let rows = row_order
            .iter()
            .map(|&i| {
                self.row_entries(i)
                    .into_iter()
                    .map(|(c, v)| (col_map[c], v.clone()))
                    .collect()
            })
            .collect();
        Self::from_sparse_rows(self.cols, rows)
    }

    /// Multiplies row `row` by `factor`.
    pub fn scale_row(&self, row: usize, factor: &Scalar) -> RationalMatrix {
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.owned_row(i);
                if i == row {
                    r.iter_mut().for_each(|(_, v)| *v *= factor);
                }
                r
            })
            .collect();
        Self::from_sparse_rows(self.cols, rows)
    }

    fn owned_row(&self, row: usize) -> Vec<(usize, Scalar)> {
        self.row_entries(row)
            .into_iter()
            .map(|(c, v)| (c, v.clone()))
            .collect()
    }

    /// Each row scaled to a primitive integer row (same row space).
    pub(crate) fn integer_rows(&self) -> Vec<IntRow> {
        (0..self.rows)
            .map(|i| {
                let entries = self.row_entries(i);
                let lcm = entries
                    .iter()
                    .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                let row: IntRow = entries
                    .into_iter()
                    .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
                    .collect();
                make_primitive(row)
            })
            .filter(|row| !row.is_empty())
            .collect()
    }
}

/// Sparse integer row, sorted by column, no explicit zeros.
pub(crate) type IntRow = Vec<(usize, BigInt)>;

/// Divides out the content of a row.
pub(crate) fn make_primitive(mut row: IntRow) -> IntRow {
    let mut content = BigInt::zero();
    for (_, v) in &row {
        content = content.gcd(v);
        if content.is_one() {
            return row;
        }
    }
    if content > BigInt::one() {
        for (_, v) in row.iter_mut() {
            *v /= &content;
        }
    }
    row
}

fn choose(strategy: Strategy, m: &RationalMatrix) -> Strategy {
    match strategy {
        Strategy::Auto if m.rows * m.cols > MULTIMODULAR_THRESHOLD => Strategy::Multimodular,
        Strategy::Auto => Strategy::FractionFree,
        other => other,
    }
}

/// Exact rank over the rationals.
pub fn rank(m: &RationalMatrix) -> usize {
    rank_with(m, Strategy::Auto)
}

pub fn rank_with(m: &RationalMatrix, strategy: Strategy) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    match choose(strategy, m) {
        Strategy::FractionFree => fraction_free::rank(m.integer_rows(), m.cols),
        _ => {
            let rows = m.integer_rows();
            let lower = multimodular::rank_lower_bound(&rows, m.cols);
            if lower == m.cols || lower == rows.len() {
                lower
            } else {
                m.cols - multimodular::nullspace(&rows, m.cols).len()
            }
        }
    }
}

/// Basis of the right nullspace, each vector checked exactly.
///
/// Vectors are normalized to have a 1 in their own free column and 0 in
/// every other free column, and are listed in increasing free-column order.
pub fn nullspace(m: &RationalMatrix) -> Vec<Vec<Scalar>> {
    nullspace_with(m, Strategy::Auto)
}

pub fn nullspace_with(m: &RationalMatrix, strategy: Strategy) -> Vec<Vec<Scalar>> {
    if m.cols == 0 {
        return Vec::new();
    }
    let rows = m.integer_rows();
    let basis = match choose(strategy, m) {
        Strategy::FractionFree => fraction_free::nullspace(rows, m.cols),
        _ => multimodular::nullspace(&rows, m.cols),
    };
    debug_assert!(basis.iter().all(|x| m.annihilates(x)));
    basis
}

/// The unique solution of `a x = b`, or `None` when the system is
/// inconsistent or underdetermined.
pub fn solve(a: &RationalMatrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let augmented: Vec<Vec<(usize, Scalar)>> = (0..a.rows)
        .map(|i| {
            let mut row = a.owned_row(i);
            row.push((n, -b[i].clone()));
            row
        })
        .collect();
    let kernel = nullspace(&RationalMatrix::from_sparse_rows(n + 1, augmented));
    match kernel.as_slice() {
        [only] if !only[n].is_zero() => {
            let scale = &only[n];
            Some(only[..n].iter().map(|v| v / scale).collect())
        }
        _ => None,
    }
}

/// Rank of `m` reduced modulo `p`, or `None` if `p` divides a denominator.
/// Never exceeds the rational rank.
pub fn rank_mod_prime(m: &RationalMatrix, p: u64) -> Option<usize> {
    let field = modular::Montgomery::new(p);
    let mut rows = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut row = vec![0u64; m.cols];
        for (c, v) in m.row_entries(i) {
            let den = field.reduce_bigint(v.denom());
            if den == 0 {
                return None;
            }
            let num = field.reduce_bigint(v.numer());
            row[c] = field.mul(num, field.inv(den));
        }
        rows.push(row);
    }
    Some(modular::rref(&field, rows, m.cols).pivots.len())
}

/// True when `rows` (as vectors) are linearly independent.
pub fn independent(vectors: &[Vec<Scalar>]) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let cols = vectors[0].len();
    rank(&RationalMatrix::from_dense_rows(cols, vectors.to_vec())) == vectors.len()
}

/// Largest absolute numerator in the matrix (diagnostics).
pub fn max_entry_bits(m: &RationalMatrix) -> u64 {
    (0..m.rows)
        .flat_map(|i| m.row_entries(i).into_iter().map(|(_, v)| v.numer().abs().bits()))
        .max()
        .unwrap_or(0)
}
