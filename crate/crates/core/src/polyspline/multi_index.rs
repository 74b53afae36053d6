use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial.
///
/// Ordered by total degree, then lexicographically with larger leading
/// exponents first: `1 < x < y < x^2 < xy < y^2 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `alpha!` = product of factorials.
    pub fn factorial(&self) -> u128 {
        self.0
            .iter()
            .map(|&e| (1..=e as u128).product::<u128>())
            .product()
    }

    /// Position among all monomials in `nvars` variables in graded order.
    pub fn graded_index(&self) -> usize {
        let n = self.nvars();
        let k = self.degree();
        let below = if k == 0 { 0 } else { binomial(k - 1 + n, n) };
        below + self.homogeneous_index()
    }

    /// Position among the monomials of the same total degree.
    pub fn homogeneous_index(&self) -> usize {
        let mut rank = 0;
        let mut remaining = self.degree();
        let n = self.nvars();
        for (i, &e) in self.0.iter().enumerate() {
            let parts = n - i - 1;
            if parts == 0 {
                break;
            }
            let e = e as usize;
            for t in e + 1..=remaining {
                rank += compositions(remaining - t, parts);
            }
            remaining -= e;
        }
        rank
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `C(n, k)` for nonnegative arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Number of ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(total: usize, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(total == 0);
    }
    binomial(total + parts - 1, parts - 1)
}

/// Number of monomials of degree exactly `k` in `n` variables.
pub fn homogeneous_count(n: usize, k: usize) -> usize {
    compositions(k, n)
}

/// Monomials of degree exactly `k` in `n` variables, in order.
pub fn homogeneous(n: usize, k: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(k as u32);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e as u32);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(homogeneous_count(n, k));
    if n == 0 {
        if k == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Monomials of degree at most `d` in `n` variables, in order.
pub fn monomials(n: usize, d: usize) -> Vec<MultiIndex> {
    (0..=d).flat_map(|k| homogeneous(n, k)).collect()
}
