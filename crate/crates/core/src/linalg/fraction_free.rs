//! Fraction-free Gauss-Jordan elimination on sparse integer rows.
//!
//! Row updates are `a_p * row - a_r * pivot_row` followed by removal of the
//! row content, so every intermediate stays integral and primitive. Pivots
//! go to the column with the fewest nonzeros among the remaining rows, then
//! to the entry of smallest magnitude in that column.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{make_primitive, IntRow};
use crate::scalar::Scalar;

struct Pivot {
    col: usize,
    row: IntRow,
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// `a * row - b * pivot`, made primitive.
fn combine(row: &IntRow, a: &BigInt, pivot: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let next = match (row.get(i), pivot.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) => match ci.cmp(cj) {
                Ordering::Less => {
                    i += 1;
                    (*ci, a * vi)
                }
                Ordering::Greater => {
                    j += 1;
                    (*cj, -(b * vj))
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (*ci, a * vi - b * vj)
                }
            },
            (Some((ci, vi)), None) => {
                i += 1;
                (*ci, a * vi)
            }
            (None, Some((cj, vj))) => {
                j += 1;
                (*cj, -(b * vj))
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    make_primitive(out)
}

fn select_pivot(active: &[IntRow], cols: usize) -> Option<(usize, usize)> {
    let mut counts = vec![0usize; cols];
    for row in active {
        for (c, _) in row {
            counts[*c] += 1;
        }
    }
    let col = (0..cols)
        .filter(|&c| counts[c] > 0)
        .min_by_key(|&c| (counts[c], c))?;
    let row = (0..active.len())
        .filter_map(|i| entry(&active[i], col).map(|v| (i, v)))
        .min_by(|(i, a), (j, b)| {
            a.abs()
                .cmp(&b.abs())
                .then(active[*i].len().cmp(&active[*j].len()))
                .then(i.cmp(j))
        })
        .map(|(i, _)| i)?;
    Some((row, col))
}

fn eliminate(mut active: Vec<IntRow>, cols: usize, full: bool) -> Vec<Pivot> {
    active.retain(|r| !r.is_empty());
    let mut pivots: Vec<Pivot> = Vec::new();
    while let Some((pr, col)) = select_pivot(&active, cols) {
        let pivot_row = active.swap_remove(pr);
        let a = entry(&pivot_row, col).expect("pivot entry").clone();
        let reduce = |row: &mut IntRow| {
            if let Some(b) = entry(row, col).cloned() {
                *row = combine(row, &a, &pivot_row, &b);
            }
        };
        active.iter_mut().for_each(reduce);
        if full {
            pivots.iter_mut().for_each(|p| reduce(&mut p.row));
        }
        active.retain(|r| !r.is_empty());
        pivots.push(Pivot { col, row: pivot_row });
    }
    pivots
}

pub(super) fn rank(rows: Vec<IntRow>, cols: usize) -> usize {
    eliminate(rows, cols, false).len()
}

pub(super) fn nullspace(rows: Vec<IntRow>, cols: usize) -> Vec<Vec<Scalar>> {
    let pivots = eliminate(rows, cols, true);
    let mut is_pivot = vec![false; cols];
    for p in &pivots {
        is_pivot[p.col] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Scalar::zero(); cols];
            x[f] = Scalar::from_integer(1.into());
            for p in &pivots {
                if let Some(v) = entry(&p.row, f) {
                    let lead = entry(&p.row, p.col).expect("pivot entry");
                    x[p.col] = -Scalar::new(v.clone(), lead.clone());
                }
            }
            x
        })
        .collect()
}
