//! Exact linear algebra over the integers and rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Reduced echelon form of an integer matrix, kept fraction free.
///
/// Every pivot row has zeros in all other pivot columns; rows are
/// divided by their content after each elimination step.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

fn normalize_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// Pivot choice is deterministic: the first column with a nonzero entry,
/// and within it the first available row.
pub fn echelon(matrix: &[Vec<BigInt>], ncols: usize) -> Echelon {
    let mut rows: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, i);
        normalize_row(&mut rows[r]);
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = rows[r].clone();
        let p = pivot_row[col].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = &*x * &p - &a * y;
            }
            normalize_row(row);
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots, ncols }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis indexed by free columns in increasing order; each
    /// vector has a 1 in its free column and 0 in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.ncols];
            v[free] = Rational::one();
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    v[pc] = -Rational::new(row[free].clone(), row[pc].clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}

pub fn to_big(matrix: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn rank_i64(matrix: &[Vec<i64>]) -> usize {
    let ncols = matrix.first().map_or(0, Vec::len);
    echelon(&to_big(matrix), ncols).rank()
}

pub fn kernel_i64(matrix: &[Vec<i64>], ncols: usize) -> Vec<Vec<Rational>> {
    echelon(&to_big(matrix), ncols).kernel()
}

/// Rank of a rational matrix, after clearing denominators row by row.
pub fn rank_rational(matrix: &[Vec<Rational>]) -> usize {
    let ncols = matrix.first().map_or(0, Vec::len);
    let rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();
    echelon(&rows, ncols).rank()
}

pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn kernel_of_single_row() {
        let k = kernel_i64(&[vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![q(-1, 1), q(1, 1), q(0, 1)]);
        assert_eq!(k[1], vec![q(-1, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn empty_matrix_has_full_kernel() {
        assert_eq!(kernel_i64(&[], 4).len(), 4);
    }

    #[test]
    fn fractional_kernel() {
        let k = kernel_i64(&[vec![2, 3]], 2);
        assert_eq!(k, vec![vec![q(-3, 2), q(1, 1)]]);
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank_i64(&[vec![1, 2], vec![2, 4], vec![0, 1]]), 2);
    }
}
