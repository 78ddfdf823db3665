//! Dense linear algebra over a prime field, plus exact integer determinants.
//!
//! Everything here is deliberately simple Gaussian elimination; matrices in
//! this crate stay small enough (a few thousand rows at worst, from
//! interpolation through sampled points) that cubic elimination is fine.

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::PrimeField;
use super::unifactor::UniPoly;

/// Dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatFp {
    pub field: PrimeField,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<u64>,
}

impl MatFp {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatFp { field, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn from_rows(field: PrimeField, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            a.extend(row.into_iter().map(|x| x % field.characteristic()));
        }
        MatFp { field, rows: r, cols: c, a }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = MatFp::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn mul(&self, other: &MatFp) -> MatFp {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = MatFp::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self[(i, k)];
                if v == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.add(out[(i, j)], f.mul(v, other[(k, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self[(i, j)], v[j]));
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.a.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self[(r, c)]);
            for j in c..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i != r && self[(i, c)] != 0 {
                    let factor = self[(i, c)];
                    for j in c..self.cols {
                        let v = f.mul(factor, self[(r, j)]);
                        self[(i, j)] = f.sub(self[(i, j)], v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<MatFp> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = MatFp::zero(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)];
            }
            aug[(r, n + r)] = 1;
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = MatFp::zero(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = aug[(r, n + c)];
            }
        }
        Some(out)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[(r, free)]);
            }
            basis.push(v);
        }
        basis
    }

    /// Characteristic polynomial `det(tI - A)`, monic, via similarity
    /// reduction to upper Hessenberg form and the leading-minor recurrence.
    pub fn charpoly(&self) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let pivot = (j + 1..n).find(|&i| h[(i, j)] != 0);
            let Some(pr) = pivot else { continue };
            if pr != j + 1 {
                for c in 0..n {
                    let (x, y) = (h[(pr, c)], h[(j + 1, c)]);
                    h[(pr, c)] = y;
                    h[(j + 1, c)] = x;
                }
                for r in 0..n {
                    let (x, y) = (h[(r, pr)], h[(r, j + 1)]);
                    h[(r, pr)] = y;
                    h[(r, j + 1)] = x;
                }
            }
            let inv = f.inv(h[(j + 1, j)]);
            for i in j + 2..n {
                let factor = f.mul(h[(i, j)], inv);
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = f.mul(factor, h[(j + 1, c)]);
                    h[(i, c)] = f.sub(h[(i, c)], v);
                }
                for r in 0..n {
                    let v = f.mul(factor, h[(r, i)]);
                    h[(r, j + 1)] = f.add(h[(r, j + 1)], v);
                }
            }
        }
        // p_0 = 1; p_m = (t - h[m-1,m-1]) p_{m-1}
        //            - sum_{i<m} h[i-1,m-1] (prod of subdiagonals) p_{i-1}
        let mut ps: Vec<UniPoly> = vec![UniPoly::constant(f, 1)];
        for m in 1..=n {
            let t_shift = UniPoly::from_coeffs(f, vec![f.neg(h[(m - 1, m - 1)]), 1]);
            let mut p = t_shift.mul(&ps[m - 1]);
            let mut beta = 1u64; // product of subdiagonal entries below row i
            for i in (1..m).rev() {
                beta = f.mul(beta, h[(i, i - 1)]);
                if beta == 0 {
                    break;
                }
                let coeff = f.mul(h[(i - 1, m - 1)], beta);
                p = p.sub(&ps[i - 1].scale(coeff));
            }
            ps.push(p);
        }
        ps.pop().unwrap()
    }

    /// One solution of `A x = b`, if the system is consistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let mut m = MatFp::zero(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            m[(i, self.cols)] = b[i] % f.characteristic();
        }
        let pivots = m.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // a pivot in the augmented column: inconsistent
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m[(r, self.cols)];
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for MatFp {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatFp {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.a[i * self.cols + j]
    }
}

/// Exact determinant of an integer matrix by fraction-free (Bareiss)
/// elimination over arbitrary-precision integers.
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by Sylvester's identity
            }
        }
        for i in k + 1..n {
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Convenience wrapper for small signed entries.
pub fn int_det_i64(m: &[Vec<i64>]) -> BigInt {
    let rows: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    int_det(&rows)
}
