//! Dense matrices and the elimination kernels behind rank, solve and nullspace.
//!
//! Exact work runs fraction-free (Bareiss) over big integers; rational inputs are
//! scaled row by row to integers first.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Integer, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    /// Builds from row vectors; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Appends the columns of `other` on the right.
    pub fn hstack(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        Matrix::from_rows(rows, self.cols + other.cols)
    }
}

impl<S: crate::scalar::Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, S::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).plus(&a.mul(other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|i| crate::coeff::dot(self.row(i), x)).collect()
    }

    pub fn to_integer_from_i64(m: &Matrix<i64>) -> Self {
        m.map(|&v| S::from_i64(v))
    }
}

/// In-place fraction-free row echelon form. Returns pivot positions `(row, col)`.
pub fn bareiss(m: &mut Matrix<BigInt>) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        let pivot = m.get(r, c).clone();
        for i in r + 1..m.rows {
            let lead = m.get(i, c).clone();
            for j in c + 1..m.cols {
                let v = (&pivot * m.get(i, j) - &lead * m.get(r, j)) / &prev;
                m.set(i, j, v);
            }
            m.set(i, c, BigInt::zero());
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

/// Scales each row by the lcm of its denominators.
pub fn clear_denominators(a: &Matrix<Rational>) -> Matrix<BigInt> {
    let rows = (0..a.rows)
        .map(|i| {
            let row = a.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    Matrix::from_rows(rows, a.cols)
}

pub fn rank_integer(a: &Matrix<BigInt>) -> usize {
    let mut m = a.clone();
    bareiss(&mut m).len()
}

pub fn rank_rational(a: &Matrix<Rational>) -> usize {
    let mut m = clear_denominators(a);
    bareiss(&mut m).len()
}

/// Back-substitution on an echelon form; `free` supplies the value of each
/// non-pivot unknown.
fn back_substitute(
    m: &Matrix<BigInt>,
    pivots: &[(usize, usize)],
    ncols: usize,
    rhs: impl Fn(usize) -> Rational,
    free: impl Fn(usize) -> Rational,
) -> Vec<Rational> {
    let mut x: Vec<Option<Rational>> = vec![None; ncols];
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    for (j, slot) in x.iter_mut().enumerate() {
        if !pivot_cols.contains(&j) {
            *slot = Some(free(j));
        }
    }
    for &(r, c) in pivots.iter().rev() {
        let mut acc = rhs(r);
        for (j, xj) in x.iter().enumerate().skip(c + 1) {
            let a = m.get(r, j);
            if !a.is_zero() {
                let xj = xj.as_ref().expect("later unknowns are resolved first");
                acc -= Rational::from_integer(a.clone()) * xj;
            }
        }
        x[c] = Some(acc / Rational::from_integer(m.get(r, c).clone()));
    }
    x.into_iter().map(|v| v.unwrap_or_else(Rational::zero)).collect()
}

/// One exact solution of `a x = b` (free unknowns set to zero), or `None`.
pub fn solve_rational(a: &Matrix<Rational>, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let rows = (0..a.rows)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut m = clear_denominators(&Matrix::from_rows(rows, n + 1));
    let pivots = bareiss(&mut m);
    if pivots.iter().any(|&(_, c)| c == n) {
        return None;
    }
    let rhs = |r: usize| Rational::from_integer(m.get(r, n).clone());
    Some(back_substitute(&m, &pivots, n, rhs, |_| Rational::zero()))
}

/// Integral kernel basis with unit content and positive leading entry,
/// one vector per free column in increasing column order.
pub fn nullspace_integer(a: &Matrix<BigInt>) -> Vec<Vec<BigInt>> {
    let mut m = a.clone();
    let pivots = bareiss(&mut m);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    (0..a.cols)
        .filter(|j| !pivot_cols.contains(j))
        .map(|f| {
            let x = back_substitute(
                &m,
                &pivots,
                a.cols,
                |_| Rational::zero(),
                |j| if j == f { Rational::one() } else { Rational::zero() },
            );
            normalize_integral(&x)
        })
        .collect()
}

pub fn nullspace_rational(a: &Matrix<Rational>) -> Vec<Vec<BigInt>> {
    nullspace_integer(&clear_denominators(a))
}

/// Clears denominators, divides by the content and makes the first nonzero entry positive.
pub fn normalize_integral(x: &[Rational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() {
        for v in ints.iter_mut() {
            *v = &*v / &g;
        }
    }
    if ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
        for v in ints.iter_mut() {
            *v = -&*v;
        }
    }
    ints
}

/// Reduced row echelon form with partial pivoting; entries below `tol` count as zero.
fn rref_f64(m: &mut Matrix<f64>, tol: f64) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let (p, best) = (r..m.rows)
            .map(|i| (i, m.get(i, c).abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            for i in r..m.rows {
                m.set(i, c, 0.0);
            }
            continue;
        }
        m.swap_rows(p, r);
        let pivot = *m.get(r, c);
        for j in c..m.cols {
            let v = m.get(r, j) / pivot;
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let f = *m.get(i, c);
            if f != 0.0 {
                for j in c..m.cols {
                    let v = m.get(i, j) - f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

pub fn rank_f64(a: &Matrix<f64>, tol: f64) -> usize {
    let mut m = a.clone();
    rref_f64(&mut m, tol).len()
}

pub fn solve_f64(a: &Matrix<f64>, b: &[f64], tol: f64) -> Option<Vec<f64>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let rows = (0..a.rows)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i]);
            r
        })
        .collect();
    let mut m = Matrix::from_rows(rows, n + 1);
    let pivots = rref_f64(&mut m, tol);
    if pivots.iter().any(|&(_, c)| c == n) {
        return None;
    }
    let mut x = vec![0.0; n];
    for &(r, c) in &pivots {
        x[c] = *m.get(r, n);
    }
    Some(x)
}

/// Kernel basis scaled to unit max-norm with positive leading entry.
pub fn nullspace_f64(a: &Matrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let mut m = a.clone();
    let pivots = rref_f64(&mut m, tol);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    (0..a.cols)
        .filter(|j| !pivot_cols.contains(j))
        .map(|f| {
            let mut x = vec![0.0; a.cols];
            x[f] = 1.0;
            for &(r, c) in &pivots {
                x[c] = -m.get(r, f);
            }
            let scale = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            let lead = x.iter().find(|v| v.abs() > tol).copied().unwrap_or(1.0);
            let s = if lead < 0.0 { -scale } else { scale };
            x.iter().map(|v| v / s).collect()
        })
        .collect()
}

/// Exact determinant of a square integer matrix.
pub fn determinant(a: &Matrix<Integer>) -> Integer {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m.get(k, k) * m.get(i, j) - m.get(i, k) * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
        }
        prev = m.get(k, k).clone();
    }
    sign * prev
}
