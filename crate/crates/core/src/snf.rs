//! Smith normal form over the integers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SnfResult {
    /// Nonzero invariant factors, each dividing the next.
    pub d: Vec<BigInt>,
    pub u: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
    /// `u * m * v`, diagonal.
    pub diagonal: Matrix<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.d.iter().filter(|x| !x.is_one()).cloned().collect()
    }
}

struct Work {
    a: Matrix<BigInt>,
    u: Matrix<BigInt>,
    v: Matrix<BigInt>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let v = m.get(i, c) + q * m.get(j, c);
                m.set(i, c, v);
            }
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let v = m.get(r, i) + q * m.get(r, j);
                m.set(r, i, v);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let v = -m.get(i, c);
                m.set(i, c, v);
            }
        }
    }

    /// Position of the smallest nonzero entry in the trailing block.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j).abs();
                if !x.is_zero() && best.as_ref().is_none_or(|b| x < b.2) {
                    best = Some((i, j, x));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` outside the pivot. Returns false if a smaller
    /// remainder was produced and the pivot must be re-chosen.
    fn clear_cross(&mut self, t: usize) -> bool {
        let pivot = self.a.get(t, t).clone();
        let mut clean = true;
        for i in t + 1..self.a.rows() {
            let x = self.a.get(i, t).clone();
            if !x.is_zero() {
                let q = x.div_floor(&pivot);
                self.add_row(i, t, &-q);
                if !self.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..self.a.cols() {
            let x = self.a.get(t, j).clone();
            if !x.is_zero() {
                let q = x.div_floor(&pivot);
                self.add_col(j, t, &-q);
                if !self.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
        }
        clean
    }
}

/// Returns unimodular `u`, `v` with `u * m * v` diagonal and `d_i | d_{i+1}`.
pub fn smith_normal_form(m: &Matrix<BigInt>) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work { a: m.clone(), u: Matrix::identity(rows), v: Matrix::identity(cols) };
    let mut d = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((i, j)) = w.min_entry(t) else { break };
        w.swap_rows(t, i);
        w.swap_cols(t, j);
        loop {
            if !w.clear_cross(t) {
                let (i, j) = w.min_entry_cross(t);
                w.swap_rows(t, i);
                w.swap_cols(t, j);
                continue;
            }
            // Divisibility: fold in any row whose entries the pivot does not divide.
            let pivot = w.a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        d.push(w.a.get(t, t).clone());
        t += 1;
    }
    SnfResult { d, u: w.u, v: w.v, diagonal: w.a }
}

impl Work {
    /// Smallest nonzero entry in row or column `t`, including the pivot.
    fn min_entry_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a.get(t, t).abs());
        let mut consider = |i: usize, j: usize| {
            let x = self.a.get(i, j).abs();
            if !x.is_zero() && (best.2.is_zero() || x < best.2) {
                best = (i, j, x);
            }
        };
        for i in t + 1..self.a.rows() {
            consider(i, t);
        }
        for j in t + 1..self.a.cols() {
            consider(t, j);
        }
        (best.0, best.1)
    }
}

/// Convenience wrapper for small integer inputs.
pub fn smith_normal_form_i64(rows: &[Vec<i64>], cols: usize) -> SnfResult {
    let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(), cols);
    smith_normal_form(&m)
}
