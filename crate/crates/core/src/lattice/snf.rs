use std::fmt;

use super::matrix::Matrix;
use crate::scalar::Int;

/// Result of [`smith_normal_form`]: `u * m * v == s`.
#[derive(Clone, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Int> fmt::Debug for SmithForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmithForm")
            .field("s", &self.s)
            .field("u", &self.u)
            .field("v", &self.v)
            .finish()
    }
}

impl<T: Int> SmithForm<T> {
    /// The diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .take_while(|d| !d.is_zero())
            .count()
    }
}

fn row_sub<T: Int>(m: &mut Matrix<T>, target: usize, src: usize, q: &T) {
    for j in 0..m.cols() {
        let v = m[(target, j)].clone() - q.clone() * m[(src, j)].clone();
        m[(target, j)] = v;
    }
}

fn col_sub<T: Int>(m: &mut Matrix<T>, target: usize, src: usize, q: &T) {
    for i in 0..m.rows() {
        let v = m[(i, target)].clone() - q.clone() * m[(i, src)].clone();
        m[(i, target)] = v;
    }
}

/// Smith normal form of an arbitrary integer matrix.
///
/// Returns unimodular `u`, `v` and a diagonal `s` with nonnegative entries
/// forming a divisibility chain, such that `u * m * v == s`.
pub fn smith_normal_form<T: Int>(m: &Matrix<T>) -> SmithForm<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { s: a, u, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[(i, t)].div_floor(&pivot);
                if !q.is_zero() {
                    row_sub(&mut a, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_floor(&pivot);
                if !q.is_zero() {
                    col_sub(&mut a, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -T::one();
                    row_sub(&mut a, t, i, &minus_one);
                    row_sub(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for j in 0..cols {
                a[(t, j)] = -a[(t, j)].clone();
            }
            for j in 0..rows {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
    }
    SmithForm { s: a, u, v }
}
