//! Smith normal form of integer matrices with the unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix, inner: usize) -> Matrix {
    let rows = a.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = zeros(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// `U·A·V = D` with `D` diagonal, nonnegative and `d_1 | d_2 | …`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub v: Matrix,
    pub diagonal: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Matrix,
    u: Matrix,
    v: Matrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// `row_i += q · row_j`.
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x += q * y;
            }
        }
    }

    /// `col_i += q · col_j`.
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let y = r[j].clone();
                r[i] += q * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

pub fn smith_normal_form(a: &Matrix, cols: usize) -> Snf {
    let rows = a.len();
    let mut w = Work { a: a.clone(), u: identity(rows), v: identity(cols) };
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !w.a[i][j].is_zero() && best.map_or(true, |(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut again = false;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.add_row(i, t, &-q);
                if !w.a[i][t].is_zero() {
                    w.swap_rows(t, i);
                    again = true;
                }
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.add_col(j, t, &-q);
                if !w.a[t][j].is_zero() {
                    w.swap_cols(t, j);
                    again = true;
                }
            }
            if again {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&w.a[t][t])));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| w.a[i][i].clone()).collect();
    Snf { u: w.u, v: w.v, diagonal }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn check(a: &Matrix, cols: usize) -> Snf {
        let s = smith_normal_form(a, cols);
        let uav = mat_mul(&mat_mul(&s.u, a, a.len()), &s.v, cols);
        for (i, row) in uav.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, want);
            }
        }
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn small_cases() {
        assert_eq!(check(&m(&[&[2]]), 1).diagonal, vec![BigInt::from(2)]);
        assert_eq!(check(&identity(3), 3).diagonal, vec![BigInt::one(); 3]);
        assert_eq!(check(&m(&[&[2, 0], &[0, 3]]), 2).diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(check(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3).diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        check(&m(&[&[0, 0], &[0, 0], &[1, 1]]), 2);
    }
}
