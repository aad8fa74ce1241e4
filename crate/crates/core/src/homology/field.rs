//! Linear algebra over ℚ and 𝔽_p, with elements stored as reduced rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Fe = BigRational;
pub type Vector = Vec<Fe>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("F"))
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}")))?;
        let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad prime in {s:?}")))?;
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::NonField);
        }
        Ok(Field::Prime(p))
    }

    pub fn reduce(&self, x: &Fe) -> Fe {
        match self {
            Field::Rational => x.clone(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    panic!("denominator divisible by the characteristic");
                }
                let inv = den.modpow(&(&p - 2u32), &p);
                Fe::from_integer((x.numer() * inv).mod_floor(&p))
            }
        }
    }

    pub fn from_int(&self, k: &BigInt) -> Fe {
        self.reduce(&Fe::from_integer(k.clone()))
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.reduce(&(a * b))
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.reduce(&(a + b))
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        self.reduce(&(a - b))
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        self.reduce(&-a)
    }

    pub fn inv(&self, a: &Fe) -> Fe {
        assert!(!a.is_zero());
        self.reduce(&a.recip())
    }

    pub fn render(&self, a: &Fe) -> String {
        let a = self.reduce(a);
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    pub fn vector(&self, v: &[BigInt]) -> Vector {
        v.iter().map(|k| self.from_int(k)).collect()
    }

    /// `m·v` for a matrix stored as rows.
    pub fn apply(&self, m: &[Vector], v: &[Fe]) -> Vector {
        m.iter()
            .map(|row| self.reduce(&row.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum::<Fe>()))
            .collect()
    }

    pub fn mat_mul(&self, a: &[Vector], b: &[Vector], cols: usize) -> Vec<Vector> {
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| self.reduce(&row.iter().zip(b).filter(|(x, _)| !x.is_zero()).map(|(x, r)| x * &r[j]).sum::<Fe>()))
                    .collect()
            })
            .collect()
    }

    /// Row-echelon basis of the span of `vecs`, each of length `len`.
    pub fn echelon(&self, vecs: &[Vector], len: usize) -> Echelon {
        let mut e = Echelon { rows: Vec::new(), pivots: Vec::new(), len };
        for v in vecs {
            e.insert(self, v);
        }
        e
    }

    pub fn rank(&self, vecs: &[Vector], len: usize) -> usize {
        self.echelon(vecs, len).rows.len()
    }

    /// Basis of `{v : m v = 0}` for `m` with `cols` columns.
    pub fn kernel(&self, m: &[Vector], cols: usize) -> Vec<Vector> {
        let mut a: Vec<Vector> = m.iter().map(|r| r.iter().map(|x| self.reduce(x)).collect()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..cols {
            let Some(p) = (row..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(row, p);
            let inv = self.inv(&a[row][c]);
            for x in a[row].iter_mut() {
                *x = self.mul(x, &inv);
            }
            for i in 0..a.len() {
                if i != row && !a[i][c].is_zero() {
                    let k = a[i][c].clone();
                    for j in 0..cols {
                        let t = self.mul(&k, &a[row][j]);
                        a[i][j] = self.sub(&a[i][j], &t);
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Fe::zero(); cols];
                v[f] = Fe::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.neg(&a[r][f]);
                }
                v
            })
            .collect()
    }

    /// Coefficients `c` with `Σ c_j cols_j = target`, if any.
    pub fn solve(&self, cols: &[Vector], target: &[Fe]) -> Option<Vector> {
        let n = cols.len();
        let len = target.len();
        // augmented system, one row per coordinate
        let mut a: Vec<Vector> = (0..len)
            .map(|i| {
                let mut r: Vector = cols.iter().map(|c| self.reduce(&c[i])).collect();
                r.push(self.reduce(&target[i]));
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..n {
            let Some(p) = (row..len).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(row, p);
            let inv = self.inv(&a[row][c]);
            for x in a[row].iter_mut() {
                *x = self.mul(x, &inv);
            }
            for i in 0..len {
                if i != row && !a[i][c].is_zero() {
                    let k = a[i][c].clone();
                    for j in 0..=n {
                        let t = self.mul(&k, &a[row][j]);
                        a[i][j] = self.sub(&a[i][j], &t);
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        if (row..len).any(|i| !a[i][n].is_zero()) {
            return None;
        }
        let mut x = vec![Fe::zero(); n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = a[r][n].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self, m: &[Vector]) -> Option<Vec<Vector>> {
        let n = m.len();
        let cols: Vec<Vector> = (0..n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
        let mut inv_cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Fe::zero(); n];
            e[j] = Fe::one();
            inv_cols.push(self.solve(&cols, &e)?);
        }
        if self.rank(&cols, n) < n {
            return None;
        }
        Some((0..n).map(|i| (0..n).map(|j| inv_cols[j][i].clone()).collect()).collect())
    }

    pub fn is_zero_vector(&self, v: &[Fe]) -> bool {
        v.iter().all(|x| self.reduce(x).is_zero())
    }
}

/// Incrementally built echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vector>,
    pivots: Vec<usize>,
    len: usize,
}

impl Echelon {
    pub fn empty(len: usize) -> Self {
        Echelon { rows: Vec::new(), pivots: Vec::new(), len }
    }

    fn reduce_against(&self, f: &Field, v: &[Fe]) -> Vector {
        let mut w: Vector = v.iter().map(|x| f.reduce(x)).collect();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let k = w[p].clone();
                for j in 0..self.len {
                    if !r[j].is_zero() {
                        let t = f.mul(&k, &r[j]);
                        w[j] = f.sub(&w[j], &t);
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, f: &Field, v: &[Fe]) -> bool {
        f.is_zero_vector(&self.reduce_against(f, v))
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, f: &Field, v: &[Fe]) -> bool {
        let mut w = self.reduce_against(f, v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let inv = f.inv(&w[p]);
        for x in w.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for r in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let k = r[p].clone();
                for j in 0..self.len {
                    let t = f.mul(&k, &w[j]);
                    r[j] = f.sub(&r[j], &t);
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> Fe {
        Fe::from_integer(BigInt::from(k))
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("fp:5").unwrap(), Field::Prime(5));
        assert_eq!(Field::parse("fp:6"), Err(Error::NonField));
        let f = Field::Prime(5);
        assert_eq!(f.reduce(&Fe::new(BigInt::from(1), BigInt::from(2))), q(3));
        assert_eq!(f.reduce(&q(-1)), q(4));
    }

    #[test]
    fn rank_kernel_solve() {
        let m = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(Field::Rational.rank(&m, 2), 2);
        assert_eq!(Field::Prime(2).rank(&m, 2), 1);
        assert_eq!(Field::Prime(2).kernel(&m, 2), vec![vec![q(1), q(1)]]);
        let inv = Field::Rational.inverse(&m).unwrap();
        assert_eq!(Field::Rational.mat_mul(&inv, &m, 2), vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert!(Field::Prime(2).inverse(&m).is_none());
        let cols = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]];
        assert_eq!(Field::Rational.solve(&cols, &[q(2), q(3), q(5)]), Some(vec![q(2), q(3)]));
        assert_eq!(Field::Rational.solve(&cols, &[q(2), q(3), q(4)]), None);
    }
}
