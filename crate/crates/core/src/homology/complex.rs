//! Finite chain complexes of free abelian groups and their homology.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::snf::{mat_mul, smith_normal_form, zeros, Matrix};
use crate::chain::{Basis, Chain};
use crate::error::{Error, Result};

/// `H_n ≅ ℤ^rank ⊕ ⊕ ℤ/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homology {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for Homology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "H_{} = 0", self.degree)
        } else {
            write!(f, "H_{} = {}", self.degree, parts.join(" + "))
        }
    }
}

/// Degrees `lo..=hi`; `d[k]` maps degree `lo+k` to `lo+k-1`, rows indexed by the target.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    pub lo: i64,
    pub dims: Vec<usize>,
    pub d: Vec<Matrix>,
    pub labels: Vec<Vec<String>>,
}

/// Coordinates of `c` in `basis`; fails if `c` leaves the span.
pub fn coordinates<B: Basis>(c: &Chain<B>, index: &BTreeMap<B, usize>, len: usize) -> Result<Vec<BigInt>> {
    let mut v = vec![BigInt::zero(); len];
    for (b, k) in c.iter() {
        let i = index.get(b).ok_or_else(|| Error::Invalid(format!("{b:?} is not in the chosen basis")))?;
        v[*i] = k.clone();
    }
    Ok(v)
}

fn index_of<B: Basis>(basis: &[B]) -> BTreeMap<B, usize> {
    basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect()
}

/// Matrix of a linear map between based modules, columns indexed by the source.
pub fn matrix_of<A: Basis, B: Basis>(src: &[A], tgt: &[B], mut f: impl FnMut(&A) -> Chain<B>) -> Result<Matrix> {
    let idx = index_of(tgt);
    let mut m = zeros(tgt.len(), src.len());
    for (j, a) in src.iter().enumerate() {
        let col = coordinates(&f(a), &idx, tgt.len())?;
        for (i, x) in col.into_iter().enumerate() {
            m[i][j] = x;
        }
    }
    Ok(m)
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

impl FiniteComplex {
    /// `bases[k]` spans degree `lo + k`. The boundary of the bottom degree is ignored.
    pub fn from_bases<B: Basis>(lo: i64, bases: &[Vec<B>], mut boundary: impl FnMut(&B) -> Chain<B>) -> Result<Self> {
        let mut d = Vec::with_capacity(bases.len());
        for k in 0..bases.len() {
            if k == 0 {
                d.push(zeros(0, bases[0].len()));
            } else {
                d.push(matrix_of(&bases[k], &bases[k - 1], &mut boundary)?);
            }
        }
        let c = FiniteComplex {
            lo,
            dims: bases.iter().map(|b| b.len()).collect(),
            d,
            labels: bases.iter().map(|b| b.iter().map(|x| format!("{x:?}")).collect()).collect(),
        };
        c.check()?;
        Ok(c)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    /// Boundary out of degree `n` (a `dim(n-1) × dim(n)` matrix).
    pub fn boundary(&self, n: i64) -> Matrix {
        if n <= self.lo || n > self.hi() {
            zeros(self.dim(n - 1), self.dim(n))
        } else {
            self.d[(n - self.lo) as usize].clone()
        }
    }

    pub fn check(&self) -> Result<()> {
        for n in self.lo + 2..=self.hi() {
            let dd = mat_mul(&self.boundary(n - 1), &self.boundary(n), self.dim(n - 1));
            if !is_zero_matrix(&dd) {
                return Err(Error::Invalid(format!("d∘d ≠ 0 out of degree {n}")));
            }
        }
        Ok(())
    }

    pub fn homology(&self, n: i64) -> Homology {
        let out = smith_normal_form(&self.boundary(n), self.dim(n));
        let inc = smith_normal_form(&self.boundary(n + 1), self.dim(n + 1));
        let rank = self.dim(n) - out.rank() - inc.rank();
        let torsion = inc.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        Homology { degree: n, rank, torsion }
    }

    pub fn all_homology(&self) -> Vec<Homology> {
        (self.lo..=self.hi()).map(|n| self.homology(n)).collect()
    }

    /// `cone_n = A_{n-1} ⊕ B_n`, `d(a, b) = (-da, f(a) + db)`; `f[k]` is `f` in degree `lo + k`
    /// and both complexes must share `lo`.
    pub fn mapping_cone(a: &FiniteComplex, b: &FiniteComplex, f: &[Matrix]) -> Result<FiniteComplex> {
        if a.lo != b.lo {
            return Err(Error::DimensionMismatch("cone of complexes with different bottom degree".into()));
        }
        check_chain_map(a, b, f)?;
        let lo = a.lo;
        let hi = a.hi().max(b.hi()) + 1;
        let fm = |n: i64| -> Matrix {
            if n < lo || (n - lo) as usize >= f.len() {
                zeros(b.dim(n), a.dim(n))
            } else {
                f[(n - lo) as usize].clone()
            }
        };
        let mut dims = Vec::new();
        let mut d = Vec::new();
        let mut labels = Vec::new();
        for n in lo..=hi {
            let (an, bn) = (a.dim(n - 1), b.dim(n));
            dims.push(an + bn);
            let mut l: Vec<String> = (0..an).map(|i| format!("s{}", a.labels[(n - 1 - lo) as usize][i])).collect();
            l.extend((0..bn).map(|i| b.labels[(n - lo) as usize][i].clone()));
            labels.push(l);
            let (at, bt) = (a.dim(n - 2), b.dim(n - 1));
            let mut m = zeros(at + bt, an + bn);
            if n > lo {
                let da = a.boundary(n - 1);
                let db = b.boundary(n);
                let fa = fm(n - 1);
                for i in 0..at {
                    for j in 0..an {
                        m[i][j] = -da[i][j].clone();
                    }
                }
                for i in 0..bt {
                    for j in 0..an {
                        m[at + i][j] = fa[i][j].clone();
                    }
                    for j in 0..bn {
                        m[at + i][an + j] = db[i][j].clone();
                    }
                }
            }
            d.push(m);
        }
        let c = FiniteComplex { lo, dims, d, labels };
        c.check()?;
        Ok(c)
    }
}

pub fn check_chain_map(a: &FiniteComplex, b: &FiniteComplex, f: &[Matrix]) -> Result<()> {
    for (k, fk) in f.iter().enumerate() {
        let n = a.lo + k as i64;
        if fk.len() != b.dim(n) || fk.iter().any(|r| r.len() != a.dim(n)) {
            return Err(Error::DimensionMismatch(format!("chain map in degree {n}")));
        }
        if n == a.lo || k == 0 {
            continue;
        }
        let lhs = mat_mul(&b.boundary(n), fk, b.dim(n));
        let rhs = mat_mul(&f[k - 1], &a.boundary(n), a.dim(n - 1));
        if lhs != rhs {
            return Err(Error::NotChainMap(format!("d f ≠ f d in degree {n}")));
        }
    }
    Ok(())
}

/// Whether the cone of `f` is acyclic in degrees `lo..=through`, i.e. `f` induces
/// isomorphisms below `through` and a surjection in degree `through`.
pub fn is_quasi_iso(a: &FiniteComplex, b: &FiniteComplex, f: &[Matrix], through: i64) -> Result<bool> {
    let cone = FiniteComplex::mapping_cone(a, b, f)?;
    Ok((cone.lo..=through).all(|n| cone.homology(n).is_zero()))
}

/// Integer matrix of `f` between chain bases, degree by degree.
pub fn chain_map_matrices<A: Basis, B: Basis>(
    src: &[Vec<A>],
    tgt: &[Vec<B>],
    mut f: impl FnMut(&A) -> Chain<B>,
) -> Result<Vec<Matrix>> {
    src.iter().zip(tgt).map(|(s, t)| matrix_of(s, t, &mut f)).collect()
}
