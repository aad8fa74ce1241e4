//! Spectral sequence of a filtered complex over a field, computed page by page
//! from an adapted basis.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::complex::FiniteComplex;
use super::field::{Echelon, Fe, Field, Vector};
use crate::error::{Error, Result};

/// A complex over a field in degrees `lo..=hi` whose basis is adapted to an
/// increasing filtration: basis vector `j` of degree `n` spans part of `F_s` for
/// `s = levels[n][j]`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub field: Field,
    pub lo: i64,
    pub dims: Vec<usize>,
    /// `d[k]`: degree `lo+k` to `lo+k-1`, rows indexed by the target.
    pub d: Vec<Vec<Vector>>,
    pub levels: Vec<Vec<i64>>,
    pub labels: Vec<Vec<String>>,
}

impl FilteredComplex {
    /// `change[k]` holds the new basis of degree `lo+k` as columns in old coordinates.
    pub fn new(field: Field, c: &FiniteComplex, change: Option<Vec<Vec<Vector>>>, levels: Vec<Vec<i64>>) -> Result<Self> {
        let n = c.dims.len();
        if levels.len() != n || levels.iter().zip(&c.dims).any(|(l, d)| l.len() != *d) {
            return Err(Error::DimensionMismatch("levels do not match the complex".into()));
        }
        let mut d: Vec<Vec<Vector>> = c.d.iter().map(|m| m.iter().map(|r| field.vector(r)).collect()).collect();
        let mut labels = c.labels.clone();
        if let Some(p) = change {
            if p.len() != n {
                return Err(Error::DimensionMismatch("change of basis does not match the complex".into()));
            }
            let mut inv = Vec::with_capacity(n);
            for (k, pk) in p.iter().enumerate() {
                let pk: Vec<Vector> = pk.iter().map(|r| r.iter().map(|x| field.reduce(x)).collect()).collect();
                inv.push(field.inverse(&pk).ok_or_else(|| Error::Invalid(format!("change of basis in degree {} is singular", c.lo + k as i64)))?);
            }
            for k in 1..n {
                let dp = field.mat_mul(&d[k], &p[k], c.dims[k]);
                d[k] = field.mat_mul(&inv[k - 1], &dp, c.dims[k]);
            }
            for (k, l) in labels.iter_mut().enumerate() {
                *l = (0..c.dims[k]).map(|j| format!("v{j}")).collect();
            }
        }
        let fc = FilteredComplex { field, lo: c.lo, dims: c.dims.clone(), d, levels, labels };
        fc.check()?;
        Ok(fc)
    }

    fn check(&self) -> Result<()> {
        for k in 1..self.dims.len() {
            for (i, row) in self.d[k].iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if !x.is_zero() && self.levels[k - 1][i] > self.levels[k][j] {
                        return Err(Error::Invalid(format!(
                            "differential raises filtration in degree {}: {} -> {}",
                            self.lo + k as i64,
                            self.labels[k][j],
                            self.labels[k - 1][i]
                        )));
                    }
                }
            }
        }
        Ok(())
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

    fn level(&self, n: i64, j: usize) -> i64 {
        self.levels[(n - self.lo) as usize][j]
    }

    /// `D v` for `v` of degree `n`.
    pub fn apply(&self, n: i64, v: &[Fe]) -> Vector {
        if n <= self.lo || n > self.hi() {
            return vec![Fe::zero(); self.dim(n - 1)];
        }
        self.field.apply(&self.d[(n - self.lo) as usize], v)
    }

    pub fn level_range(&self) -> Option<(i64, i64)> {
        let all = self.levels.iter().flatten();
        Some((*all.clone().min()?, *all.max()?))
    }

    /// Over the field, `dim H_n`.
    pub fn homology_dim(&self, n: i64) -> usize {
        let rank = |m: i64| -> usize {
            if m <= self.lo || m > self.hi() {
                return 0;
            }
            let k = (m - self.lo) as usize;
            let cols: Vec<Vector> = (0..self.dims[k]).map(|j| self.d[k].iter().map(|r| r[j].clone()).collect()).collect();
            self.field.rank(&cols, self.dims[k - 1])
        };
        self.dim(n) - rank(n) - rank(n + 1)
    }

    /// Linear dual: degree `-n`, level `-s`, differential `-Dᵀ`.
    pub fn dual(&self) -> FilteredComplex {
        let n = self.dims.len();
        let rev = |k: usize| n - 1 - k;
        let mut d = vec![Vec::new(); n];
        for k in 0..n {
            // new degree index k is old degree index rev(k); its differential is −(D_{old+1})ᵀ
            let old = rev(k);
            if k == 0 {
                d[0] = vec![];
                continue;
            }
            let m = &self.d[old + 1];
            d[k] = (0..self.dims[old + 1])
                .map(|j| (0..self.dims[old]).map(|i| self.field.neg(&m[i][j])).collect())
                .collect();
        }
        FilteredComplex {
            field: self.field,
            lo: -self.hi(),
            dims: (0..n).map(|k| self.dims[rev(k)]).collect(),
            d,
            levels: (0..n).map(|k| self.levels[rev(k)].iter().map(|s| -s).collect()).collect(),
            labels: (0..n).map(|k| self.labels[rev(k)].iter().map(|l| format!("{l}*")).collect()).collect(),
        }
    }
}

/// `E^r_{s,n}` as the quotient `Z^r_s / B^r_s` with chosen representatives.
#[derive(Clone, Debug)]
pub struct Group {
    pub reps: Vec<Vector>,
    b: Echelon,
}

#[derive(Clone, Debug)]
pub struct Page {
    pub r: i64,
    pub groups: BTreeMap<(i64, i64), Group>,
    /// `d^r` out of `(s, n)` into `(s - r, n - 1)` in representative coordinates, one column per source rep.
    pub d: BTreeMap<(i64, i64), Vec<Vector>>,
}

impl Page {
    pub fn dim(&self, s: i64, n: i64) -> usize {
        self.groups.get(&(s, n)).map_or(0, |g| g.reps.len())
    }

    pub fn rank_d(&self, field: &Field, s: i64, n: i64) -> usize {
        match self.d.get(&(s, n)) {
            Some(cols) if !cols.is_empty() => field.rank(cols, cols[0].len()),
            _ => 0,
        }
    }

    pub fn nonzero(&self) -> Vec<((i64, i64), usize)> {
        self.groups.iter().filter(|(_, g)| !g.reps.is_empty()).map(|(k, g)| (*k, g.reps.len())).collect()
    }
}

#[derive(Serialize)]
pub struct PageSummary {
    pub r: i64,
    /// `(s, n, dim E^r_{s,n}, rank d^r out of it)`
    pub entries: Vec<(i64, i64, usize, usize)>,
}

pub struct SpectralSequence {
    pub fc: FilteredComplex,
    pub pages: Vec<Page>,
}

impl SpectralSequence {
    /// Pages `E^0 … E^{r_max}`; with no bound, up to where the sequence is stationary.
    pub fn compute(fc: FilteredComplex, r_max: Option<i64>) -> SpectralSequence {
        let (smin, smax) = fc.level_range().unwrap_or((0, 0));
        let last = r_max.unwrap_or(smax - smin + 1).max(1);
        let pages = (0..=last).map(|r| page(&fc, r, smin, smax)).collect();
        SpectralSequence { fc, pages }
    }

    pub fn page(&self, r: i64) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    /// Class of `v ∈ Z^r_s` in `E^r_{s,n}`, or `None` when `v ∉ Z^r_s`.
    pub fn class_of(&self, r: i64, s: i64, n: i64, v: &[Fe]) -> Option<Vector> {
        class_of(&self.fc, self.page(r)?, s, n, v)
    }

    /// `E^{r+1} ≅ H(E^r, d^r)` by dimension count, entry by entry; returns the failures.
    pub fn check_pages(&self) -> Vec<String> {
        let f = &self.fc.field;
        let mut bad = Vec::new();
        for w in self.pages.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            for (&(s, n), g) in &p.groups {
                let h = g.reps.len() - p.rank_d(f, s, n) - p.rank_d(f, s + p.r, n + 1);
                if h != q.dim(s, n) {
                    bad.push(format!("E^{}_({s},{n}) = {} but H(E^{}) = {h}", q.r, q.dim(s, n), p.r));
                }
            }
        }
        for p in &self.pages {
            for (&(s, n), cols) in &p.d {
                for c in cols {
                    let dd = p.d.get(&(s - p.r, n - 1));
                    if let Some(next) = dd {
                        let mut acc = vec![Fe::zero(); p.dim(s - 2 * p.r, n - 2)];
                        for (k, x) in c.iter().enumerate() {
                            for (i, y) in next[k].iter().enumerate() {
                                acc[i] = f.add(&acc[i], &f.mul(x, y));
                            }
                        }
                        if !f.is_zero_vector(&acc) {
                            bad.push(format!("d^{} d^{} ≠ 0 at ({s},{n})", p.r, p.r));
                        }
                    }
                }
            }
        }
        if let Some(last) = self.pages.last() {
            for n in self.fc.lo..=self.fc.hi() {
                let total: usize = last.groups.iter().filter(|((_, m), _)| *m == n).map(|(_, g)| g.reps.len()).sum();
                let h = self.fc.homology_dim(n);
                if total != h {
                    bad.push(format!("E^∞ in degree {n} has dimension {total}, homology has {h}"));
                }
            }
        }
        bad
    }

    pub fn summary(&self) -> Vec<PageSummary> {
        let f = &self.fc.field;
        self.pages
            .iter()
            .map(|p| PageSummary {
                r: p.r,
                entries: p.groups.iter().filter(|(_, g)| !g.reps.is_empty()).map(|(&(s, n), g)| (s, n, g.reps.len(), p.rank_d(f, s, n))).collect(),
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for p in self.summary() {
            out.push_str(&format!("E^{}:", p.r));
            if p.entries.is_empty() {
                out.push_str(" 0");
            }
            for (s, n, dim, rk) in p.entries {
                out.push_str(&format!(" ({s},{n})={dim}"));
                if rk > 0 {
                    out.push_str(&format!("[d rank {rk}]"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// `Z^r_s` in degree `n`: vectors in `F_s` with boundary in `F_{s-r}`.
fn cycles(fc: &FilteredComplex, r: i64, s: i64, n: i64) -> Vec<Vector> {
    let dim = fc.dim(n);
    let cols: Vec<usize> = (0..dim).filter(|&j| fc.level(n, j) <= s).collect();
    let rows: Vec<usize> = (0..fc.dim(n - 1)).filter(|&i| fc.level(n - 1, i) > s - r).collect();
    let sub: Vec<Vector> = if n > fc.lo && n <= fc.hi() {
        let m = &fc.d[(n - fc.lo) as usize];
        rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect()
    } else {
        Vec::new()
    };
    fc.field
        .kernel(&sub, cols.len())
        .into_iter()
        .map(|k| {
            let mut v = vec![Fe::zero(); dim];
            for (c, &j) in cols.iter().enumerate() {
                v[j] = k[c].clone();
            }
            v
        })
        .collect()
}

fn page(fc: &FilteredComplex, r: i64, smin: i64, smax: i64) -> Page {
    let f = &fc.field;
    let mut groups = BTreeMap::new();
    for n in fc.lo..=fc.hi() {
        for s in smin..=smax {
            let z = cycles(fc, r, s, n);
            let mut b = Echelon::empty(fc.dim(n));
            for v in cycles(fc, r - 1, s - 1, n) {
                b.insert(f, &v);
            }
            for v in cycles(fc, r - 1, s + r - 1, n + 1) {
                b.insert(f, &fc.apply(n + 1, &v));
            }
            let mut span = b.clone();
            let reps = z.into_iter().filter(|v| span.insert(f, v)).collect();
            groups.insert((s, n), Group { reps, b });
        }
    }
    let mut p = Page { r, groups, d: BTreeMap::new() };
    let mut d = BTreeMap::new();
    for (&(s, n), g) in &p.groups {
        if g.reps.is_empty() {
            continue;
        }
        let cols = g
            .reps
            .iter()
            .map(|v| class_of(fc, &p, s - r, n - 1, &fc.apply(n, v)).expect("d^r lands in Z^r"))
            .collect();
        d.insert((s, n), cols);
    }
    p.d = d;
    p
}

fn class_of(fc: &FilteredComplex, p: &Page, s: i64, n: i64, v: &[Fe]) -> Option<Vector> {
    let f = &fc.field;
    let Some(g) = p.groups.get(&(s, n)) else {
        return f.is_zero_vector(v).then(Vec::new);
    };
    let mut cols = g.reps.clone();
    cols.extend(g.b.rows.iter().cloned());
    let x = f.solve(&cols, v)?;
    Some(x[..g.reps.len()].to_vec())
}

pub fn require_field(f: Option<Field>) -> Result<Field> {
    f.ok_or(Error::NonField)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn cx(dims: Vec<usize>, d: Vec<Vec<Vec<i64>>>) -> FiniteComplex {
        FiniteComplex {
            lo: 0,
            labels: dims.iter().map(|&n| (0..n).map(|i| format!("b{i}")).collect()).collect(),
            dims,
            d: d.into_iter().map(|m| m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()).collect(),
        }
    }

    #[test]
    fn interval_filtered_by_vertex() {
        // Δ¹ with de = b - a, the edge one level above its vertices
        let c = cx(vec![2, 1], vec![vec![], vec![vec![-1], vec![1]]]);
        let fc = FilteredComplex::new(Field::Rational, &c, None, vec![vec![0, 0], vec![1]]).unwrap();
        let ss = SpectralSequence::compute(fc, None);
        assert!(ss.check_pages().is_empty(), "{:?}", ss.check_pages());
        let e1 = ss.page(1).unwrap();
        assert_eq!(e1.nonzero(), vec![((0, 0), 2), ((1, 1), 1)]);
        assert_eq!(ss.page(2).unwrap().nonzero(), vec![((0, 0), 1)]);
        let dual = SpectralSequence::compute(ss.fc.dual(), None);
        assert!(dual.check_pages().is_empty());
        assert_eq!(dual.page(2).unwrap().nonzero(), vec![((0, 0), 1)]);
    }

    #[test]
    fn filtration_violation_is_reported() {
        let c = cx(vec![2, 1], vec![vec![], vec![vec![-1], vec![1]]]);
        assert!(FilteredComplex::new(Field::Rational, &c, None, vec![vec![0, 2], vec![1]]).is_err());
    }
}
