//! Filtrations of twisted tensor products: the augmentation-ideal filtration of
//! the fibre, the filtration by base degree, and the graded twisting cochain.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::complex::FiniteComplex;
use super::field::{Echelon, Fe, Field, Vector};
use super::spectral::{FilteredComplex, SpectralSequence};
use crate::chain::{Basis, Chain};
use crate::chainmaps::boundary_cell;
use crate::error::{Error, Result};
use crate::group::GroupWord;
use crate::simplex::Simplex;
use crate::simplicial::{Cell, Simplicial};
use crate::twist::{GSpace, GroupFibre, TwistedProduct};
use crate::twisted_tensor::{Elem, TwistedTensor};

/// `𝔞^p C_n(F)` for `p = 0, 1, …` in each fibre degree, with an adapted basis.
#[derive(Clone, Debug)]
pub struct AugmentationFiltration<C> {
    pub field: Field,
    pub cells: Vec<Vec<C>>,
    /// `powers[n][p] = dim 𝔞^p C_n(F)`, listed until the powers stabilise.
    pub powers: Vec<Vec<usize>>,
    pub nilpotent: bool,
    /// Adapted basis vectors in cell coordinates, and their levels `-p`.
    pub basis: Vec<Vec<Vector>>,
    pub levels: Vec<Vec<i64>>,
    /// Inverse of the change of basis: row `k` gives the `k`-th adapted coordinate.
    pub inverse: Vec<Vec<Vector>>,
}

fn finite_order(g: &crate::group::SimplicialGroup) -> Result<usize> {
    g.finite_group().map(|f| f.order()).ok_or_else(|| Error::Invalid("augmentation filtration needs a finite group".into()))
}

/// `g·v` for `v` in cell coordinates of degree `n`, `g` a group element index.
fn act_vector<F: GSpace>(fibre: &F, cells: &[F::Cell], index: &BTreeMap<F::Cell, usize>, field: &Field, n: usize, g: u32, v: &[Fe]) -> Vector
where
    F::Cell: Basis,
{
    let h = fibre.acting_group().element(n, g);
    let mut out = vec![Fe::zero(); cells.len()];
    for (j, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let y = fibre.act(&h, &cells[j]);
        if y.is_degenerate() {
            continue;
        }
        let i = index[&y];
        out[i] = field.add(&out[i], x);
    }
    out
}

pub fn augmentation_filtration<F: GSpace>(fibre: &F, field: Field, max_dim: usize) -> Result<AugmentationFiltration<F::Cell>>
where
    F::Cell: Basis,
{
    let order = finite_order(fibre.acting_group())?;
    let mut out = AugmentationFiltration {
        field,
        cells: Vec::new(),
        powers: Vec::new(),
        nilpotent: true,
        basis: Vec::new(),
        levels: Vec::new(),
        inverse: Vec::new(),
    };
    for n in 0..=max_dim {
        let cells = fibre.basis(n)?;
        let len = cells.len();
        let index: BTreeMap<F::Cell, usize> = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut whole = Echelon::empty(len);
        for j in 0..len {
            let mut e = vec![Fe::zero(); len];
            e[j] = Fe::one();
            whole.insert(&field, &e);
        }
        let mut chain = vec![whole];
        loop {
            let prev = chain.last().unwrap();
            let mut next = Echelon::empty(len);
            for w in &prev.rows {
                for g in 0..order as u32 {
                    let gw = act_vector(fibre, &cells, &index, &field, n, g, w);
                    let diff: Vector = gw.iter().zip(w).map(|(a, b)| field.sub(a, b)).collect();
                    next.insert(&field, &diff);
                }
            }
            let stable = next.dim() == prev.dim();
            if !stable {
                chain.push(next);
            }
            if stable || chain.last().unwrap().dim() == 0 {
                break;
            }
        }
        let deepest = chain.len() - 1;
        if chain[deepest].dim() > 0 {
            out.nilpotent = false;
        }
        let mut span = Echelon::empty(len);
        let mut basis = Vec::new();
        let mut levels = Vec::new();
        for p in (0..=deepest).rev() {
            for v in &chain[p].rows {
                if span.insert(&field, v) {
                    basis.push(v.clone());
                    levels.push(-(p as i64));
                }
            }
        }
        // columns of the change of basis are the adapted vectors
        let cols: Vec<Vector> = (0..len).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
        let inverse = if len == 0 { Vec::new() } else { field.inverse(&cols).expect("adapted basis spans") };
        out.powers.push(chain.iter().map(|e| e.dim()).collect());
        out.cells.push(cells);
        out.basis.push(basis);
        out.levels.push(levels);
        out.inverse.push(inverse);
    }
    Ok(out)
}

impl<C: Basis> AugmentationFiltration<C> {
    pub fn coordinates(&self, n: usize, c: &C) -> Vector {
        let i = self.cells[n].iter().position(|x| x == c).expect("cell in basis");
        self.inverse[n].iter().map(|r| r[i].clone()).collect()
    }

    pub fn to_adapted(&self, n: usize, v: &[Fe]) -> Vector {
        self.field.apply(&self.inverse[n], v)
    }

    /// Length of the filtration in degree `n` (number of nonzero graded pieces).
    pub fn length(&self, n: usize) -> usize {
        self.powers[n].iter().filter(|&&d| d > 0).count()
    }
}

/// `C(X) ⊗_t C(F)` as a finite complex on the basis `x ⊗ y` in degrees `0..=max_degree`.
pub fn twisted_complex<F: GSpace>(tt: &TwistedTensor<'_, F>, max_degree: usize) -> Result<(FiniteComplex, Vec<Vec<Elem<F>>>)>
where
    F::Cell: Basis,
{
    let bases: Vec<Vec<Elem<F>>> = (0..=max_degree).map(|d| tt.basis(d)).collect::<Result<_>>()?;
    let c = FiniteComplex::from_bases(0, &bases, |(x, y)| tt.differential(x, y))?;
    Ok((c, bases))
}

/// The twisted tensor complex filtered through the fibre by `𝔞^p C(F)`.
pub struct FibreFiltered<F: GSpace> {
    pub ss: SpectralSequence,
    pub aug: AugmentationFiltration<F::Cell>,
    pub bases: Vec<Vec<Elem<F>>>,
    /// New basis element `k` of degree `d` is `x ⊗ (adapted fibre vector j of degree b)`.
    pub adapted: Vec<Vec<(Simplex, usize, usize)>>,
    inverse: Vec<Vec<Vector>>,
}

pub fn fibre_filtered<F: GSpace>(tp: &TwistedProduct<F>, field: Field, max_degree: usize) -> Result<FibreFiltered<F>>
where
    F::Cell: Basis,
{
    let tt = TwistedTensor::new(tp);
    let aug = augmentation_filtration(&tp.fibre, field, max_degree)?;
    let (c, bases) = twisted_complex(&tt, max_degree)?;
    let mut change = Vec::new();
    let mut levels = Vec::new();
    let mut adapted = Vec::new();
    for (d, basis) in bases.iter().enumerate() {
        let index: BTreeMap<&Elem<F>, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut cols: Vec<Vector> = Vec::new();
        let mut lv = Vec::new();
        let mut ad = Vec::new();
        for p in 0..=d {
            let b = d - p;
            for x in tp.base().nondegenerate(p) {
                for (j, v) in aug.basis[b].iter().enumerate() {
                    let mut col = vec![Fe::zero(); basis.len()];
                    for (k, coef) in v.iter().enumerate() {
                        if !coef.is_zero() {
                            col[index[&(x, aug.cells[b][k].clone())]] = coef.clone();
                        }
                    }
                    cols.push(col);
                    lv.push(aug.levels[b][j]);
                    ad.push((x, b, j));
                }
            }
        }
        let n = basis.len();
        change.push((0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect::<Vec<Vector>>());
        levels.push(lv);
        adapted.push(ad);
    }
    let inverse = change.iter().map(|p| if p.is_empty() { Vec::new() } else { field.inverse(p).expect("invertible") }).collect();
    let fc = FilteredComplex::new(field, &c, Some(change), levels)?;
    let mut fc = fc;
    fc.labels = adapted
        .iter()
        .map(|row| row.iter().map(|(x, b, j)| format!("{}⊗v{b}.{j}", tp.base().render(x))).collect())
        .collect();
    Ok(FibreFiltered { ss: SpectralSequence::compute(fc, None), aug, bases, adapted, inverse })
}

impl<F: GSpace> FibreFiltered<F>
where
    F::Cell: Basis,
{
    /// Old-basis coordinates in degree `d` to adapted coordinates.
    pub fn to_adapted(&self, d: usize, v: &[Fe]) -> Vector {
        self.ss.fc.field.apply(&self.inverse[d], v)
    }

    fn old_coordinates(&self, d: usize, terms: &BTreeMap<Elem<F>, Fe>) -> Vector {
        let f = &self.ss.fc.field;
        let mut v = vec![Fe::zero(); self.bases[d].len()];
        for (e, k) in terms {
            let i = self.bases[d].iter().position(|b| b == e).expect("term in basis");
            v[i] = f.add(&v[i], k);
        }
        v
    }
}

/// Adapted basis with levels given by the base degree, as for a trivial local system.
pub fn base_filtered<F: GSpace>(tp: &TwistedProduct<F>, field: Field, max_degree: usize) -> Result<(SpectralSequence, Vec<Vec<Elem<F>>>)>
where
    F::Cell: Basis,
{
    let tt = TwistedTensor::new(tp);
    let (c, bases) = twisted_complex(&tt, max_degree)?;
    let levels = bases.iter().map(|b| b.iter().map(|(x, _)| x.dim() as i64).collect()).collect();
    let fc = FilteredComplex::new(field, &c, None, levels)?;
    Ok((SpectralSequence::compute(fc, None), bases))
}

/// Field homology dimensions of a finite integer complex.
pub fn field_homology(field: Field, c: &FiniteComplex) -> Vec<usize> {
    let levels = c.dims.iter().map(|&n| vec![0; n]).collect();
    let fc = FilteredComplex::new(field, c, None, levels).expect("constant filtration");
    (c.lo..=c.hi()).map(|n| fc.homology_dim(n)).collect()
}

/// `t_*[e] = [t(e)] ∈ 𝔞/𝔞²` on the edges of the base, for a discrete finite group.
#[derive(Clone, Debug)]
pub struct GradedTwistingCochain {
    /// Per nondegenerate edge: the class of `t(e)` in `𝔞/𝔞²`, in the adapted coordinates of level `-1`.
    pub values: Vec<(Simplex, Vector)>,
    /// `t(dc) ∈ F_{-2}` for every nondegenerate 2-simplex `c`.
    pub well_defined: bool,
}

impl GradedTwistingCochain {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|(_, v)| v.iter().all(|x| x.is_zero()))
    }
}

pub fn graded_twisting_cochain<F: GSpace>(tp: &TwistedProduct<F>, field: Field) -> Result<GradedTwistingCochain> {
    let group = tp.group().clone();
    let ring = augmentation_filtration(&GroupFibre { group: group.clone(), word_bound: None }, field, 0)?;
    let cells = &ring.cells[0];
    let vec_of = |c: &Chain<GroupWord>| -> Vector {
        let mut v = vec![Fe::zero(); cells.len()];
        for (g, k) in c.iter() {
            let i = cells.iter().position(|x| x == g).expect("degree-0 group element");
            v[i] = field.add(&v[i], &field.from_int(k));
        }
        v
    };
    // t(e) = σ(e) - 1 on edges, computed in the group ring directly
    let t_edge = |e: &Simplex| -> Chain<GroupWord> {
        let mut c = Chain::basis(tp.twist.sigma(e));
        c.add_term(group.identity(0), -BigInt::one());
        c
    };
    let mut values = Vec::new();
    for e in tp.base().nondegenerate(1) {
        let a = ring.to_adapted(0, &vec_of(&t_edge(&e)));
        let cls: Vector = a.iter().zip(&ring.levels[0]).map(|(x, &l)| if l == -1 { x.clone() } else { Fe::zero() }).collect();
        values.push((e, cls));
    }
    let mut well_defined = true;
    for c in tp.base().nondegenerate(2) {
        let mut td = Chain::zero();
        for i in 0..=2 {
            let f = tp.base().face(i, &c);
            if !f.is_degenerate() {
                td.add_assign_scaled(&t_edge(&f), &crate::chain::sign(i % 2 == 1));
            }
        }
        let a = ring.to_adapted(0, &vec_of(&td));
        if a.iter().zip(&ring.levels[0]).any(|(x, &l)| !x.is_zero() && l > -2) {
            well_defined = false;
        }
    }
    Ok(GradedTwistingCochain { values, well_defined })
}

/// Compares `d¹` with `d_{t_*}` on `E¹ = H(X) ⊗ gr(F)`. The right side is built
/// from `σ` and the fibre action alone: `x ⊗ m ↦ (-1)^|x| x ⊗ dm - (-1)^{|x|-1} ∂̃x ⊗ (σ(e) - 1)·m`
/// with `e` the last edge of `x`. Returns the number of classes compared and the failures.
pub fn compare_d1_with_t_star<F: GSpace>(tp: &TwistedProduct<F>, ff: &FibreFiltered<F>) -> Result<(usize, Vec<String>)>
where
    F::Cell: Basis,
{
    let f = ff.ss.fc.field;
    let e1 = ff.ss.page(1).ok_or_else(|| Error::Invalid("no E¹ page".into()))?;
    let base = tp.base();
    let max_degree = ff.bases.len() - 1;
    let base_bases: Vec<Vec<Simplex>> = (0..=max_degree).map(|d| base.nondegenerate(d)).collect();
    let bc = FiniteComplex::from_bases(0, &base_bases, |x| boundary_cell(&**base, x))?;
    let mut compared = 0;
    let mut failures = Vec::new();
    for a in 0..=max_degree {
        let dm: Vec<Vector> = bc.boundary(a as i64).iter().map(|r| f.vector(r)).collect();
        let cycles = f.kernel(&dm, base_bases[a].len());
        for z in &cycles {
            for b in 0..=max_degree - a {
                let n = a + b;
                for (j, m) in ff.aug.basis[b].iter().enumerate() {
                    let s = ff.aug.levels[b][j];
                    let mut v = BTreeMap::new();
                    for (xi, zx) in z.iter().enumerate() {
                        if zx.is_zero() {
                            continue;
                        }
                        for (k, mk) in m.iter().enumerate() {
                            if !mk.is_zero() {
                                v.insert((base_bases[a][xi], ff.aug.cells[b][k].clone()), f.mul(zx, mk));
                            }
                        }
                    }
                    let v_new = ff.to_adapted(n, &ff.old_coordinates(n, &v));
                    let Some(cls) = ff.ss.class_of(1, s, n as i64, &v_new) else { continue };
                    if cls.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    compared += 1;
                    let mut lhs = vec![Fe::zero(); e1.dim(s - 1, n as i64 - 1)];
                    if let Some(cols) = e1.d.get(&(s, n as i64)) {
                        for (k, c) in cls.iter().enumerate() {
                            for (i, y) in cols[k].iter().enumerate() {
                                lhs[i] = f.add(&lhs[i], &f.mul(c, y));
                            }
                        }
                    }
                    if n == 0 {
                        continue;
                    }
                    let w = t_star_differential(tp, &f, &base_bases[a], z, &ff.aug, b, m);
                    let w_new = ff.to_adapted(n - 1, &ff.old_coordinates(n - 1, &w));
                    match ff.ss.class_of(1, s - 1, n as i64 - 1, &w_new) {
                        Some(rhs) if rhs == lhs => {}
                        Some(rhs) => failures.push(format!("d¹ ≠ d_t* on degree {n}, level {s}: {lhs:?} vs {rhs:?}")),
                        None => failures.push(format!("d_t* leaves Z¹ on degree {n}, level {s}")),
                    }
                }
            }
        }
    }
    Ok((compared, failures))
}

fn t_star_differential<F: GSpace>(
    tp: &TwistedProduct<F>,
    f: &Field,
    xs: &[Simplex],
    z: &[Fe],
    aug: &AugmentationFiltration<F::Cell>,
    b: usize,
    m: &[Fe],
) -> BTreeMap<Elem<F>, Fe>
where
    F::Cell: Basis,
{
    let base = tp.base();
    let cells = &aug.cells[b];
    let mut out: BTreeMap<Elem<F>, Fe> = BTreeMap::new();
    let mut add = |e: Elem<F>, k: Fe| {
        let slot = out.entry(e).or_insert_with(Fe::zero);
        *slot = f.add(slot, &k);
    };
    for (xi, zx) in z.iter().enumerate() {
        if zx.is_zero() {
            continue;
        }
        let x = xs[xi];
        let a = x.dim();
        for (k, mk) in m.iter().enumerate() {
            if mk.is_zero() {
                continue;
            }
            let coef = f.mul(zx, mk);
            let odd_x = if a % 2 == 1 { f.neg(&coef) } else { coef.clone() };
            for (y, s) in boundary_cell(&tp.fibre, &cells[k]).iter() {
                add((x, y.clone()), f.mul(&odd_x, &f.from_int(s)));
            }
            if a == 0 {
                continue;
            }
            let front = base.front(&x, 1);
            if front.is_degenerate() {
                continue;
            }
            let edge = base.back(&x, a - 1);
            let g = match tp.twist.sigma(&edge) {
                GroupWord::Finite { elem, .. } => elem,
                GroupWord::Free { .. } => panic!("discrete group expected"),
            };
            // -(-1)^{a-1} ∂̃x ⊗ (g·m_k - m_k)
            let sgn = if a % 2 == 1 { f.neg(&coef) } else { coef.clone() };
            let gy = tp.fibre.act(&tp.group().element(b, g), &cells[k]);
            if !gy.is_degenerate() {
                add((front, gy), sgn.clone());
            }
            add((front, cells[k].clone()), f.neg(&sgn));
        }
    }
    out
}

/// Levels of `a ⊗ b` terms of `Δv` never exceed the level of `v`, for every
/// adapted basis vector `v` of the fibre-filtered twisted tensor product.
pub fn filtration_comultiplicative<F: GSpace>(tp: &TwistedProduct<F>, ff: &FibreFiltered<F>) -> Vec<String>
where
    F::Cell: Basis,
{
    let tt = TwistedTensor::new(tp);
    let f = ff.ss.fc.field;
    let mut failures = Vec::new();
    for (d, adapted) in ff.adapted.iter().enumerate() {
        for (k, &(x, b, j)) in adapted.iter().enumerate() {
            let level = ff.ss.fc.levels[d][k];
            let m = &ff.aug.basis[b][j];
            // Δ(x ⊗ m) term by term, grouped by the degrees of the two factors
            let mut parts: BTreeMap<(usize, usize), BTreeMap<(usize, usize), Fe>> = BTreeMap::new();
            for (yi, mk) in m.iter().enumerate() {
                if mk.is_zero() {
                    continue;
                }
                for (((x1, y1), (x2, y2)), c) in tt.diagonal(&x, &ff.aug.cells[b][yi]).iter() {
                    let d1 = (x1.dim() + y1.degree() as usize, x2.dim() + y2.degree() as usize);
                    let i1 = ff.bases[d1.0].iter().position(|e| *e == (*x1, y1.clone())).expect("basis");
                    let i2 = ff.bases[d1.1].iter().position(|e| *e == (*x2, y2.clone())).expect("basis");
                    let slot = parts.entry(d1).or_default().entry((i1, i2)).or_insert_with(Fe::zero);
                    *slot = f.add(slot, &f.mul(mk, &f.from_int(c)));
                }
            }
            let mut adapted_terms: BTreeMap<(usize, usize, usize, usize), Fe> = BTreeMap::new();
            for ((d1, d2), terms) in parts {
                for ((i1, i2), c) in terms {
                    if c.is_zero() {
                        continue;
                    }
                    for (p, a) in ff.inverse[d1].iter().map(|r| &r[i1]).enumerate().filter(|(_, a)| !a.is_zero()) {
                        for (q, b) in ff.inverse[d2].iter().map(|r| &r[i2]).enumerate().filter(|(_, b)| !b.is_zero()) {
                            let slot = adapted_terms.entry((d1, d2, p, q)).or_insert_with(Fe::zero);
                            *slot = f.add(slot, &f.mul(&c, &f.mul(a, b)));
                        }
                    }
                }
            }
            for ((d1, d2, p, q), c) in adapted_terms {
                let l = ff.ss.fc.levels[d1][p] + ff.ss.fc.levels[d2][q];
                if !c.is_zero() && l > level {
                    failures.push(format!("Δ of {} has a term at level {l} > {level}", ff.ss.fc.labels[d][k]));
                }
            }
        }
    }
    failures.sort();
    failures.dedup();
    failures
}

/// The same check for the filtration by base degree, on the basis `x ⊗ y`.
pub fn base_filtration_comultiplicative<F: GSpace>(tp: &TwistedProduct<F>, max_degree: usize) -> Result<Vec<String>>
where
    F::Cell: Basis,
{
    let tt = TwistedTensor::new(tp);
    let mut failures = Vec::new();
    for d in 0..=max_degree {
        for (x, y) in tt.basis(d)? {
            for (((x1, _), (x2, _)), _) in tt.diagonal(&x, &y).iter() {
                if x1.dim() + x2.dim() > x.dim() {
                    failures.push(format!("Δ({}) raises base degree", tp.render(&crate::Pair(x, y.clone()))));
                }
            }
        }
    }
    Ok(failures)
}

/// `E^r` of the dual filtered complex is the transpose of `E^r`: equal dimensions at
/// `(-s, -n)` and equal ranks of the differentials. Returns the mismatches.
pub fn transposed_pages(ss: &SpectralSequence) -> Vec<String> {
    let dual = SpectralSequence::compute(ss.fc.dual(), Some(ss.pages.last().map_or(1, |p| p.r)));
    let f = ss.fc.field;
    let mut bad = Vec::new();
    for (p, q) in ss.pages.iter().zip(&dual.pages) {
        for (&(s, n), g) in &p.groups {
            if g.reps.len() != q.dim(-s, -n) {
                bad.push(format!("E^{}_({s},{n}) = {} but dual has {}", p.r, g.reps.len(), q.dim(-s, -n)));
            }
            let out = p.rank_d(&f, s, n);
            let back = q.rank_d(&f, -(s - p.r), -(n - 1));
            if out != back {
                bad.push(format!("rank d^{} at ({s},{n}) is {out}, dual rank {back}", p.r));
            }
        }
    }
    bad.extend(dual.check_pages());
    bad
}
