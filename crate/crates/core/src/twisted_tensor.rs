//! The twisted tensor product `C(X) ⊗_t C(F)`: differential, diagonal and dual dga.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chain::{koszul, sign, tensor, Basis, Chain, Tensor};
use crate::chainmaps::{aw_cell, boundary_cell, pontryagin, shuffles};
use crate::cobar::{frak_e, induced_map, GroupAlgebra};
use crate::cuts::{cut_faces, IntervalCut};
use crate::error::Result;
use crate::group::GroupWord;
use crate::simplex::Simplex;
use crate::simplicial::{Cell, Simplicial};
use crate::szczarba::szczarba_t;
use crate::twist::{GSpace, TwistedProduct};

pub type Elem<F> = (Simplex, <F as Simplicial>::Cell);
pub type Pair2<F> = (Elem<F>, Elem<F>);

/// `C(X) ⊗_t C(F)` for Szczarba's twisting cochain of a twisted Cartesian product.
pub struct TwistedTensor<'a, F: GSpace> {
    pub tp: &'a TwistedProduct<F>,
}

impl<'a, F: GSpace> TwistedTensor<'a, F>
where
    F::Cell: Basis,
{
    pub fn new(tp: &'a TwistedProduct<F>) -> Self {
        TwistedTensor { tp }
    }

    pub fn t(&self, x: &Simplex) -> Chain<GroupWord> {
        szczarba_t(&self.tp.twist, x)
    }

    /// `a·y = μ_*∇(a ⊗ y)` for a group simplex acting on a fibre simplex.
    pub fn act_cell(&self, a: &GroupWord, y: &F::Cell) -> Chain<F::Cell> {
        let mut out = Chain::zero();
        if a.is_degenerate() || y.is_degenerate() {
            return out;
        }
        let g = &**self.tp.group();
        let f = &self.tp.fibre;
        for (masks, odd) in shuffles(&[a.dim(), y.dim()]) {
            let a2 = g.degenerate_by_mask(masks[0], a);
            let y2 = f.degenerate_by_mask(masks[1], y);
            out.add_signed(f.act(&a2, &y2), odd);
        }
        out
    }

    pub fn act(&self, a: &Chain<GroupWord>, y: &Chain<F::Cell>) -> Chain<F::Cell> {
        let mut out = Chain::zero();
        for (g, k) in a.iter() {
            for (v, l) in y.iter() {
                out.add_assign_scaled(&self.act_cell(g, v), &(k * l));
            }
        }
        out
    }

    /// `δ_t(x ⊗ y) = Σ (−1)^{|x_(1)|} x_(1) ⊗ t(x_(2))·y`.
    pub fn delta_t(&self, x: &Simplex, y: &F::Cell) -> Chain<Elem<F>> {
        let b = &**self.tp.base();
        let mut out = Chain::zero();
        for ((x1, x2), k) in aw_cell(b, x).iter() {
            let ty = self.act(&self.t(x2), &Chain::basis(y.clone()));
            let term = tensor(&Chain::basis(*x1), &ty);
            out.add_assign_scaled(&term, &(k * sign(x1.dim() % 2 == 1)));
        }
        out
    }

    /// `d_t = d ⊗ 1 + 1 ⊗ d − δ_t`.
    pub fn differential(&self, x: &Simplex, y: &F::Cell) -> Chain<Elem<F>> {
        let b = &**self.tp.base();
        let mut out = tensor(&boundary_cell(b, x), &Chain::basis(y.clone()));
        let right = tensor(&Chain::basis(*x), &boundary_cell(&self.tp.fibre, y));
        out.add_assign_scaled(&right, &sign(x.dim() % 2 == 1));
        out.sub_chain(&self.delta_t(x, y));
        out
    }

    pub fn differential_chain(&self, c: &Chain<Elem<F>>) -> Chain<Elem<F>> {
        c.map(|(x, y)| self.differential(x, y))
    }

    pub fn counit(&self, x: &Simplex, y: &F::Cell) -> BigInt {
        if x.dim() == 0 && y.dim() == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }

    pub fn counit_chain(&self, c: &Chain<Elem<F>>) -> BigInt {
        c.iter().map(|((x, y), k)| self.counit(x, y) * k).sum()
    }

    fn t_product(&self, zs: &[Simplex]) -> Chain<GroupWord> {
        let g = &**self.tp.group();
        let mut acc = Chain::basis(g.identity(0));
        for z in zs {
            acc = pontryagin(g, &acc, &self.t(z));
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// The diagonal from its closed formula over interval cuts of the back faces of `x`.
    pub fn diagonal(&self, x: &Simplex, y: &F::Cell) -> Chain<Pair2<F>> {
        let b = &**self.tp.base();
        let f = &self.tp.fibre;
        let (n, m) = (x.dim(), y.dim());
        let mut out = Chain::zero();
        for i in 0..=n {
            let front = b.front(x, i);
            let z = b.back(x, n - i);
            for j in 0..=m {
                let y1 = f.front(y, j);
                let y2 = f.back(y, m - j);
                for k in 0..=i {
                    for p in IntervalCut::enumerate(i, k) {
                        let faces = cut_faces(b, &z, &p).expect("cut of the right size");
                        let last = faces[k];
                        if last.is_degenerate() {
                            continue;
                        }
                        let a = self.act(&self.t_product(&faces[..k]), &Chain::basis(y1.clone()));
                        let odd = p.epsilon() ^ (i % 2 == 1) ^ ((m + j + 1) % 2 == 1 && last.dim() % 2 == 1);
                        let left = tensor(&Chain::basis(front), &a);
                        let right = Chain::basis((last, y2.clone()));
                        out.add_assign_scaled(&tensor(&left, &right), &sign(odd));
                    }
                }
            }
        }
        out
    }

    /// `𝔉 = (f ⊗ 1)𝔈` with `f` the algebra map induced by `t`.
    pub fn frak_f(&self, c: &Simplex) -> Chain<(GroupWord, Simplex)> {
        let b = &**self.tp.base();
        let ga = GroupAlgebra(self.tp.group());
        frak_e(b, c).map(|(w, z)| tensor(&induced_map(&ga, |s| self.t(s), w), &Chain::basis(*z)))
    }

    /// The diagonal as the composite through `Δ_C ⊗ Δ_M`, `𝔉`, the symmetry and the action.
    pub fn diagonal_abstract(&self, x: &Simplex, y: &F::Cell) -> Chain<Pair2<F>> {
        let b = &**self.tp.base();
        let mut out = Chain::zero();
        for ((c1, c2), k) in aw_cell(b, x).iter() {
            let frak = self.frak_f(c2);
            for ((m1, m2), l) in aw_cell(&self.tp.fibre, y).iter() {
                for ((a, ci), r) in frak.iter() {
                    let am = self.act(&Chain::basis(a.clone()), &Chain::basis(m1.clone()));
                    let left = tensor(&Chain::basis(*c1), &am);
                    let right = Chain::basis((*ci, m2.clone()));
                    let coeff = k * l * r * sign(koszul(ci.degree(), m1.degree()));
                    out.add_assign_scaled(&tensor(&left, &right), &coeff);
                }
            }
        }
        out
    }

    pub fn diagonal_chain(&self, c: &Chain<Elem<F>>) -> Chain<Pair2<F>> {
        c.map(|(x, y)| self.diagonal(x, y))
    }

    /// `d(Δv) − Δ(d_t v)` with the tensor differential on both factors.
    pub fn chain_map_defect(&self, x: &Simplex, y: &F::Cell) -> Chain<Pair2<F>> {
        let d = |e: &Elem<F>| self.differential(&e.0, &e.1);
        let lhs = crate::chain::tensor_differential(&self.diagonal(x, y), d, d);
        lhs.minus(&self.diagonal_chain(&self.differential(x, y)))
    }

    /// `(Δ ⊗ 1)Δ − (1 ⊗ Δ)Δ` as triples.
    pub fn coassociativity_defect(&self, x: &Simplex, y: &F::Cell) -> Chain<Tensor<Elem<F>>> {
        let dv = self.diagonal(x, y);
        let left = dv.map(|(a, b)| self.diagonal(&a.0, &a.1).map(|(a1, a2)| Chain::basis(Tensor(vec![a1.clone(), a2.clone(), b.clone()]))));
        let right = dv.map(|(a, b)| self.diagonal(&b.0, &b.1).map(|(b1, b2)| Chain::basis(Tensor(vec![a.clone(), b1.clone(), b2.clone()]))));
        left.minus(&right)
    }

    /// `(ε ⊗ 1)Δ v − v` and `(1 ⊗ ε)Δ v − v`.
    pub fn counit_defects(&self, x: &Simplex, y: &F::Cell) -> (Chain<Elem<F>>, Chain<Elem<F>>) {
        let dv = self.diagonal(x, y);
        let v = Chain::basis((*x, y.clone()));
        let left = dv.map(|(a, b)| Chain::term(b.clone(), self.counit(&a.0, &a.1)));
        let right = dv.map(|(a, b)| Chain::term(a.clone(), self.counit(&b.0, &b.1)));
        (left.minus(&v), right.minus(&v))
    }

    /// Basis `x ⊗ y` of total degree `d`.
    pub fn basis(&self, d: usize) -> Result<Vec<Elem<F>>> {
        let mut out = Vec::new();
        for p in 0..=d {
            let xs = self.tp.base().nondegenerate(p);
            if xs.is_empty() {
                continue;
            }
            let ys = self.tp.fibre.basis(d - p)?;
            for x in &xs {
                for y in &ys {
                    out.push((*x, y.clone()));
                }
            }
        }
        Ok(out)
    }
}

/// `⟨φ, c⟩` for a dual element and a chain on the same basis.
pub fn pair<B: Basis>(a: &Chain<B>, c: &Chain<B>) -> BigInt {
    c.iter().map(|(b, k)| a.coeff(b) * k).sum()
}

/// The linear dual of a degreewise-finite twisted tensor product, with the
/// product transposed from the diagonal and `d* φ = −(−1)^{|φ|} φ∘d_t`.
/// Elements are chains on the dual basis, indexed by the basis they dualize.
pub struct DualDga<'a, F: GSpace> {
    pub tt: TwistedTensor<'a, F>,
    pub max_degree: usize,
    bases: Vec<Vec<Elem<F>>>,
}

impl<'a, F: GSpace> DualDga<'a, F>
where
    F::Cell: Basis,
{
    pub fn new(tp: &'a TwistedProduct<F>, max_degree: usize) -> Result<Self> {
        let tt = TwistedTensor::new(tp);
        let bases = (0..=max_degree + 1).map(|d| tt.basis(d)).collect::<Result<Vec<_>>>()?;
        Ok(DualDga { tt, max_degree, bases })
    }

    pub fn basis(&self, d: usize) -> &[Elem<F>] {
        &self.bases[d]
    }

    /// `1 = ε_C ⊗ ε_M`.
    pub fn unit(&self) -> Chain<Elem<F>> {
        Chain::from_terms(self.bases[0].iter().map(|e| (e.clone(), self.tt.counit(&e.0, &e.1))))
    }

    /// `⟨φ·ψ, c⟩ = Σ (−1)^{|ψ||c′|} φ(c′)ψ(c″)` over `Δc = Σ c′ ⊗ c″`.
    pub fn mul(&self, a: &Chain<Elem<F>>, b: &Chain<Elem<F>>) -> Chain<Elem<F>> {
        let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
            return Chain::zero();
        };
        let d = (da + db) as usize;
        if d > self.max_degree {
            return Chain::zero();
        }
        let mut out = Chain::zero();
        for c in &self.bases[d] {
            let mut val = BigInt::zero();
            for ((c1, c2), k) in self.tt.diagonal(&c.0, &c.1).iter() {
                let v = a.coeff(c1) * b.coeff(c2);
                if !v.is_zero() {
                    val += k * v * sign(koszul(db, c1.degree()));
                }
            }
            out.add_term(c.clone(), val);
        }
        out
    }

    pub fn d(&self, a: &Chain<Elem<F>>) -> Chain<Elem<F>> {
        let Some(da) = a.degree() else {
            return Chain::zero();
        };
        let d = da as usize + 1;
        let mut out = Chain::zero();
        for c in &self.bases[d] {
            let val: BigInt = self.tt.differential(&c.0, &c.1).iter().map(|(b, k)| a.coeff(b) * k).sum();
            out.add_term(c.clone(), -val * sign(da % 2 == 1));
        }
        out
    }

    /// `⟨φ ⊗ ψ, Δc⟩` with the Koszul sign.
    pub fn pair2(&self, a: &Chain<Elem<F>>, b: &Chain<Elem<F>>, c: &Elem<F>) -> BigInt {
        let db = b.degree().unwrap_or(0);
        self.tt.diagonal(&c.0, &c.1).iter().map(|((c1, c2), k)| k * a.coeff(c1) * b.coeff(c2) * sign(koszul(db, c1.degree()))).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn double_cover_differential() {
        let tp = models::double_cover();
        let tt = TwistedTensor::new(&tp);
        let e = tp.base().generator("e").unwrap();
        let pt = tp.base().generator("pt").unwrap();
        let g = tp.group();
        let d = tt.differential(&e, &g.identity(0));
        let expected = Chain::basis((pt, g.identity(0))).minus(&Chain::basis((pt, g.element(0, 1))));
        assert_eq!(d, expected);
    }

    #[test]
    fn differential_squares_to_zero() {
        let tp = models::simplex_cover(3, 3);
        let tt = TwistedTensor::new(&tp);
        for d in 0..=3 {
            for (x, y) in tt.basis(d).unwrap() {
                assert!(tt.differential_chain(&tt.differential(&x, &y)).is_zero());
            }
        }
        let tp = models::swap_fibre_bundle();
        let tt = TwistedTensor::new(&tp);
        for d in 0..=2 {
            for (x, y) in tt.basis(d).unwrap() {
                assert!(tt.differential_chain(&tt.differential(&x, &y)).is_zero());
            }
        }
    }

    #[test]
    fn explicit_and_abstract_diagonals_agree() {
        let tp = models::simplex_cover(3, 2);
        let tt = TwistedTensor::new(&tp);
        for d in 0..=3 {
            for (x, y) in tt.basis(d).unwrap() {
                assert_eq!(tt.diagonal(&x, &y), tt.diagonal_abstract(&x, &y), "{x:?} ⊗ {y:?}");
            }
        }
    }

    #[test]
    fn diagonal_is_a_coassociative_chain_map() {
        let tp = models::simplex_cover(3, 2);
        let tt = TwistedTensor::new(&tp);
        for d in 0..=3 {
            for (x, y) in tt.basis(d).unwrap() {
                assert!(tt.chain_map_defect(&x, &y).is_zero(), "{x:?} ⊗ {y:?}");
                assert!(tt.coassociativity_defect(&x, &y).is_zero());
                let (l, r) = tt.counit_defects(&x, &y);
                assert!(l.is_zero() && r.is_zero());
            }
        }
    }

    #[test]
    fn loop_group_fibre() {
        let tw = models::loop_twist(models::collapsed_simplex(3, 0), 5);
        let tp = TwistedProduct::new(tw.clone(), crate::twist::GroupFibre { group: tw.group().clone(), word_bound: Some(1) }).unwrap();
        let tt = TwistedTensor::new(&tp);
        for d in 0..=3 {
            for (x, y) in tt.basis(d).unwrap() {
                assert!(tt.differential_chain(&tt.differential(&x, &y)).is_zero());
                assert_eq!(tt.diagonal(&x, &y), tt.diagonal_abstract(&x, &y));
                assert!(tt.chain_map_defect(&x, &y).is_zero());
            }
        }
    }

    #[test]
    fn dual_dga_axioms() {
        let tp = models::double_cover();
        let dual = DualDga::new(&tp, 1).unwrap();
        let one = dual.unit();
        let all: Vec<Chain<Elem<crate::twist::GroupFibre>>> = (0..=1).flat_map(|d| dual.basis(d).to_vec()).map(Chain::basis).collect();
        for a in &all {
            assert_eq!(&dual.mul(&one, a), a);
            assert_eq!(&dual.mul(a, &one), a);
            for b in &all {
                let ab = dual.mul(a, b);
                let lhs = dual.d(&ab);
                let mut rhs = dual.mul(&dual.d(a), b);
                let s = sign(a.degree().unwrap() % 2 == 1);
                rhs.add_assign_scaled(&dual.mul(a, &dual.d(b)), &s);
                assert_eq!(lhs, rhs);
                for c in &all {
                    assert_eq!(dual.mul(&ab, c), dual.mul(a, &dual.mul(b, c)));
                }
                for c in (0..=1).flat_map(|d| dual.basis(d).to_vec()) {
                    assert_eq!(pair(&ab, &Chain::basis(c.clone())), dual.pair2(a, b, &c));
                }
            }
        }
    }
}
