//! Boundary, Alexander–Whitney diagonal, shuffle map and Pontryagin product on
//! normalized chains.

use num_bigint::BigInt;
use num_traits::One;

use crate::chain::{tensor, Basis, Chain};
use crate::error::{Error, Result};
use crate::group::{GroupWord, SimplicialGroup};
use crate::presentation::Presentation;
use crate::simplex::Simplex;
use crate::simplicial::{Cell, Pair, Simplicial};

/// `∂x = Σ (−1)^i ∂_i x` on a single simplex.
pub fn boundary_cell<S>(s: &S, x: &S::Cell) -> Chain<S::Cell>
where
    S: Simplicial,
    S::Cell: Basis,
{
    let mut out = Chain::zero();
    let n = x.dim();
    if n == 0 || x.is_degenerate() {
        return out;
    }
    for i in 0..=n {
        out.add_signed(s.face(i, x), i % 2 == 1);
    }
    out
}

pub fn boundary<S>(s: &S, c: &Chain<S::Cell>) -> Chain<S::Cell>
where
    S: Simplicial,
    S::Cell: Basis,
{
    c.map(|x| boundary_cell(s, x))
}

/// `Δx = Σ_k x(0..k) ⊗ x(k..n)`.
pub fn aw_cell<S>(s: &S, x: &S::Cell) -> Chain<(S::Cell, S::Cell)>
where
    S: Simplicial,
    S::Cell: Basis,
{
    let n = x.dim();
    let mut out = Chain::zero();
    if x.is_degenerate() {
        return out;
    }
    for k in 0..=n {
        out.add_term((s.front(x, n - k), s.back(x, k)), BigInt::one());
    }
    out
}

pub fn aw<S>(s: &S, c: &Chain<S::Cell>) -> Chain<(S::Cell, S::Cell)>
where
    S: Simplicial,
    S::Cell: Basis,
{
    c.map(|x| aw_cell(s, x))
}

/// The shuffles of `(q_1, …, q_k)`: for each, the degeneracy masks `ᾱ_s`
/// applied to the factors and whether the signature is odd.
pub fn shuffles(q: &[usize]) -> Vec<(Vec<u64>, bool)> {
    let total: usize = q.iter().sum();
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; total];
    fn rec(pos: usize, q: &[usize], used: &mut Vec<usize>, assign: &mut Vec<usize>, out: &mut Vec<(Vec<u64>, bool)>) {
        if pos == assign.len() {
            let k = q.len();
            let total = assign.len();
            let full = if total == 0 { 0 } else { (1u64 << total) - 1 };
            let mut masks = vec![full; k];
            for (j, &s) in assign.iter().enumerate() {
                masks[s] &= !(1 << j);
            }
            // Signature of the permutation listing α_1, then α_2, …
            let mut inversions = 0usize;
            for a in 0..total {
                for b in a + 1..total {
                    if assign[a] > assign[b] {
                        inversions += 1;
                    }
                }
            }
            out.push((masks, inversions % 2 == 1));
            return;
        }
        for s in 0..q.len() {
            if used[s] < q[s] {
                used[s] += 1;
                assign[pos] = s;
                rec(pos + 1, q, used, assign, out);
                used[s] -= 1;
            }
        }
    }
    rec(0, q, &mut vec![0; q.len()], &mut assign, &mut out);
    out
}

/// `∇(x ⊗ y) = Σ_{(μ,ν)} sign · (s_ν x, s_μ y)` into the Cartesian product.
pub fn shuffle_cell<X, Y>(xs: &X, ys: &Y, x: &X::Cell, y: &Y::Cell) -> Chain<Pair<X::Cell, Y::Cell>>
where
    X: Simplicial,
    Y: Simplicial,
{
    let mut out = Chain::zero();
    if x.is_degenerate() || y.is_degenerate() {
        return out;
    }
    for (masks, odd) in shuffles(&[x.dim(), y.dim()]) {
        let a = xs.degenerate_by_mask(masks[0], x);
        let b = ys.degenerate_by_mask(masks[1], y);
        out.add_signed(Pair(a, b), odd);
    }
    out
}

pub fn shuffle<X, Y>(xs: &X, ys: &Y, c: &Chain<(X::Cell, Y::Cell)>) -> Chain<Pair<X::Cell, Y::Cell>>
where
    X: Simplicial,
    Y: Simplicial,
    X::Cell: Basis,
    Y::Cell: Basis,
{
    c.map(|(x, y)| shuffle_cell(xs, ys, x, y))
}

/// `μ_*∇` on two group simplices.
pub fn pontryagin_cell(g: &SimplicialGroup, a: &GroupWord, b: &GroupWord) -> Chain<GroupWord> {
    let mut out = Chain::zero();
    if a.is_degenerate() || b.is_degenerate() {
        return out;
    }
    for (masks, odd) in shuffles(&[a.dim(), b.dim()]) {
        let x = g.degenerate_by_mask(masks[0], a);
        let y = g.degenerate_by_mask(masks[1], b);
        out.add_signed(g.mul(&x, &y), odd);
    }
    out
}

pub fn pontryagin(g: &SimplicialGroup, a: &Chain<GroupWord>, b: &Chain<GroupWord>) -> Chain<GroupWord> {
    let mut out = Chain::zero();
    for (x, k) in a.iter() {
        for (y, l) in b.iter() {
            out.add_assign_scaled(&pontryagin_cell(g, x, y), &(k * l));
        }
    }
    out
}

/// The `m`-fold product `μ_*∇(a_1 ⊗ … ⊗ a_m)` computed directly from the
/// `m`-fold shuffles; `m = 0` gives the unit.
pub fn pontryagin_iterated(g: &SimplicialGroup, factors: &[GroupWord]) -> Chain<GroupWord> {
    if factors.is_empty() {
        return Chain::basis(g.identity(0));
    }
    let mut out = Chain::zero();
    if factors.iter().any(|a| a.is_degenerate()) {
        return out;
    }
    let q: Vec<usize> = factors.iter().map(|a| a.dim()).collect();
    let level: usize = q.iter().sum();
    for (masks, odd) in shuffles(&q) {
        let mut acc = g.identity(level);
        for (a, m) in factors.iter().zip(&masks) {
            acc = g.mul(&acc, &g.degenerate_by_mask(*m, a));
        }
        out.add_signed(acc, odd);
    }
    out
}

/// `ε(Σ a_v v) = Σ a_v` in degree 0, zero above.
pub fn augment<B: Basis>(c: &Chain<B>) -> BigInt {
    c.iter().filter(|(b, _)| b.degree() == 0).map(|(_, k)| k.clone()).sum()
}

/// `n · *` for the basepoint of a presentation.
pub fn coaugment(x: &Presentation, n: &BigInt) -> Result<Chain<Simplex>> {
    let b = x.basepoint().ok_or(Error::NoBasepoint)?;
    Ok(Chain::term(Simplex::generator(b, 0), n.clone()))
}

/// `(a ⊗ b)(c ⊗ d) = (−1)^{|b||c|} ac ⊗ bd` for algebras given by their
/// products on basis elements.
pub fn tensor_algebra_product<A: Basis, B: Basis>(
    x: &Chain<(A, B)>,
    y: &Chain<(A, B)>,
    mut mul_a: impl FnMut(&A, &A) -> Chain<A>,
    mut mul_b: impl FnMut(&B, &B) -> Chain<B>,
) -> Chain<(A, B)> {
    let mut out = Chain::zero();
    for ((a, b), k) in x.iter() {
        for ((c, d), l) in y.iter() {
            let mut coeff = k * l;
            if b.degree() & 1 == 1 && c.degree() & 1 == 1 {
                coeff = -coeff;
            }
            let t = tensor(&mul_a(a, c), &mul_b(b, d));
            out.add_assign_scaled(&t, &coeff);
        }
    }
    out
}

/// Checks the bialgebra compatibility `Δ(ab) = Δ(a)Δ(b)` of `C(G)` on a pair.
pub fn bialgebra_defect(g: &SimplicialGroup, a: &GroupWord, b: &GroupWord) -> Chain<(GroupWord, GroupWord)> {
    let lhs = aw(g, &pontryagin_cell(g, a, b));
    let rhs = tensor_algebra_product(&aw_cell(g, a), &aw_cell(g, b), |x, y| pontryagin_cell(g, x, y), |x, y| pontryagin_cell(g, x, y));
    lhs.minus(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::simplicial::Product;
    use std::sync::Arc;

    #[test]
    fn shuffle_of_two_edges() {
        let x = models::minimal_sphere(1);
        let e = x.generator("e").unwrap();
        let c = shuffle_cell(&x, &x, &e, &e);
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&Pair(e.degeneracy(1), e.degeneracy(0))), BigInt::one());
        assert_eq!(c.coeff(&Pair(e.degeneracy(0), e.degeneracy(1))), -BigInt::one());
    }

    #[test]
    fn shuffle_counts_are_multinomial() {
        assert_eq!(shuffles(&[2, 1, 1]).len(), 12);
        assert_eq!(shuffles(&[3, 0]).len(), 1);
    }

    #[test]
    fn boundary_squares_to_zero_on_simplex_and_product() {
        let d = models::standard_simplex(3);
        for n in 1..=4 {
            for x in d.simplices(n) {
                assert!(boundary(&d, &boundary_cell(&d, &x)).is_zero());
            }
        }
        let p = Product(&d, &d);
        let c = shuffle_cell(&d, &d, &d.generator("x01").unwrap(), &d.generator("x123").unwrap());
        assert!(boundary(&p, &boundary(&p, &c)).is_zero());
    }

    #[test]
    fn aw_on_minimal_circle() {
        let x = models::minimal_sphere(1);
        let e = x.generator("e").unwrap();
        let pt = x.generator("pt").unwrap();
        let c = aw_cell(&x, &e);
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&(pt, e)), BigInt::one());
        assert_eq!(c.coeff(&(e, pt)), BigInt::one());
    }

    #[test]
    fn group_ring_square() {
        let g = SimplicialGroup::finite(crate::group::FiniteGroup::cyclic(2));
        let one = g.element(0, 0);
        let gen = g.element(0, 1);
        let u = Chain::basis(gen.clone()).minus(&Chain::basis(one.clone()));
        let sq = pontryagin(&g, &u, &u);
        assert_eq!(sq.coeff(&one), BigInt::from(2));
        assert_eq!(sq.coeff(&gen), BigInt::from(-2));
    }

    #[test]
    fn loop_group_chains_form_a_bialgebra() {
        let x = Arc::new(models::collapsed_simplex(3, 0));
        let g = SimplicialGroup::loop_group(x, 5).unwrap();
        let words: Vec<GroupWord> = (0..=1).flat_map(|l| g.nondegenerate(l, Some(1)).unwrap()).collect();
        for a in &words {
            for b in &words {
                assert!(bialgebra_defect(&g, a, b).is_zero());
            }
        }
    }
}
