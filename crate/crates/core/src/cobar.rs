//! The reduced cobar construction `ΩC(X)` as a dg bialgebra, the Baues diagonal,
//! and the calculus of twisting cochains.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{sign, tensor, Basis, Chain};
use crate::chainmaps::{aw_cell, boundary_cell, pontryagin_cell, tensor_algebra_product};
use crate::cuts::IntervalCut;
use crate::error::{Error, Result};
use crate::group::{GroupWord, SimplicialGroup};
use crate::presentation::Presentation;
use crate::simplex::Simplex;
use crate::simplicial::Simplicial;

/// `[c_1|…|c_m]`; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct CobarWord(pub Vec<Simplex>);

impl CobarWord {
    pub fn unit() -> Self {
        CobarWord(Vec::new())
    }

    pub fn new(letters: Vec<Simplex>) -> Result<Self> {
        if letters.iter().any(|c| c.dim() == 0) {
            return Err(Error::DegreeZeroLetter);
        }
        Ok(CobarWord(letters))
    }

    pub fn letter(c: Simplex) -> Self {
        assert!(c.dim() >= 1, "cobar letters have positive dimension");
        CobarWord(vec![c])
    }

    pub fn concat(&self, other: &CobarWord) -> CobarWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        CobarWord(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Basis for CobarWord {
    fn degree(&self) -> i64 {
        self.0.iter().map(|c| c.dim() as i64 - 1).sum()
    }
    fn vanishes(&self) -> bool {
        self.0.iter().any(|c| c.is_degenerate())
    }
}

fn word_of(letters: &[Simplex]) -> CobarWord {
    CobarWord(letters.to_vec())
}

/// `d[c] = −[dc] + Σ (−1)^{|c′|} [c′|c″]` over the reduced diagonal.
pub fn letter_differential(x: &Presentation, c: &Simplex) -> Chain<CobarWord> {
    let n = c.dim();
    let mut out = Chain::zero();
    if c.is_degenerate() || n < 2 {
        return out;
    }
    for (face, k) in boundary_cell(x, c).iter() {
        out.add_term(CobarWord::letter(*face), -k.clone());
    }
    for k in 1..n {
        let front = x.front(c, n - k);
        let back = x.back(c, k);
        out.add_signed(CobarWord(vec![front, back]), k % 2 == 1);
    }
    out
}

/// The cobar differential, extended as a derivation.
pub fn differential(x: &Presentation, w: &CobarWord) -> Chain<CobarWord> {
    let mut out = Chain::zero();
    let mut before = 0i64;
    for (i, c) in w.0.iter().enumerate() {
        let dc = letter_differential(x, c);
        let pre = word_of(&w.0[..i]);
        let post = word_of(&w.0[i + 1..]);
        let k = sign(before & 1 == 1);
        for (mid, coeff) in dc.iter() {
            out.add_term(pre.concat(mid).concat(&post), coeff * &k);
        }
        before += c.dim() as i64 - 1;
    }
    out
}

pub fn differential_chain(x: &Presentation, c: &Chain<CobarWord>) -> Chain<CobarWord> {
    c.map(|w| differential(x, w))
}

/// The terms `(ε(p), [c^p_1|…|c^p_k], c^p_{k+1})` over all cuts of `[0..dim c]`,
/// with vanishing terms dropped.
pub fn cut_terms(x: &Presentation, c: &Simplex) -> Vec<(bool, CobarWord, Simplex)> {
    let mut out = Vec::new();
    let n = c.dim();
    for k in 0..=n {
        for p in IntervalCut::enumerate(n, k) {
            let mut faces = crate::cuts::cut_faces(x, c, &p).expect("cut of the right size");
            if faces.iter().any(|f| f.is_degenerate()) {
                continue;
            }
            let last = faces.pop().unwrap();
            out.push((p.epsilon(), CobarWord(faces), last));
        }
    }
    out
}

/// `Δ[c] = [c]⊗1 + Σ_{k,p} (−1)^{ε(p)} [c^p_1|…|c^p_k] ⊗ [c^p_{k+1}]`.
pub fn letter_diagonal(x: &Presentation, c: &Simplex) -> Chain<(CobarWord, CobarWord)> {
    let mut out = Chain::zero();
    if c.is_degenerate() {
        return out;
    }
    out.add_term((CobarWord::letter(*c), CobarWord::unit()), BigInt::one());
    for (eps, w, last) in cut_terms(x, c) {
        out.add_signed((w, CobarWord::letter(last)), eps);
    }
    out
}

fn concat_chain(a: &CobarWord, b: &CobarWord) -> Chain<CobarWord> {
    Chain::basis(a.concat(b))
}

/// The diagonal on words: the product of the letter diagonals in `ΩC ⊗ ΩC`.
pub fn diagonal(x: &Presentation, w: &CobarWord) -> Chain<(CobarWord, CobarWord)> {
    multiplicative_extension(w, |c| letter_diagonal(x, c))
}

pub fn diagonal_chain(x: &Presentation, c: &Chain<CobarWord>) -> Chain<(CobarWord, CobarWord)> {
    c.map(|w| diagonal(x, w))
}

fn multiplicative_extension(
    w: &CobarWord,
    mut on_letter: impl FnMut(&Simplex) -> Chain<(CobarWord, CobarWord)>,
) -> Chain<(CobarWord, CobarWord)> {
    let mut acc = Chain::basis((CobarWord::unit(), CobarWord::unit()));
    for c in &w.0 {
        acc = tensor_algebra_product(&acc, &on_letter(c), concat_chain, concat_chain);
    }
    acc
}

/// Baues' diagonal on a letter of a 1-reduced set: a term for every
/// `b ⊆ {1..n−1}`, signed by the shuffle `({1..n−1}∖b, b)`.
pub fn baues_letter(x: &Presentation, c: &Simplex) -> Result<Chain<(CobarWord, CobarWord)>> {
    if !x.is_one_reduced() {
        return Err(Error::NotOneReduced);
    }
    let n = c.dim();
    let mut out = Chain::zero();
    if c.is_degenerate() {
        return Ok(out);
    }
    out.add_term((CobarWord::letter(*c), CobarWord::unit()), BigInt::one());
    let inner = n.saturating_sub(1);
    for bits in 0u64..(1u64 << inner) {
        let b: Vec<usize> = (1..n).filter(|v| bits >> (v - 1) & 1 == 1).collect();
        let mut verts = vec![0];
        verts.extend(&b);
        verts.push(n);
        let mut gaps = Vec::new();
        for w in verts.windows(2) {
            if w[1] - w[0] >= 2 {
                gaps.push(x.pullback(c, &(w[0]..=w[1]).collect::<Vec<_>>())?);
            }
        }
        let right = x.pullback(c, &verts)?;
        let complement: Vec<usize> = (1..n).filter(|v| !b.contains(v)).collect();
        let inversions = complement.iter().map(|&u| b.iter().filter(|&&v| u > v).count()).sum::<usize>();
        out.add_signed((CobarWord(gaps), CobarWord::letter(right)), inversions % 2 == 1);
    }
    Ok(out)
}

pub fn baues_diagonal(x: &Presentation, w: &CobarWord) -> Result<Chain<(CobarWord, CobarWord)>> {
    let mut err = None;
    let out = multiplicative_extension(w, |c| match baues_letter(x, c) {
        Ok(v) => v,
        Err(e) => {
            err = Some(e);
            Chain::zero()
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

pub fn counit(w: &CobarWord) -> BigInt {
    if w.is_empty() {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// `𝔈(c) = 1⊗c + Σ (−1)^{ε(p)+|w|} [c^p_1|…|c^p_k] ⊗ c^p_{k+1}` (and `1⊗v` on vertices).
pub fn frak_e(x: &Presentation, c: &Simplex) -> Chain<(CobarWord, Simplex)> {
    let mut out = Chain::zero();
    if c.is_degenerate() {
        return out;
    }
    if c.dim() == 0 {
        out.add_term((CobarWord::unit(), *c), BigInt::one());
        return out;
    }
    for (eps, w, last) in cut_terms(x, c) {
        let odd = eps ^ (w.degree() & 1 == 1);
        out.add_signed((w, last), odd);
    }
    out
}

/// A differential graded algebra with a distinguished basis.
pub trait Dga {
    type B: Basis;
    fn unit(&self) -> Chain<Self::B>;
    fn mul(&self, a: &Self::B, b: &Self::B) -> Chain<Self::B>;
    fn d(&self, a: &Self::B) -> Chain<Self::B>;
    fn counit(&self, a: &Self::B) -> BigInt;

    fn counit_chain(&self, a: &Chain<Self::B>) -> BigInt {
        a.iter().map(|(b, k)| self.counit(b) * k).sum()
    }

    fn mul_chains(&self, a: &Chain<Self::B>, b: &Chain<Self::B>) -> Chain<Self::B> {
        let mut out = Chain::zero();
        for (x, k) in a.iter() {
            for (y, l) in b.iter() {
                out.add_assign_scaled(&self.mul(x, y), &(k * l));
            }
        }
        out
    }

    fn d_chain(&self, a: &Chain<Self::B>) -> Chain<Self::B> {
        a.map(|b| self.d(b))
    }
}

pub struct CobarAlgebra<'a>(pub &'a Presentation);

impl Dga for CobarAlgebra<'_> {
    type B = CobarWord;
    fn unit(&self) -> Chain<CobarWord> {
        Chain::basis(CobarWord::unit())
    }
    fn mul(&self, a: &CobarWord, b: &CobarWord) -> Chain<CobarWord> {
        Chain::basis(a.concat(b))
    }
    fn d(&self, a: &CobarWord) -> Chain<CobarWord> {
        differential(self.0, a)
    }
    fn counit(&self, a: &CobarWord) -> BigInt {
        counit(a)
    }
}

/// `C(G)` with the Pontryagin product.
pub struct GroupAlgebra<'a>(pub &'a SimplicialGroup);

impl Dga for GroupAlgebra<'_> {
    type B = GroupWord;
    fn unit(&self) -> Chain<GroupWord> {
        Chain::basis(self.0.identity(0))
    }
    fn mul(&self, a: &GroupWord, b: &GroupWord) -> Chain<GroupWord> {
        pontryagin_cell(self.0, a, b)
    }
    fn d(&self, a: &GroupWord) -> Chain<GroupWord> {
        boundary_cell(self.0, a)
    }
    fn counit(&self, a: &GroupWord) -> BigInt {
        if a.level() == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }
}

/// `(f ∪ g)(c) = Σ (−1)^{|g||c′|} f(c′) g(c″)`.
pub fn cup<A: Dga>(
    x: &Presentation,
    a: &A,
    f: impl Fn(&Simplex) -> Chain<A::B>,
    g: impl Fn(&Simplex) -> Chain<A::B>,
    deg_g: i64,
    c: &Simplex,
) -> Chain<A::B> {
    let mut out = Chain::zero();
    for ((c1, c2), k) in aw_cell(x, c).iter() {
        let mut term = a.mul_chains(&f(c1), &g(c2));
        if deg_g & 1 == 1 && c1.dim() % 2 == 1 {
            term = term.neg();
        }
        out.add_assign_scaled(&term, k);
    }
    out
}

/// `D(f) = d_A f − (−1)^{|f|} f d`.
pub fn hom_differential<A: Dga>(x: &Presentation, a: &A, f: impl Fn(&Simplex) -> Chain<A::B>, deg_f: i64, c: &Simplex) -> Chain<A::B> {
    let lhs = a.d_chain(&f(c));
    let rhs = boundary_cell(x, c).map(|b| f(b));
    if deg_f & 1 == 1 {
        lhs.plus(&rhs)
    } else {
        lhs.minus(&rhs)
    }
}

#[derive(Clone, Debug)]
pub struct TwistingFailure<B: Basis> {
    pub simplex: Simplex,
    pub dt: Chain<B>,
    pub cup: Chain<B>,
}

#[derive(Clone, Debug)]
pub struct TwistingReport<B: Basis> {
    pub checked: usize,
    pub failures: Vec<TwistingFailure<B>>,
}

impl<B: Basis> TwistingReport<B> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates `D(t) − t ∪ t` on every simplex (degenerate ones included) of
/// dimension `≤ max_dim`, together with the side condition `ε t = 0`.
pub fn check_twisting<A: Dga>(x: &Presentation, a: &A, t: impl Fn(&Simplex) -> Chain<A::B>, max_dim: usize) -> TwistingReport<A::B> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 0..=max_dim {
        for c in x.simplices(n) {
            checked += 1;
            let dt = hom_differential(x, a, &t, -1, &c);
            let tt = cup(x, a, &t, &t, -1, &c);
            let eps_bad = !a.counit_chain(&t(&c)).is_zero();
            if dt != tt || eps_bad {
                failures.push(TwistingFailure { simplex: c, dt, cup: tt });
            }
        }
    }
    TwistingReport { checked, failures }
}

/// The dga map `[c_1|…|c_k] ↦ t(c_1)⋯t(c_k)` induced by a twisting cochain.
pub fn induced_map<A: Dga>(a: &A, t: impl Fn(&Simplex) -> Chain<A::B>, w: &CobarWord) -> Chain<A::B> {
    let mut acc = a.unit();
    for c in &w.0 {
        acc = a.mul_chains(&acc, &t(c));
    }
    acc
}

/// `(Δ_Ω ⊗ 1)𝔈(c) − (1 ⊗ 𝔈)𝔈(c)`, reassociated to `w ⊗ (w′ ⊗ c′)`.
pub fn frak_e_coassociativity_defect(x: &Presentation, c: &Simplex) -> Chain<(CobarWord, (CobarWord, Simplex))> {
    let e = frak_e(x, c);
    let mut out = Chain::zero();
    for ((w, z), k) in e.iter() {
        for ((w1, w2), l) in diagonal(x, w).iter() {
            out.add_term((w1.clone(), (w2.clone(), *z)), k * l);
        }
        let inner = frak_e(x, z);
        let t = tensor(&Chain::basis(w.clone()), &inner);
        out.add_assign_scaled(&t, &-k.clone());
    }
    out
}

/// The canonical twisting cochain `c ↦ [c]` (zero on vertices).
pub fn canonical_cochain(c: &Simplex) -> Chain<CobarWord> {
    if c.dim() == 0 {
        Chain::zero()
    } else {
        Chain::basis(CobarWord::letter(*c))
    }
}

/// All words of total degree `≤ max_degree` with at most `max_len` letters.
pub fn words_up_to(x: &Presentation, max_degree: i64, max_len: usize) -> Vec<CobarWord> {
    let letters: Vec<Simplex> = (1..=x.max_dim()).flat_map(|d| x.nondegenerate(d)).filter(|c| c.dim() as i64 - 1 <= max_degree).collect();
    let mut out = vec![CobarWord::unit()];
    let mut frontier = vec![CobarWord::unit()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for c in &letters {
                let v = w.concat(&CobarWord::letter(*c));
                if v.degree() <= max_degree {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn two_sided(x: &Presentation, w: &CobarWord) -> Chain<(CobarWord, CobarWord)> {
        let d = |v: &CobarWord| differential(x, v);
        crate::chain::tensor_differential(&diagonal(x, w), d, d)
    }

    #[test]
    fn differential_squares_to_zero() {
        let x = models::collapsed_simplex(5, 1);
        for w in words_up_to(&x, 4, 3) {
            assert!(differential_chain(&x, &differential(&x, &w)).is_zero(), "{w:?}");
        }
    }

    #[test]
    fn primitive_two_simplex() {
        let x = models::collapsed_simplex(2, 1);
        let c = x.generator("x012").unwrap();
        assert!(letter_differential(&x, &c).is_zero());
        let d = letter_diagonal(&x, &c);
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&(CobarWord::unit(), CobarWord::letter(c))), BigInt::one());
    }

    #[test]
    fn diagonal_is_a_chain_map_and_coassociative() {
        let x = models::collapsed_simplex(4, 1);
        for w in words_up_to(&x, 4, 3) {
            let lhs = diagonal_chain(&x, &differential(&x, &w));
            assert_eq!(lhs, two_sided(&x, &w), "chain map on {w:?}");
            let dw = diagonal(&x, &w);
            let left = dw.map(|(a, b)| {
                diagonal(&x, a).map(|(a1, a2)| Chain::basis(crate::chain::Tensor(vec![a1.clone(), a2.clone(), b.clone()])))
            });
            let right = dw.map(|(a, b)| {
                diagonal(&x, b).map(|(b1, b2)| Chain::basis(crate::chain::Tensor(vec![a.clone(), b1.clone(), b2.clone()])))
            });
            assert_eq!(left, right, "coassociativity on {w:?}");
        }
    }

    #[test]
    fn baues_agrees_on_collapsed_simplices() {
        for n in 2..=5 {
            let x = models::collapsed_simplex(n, 1);
            for d in 2..=n {
                for c in x.nondegenerate(d) {
                    assert_eq!(letter_diagonal(&x, &c), baues_letter(&x, &c).unwrap(), "n={n} {}", x.render(&c));
                }
            }
        }
    }

    #[test]
    fn frak_e_identity() {
        let x = models::collapsed_simplex(5, 1);
        for d in 0..=5 {
            for c in x.nondegenerate(d) {
                assert!(frak_e_coassociativity_defect(&x, &c).is_zero());
            }
        }
    }

    #[test]
    fn canonical_cochain_is_twisting_and_mutation_fails() {
        let x = models::collapsed_simplex(3, 0);
        let a = CobarAlgebra(&x);
        assert!(check_twisting(&x, &a, canonical_cochain, 4).passed());
        let bad = |c: &Simplex| if c.dim() == 2 { canonical_cochain(c).neg() } else { canonical_cochain(c) };
        let r = check_twisting(&x, &a, bad, 3);
        assert!(!r.passed());
        assert_eq!(r.failures[0].simplex.dim(), 2);
    }
}
