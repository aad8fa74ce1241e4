//! Finitely supported integer chains on an ordered basis.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::btree_map::{self, BTreeMap};
use std::fmt::Debug;

use crate::group::GroupWord;
use crate::simplex::Simplex;
use crate::simplicial::{Cell, Pair};

/// A basis element of a graded free module. Elements that `vanish` are zero in
/// normalized chains and are never stored.
pub trait Basis: Clone + Ord + Debug {
    fn degree(&self) -> i64;
    fn vanishes(&self) -> bool;
}

macro_rules! cell_basis {
    ($($t:ty),*) => {$(
        impl Basis for $t {
            fn degree(&self) -> i64 {
                Cell::dim(self) as i64
            }
            fn vanishes(&self) -> bool {
                Cell::is_degenerate(self)
            }
        }
    )*};
}

cell_basis!(Simplex, GroupWord);

impl<A: Cell, B: Cell> Basis for Pair<A, B> {
    fn degree(&self) -> i64 {
        self.0.dim() as i64
    }
    fn vanishes(&self) -> bool {
        self.is_degenerate()
    }
}

/// Tensor product basis `a ⊗ b`.
impl<A: Basis, B: Basis> Basis for (A, B) {
    fn degree(&self) -> i64 {
        self.0.degree() + self.1.degree()
    }
    fn vanishes(&self) -> bool {
        self.0.vanishes() || self.1.vanishes()
    }
}

/// A `k`-fold tensor `x_1 ⊗ … ⊗ x_k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Tensor<T>(pub Vec<T>);

impl<T: Basis> Basis for Tensor<T> {
    fn degree(&self) -> i64 {
        self.0.iter().map(|x| x.degree()).sum()
    }
    fn vanishes(&self) -> bool {
        self.0.iter().any(|x| x.vanishes())
    }
}

pub fn sign(odd: bool) -> BigInt {
    if odd {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// `(-1)^(a·b)` as a parity.
pub fn koszul(a: i64, b: i64) -> bool {
    (a & 1 == 1) && (b & 1 == 1)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "B: Serialize", deserialize = "B: Deserialize<'de> + Ord"))]
pub struct Chain<B: Basis> {
    terms: BTreeMap<B, BigInt>,
}

impl<B: Basis> Default for Chain<B> {
    fn default() -> Self {
        Chain { terms: BTreeMap::new() }
    }
}

impl<B: Basis> Chain<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        let mut c = Self::zero();
        c.add_term(b, BigInt::one());
        c
    }

    pub fn term(b: B, coeff: impl Into<BigInt>) -> Self {
        let mut c = Self::zero();
        c.add_term(b, coeff.into());
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, BigInt)>) -> Self {
        let mut c = Self::zero();
        for (b, k) in terms {
            c.add_term(b, k);
        }
        c
    }

    /// Adds `coeff · b`, dropping vanishing basis elements and zero coefficients.
    pub fn add_term(&mut self, b: B, coeff: BigInt) {
        if coeff.is_zero() || b.vanishes() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_signed(&mut self, b: B, odd: bool) {
        self.add_term(b, sign(odd));
    }

    pub fn add_assign_scaled(&mut self, other: &Chain<B>, k: &BigInt) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c * k);
        }
    }

    pub fn add_chain(&mut self, other: &Chain<B>) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c.clone());
        }
    }

    pub fn sub_chain(&mut self, other: &Chain<B>) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), -c.clone());
        }
    }

    pub fn plus(&self, other: &Chain<B>) -> Chain<B> {
        let mut c = self.clone();
        c.add_chain(other);
        c
    }

    pub fn minus(&self, other: &Chain<B>) -> Chain<B> {
        let mut c = self.clone();
        c.sub_chain(other);
        c
    }

    pub fn scale(&self, k: &BigInt) -> Chain<B> {
        if k.is_zero() {
            return Chain::zero();
        }
        Chain { terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect() }
    }

    pub fn neg(&self) -> Chain<B> {
        Chain { terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &B) -> BigInt {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    /// The common degree of all terms, if the chain is homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|b| b.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Linear extension of a map on basis elements.
    pub fn map<C: Basis>(&self, mut f: impl FnMut(&B) -> Chain<C>) -> Chain<C> {
        let mut out = Chain::zero();
        for (b, k) in &self.terms {
            let image = f(b);
            out.add_assign_scaled(&image, k);
        }
        out
    }

    /// Keeps the terms satisfying a predicate.
    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Chain<B> {
        Chain { terms: self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (b.clone(), c.clone())).collect() }
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl<B: Basis> FromIterator<(B, BigInt)> for Chain<B> {
    fn from_iter<I: IntoIterator<Item = (B, BigInt)>>(iter: I) -> Self {
        Chain::from_terms(iter)
    }
}

/// `a ⊗ b` for chains (no signs: the tensor of elements).
pub fn tensor<A: Basis, B: Basis>(a: &Chain<A>, b: &Chain<B>) -> Chain<(A, B)> {
    let mut out = Chain::zero();
    for (x, k) in a.iter() {
        for (y, l) in b.iter() {
            out.add_term((x.clone(), y.clone()), k * l);
        }
    }
    out
}

/// `(f ⊗ g)(a ⊗ b) = (−1)^{|g||a|} f(a) ⊗ g(b)` extended linearly.
pub fn tensor_map<A: Basis, B: Basis, C: Basis, D: Basis>(
    c: &Chain<(A, B)>,
    deg_g: i64,
    mut f: impl FnMut(&A) -> Chain<C>,
    mut g: impl FnMut(&B) -> Chain<D>,
) -> Chain<(C, D)> {
    c.map(|(a, b)| {
        let t = tensor(&f(a), &g(b));
        if koszul(deg_g, a.degree()) {
            t.neg()
        } else {
            t
        }
    })
}

/// The symmetry `T(b ⊗ c) = (−1)^{|b||c|} c ⊗ b`.
pub fn twist_factors<A: Basis, B: Basis>(c: &Chain<(A, B)>) -> Chain<(B, A)> {
    c.map(|(a, b)| Chain::term((b.clone(), a.clone()), sign(koszul(a.degree(), b.degree()))))
}

/// Differential on a tensor product: `d(a ⊗ b) = da ⊗ b + (−1)^{|a|} a ⊗ db`.
pub fn tensor_differential<A: Basis, B: Basis>(
    c: &Chain<(A, B)>,
    mut da: impl FnMut(&A) -> Chain<A>,
    mut db: impl FnMut(&B) -> Chain<B>,
) -> Chain<(A, B)> {
    c.map(|(a, b)| {
        let mut out = tensor(&da(a), &Chain::basis(b.clone()));
        let right = tensor(&Chain::basis(a.clone()), &db(b));
        if a.degree() & 1 == 1 {
            out.sub_chain(&right);
        } else {
            out.add_chain(&right);
        }
        out
    })
}
