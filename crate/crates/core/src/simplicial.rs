//! The structure shared by all simplicial objects in the crate.

use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::simplex::{Op, OperatorWord, Simplex};

/// An element of some simplicial object that knows its own dimension and
/// degeneracy data: bit `i` of `mask` is set iff the element lies in the image of `s_i`.
pub trait Cell: Clone + Eq + Ord + Hash + Debug {
    fn dim(&self) -> usize;
    fn mask(&self) -> u64;
    fn is_degenerate(&self) -> bool {
        self.mask() != 0
    }
}

impl Cell for Simplex {
    fn dim(&self) -> usize {
        Simplex::dim(self)
    }
    fn mask(&self) -> u64 {
        Simplex::mask(self)
    }
}

pub trait Simplicial {
    type Cell: Cell;

    fn face(&self, i: usize, x: &Self::Cell) -> Self::Cell;
    fn degeneracy(&self, i: usize, x: &Self::Cell) -> Self::Cell;

    /// Last face `∂̃ = ∂_n`.
    fn last_face(&self, x: &Self::Cell) -> Self::Cell {
        self.face(x.dim(), x)
    }

    /// `∂̃^times x`, the front face on vertices `0..dim-times`.
    fn front(&self, x: &Self::Cell, times: usize) -> Self::Cell {
        let mut y = x.clone();
        for _ in 0..times {
            y = self.last_face(&y);
        }
        y
    }

    /// `∂_0^times x`, the back face on vertices `times..dim`.
    fn back(&self, x: &Self::Cell, times: usize) -> Self::Cell {
        let mut y = x.clone();
        for _ in 0..times {
            y = self.face(0, &y);
        }
        y
    }

    /// `s_A x` for an index set `A`: degeneracies applied in increasing order,
    /// which is the Eilenberg–Zilber word with set bits `A`.
    fn degenerate_by(&self, indices: &[usize], x: &Self::Cell) -> Self::Cell {
        let mut y = x.clone();
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        for j in sorted {
            y = self.degeneracy(j, &y);
        }
        y
    }

    fn degenerate_by_mask(&self, mask: u64, x: &Self::Cell) -> Self::Cell {
        let mut y = x.clone();
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            y = self.degeneracy(j, &y);
            m &= m - 1;
        }
        y
    }

    fn apply(&self, w: &OperatorWord, x: &Self::Cell) -> Result<Self::Cell> {
        w.check(x.dim())?;
        let mut y = x.clone();
        for op in w.letters.iter().rev() {
            y = match *op {
                Op::Face(i) => self.face(i, &y),
                Op::Degen(j) => self.degeneracy(j, &y),
            };
        }
        Ok(y)
    }

    /// `θ^* x` for a monotone `θ : [m] → [dim x]` given as its vertex list,
    /// e.g. `x(0,1,1,3)`.
    fn pullback(&self, x: &Self::Cell, theta: &[usize]) -> Result<Self::Cell> {
        let n = x.dim();
        if theta.is_empty() || theta.windows(2).any(|w| w[0] > w[1]) || theta[theta.len() - 1] > n {
            return Err(Error::Invalid(format!("{theta:?} is not a monotone map into [{n}]")));
        }
        let mut y = x.clone();
        for v in (0..=n).rev() {
            if !theta.contains(&v) {
                y = self.face(v, &y);
            }
        }
        for j in 0..theta.len() - 1 {
            if theta[j] == theta[j + 1] {
                y = self.degeneracy(j, &y);
            }
        }
        Ok(y)
    }
}

impl<T: Simplicial + ?Sized> Simplicial for &T {
    type Cell = T::Cell;
    fn face(&self, i: usize, x: &Self::Cell) -> Self::Cell {
        (**self).face(i, x)
    }
    fn degeneracy(&self, i: usize, x: &Self::Cell) -> Self::Cell {
        (**self).degeneracy(i, x)
    }
}

/// A simplex of a product: both components have the same dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: Cell, B: Cell> Cell for Pair<A, B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn mask(&self) -> u64 {
        self.0.mask() & self.1.mask()
    }
}

/// Cartesian product of two simplicial objects.
pub struct Product<X, Y>(pub X, pub Y);

impl<X: Simplicial, Y: Simplicial> Simplicial for Product<X, Y> {
    type Cell = Pair<X::Cell, Y::Cell>;
    fn face(&self, i: usize, x: &Self::Cell) -> Self::Cell {
        Pair(self.0.face(i, &x.0), self.1.face(i, &x.1))
    }
    fn degeneracy(&self, i: usize, x: &Self::Cell) -> Self::Cell {
        Pair(self.0.degeneracy(i, &x.0), self.1.degeneracy(i, &x.1))
    }
}

/// All pairs from two per-dimension enumerations whose degeneracy sets are disjoint.
pub fn nondegenerate_pairs<A: Cell, B: Cell>(left: &[A], right: &[B]) -> Vec<Pair<A, B>> {
    let mut out = Vec::new();
    for a in left {
        for b in right {
            if a.mask() & b.mask() == 0 {
                out.push(Pair(a.clone(), b.clone()));
            }
        }
    }
    out
}
