//! Eilenberg–Zilber normal forms and words in the elementary simplicial operators.
//!
//! A simplex `x = s_{j_1} ⋯ s_{j_r} g` (with `j_1 > … > j_r`) is stored as the
//! generator `g`, its dimension and a bitmask whose set bits are exactly the `j`'s.
//! Equivalently bit `j` records that the underlying monotone surjection
//! `[n] → [dim g]` identifies `j` and `j + 1`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub type GenId = u32;

/// Largest supported simplex dimension (masks are `u64`).
pub const MAX_DIM: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Simplex {
    dim: u8,
    gen: GenId,
    mask: u64,
}

impl Simplex {
    pub fn generator(gen: GenId, dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Simplex { dim: dim as u8, gen, mask: 0 }
    }

    /// Builds a simplex from its normal-form data. `mask` must have exactly
    /// `dim - gen_dim` bits below `dim`.
    pub fn from_parts(gen: GenId, dim: usize, mask: u64) -> Self {
        assert!(dim <= MAX_DIM);
        debug_assert_eq!(mask & !low_bits(dim), 0);
        Simplex { dim: dim as u8, gen, mask }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn gen(&self) -> GenId {
        self.gen
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn gen_dim(&self) -> usize {
        self.dim() - self.mask.count_ones() as usize
    }

    pub fn is_degenerate(&self) -> bool {
        self.mask != 0
    }

    /// The strictly decreasing degeneracy list `j_1 > … > j_r`.
    pub fn degeneracies(&self) -> Vec<usize> {
        (0..self.dim()).rev().filter(|j| self.mask >> j & 1 == 1).collect()
    }

    /// Inverse of [`Simplex::degeneracies`]: normal form from a degeneracy word
    /// `s_{j_1} ⋯ s_{j_r}` applied to a generator of dimension `gen_dim`.
    /// The word need not be in normal form.
    pub fn from_degeneracy_word(gen: GenId, gen_dim: usize, word: &[usize]) -> Result<Self> {
        let mut x = Simplex::generator(gen, gen_dim);
        for &j in word.iter().rev() {
            if j > x.dim() {
                return Err(Error::IndexOutOfRange { op: format!("s_{j}"), dim: x.dim() });
            }
            if x.dim() == MAX_DIM {
                return Err(Error::IndexOutOfRange { op: format!("s_{j}"), dim: x.dim() });
            }
            x = x.degeneracy(j);
        }
        Ok(x)
    }

    /// `s_i x`; needs no presentation data.
    pub fn degeneracy(&self, i: usize) -> Simplex {
        assert!(i <= self.dim(), "s_{i} on a {}-simplex", self.dim());
        Simplex {
            dim: self.dim + 1,
            gen: self.gen,
            mask: mask_degeneracy(self.mask, i),
        }
    }
}

pub fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask of `s_i` applied to an element with degeneracy mask `mask`.
pub fn mask_degeneracy(mask: u64, i: usize) -> u64 {
    let low = mask & low_bits(i);
    let high = (mask >> i) << (i + 1);
    low | (1 << i) | high
}

/// Effect of `∂_i` on the surjection encoded by `mask` on `[n]`.
///
/// Returns the mask of the remaining surjection and, if vertex `i` was the only
/// preimage of its value `v`, that value (the face then passes to `∂_v` of the
/// generator).
pub fn mask_face(mask: u64, n: usize, i: usize) -> (u64, Option<usize>) {
    debug_assert!(i <= n && n >= 1);
    let bit = |j: usize| mask >> j & 1 == 1;
    let left = i > 0 && bit(i - 1);
    let right = i < n && bit(i);
    let new_mask = if i == 0 {
        mask >> 1
    } else if i == n {
        mask & low_bits(n - 1)
    } else {
        let low = mask & low_bits(i - 1);
        let mid = ((left && right) as u64) << (i - 1);
        let high = (mask >> (i + 1)) << i;
        low | mid | high
    };
    if left || right {
        (new_mask, None)
    } else {
        let v = i - (mask & low_bits(i)).count_ones() as usize;
        (new_mask, Some(v))
    }
}

/// Mask of `η'' ∘ η'` where `a` encodes `η' : [m] → [e]` and `b` encodes `η'' : [e] → [f]`.
pub fn mask_compose(a: u64, m: usize, b: u64) -> u64 {
    let mut out = 0u64;
    let mut value = 0usize;
    for j in 0..m {
        if a >> j & 1 == 1 {
            out |= 1 << j;
        } else {
            if b >> value & 1 == 1 {
                out |= 1 << j;
            }
            value += 1;
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Op {
    Face(usize),
    Degen(usize),
}

impl Op {
    fn shifted(self) -> Op {
        match self {
            Op::Face(i) => Op::Face(i + 1),
            Op::Degen(j) => Op::Degen(j + 1),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Face(i) => write!(f, "∂_{i}"),
            Op::Degen(j) => write!(f, "s_{j}"),
        }
    }
}

/// A word in faces and degeneracies, applied right-to-left: `letters[0]` acts last.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct OperatorWord {
    pub letters: Vec<Op>,
}

impl OperatorWord {
    pub fn identity() -> Self {
        OperatorWord { letters: Vec::new() }
    }

    pub fn face(i: usize) -> Self {
        OperatorWord { letters: vec![Op::Face(i)] }
    }

    pub fn degen(j: usize) -> Self {
        OperatorWord { letters: vec![Op::Degen(j)] }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &OperatorWord) -> OperatorWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        OperatorWord { letters }
    }

    /// The derived operator `D′`: every index raised by one.
    pub fn derived(&self) -> OperatorWord {
        OperatorWord { letters: self.letters.iter().map(|op| op.shifted()).collect() }
    }

    pub fn degree_shift(&self) -> isize {
        self.letters
            .iter()
            .map(|op| match op {
                Op::Face(_) => -1,
                Op::Degen(_) => 1,
            })
            .sum()
    }

    /// Checks every intermediate index against the running dimension.
    pub fn check(&self, dim: usize) -> Result<usize> {
        let mut d = dim;
        for op in self.letters.iter().rev() {
            match *op {
                Op::Face(i) => {
                    if d == 0 || i > d {
                        return Err(Error::IndexOutOfRange { op: op.to_string(), dim: d });
                    }
                    d -= 1;
                }
                Op::Degen(j) => {
                    if j > d || d == MAX_DIM {
                        return Err(Error::IndexOutOfRange { op: op.to_string(), dim: d });
                    }
                    d += 1;
                }
            }
        }
        Ok(d)
    }

    /// Acts on a vertex list (a simplex of a standard simplex); faces delete
    /// a position, degeneracies repeat one.
    pub fn apply_to_vertices(&self, vertices: &[usize]) -> Result<Vec<usize>> {
        if vertices.is_empty() {
            return Err(Error::Invalid("empty vertex list".into()));
        }
        self.check(vertices.len() - 1)?;
        let mut v = vertices.to_vec();
        for op in self.letters.iter().rev() {
            match *op {
                Op::Face(i) => {
                    v.remove(i);
                }
                Op::Degen(j) => {
                    let x = v[j];
                    v.insert(j, x);
                }
            }
        }
        Ok(v)
    }

    /// The monotone map `[target] → [dim]` this word induces on `Δ^dim`.
    pub fn vertex_map(&self, dim: usize) -> Result<Vec<usize>> {
        self.apply_to_vertices(&(0..=dim).collect::<Vec<_>>())
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.letters.iter().map(|op| op.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surjection(mask: u64, n: usize) -> Vec<usize> {
        let mut v = vec![0];
        for j in 0..n {
            let last = *v.last().unwrap();
            v.push(if mask >> j & 1 == 1 { last } else { last + 1 });
        }
        v
    }

    #[test]
    fn degeneracy_list_round_trip() {
        let x = Simplex::from_degeneracy_word(7, 2, &[0, 0, 2]).unwrap();
        assert_eq!(x.dim(), 5);
        let back = Simplex::from_degeneracy_word(7, 2, &x.degeneracies()).unwrap();
        assert_eq!(x, back);
        let mut d = x.degeneracies();
        d.dedup();
        assert_eq!(d.len(), 3);
        assert!(d.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn vertex_zero_degeneracy() {
        let v = Simplex::generator(0, 0);
        let s = v.degeneracy(0);
        assert_eq!(s.degeneracies(), vec![0]);
        assert_eq!(s.gen(), 0);
    }

    #[test]
    fn mask_face_agrees_with_surjection_oracle() {
        for n in 1..7usize {
            for mask in 0..(1u64 << n) {
                let eta = surjection(mask, n);
                for i in 0..=n {
                    let mut rest = eta.clone();
                    let removed = rest.remove(i);
                    let (m, miss) = mask_face(mask, n, i);
                    let missed = !rest.contains(&removed);
                    assert_eq!(miss.is_some(), missed);
                    if let Some(v) = miss {
                        assert_eq!(v, removed);
                        for r in rest.iter_mut() {
                            if *r > v {
                                *r -= 1;
                            }
                        }
                    }
                    assert_eq!(surjection(m, n - 1), rest, "mask {mask:b} n {n} i {i}");
                }
            }
        }
    }

    #[test]
    fn compose_agrees_with_oracle() {
        for m in 0..6usize {
            for a in 0..(1u64 << m) {
                let e = m - a.count_ones() as usize;
                for b in 0..(1u64 << e) {
                    let ea = surjection(a, m);
                    let eb = surjection(b, e);
                    let comp: Vec<usize> = ea.iter().map(|&v| eb[v]).collect();
                    assert_eq!(surjection(mask_compose(a, m, b), m), comp);
                }
            }
        }
    }

    #[test]
    fn derived_shifts_indices() {
        let w = OperatorWord { letters: vec![Op::Face(2), Op::Degen(0)] };
        assert_eq!(w.derived().letters, vec![Op::Face(3), Op::Degen(1)]);
        assert_eq!(OperatorWord::identity().derived(), OperatorWord::identity());
        let w2 = OperatorWord::degen(4);
        assert_eq!(w.then_after(&w2).derived(), w.derived().then_after(&w2.derived()));
    }

    #[test]
    fn out_of_range_letter_is_reported() {
        let w = OperatorWord::face(3);
        assert!(matches!(w.check(2), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(OperatorWord::face(1).then_after(&OperatorWord::degen(0)).vertex_map(3).unwrap(), vec![0, 1, 2, 3]);
    }
}
