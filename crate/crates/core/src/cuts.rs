//! Interval cuts for the surjections `e_k = (k+1, 1, k+1, 2, …, k, k+1)`.
//!
//! A cut of `[0..n]` is `0 = p_0 ≤ p_1 ≤ … ≤ p_{2k+1} = n`. The intervals
//! `[p_{2s}, p_{2s+1}]` carry the final label `k+1`; `[p_{2s−1}, p_{2s}]` carries
//! label `s` and has length `q_s ≥ 1`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use crate::chain::{Chain, Tensor};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::simplex::Simplex;
use crate::simplicial::Simplicial;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct IntervalCut {
    p: Vec<usize>,
}

impl IntervalCut {
    pub fn new(p: Vec<usize>) -> Result<Self> {
        if p.len() < 2 || p.len() % 2 != 0 || p[0] != 0 || p.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid(format!("{p:?} is not a cut")));
        }
        let c = IntervalCut { p };
        if (1..=c.k()).any(|s| c.q(s) == 0) {
            return Err(Error::Invalid(format!("{:?} has an empty non-final interval", c.p)));
        }
        Ok(c)
    }

    /// The trivial `e_0` cut `(0, n)`.
    pub fn trivial(n: usize) -> Self {
        IntervalCut { p: vec![0, n] }
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.p
    }

    pub fn n(&self) -> usize {
        *self.p.last().unwrap()
    }

    pub fn k(&self) -> usize {
        (self.p.len() - 2) / 2
    }

    /// Length of the non-final interval with label `s` (`1 ≤ s ≤ k`).
    pub fn q(&self, s: usize) -> usize {
        self.p[2 * s] - self.p[2 * s - 1]
    }

    /// Length of the `m`-th final interval (`0 ≤ m ≤ k`).
    pub fn final_len(&self, m: usize) -> usize {
        self.p[2 * m + 1] - self.p[2 * m]
    }

    /// `ℓ(p)`: total length of the final intervals.
    pub fn ell(&self) -> usize {
        (0..=self.k()).map(|m| self.final_len(m)).sum()
    }

    /// `ℓ₁(p)`: number of non-final intervals of length 1.
    pub fn ell1(&self) -> usize {
        (1..=self.k()).filter(|&s| self.q(s) == 1).count()
    }

    /// All cuts of `[0..n]` for `e_k`, in lexicographic order of boundaries.
    pub fn enumerate(n: usize, k: usize) -> Vec<IntervalCut> {
        let mut out = Vec::new();
        let mut p = vec![0];
        fn rec(n: usize, k: usize, p: &mut Vec<usize>, out: &mut Vec<IntervalCut>) {
            let pos = p.len();
            if pos == 2 * k + 1 {
                p.push(n);
                out.push(IntervalCut { p: p.clone() });
                p.pop();
                return;
            }
            let last = *p.last().unwrap();
            // Odd positions close a final interval; even positions close a non-final one.
            let start = if pos % 2 == 0 { last + 1 } else { last };
            for v in start..=n {
                p.push(v);
                rec(n, k, p, out);
                p.pop();
            }
        }
        rec(n, k, &mut p, &mut out);
        out
    }

    /// Every cut of `[0..n]` for every `k`.
    pub fn enumerate_all(n: usize) -> Vec<IntervalCut> {
        (0..=n).flat_map(|k| IntervalCut::enumerate(n, k)).collect()
    }

    /// Splits the `m`-th final interval at `q`: final `[p_{2m}, q]`, a new
    /// non-final `[q, q+1]`, final `[q+1, p_{2m+1}]`.
    pub fn refine(&self, m: usize, q: usize) -> Result<IntervalCut> {
        if m > self.k() || q < self.p[2 * m] || q >= self.p[2 * m + 1] {
            return Err(Error::InvalidSplit(format!("cut {self}, final interval {m}, position {q}")));
        }
        let mut p = self.p[..=2 * m].to_vec();
        p.push(q);
        p.push(q + 1);
        p.extend_from_slice(&self.p[2 * m + 1..]);
        Ok(IntervalCut { p })
    }

    /// Every single-step refinement.
    pub fn refinements(&self) -> Vec<IntervalCut> {
        let mut out = Vec::new();
        for m in 0..=self.k() {
            for q in self.p[2 * m]..self.p[2 * m + 1] {
                out.push(self.refine(m, q).unwrap());
            }
        }
        out
    }

    /// Merges the length-1 non-final interval with label `s` into the final label.
    pub fn coarsen(&self, s: usize) -> Result<IntervalCut> {
        if s == 0 || s > self.k() || self.q(s) != 1 {
            return Err(Error::InvalidSplit(format!("cut {self} has no length-1 interval with label {s}")));
        }
        let mut p = self.p.clone();
        p.drain(2 * s - 1..=2 * s);
        Ok(IntervalCut { p })
    }

    /// The unique maximal refinement: every final interval of length `L` becomes
    /// `L` unit non-final intervals separated by empty final ones.
    pub fn maximal_refinement(&self) -> IntervalCut {
        let mut p = vec![0];
        for m in 0..=self.k() {
            let (a, b) = (self.p[2 * m], self.p[2 * m + 1]);
            for v in a..b {
                p.push(v);
                p.push(v + 1);
            }
            if m < self.k() {
                p.push(b);
                p.push(self.p[2 * m + 2]);
            }
        }
        p.push(self.n());
        IntervalCut { p }
    }

    /// All cuts `p′ ≥ p`, including `p`.
    pub fn cuts_above(&self) -> BTreeSet<IntervalCut> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if seen.insert(c.clone()) {
                stack.extend(c.refinements());
            }
        }
        seen
    }

    /// All cuts `p′ ≤ p`, including `p`.
    pub fn cuts_below(&self) -> BTreeSet<IntervalCut> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if seen.insert(c.clone()) {
                for s in 1..=c.k() {
                    if c.q(s) == 1 {
                        stack.push(c.coarsen(s).unwrap());
                    }
                }
            }
        }
        seen
    }

    /// `Σ_s (s−1)(q_s−1) mod 2`, the sign exponent when `ℓ(p) = 0`.
    pub fn closed_formula(&self) -> bool {
        (1..=self.k()).map(|s| (s - 1) * (self.q(s) - 1)).sum::<usize>() % 2 == 1
    }

    /// `ε(p)`: the closed formula evaluated on the maximal refinement.
    pub fn epsilon(&self) -> bool {
        self.maximal_refinement().closed_formula()
    }

    /// `ε(p)` from the original intervals: label `s` sits at position
    /// `s + (final length before it)` in the maximal refinement.
    pub fn epsilon_direct(&self) -> bool {
        let mut before = 0;
        let mut acc = 0;
        for s in 1..=self.k() {
            before += self.final_len(s - 1);
            acc += (s + before - 1) * (self.q(s) - 1);
        }
        acc % 2 == 1
    }

    /// Vertex lists of the factors `x^p_1, …, x^p_{k+1}`.
    pub fn factor_vertices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (1..=self.k()).map(|s| (self.p[2 * s - 1]..=self.p[2 * s]).collect()).collect();
        let last = (0..=self.k()).flat_map(|m| self.p[2 * m]..=self.p[2 * m + 1]).collect();
        out.push(last);
        out
    }
}

impl fmt::Display for IntervalCut {
    /// `0→(2)0→(1)1→(2)3`: boundaries with the label of each interval.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k();
        write!(f, "{}", self.p[0])?;
        for j in 1..self.p.len() {
            let label = if j % 2 == 1 { k + 1 } else { j / 2 };
            write!(f, "→({label}){}", self.p[j])?;
        }
        Ok(())
    }
}

/// `(x^p_1, …, x^p_{k+1})` for a cut of `[0..dim x]`.
pub fn cut_faces(x: &Presentation, c: &Simplex, p: &IntervalCut) -> Result<Vec<Simplex>> {
    if c.dim() != p.n() {
        return Err(Error::DimensionMismatch(format!("cut of [0..{}] on a {}-simplex", p.n(), c.dim())));
    }
    p.factor_vertices().iter().map(|v| x.pullback(c, v)).collect()
}

/// `Σ_p (−1)^{ε(p)} x^p_1 ⊗ … ⊗ x^p_{k+1}` over the cuts for `e_k`; tuples with a
/// degenerate factor vanish.
pub fn suspended_cooperation(x: &Presentation, c: &Simplex, k: usize) -> Chain<Tensor<Simplex>> {
    let mut out = Chain::zero();
    if k > c.dim() {
        return out;
    }
    for p in IntervalCut::enumerate(c.dim(), k) {
        let faces = cut_faces(x, c, &p).expect("cut of the right size");
        out.add_term(Tensor(faces), crate::chain::sign(p.epsilon()));
    }
    out
}

/// Helper for callers that need the cut sign as an integer.
pub fn epsilon_sign(p: &IntervalCut) -> BigInt {
    crate::chain::sign(p.epsilon())
}
