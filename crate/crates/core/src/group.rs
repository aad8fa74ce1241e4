//! Simplicial groups: constant finite groups and the Kan loop group of a reduced set.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::simplex::{low_bits, Simplex};
use crate::simplicial::{Cell, Simplicial};

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<u32>>,
    unit: u32,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Validates the group axioms for a multiplication table.
    pub fn new(names: Vec<String>, table: Vec<Vec<u32>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v as usize >= n)) {
            return Err(Error::Invalid("group table must be square over the listed elements".into()));
        }
        let unit = (0..n as u32)
            .find(|&e| (0..n as u32).all(|a| table[e as usize][a as usize] == a && table[a as usize][e as usize] == a))
            .ok_or_else(|| Error::Invalid("group table has no unit".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n as u32)
                .find(|&b| table[a][b as usize] == unit && table[b as usize][a] == unit)
                .ok_or_else(|| Error::Invalid(format!("element {} has no inverse", names[a])))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = table[table[a][b] as usize][c];
                    let r = table[a][table[b][c] as usize];
                    if l != r {
                        return Err(Error::Invalid("group table is not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table, unit, inverse })
    }

    /// ℤ/m with elements `1, g, g2, …`.
    pub fn cyclic(m: usize) -> Self {
        let names = (0..m)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..m).map(|a| (0..m).map(|b| ((a + b) % m) as u32).collect()).collect();
        FiniteGroup::new(names, table).expect("cyclic table")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn unit(&self) -> u32 {
        self.unit
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn name(&self, a: u32) -> &str {
        &self.names[a as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }
}

/// A letter `x̄^{±1}` of the loop group; `base` has dimension `level + 1` and
/// is never `s_0`-degenerate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub base: Simplex,
    pub exp: i8,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum GroupWord {
    Finite { level: usize, elem: u32 },
    Free { level: usize, letters: Vec<Letter> },
}

impl GroupWord {
    pub fn level(&self) -> usize {
        match self {
            GroupWord::Finite { level, .. } | GroupWord::Free { level, .. } => *level,
        }
    }
}

impl Cell for GroupWord {
    fn dim(&self) -> usize {
        self.level()
    }

    fn mask(&self) -> u64 {
        match self {
            GroupWord::Finite { level, .. } => low_bits(*level),
            GroupWord::Free { level, letters } => {
                letters.iter().fold(low_bits(*level), |m, l| m & (l.base.mask() >> 1))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum GroupKind {
    Finite(FiniteGroup),
    Loop(Arc<Presentation>),
}

#[derive(Clone, Debug)]
pub struct SimplicialGroup {
    kind: GroupKind,
    truncation: usize,
}

fn reduce_push(out: &mut Vec<Letter>, l: Letter) {
    if let Some(last) = out.last() {
        if last.base == l.base && last.exp == -l.exp {
            out.pop();
            return;
        }
    }
    out.push(l);
}

impl SimplicialGroup {
    pub fn finite(g: FiniteGroup) -> Self {
        SimplicialGroup { kind: GroupKind::Finite(g), truncation: usize::MAX }
    }

    pub fn trivial() -> Self {
        SimplicialGroup::finite(FiniteGroup::cyclic(1))
    }

    pub fn loop_group(base: Arc<Presentation>, truncation: usize) -> Result<Self> {
        if !base.is_reduced() {
            return Err(Error::NotReduced);
        }
        Ok(SimplicialGroup { kind: GroupKind::Loop(base), truncation })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn finite_group(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            GroupKind::Finite(g) => Some(g),
            GroupKind::Loop(_) => None,
        }
    }

    pub fn loop_base(&self) -> Option<&Arc<Presentation>> {
        match &self.kind {
            GroupKind::Loop(p) => Some(p),
            GroupKind::Finite(_) => None,
        }
    }

    pub fn identity(&self, level: usize) -> GroupWord {
        match &self.kind {
            GroupKind::Finite(g) => GroupWord::Finite { level, elem: g.unit() },
            GroupKind::Loop(_) => GroupWord::Free { level, letters: Vec::new() },
        }
    }

    pub fn element(&self, level: usize, elem: u32) -> GroupWord {
        GroupWord::Finite { level, elem }
    }

    pub fn is_identity(&self, a: &GroupWord) -> bool {
        match (a, &self.kind) {
            (GroupWord::Finite { elem, .. }, GroupKind::Finite(g)) => *elem == g.unit(),
            (GroupWord::Free { letters, .. }, _) => letters.is_empty(),
            _ => false,
        }
    }

    /// The generator `x̄` at level `dim x − 1`; identity when `x = s_0 y`.
    pub fn bar(&self, x: &Simplex) -> GroupWord {
        assert!(x.dim() >= 1, "bar of a vertex");
        let level = x.dim() - 1;
        let letters = if x.mask() & 1 == 1 { Vec::new() } else { vec![Letter { base: *x, exp: 1 }] };
        GroupWord::Free { level, letters }
    }

    pub fn mul(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        self.try_mul(a, b).expect("group multiplication")
    }

    pub fn try_mul(&self, a: &GroupWord, b: &GroupWord) -> Result<GroupWord> {
        if a.level() != b.level() {
            return Err(Error::LevelMismatch(a.level(), b.level()));
        }
        match (a, b, &self.kind) {
            (GroupWord::Finite { level, elem: x }, GroupWord::Finite { elem: y, .. }, GroupKind::Finite(g)) => {
                Ok(GroupWord::Finite { level: *level, elem: g.mul(*x, *y) })
            }
            (GroupWord::Free { level, letters: x }, GroupWord::Free { letters: y, .. }, GroupKind::Loop(_)) => {
                let mut out = x.clone();
                for l in y {
                    reduce_push(&mut out, *l);
                }
                Ok(GroupWord::Free { level: *level, letters: out })
            }
            _ => Err(Error::Invalid("group word does not belong to this group".into())),
        }
    }

    pub fn inv(&self, a: &GroupWord) -> GroupWord {
        match (a, &self.kind) {
            (GroupWord::Finite { level, elem }, GroupKind::Finite(g)) => GroupWord::Finite { level: *level, elem: g.inv(*elem) },
            (GroupWord::Free { level, letters }, _) => GroupWord::Free {
                level: *level,
                letters: letters.iter().rev().map(|l| Letter { base: l.base, exp: -l.exp }).collect(),
            },
            _ => panic!("group word does not belong to this group"),
        }
    }

    pub fn product<'a>(&self, level: usize, words: impl IntoIterator<Item = &'a GroupWord>) -> GroupWord {
        words.into_iter().fold(self.identity(level), |acc, w| self.mul(&acc, w))
    }

    fn letter_face(&self, base: &Presentation, i: usize, l: &Letter) -> GroupWord {
        let w = if i == 0 {
            let a = self.bar(&base.face(1, &l.base));
            let b = self.bar(&base.face(0, &l.base));
            self.mul(&a, &self.inv(&b))
        } else {
            self.bar(&base.face(i + 1, &l.base))
        };
        if l.exp < 0 {
            self.inv(&w)
        } else {
            w
        }
    }

    /// Enumerates nondegenerate group simplices of a level; loop groups need a word-length bound.
    pub fn nondegenerate(&self, level: usize, word_bound: Option<usize>) -> Result<Vec<GroupWord>> {
        match &self.kind {
            GroupKind::Finite(g) => {
                if level > 0 {
                    return Ok(Vec::new());
                }
                Ok((0..g.order() as u32).map(|e| GroupWord::Finite { level: 0, elem: e }).collect())
            }
            GroupKind::Loop(base) => {
                let bound = word_bound.ok_or_else(|| Error::Unbounded(format!("loop group level {level}")))?;
                if level > self.truncation {
                    return Err(Error::Unbounded(format!("level {level} above truncation {}", self.truncation)));
                }
                let gens: Vec<Simplex> = base.simplices(level + 1).into_iter().filter(|x| x.mask() & 1 == 0).collect();
                let mut out = Vec::new();
                let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
                for _ in 0..=bound {
                    let mut next = Vec::new();
                    for w in &frontier {
                        let word = GroupWord::Free { level, letters: w.clone() };
                        if !word.is_degenerate() {
                            out.push(word);
                        }
                        if w.len() == bound {
                            continue;
                        }
                        for g in &gens {
                            for exp in [1i8, -1] {
                                if let Some(last) = w.last() {
                                    if last.base == *g && last.exp == -exp {
                                        continue;
                                    }
                                }
                                let mut v = w.clone();
                                v.push(Letter { base: *g, exp });
                                next.push(v);
                            }
                        }
                    }
                    frontier = next;
                }
                out.sort();
                Ok(out)
            }
        }
    }
}

impl Simplicial for SimplicialGroup {
    type Cell = GroupWord;

    fn face(&self, i: usize, a: &GroupWord) -> GroupWord {
        let level = a.level();
        assert!(level >= 1 && i <= level, "∂_{i} on level {level}");
        match a {
            GroupWord::Finite { elem, .. } => GroupWord::Finite { level: level - 1, elem: *elem },
            GroupWord::Free { letters, .. } => {
                let base = self.loop_base().expect("free word in a finite group");
                let mut out = self.identity(level - 1);
                for l in letters {
                    out = self.mul(&out, &self.letter_face(base, i, l));
                }
                out
            }
        }
    }

    fn degeneracy(&self, i: usize, a: &GroupWord) -> GroupWord {
        let level = a.level();
        assert!(i <= level, "s_{i} on level {level}");
        match a {
            GroupWord::Finite { elem, .. } => GroupWord::Finite { level: level + 1, elem: *elem },
            GroupWord::Free { letters, .. } => GroupWord::Free {
                level: level + 1,
                letters: letters.iter().map(|l| Letter { base: l.base.degeneracy(i + 1), exp: l.exp }).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn cyclic_two_squares_to_one() {
        let g = SimplicialGroup::finite(FiniteGroup::cyclic(2));
        let a = g.element(0, 1);
        assert!(g.is_identity(&g.mul(&a, &a)));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let names = vec!["a".into(), "b".into(), "c".into()];
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 0]];
        assert!(FiniteGroup::new(names, table).is_err());
    }

    #[test]
    fn loop_letters_cancel_and_stack() {
        let x = Arc::new(models::minimal_sphere(2));
        let g = SimplicialGroup::loop_group(x.clone(), 5).unwrap();
        let s = g.bar(&x.generator("sigma").unwrap());
        assert!(g.is_identity(&g.mul(&s, &g.inv(&s))));
        match g.mul(&s, &s) {
            GroupWord::Free { letters, .. } => assert_eq!(letters.len(), 2),
            _ => unreachable!(),
        }
    }

    #[test]
    fn degenerate_identity_at_positive_level() {
        let x = Arc::new(models::minimal_sphere(2));
        let g = SimplicialGroup::loop_group(x, 5).unwrap();
        let e0 = g.identity(0);
        assert!(!e0.is_degenerate());
        let e1 = g.degeneracy(0, &e0);
        assert_eq!(e1, g.identity(1));
        assert!(e1.is_degenerate());
    }

    #[test]
    fn loop_group_satisfies_simplicial_identities() {
        let x = Arc::new(models::collapsed_simplex(3, 0));
        let g = SimplicialGroup::loop_group(x, 4).unwrap();
        for level in 0..=2 {
            for w in g.nondegenerate(level, Some(2)).unwrap() {
                for j in 0..=level {
                    let sw = g.degeneracy(j, &w);
                    for i in 0..=level + 1 {
                        let lhs = g.face(i, &sw);
                        let rhs = if i < j {
                            g.degeneracy(j - 1, &g.face(i, &w))
                        } else if i == j || i == j + 1 {
                            w.clone()
                        } else {
                            g.degeneracy(j, &g.face(i - 1, &w))
                        };
                        assert_eq!(lhs, rhs);
                    }
                }
                if level >= 2 {
                    for j in 1..=level {
                        for i in 0..j {
                            assert_eq!(g.face(i, &g.face(j, &w)), g.face(j - 1, &g.face(i, &w)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn faces_are_homomorphisms() {
        let x = Arc::new(models::collapsed_simplex(3, 0));
        let g = SimplicialGroup::loop_group(x, 4).unwrap();
        let words = g.nondegenerate(1, Some(2)).unwrap();
        for a in words.iter().take(30) {
            for b in words.iter().rev().take(30) {
                for i in 0..=1 {
                    assert_eq!(g.face(i, &g.mul(a, b)), g.mul(&g.face(i, a), &g.face(i, b)));
                }
                assert_eq!(g.degeneracy(1, &g.mul(a, b)), g.mul(&g.degeneracy(1, a), &g.degeneracy(1, b)));
            }
        }
    }
}
