//! Twisting functions, G-spaces and twisted Cartesian products.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{GroupKind, GroupWord, SimplicialGroup};
use crate::presentation::Presentation;
use crate::simplex::{GenId, Simplex};
use crate::simplicial::{Cell, Pair, Simplicial};

#[derive(Clone, Debug)]
pub struct TwistingFunction {
    base: Arc<Presentation>,
    group: Arc<SimplicialGroup>,
    table: BTreeMap<GenId, GroupWord>,
}

impl TwistingFunction {
    /// A twist from explicit values on generators of dimension ≥ 1. For finite
    /// groups, missing values on generators of dimension ≥ 2 are filled in from the
    /// front edge, which is forced by the identities. Identities are verified.
    pub fn new(base: Arc<Presentation>, group: Arc<SimplicialGroup>, table: BTreeMap<GenId, GroupWord>) -> Result<Self> {
        let tf = Self::new_unchecked(base, group, table)?;
        tf.verify(tf.base.max_dim() + 1)?;
        Ok(tf)
    }

    /// As [`TwistingFunction::new`] but without verifying the identities, so that a
    /// broken twist can still be loaded and diagnosed.
    pub fn new_unchecked(base: Arc<Presentation>, group: Arc<SimplicialGroup>, table: BTreeMap<GenId, GroupWord>) -> Result<Self> {
        for d in 1..=base.max_dim() {
            for &g in base.generators_in(d) {
                if table.contains_key(&g) {
                    continue;
                }
                if d >= 2 && group.finite_group().is_some() {
                    continue;
                }
                return Err(Error::InvalidTwist(format!("no value for generator {}", base.gen_name(g))));
            }
        }
        for (g, w) in &table {
            let d = base.generator_info(*g).dim;
            if d == 0 || w.level() + 1 != d {
                return Err(Error::InvalidTwist(format!("value on {} has level {}", base.gen_name(*g), w.level())));
            }
        }
        let mut tf = TwistingFunction { base, group, table };
        if tf.group.finite_group().is_some() {
            for d in 2..=tf.base.max_dim() {
                for &g in tf.base.generators_in(d) {
                    if !tf.table.contains_key(&g) {
                        let x = Simplex::generator(g, d);
                        let edge = tf.base.pullback(&x, &[0, 1]).expect("front edge");
                        let v = tf.tau(&edge);
                        let lifted = tf.group.degenerate_by_mask(crate::simplex::low_bits(d - 1), &v);
                        tf.table.insert(g, lifted);
                    }
                }
            }
        }
        Ok(tf)
    }

    /// `τ(x) = x̄^{-1}` into the loop group of a reduced base.
    pub fn canonical(group: Arc<SimplicialGroup>) -> Result<Self> {
        let base = group.loop_base().ok_or_else(|| Error::InvalidTwist("canonical twist needs a loop group".into()))?.clone();
        let mut table = BTreeMap::new();
        for d in 1..=base.max_dim() {
            for &g in base.generators_in(d) {
                let w = group.bar(&Simplex::generator(g, d));
                table.insert(g, group.inv(&w));
            }
        }
        TwistingFunction::new(base, group, table)
    }

    /// The constant twist `τ ≡ 1`.
    pub fn trivial(base: Arc<Presentation>, group: Arc<SimplicialGroup>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for d in 1..=base.max_dim() {
            for &g in base.generators_in(d) {
                table.insert(g, group.identity(d - 1));
            }
        }
        TwistingFunction::new(base, group, table)
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn group(&self) -> &Arc<SimplicialGroup> {
        &self.group
    }

    pub fn table(&self) -> &BTreeMap<GenId, GroupWord> {
        &self.table
    }

    pub fn tau(&self, x: &Simplex) -> GroupWord {
        let n = x.dim();
        assert!(n >= 1, "τ on a vertex");
        if x.mask() & 1 == 1 {
            return self.group.identity(n - 1);
        }
        let v = &self.table[&x.gen()];
        self.group.degenerate_by_mask(x.mask() >> 1, v)
    }

    pub fn sigma(&self, x: &Simplex) -> GroupWord {
        self.group.inv(&self.tau(x))
    }

    /// Checks the twisting-function identities on all simplices up to `max_dim`.
    pub fn verify(&self, max_dim: usize) -> Result<()> {
        match self.first_violation(max_dim) {
            None => Ok(()),
            Some(v) => Err(Error::InvalidTwist(format!("{} at x = {}", v.identity, self.base.render(&v.simplex)))),
        }
    }

    /// The first simplex, in dimension then basis order, where an identity fails.
    pub fn first_violation(&self, max_dim: usize) -> Option<TwistViolation> {
        let g = &self.group;
        let b = &self.base;
        for n in 1..=max_dim {
            for x in b.simplices(n) {
                let t = self.tau(&x);
                let fail = |identity: String, lhs: GroupWord, rhs: GroupWord| Some(TwistViolation { identity, simplex: x, lhs, rhs });
                if n >= 2 {
                    let lhs = g.face(0, &t);
                    let rhs = g.mul(&g.inv(&self.tau(&b.face(0, &x))), &self.tau(&b.face(1, &x)));
                    if lhs != rhs {
                        return fail("∂_0τ(x) = τ(∂_0x)^-1τ(∂_1x)".into(), lhs, rhs);
                    }
                    for k in 1..n {
                        let (lhs, rhs) = (g.face(k, &t), self.tau(&b.face(k + 1, &x)));
                        if lhs != rhs {
                            return fail(format!("∂_{k}τ(x) = τ(∂_{}x)", k + 1), lhs, rhs);
                        }
                    }
                }
                for k in 0..n {
                    let (lhs, rhs) = (g.degeneracy(k, &t), self.tau(&b.degeneracy(k + 1, &x)));
                    if lhs != rhs {
                        return fail(format!("s_{k}τ(x) = τ(s_{}x)", k + 1), lhs, rhs);
                    }
                }
                let lhs = self.tau(&b.degeneracy(0, &x));
                if !g.is_identity(&lhs) {
                    return fail("τ(s_0x) = 1".into(), lhs, g.identity(n));
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct TwistViolation {
    pub identity: String,
    pub simplex: Simplex,
    pub lhs: GroupWord,
    pub rhs: GroupWord,
}

/// A simplicial object with a simplicial left action of a simplicial group.
pub trait GSpace: Simplicial {
    fn acting_group(&self) -> &Arc<SimplicialGroup>;
    fn act(&self, g: &GroupWord, y: &Self::Cell) -> Self::Cell;
    /// Per-dimension enumeration of nondegenerate simplices, if finite.
    fn basis(&self, dim: usize) -> Result<Vec<Self::Cell>>;
    /// All simplices of a dimension (needed for product enumeration), if finite.
    fn all_cells(&self, dim: usize) -> Result<Vec<Self::Cell>>;
    fn render_cell(&self, y: &Self::Cell) -> String;
}

/// The group acting on itself by left multiplication.
#[derive(Clone, Debug)]
pub struct GroupFibre {
    pub group: Arc<SimplicialGroup>,
    pub word_bound: Option<usize>,
}

impl Simplicial for GroupFibre {
    type Cell = GroupWord;
    fn face(&self, i: usize, x: &GroupWord) -> GroupWord {
        self.group.face(i, x)
    }
    fn degeneracy(&self, i: usize, x: &GroupWord) -> GroupWord {
        self.group.degeneracy(i, x)
    }
}

impl GSpace for GroupFibre {
    fn acting_group(&self) -> &Arc<SimplicialGroup> {
        &self.group
    }
    fn act(&self, g: &GroupWord, y: &GroupWord) -> GroupWord {
        self.group.mul(g, y)
    }
    fn basis(&self, dim: usize) -> Result<Vec<GroupWord>> {
        self.group.nondegenerate(dim, self.word_bound)
    }
    fn all_cells(&self, dim: usize) -> Result<Vec<GroupWord>> {
        match self.group.kind() {
            GroupKind::Finite(f) => Ok((0..f.order() as u32).map(|e| self.group.element(dim, e)).collect()),
            GroupKind::Loop(_) => Err(Error::Unbounded("all simplices of a loop group".into())),
        }
    }
    fn render_cell(&self, y: &GroupWord) -> String {
        crate::io::render_group_word(&self.group, y)
    }
}

#[derive(Clone, Debug)]
pub enum Action {
    Trivial,
    /// `table[elem][gen]`: image of a generator under a finite-group element.
    Table(Vec<Vec<GenId>>),
}

/// A finitely presented simplicial set with a G-action.
#[derive(Clone, Debug)]
pub struct SetFibre {
    pub space: Arc<Presentation>,
    pub group: Arc<SimplicialGroup>,
    pub action: Action,
}

impl SetFibre {
    pub fn new(space: Arc<Presentation>, group: Arc<SimplicialGroup>, action: Action) -> Result<Self> {
        let f = SetFibre { space, group, action };
        f.verify()?;
        Ok(f)
    }

    fn verify(&self) -> Result<()> {
        let Action::Table(table) = &self.action else {
            return Ok(());
        };
        let fg = self
            .group
            .finite_group()
            .ok_or_else(|| Error::InvalidAction("action tables need a finite group".into()))?;
        let sp = &self.space;
        if table.len() != fg.order() || table.iter().any(|r| r.len() != sp.num_generators()) {
            return Err(Error::InvalidAction("action table has the wrong shape".into()));
        }
        for e in 0..fg.order() {
            for g in 0..sp.num_generators() {
                let img = table[e][g] as usize;
                if img >= sp.num_generators() || sp.generator_info(img as GenId).dim != sp.generator_info(g as GenId).dim {
                    return Err(Error::InvalidAction(format!("{}·{} is not a generator of the same dimension", fg.name(e as u32), sp.gen_name(g as GenId))));
                }
            }
        }
        for g in 0..sp.num_generators() {
            if table[fg.unit() as usize][g] as usize != g {
                return Err(Error::InvalidAction("unit does not act trivially".into()));
            }
            for a in 0..fg.order() as u32 {
                for b in 0..fg.order() as u32 {
                    let ab = table[fg.mul(a, b) as usize][g];
                    let a_b = table[a as usize][table[b as usize][g] as usize];
                    if ab != a_b {
                        return Err(Error::InvalidAction("action is not associative".into()));
                    }
                }
            }
        }
        for g in 0..sp.num_generators() as GenId {
            let d = sp.generator_info(g).dim;
            let y = Simplex::generator(g, d);
            for e in 0..fg.order() as u32 {
                let h = self.group.element(d, e);
                let hy = self.act(&h, &y);
                for i in (0..=d).filter(|_| d > 0) {
                    let lhs = sp.face(i, &hy);
                    let rhs = self.act(&self.group.face(i, &h), &sp.face(i, &y));
                    if lhs != rhs {
                        return Err(Error::InvalidAction(format!("action does not commute with ∂_{i} on {}", sp.gen_name(g))));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Simplicial for SetFibre {
    type Cell = Simplex;
    fn face(&self, i: usize, x: &Simplex) -> Simplex {
        self.space.face(i, x)
    }
    fn degeneracy(&self, i: usize, x: &Simplex) -> Simplex {
        x.degeneracy(i)
    }
}

impl GSpace for SetFibre {
    fn acting_group(&self) -> &Arc<SimplicialGroup> {
        &self.group
    }
    fn act(&self, g: &GroupWord, y: &Simplex) -> Simplex {
        match (&self.action, g) {
            (Action::Trivial, _) => *y,
            (Action::Table(t), GroupWord::Finite { elem, .. }) => {
                Simplex::from_parts(t[*elem as usize][y.gen() as usize], y.dim(), y.mask())
            }
            _ => panic!("action table with a non-finite group element"),
        }
    }
    fn basis(&self, dim: usize) -> Result<Vec<Simplex>> {
        Ok(self.space.nondegenerate(dim))
    }
    fn all_cells(&self, dim: usize) -> Result<Vec<Simplex>> {
        Ok(self.space.simplices(dim))
    }
    fn render_cell(&self, y: &Simplex) -> String {
        self.space.render(y)
    }
}

/// `X ×_τ F`: the Cartesian product with `∂_0(x, y) = (∂_0 x, τ(x)·∂_0 y)`.
#[derive(Clone, Debug)]
pub struct TwistedProduct<F> {
    pub twist: Arc<TwistingFunction>,
    pub fibre: F,
}

impl<F: GSpace> TwistedProduct<F> {
    pub fn new(twist: Arc<TwistingFunction>, fibre: F) -> Result<Self> {
        if !Arc::ptr_eq(twist.group(), fibre.acting_group()) {
            return Err(Error::Invalid("fibre and twist use different groups".into()));
        }
        Ok(TwistedProduct { twist, fibre })
    }

    pub fn base(&self) -> &Arc<Presentation> {
        self.twist.base()
    }

    pub fn group(&self) -> &Arc<SimplicialGroup> {
        self.twist.group()
    }

    pub fn twisted_face(&self, i: usize, x: &Pair<Simplex, F::Cell>) -> Result<Pair<Simplex, F::Cell>> {
        if x.0.dim() != x.1.dim() {
            return Err(Error::DimensionMismatch(format!("({}, {})", x.0.dim(), x.1.dim())));
        }
        if x.0.dim() == 0 || i > x.0.dim() {
            return Err(Error::IndexOutOfRange { op: format!("∂_{i}"), dim: x.0.dim() });
        }
        Ok(self.face(i, x))
    }

    pub fn nondegenerate(&self, dim: usize) -> Result<Vec<Pair<Simplex, F::Cell>>> {
        if dim == 0 {
            let mut out = Vec::new();
            for x in self.base().nondegenerate(0) {
                for y in self.fibre.basis(0)? {
                    out.push(Pair(x, y));
                }
            }
            return Ok(out);
        }
        let xs = self.base().simplices(dim);
        let ys = self.fibre.all_cells(dim)?;
        Ok(crate::simplicial::nondegenerate_pairs(&xs, &ys))
    }

    pub fn render(&self, c: &Pair<Simplex, F::Cell>) -> String {
        format!("({}, {})", self.base().render(&c.0), self.fibre.render_cell(&c.1))
    }
}

impl<F: GSpace> Simplicial for TwistedProduct<F> {
    type Cell = Pair<Simplex, F::Cell>;
    fn face(&self, i: usize, c: &Self::Cell) -> Self::Cell {
        let b = self.base();
        if i == 0 {
            let t = self.twist.tau(&c.0);
            Pair(b.face(0, &c.0), self.fibre.act(&t, &self.fibre.face(0, &c.1)))
        } else {
            Pair(b.face(i, &c.0), self.fibre.face(i, &c.1))
        }
    }
    fn degeneracy(&self, i: usize, c: &Self::Cell) -> Self::Cell {
        Pair(c.0.degeneracy(i), self.fibre.degeneracy(i, &c.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn double_cover_faces() {
        let b = models::double_cover();
        let e = b.twist.base().generator("e").unwrap();
        let pt = b.twist.base().generator("pt").unwrap();
        let g = b.group();
        let one = g.identity(1);
        let gen = g.element(0, 1);
        assert_eq!(b.face(0, &Pair(e, one.clone())), Pair(pt, gen));
        assert_eq!(b.face(1, &Pair(e, one)), Pair(pt, g.identity(0)));
        assert_eq!(b.nondegenerate(1).unwrap().len(), 2);
    }

    #[test]
    fn canonical_loop_twist_is_valid() {
        let x = Arc::new(models::collapsed_simplex(3, 0));
        let g = Arc::new(SimplicialGroup::loop_group(x, 5).unwrap());
        let t = TwistingFunction::canonical(g).unwrap();
        t.verify(4).unwrap();
    }

    #[test]
    fn bar_itself_violates_the_d0_identity() {
        let x = Arc::new(models::collapsed_simplex(2, 0));
        let g = Arc::new(SimplicialGroup::loop_group(x.clone(), 5).unwrap());
        let mut table = BTreeMap::new();
        for d in 1..=2 {
            for &gen in x.generators_in(d) {
                table.insert(gen, g.bar(&Simplex::generator(gen, d)));
            }
        }
        assert!(matches!(TwistingFunction::new(x, g, table), Err(Error::InvalidTwist(_))));
    }

    #[test]
    fn trivial_twist_gives_untwisted_faces() {
        let b = models::trivial_bundle();
        let x = b.twist.base().generator("e").unwrap();
        let y = b.fibre.space.generator("e").unwrap();
        let c = Pair(x, y);
        let pt = b.twist.base().generator("pt").unwrap();
        let fpt = b.fibre.space.generator("pt").unwrap();
        assert_eq!(b.face(0, &c), Pair(pt, fpt));
    }
}
