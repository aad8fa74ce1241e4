//! Named verification suites run against a loaded presentation. Each reports the
//! number of checks and, on failure, the first failing element with both sides.

use serde::Serialize;

use crate::chain::{tensor, Basis, Chain, Tensor};
use crate::chainmaps::{augment, aw, aw_cell, boundary, boundary_cell};
use crate::cobar::{
    baues_letter, check_twisting, diagonal, diagonal_chain, differential, differential_chain, induced_map, letter_diagonal, words_up_to, CobarWord,
    GroupAlgebra,
};
use crate::error::{Error, Result};
use crate::group::{GroupKind, GroupWord, SimplicialGroup};
use crate::homology::complex::{chain_map_matrices, is_quasi_iso, FiniteComplex};
use crate::homology::augmentation::twisted_complex;
use crate::io::{render_chain, render_cobar_word, render_group_word, Bundle, Loaded};
use crate::presentation::Presentation;
use crate::simplex::Simplex;
use crate::simplicial::{Pair, Simplicial};
use crate::szczarba::{hat_sz, phi, psi, psi_chain, s_n, sz, szczarba_t};
use crate::twist::{GSpace, GroupFibre, TwistedProduct, TwistingFunction};
use crate::twisted_tensor::TwistedTensor;

pub const SUITES: &[&str] = &["twisting", "comultiplicativity", "baues", "degeneracy", "psi-dgc"];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub check: String,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checked: usize,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.into(), checked: 0, witness: None, notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// Records one comparison; only the first failure is kept.
    fn compare(&mut self, check: &str, element: impl FnOnce() -> String, equal: bool, lhs: impl FnOnce() -> String, rhs: impl FnOnce() -> String) {
        self.checked += 1;
        if !equal && self.witness.is_none() {
            self.witness = Some(Witness { check: check.into(), element: element(), lhs: lhs(), rhs: rhs() });
        }
    }

    pub fn render(&self) -> String {
        let checks = if self.checked == 1 { "1 check".to_string() } else { format!("{} checks", self.checked) };
        let mut out = match &self.witness {
            None => format!("PASS {} ({checks})", self.suite),
            Some(w) => format!(
                "FAIL {} ({checks})\n  check:   {}\n  element: {}\n  lhs:     {}\n  rhs:     {}",
                self.suite, w.check, w.element, w.lhs, w.rhs
            ),
        };
        for n in &self.notes {
            out.push_str(&format!("\n  note: {n}"));
        }
        out
    }
}

pub fn run_suite(l: &Loaded, name: &str, dim: usize) -> Result<SuiteReport> {
    match name {
        "twisting" => twisting(l.twist()?, dim),
        "comultiplicativity" => comultiplicativity(l.twist()?, dim),
        "baues" => baues(&l.base, dim),
        "degeneracy" => match l.bundle()? {
            Bundle::Group(tp) => degeneracy(&bounded(tp), dim),
            Bundle::Set(tp) => degeneracy(&tp, dim),
        },
        "psi-dgc" => match l.bundle()? {
            Bundle::Group(tp) => psi_dgc(&bounded(tp), dim),
            Bundle::Set(tp) => psi_dgc(&tp, dim),
        },
        other => Err(Error::UnknownSuite(other.into())),
    }
}

/// Loop-group fibres are enumerated with one-letter words only.
fn bounded(tp: TwistedProduct<GroupFibre>) -> TwistedProduct<GroupFibre> {
    match tp.group().kind() {
        GroupKind::Loop(_) => TwistedProduct { fibre: GroupFibre { group: tp.fibre.group.clone(), word_bound: Some(1) }, twist: tp.twist },
        GroupKind::Finite(_) => tp,
    }
}

/// Highest base dimension whose group elements stay inside the truncation, with
/// `headroom` levels to spare (`t(x)` lives one level below `x`).
fn cap_dim(g: &SimplicialGroup, dim: usize, headroom: usize, r: &mut SuiteReport) -> usize {
    let cap = g.truncation().saturating_add(1).saturating_sub(headroom).max(1);
    if dim > cap {
        r.notes.push(format!("dimension bound lowered to {cap} by the loop-group truncation"));
        cap
    } else {
        dim
    }
}

fn words(g: &SimplicialGroup, c: &Chain<GroupWord>) -> String {
    render_chain(c, |w| render_group_word(g, w))
}

fn word_pairs(g: &SimplicialGroup, c: &Chain<(GroupWord, GroupWord)>) -> String {
    render_chain(c, |(a, b)| format!("{} ⊗ {}", render_group_word(g, a), render_group_word(g, b)))
}

/// Twisting-function identities, then `d(t) = t ∪ t` for Szczarba's cochain.
pub fn twisting(tw: &TwistingFunction, dim: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("twisting");
    let g = &**tw.group();
    let dim = cap_dim(g, dim, 0, &mut r);
    let base = &**tw.base();
    if let Some(v) = tw.first_violation(dim) {
        r.checked += 1;
        r.witness = Some(Witness {
            check: v.identity.clone(),
            element: base.render(&v.simplex),
            lhs: render_group_word(g, &v.lhs),
            rhs: render_group_word(g, &v.rhs),
        });
        return Ok(r);
    }
    r.checked += (1..=dim).map(|n| base.simplices(n).len()).sum::<usize>();
    let rep = check_twisting(base, &GroupAlgebra(g), |c| szczarba_t(tw, c), dim);
    r.checked += rep.checked;
    if let Some(f) = rep.failures.first() {
        r.witness = Some(Witness { check: "d(t) = t ∪ t".into(), element: base.render(&f.simplex), lhs: words(g, &f.dt), rhs: words(g, &f.cup) });
    }
    Ok(r)
}

/// `Δ Sz[x] = (Sz ⊗ Sz) Δ_Ω[x]` on nondegenerate simplices, plus `Sz` as a chain map
/// and counit preservation on cobar words.
pub fn comultiplicativity(tw: &TwistingFunction, dim: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("comultiplicativity");
    let base = &**tw.base();
    if !base.is_reduced() {
        return Err(Error::NotReduced);
    }
    let g = &**tw.group();
    let dim = cap_dim(g, dim, 0, &mut r);
    let a = GroupAlgebra(g);
    let t = |c: &Simplex| szczarba_t(tw, c);
    for n in 1..=dim {
        for x in base.nondegenerate(n) {
            let w = CobarWord::letter(x);
            let lhs = aw(g, &t(&x));
            let rhs = sz_tensor(&a, &t, &diagonal(base, &w));
            r.compare("Δ Sz[x] = (Sz⊗Sz) Δ[x]", || render_cobar_word(base, &w), lhs == rhs, || word_pairs(g, &lhs), || word_pairs(g, &rhs));
        }
    }
    word_checks(&mut r, tw, dim as i64 - 1, 3);
    Ok(r)
}

fn sz_tensor(a: &GroupAlgebra<'_>, t: &impl Fn(&Simplex) -> Chain<GroupWord>, c: &Chain<(CobarWord, CobarWord)>) -> Chain<(GroupWord, GroupWord)> {
    let mut out = Chain::zero();
    for ((w1, w2), k) in c.iter() {
        out.add_assign_scaled(&tensor(&induced_map(a, t, w1), &induced_map(a, t, w2)), k);
    }
    out
}

/// The induced map `ΩC(X) → C(G)` as a dg-bialgebra morphism on words of degree `≤ max_degree`.
pub fn bialgebra_morphism(tw: &TwistingFunction, max_degree: i64, max_len: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("bialgebra-morphism");
    if !tw.base().is_reduced() {
        return Err(Error::NotReduced);
    }
    word_checks(&mut r, tw, max_degree, max_len);
    Ok(r)
}

fn word_checks(r: &mut SuiteReport, tw: &TwistingFunction, max_degree: i64, max_len: usize) {
    let base = &**tw.base();
    let g = &**tw.group();
    let a = GroupAlgebra(g);
    let t = |c: &Simplex| szczarba_t(tw, c);
    for w in words_up_to(base, max_degree, max_len) {
        let f = induced_map(&a, t, &w);
        let el = || render_cobar_word(base, &w);
        let d_lhs = a_d(g, &f);
        let d_rhs = differential(base, &w).map(|v| induced_map(&a, t, v));
        r.compare("d Sz = Sz d", el, d_lhs == d_rhs, || words(g, &d_lhs), || words(g, &d_rhs));
        let lhs = aw(g, &f);
        let rhs = sz_tensor(&a, &t, &diagonal(base, &w));
        r.compare("Δ Sz = (Sz⊗Sz) Δ", el, lhs == rhs, || word_pairs(g, &lhs), || word_pairs(g, &rhs));
        let (e1, e2) = (augment(&f), crate::cobar::counit(&w));
        r.compare("ε Sz = ε", el, e1 == e2, || e1.to_string(), || e2.to_string());
    }
}

fn a_d(g: &SimplicialGroup, c: &Chain<GroupWord>) -> Chain<GroupWord> {
    boundary(g, c)
}

/// Cobar dg-bialgebra axioms on words, and agreement with the Baues diagonal on letters.
pub fn baues(x: &Presentation, dim: usize) -> Result<SuiteReport> {
    baues_bounded(x, dim, 2)
}

/// As [`baues`], with words of degree `< dim` and at most `max_len` letters.
pub fn baues_bounded(x: &Presentation, dim: usize, max_len: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("baues");
    if !x.is_one_reduced() {
        return Err(Error::NotOneReduced);
    }
    let pairs = |c: &Chain<(CobarWord, CobarWord)>| render_chain(c, |(a, b)| format!("{} ⊗ {}", render_cobar_word(x, a), render_cobar_word(x, b)));
    for n in 2..=dim {
        for c in x.nondegenerate(n) {
            let lhs = letter_diagonal(x, &c);
            let rhs = baues_letter(x, &c)?;
            r.compare("Δ_Ω[x] = Δ_Baues[x]", || x.render(&c), lhs == rhs, || pairs(&lhs), || pairs(&rhs));
        }
    }
    let max_degree = dim as i64 - 1;
    for w in words_up_to(x, max_degree, max_len) {
        let el = || render_cobar_word(x, &w);
        let dd = differential_chain(x, &differential(x, &w));
        r.compare("d² = 0", el, dd.is_zero(), || render_chain(&dd, |v| render_cobar_word(x, v)), || "0".into());
        let d = |v: &CobarWord| differential(x, v);
        let lhs = diagonal_chain(x, &differential(x, &w));
        let rhs = crate::chain::tensor_differential(&diagonal(x, &w), d, d);
        r.compare("Δ d = (d⊗1 + 1⊗d) Δ", el, lhs == rhs, || pairs(&lhs), || pairs(&rhs));
        let dw = diagonal(x, &w);
        let triple = |a: &CobarWord, b: &CobarWord, c: &CobarWord| Chain::basis(Tensor(vec![a.clone(), b.clone(), c.clone()]));
        let left = dw.map(|(a, b)| diagonal(x, a).map(|(a1, a2)| triple(a1, a2, b)));
        let right = dw.map(|(a, b)| diagonal(x, b).map(|(b1, b2)| triple(a, b1, b2)));
        let show3 = |c: &Chain<Tensor<CobarWord>>| render_chain(c, |t| t.0.iter().map(|v| render_cobar_word(x, v)).collect::<Vec<_>>().join(" ⊗ "));
        r.compare("(Δ⊗1)Δ = (1⊗Δ)Δ", el, left == right, || show3(&left), || show3(&right));
        let mut l1 = Chain::zero();
        let mut r1 = Chain::zero();
        for ((a, b), k) in dw.iter() {
            l1.add_assign_scaled(&Chain::basis(b.clone()), &(crate::cobar::counit(a) * k));
            r1.add_assign_scaled(&Chain::basis(a.clone()), &(crate::cobar::counit(b) * k));
        }
        let ok = l1 == Chain::basis(w.clone()) && r1 == Chain::basis(w.clone());
        r.compare("(ε⊗1)Δ = id = (1⊗ε)Δ", el, ok, || render_chain(&l1, |v| render_cobar_word(x, v)), || render_chain(&r1, |v| render_cobar_word(x, v)));
    }
    Ok(r)
}

/// `t` and `ψ` vanish on degenerate simplices; `Sz` and `hatSz` commute with degeneracies through `Φ`.
pub fn degeneracy<F: GSpace>(tp: &TwistedProduct<F>, dim: usize) -> Result<SuiteReport>
where
    F::Cell: Basis,
{
    let mut r = SuiteReport::new("degeneracy");
    let tw = &*tp.twist;
    let base = &**tw.base();
    let g = &**tw.group();
    let dim = cap_dim(g, dim, 2, &mut r);
    let fibre_cells: Vec<F::Cell> = (0..=1).map(|d| tp.fibre.basis(d)).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    for n in 1..=dim {
        for x in base.simplices(n).into_iter().filter(|x| x.is_degenerate()) {
            let t = szczarba_t(tw, &x);
            r.compare("t(degenerate) = 0", || base.render(&x), t.is_zero(), || words(g, &t), || "0".into());
            for y in &fibre_cells {
                let c = psi(tp, &x, y);
                r.compare("ψ(degenerate ⊗ y) = 0", || format!("{} ⊗ {}", base.render(&x), tp.fibre.render_cell(y)), c.is_zero(), || render_chain(&c, |p| tp.render(p)), || "0".into());
            }
        }
    }
    for n in 1..dim {
        for x in base.nondegenerate(n) {
            for p in 0..=n {
                let sx = x.degeneracy(p);
                for i in s_n(n) {
                    let (j, q) = phi(&i, p)?;
                    let lhs = sz(tw, &i, &sx)?;
                    let rhs = g.degeneracy(q, &sz(tw, &j, &x)?);
                    r.compare(
                        "Sz_i s_p x = s_q Sz_j x",
                        || format!("i={i:?} p={p} x={}", base.render(&x)),
                        lhs == rhs,
                        || render_group_word(g, &lhs),
                        || render_group_word(g, &rhs),
                    );
                }
                for i in s_n(n + 1) {
                    let (j, q) = phi(&i, p + 1)?;
                    let lhs = hat_sz(tw, &i, &sx)?;
                    let Pair(a, h) = hat_sz(tw, &j, &x)?;
                    let rhs = Pair(a.degeneracy(q), g.degeneracy(q, &h));
                    let show = |c: &Pair<Simplex, GroupWord>| format!("({}, {})", base.render(&c.0), render_group_word(g, &c.1));
                    r.compare("hatSz_i s_p x = s_q hatSz_j x", || format!("i={i:?} p={p} x={}", base.render(&x)), lhs == rhs, || show(&lhs), || show(&rhs));
                }
            }
        }
    }
    Ok(r)
}

/// `ψ` is a chain map, comultiplicative and counital on basis pairs of total degree
/// `≤ dim`; for finite fibres also a quasi-isomorphism through degree `dim - 1`.
pub fn psi_dgc<F: GSpace>(tp: &TwistedProduct<F>, dim: usize) -> Result<SuiteReport>
where
    F::Cell: Basis,
{
    let mut r = SuiteReport::new("psi-dgc");
    let tt = TwistedTensor::new(tp);
    let show = |c: &Chain<Pair<Simplex, F::Cell>>| render_chain(c, |p| tp.render(p));
    let show2 = |c: &Chain<(Pair<Simplex, F::Cell>, Pair<Simplex, F::Cell>)>| render_chain(c, |(a, b)| format!("{} ⊗ {}", tp.render(a), tp.render(b)));
    for d in 0..=dim {
        for (x, y) in tt.basis(d)? {
            let el = || format!("{} ⊗ {}", tp.base().render(&x), tp.fibre.render_cell(&y));
            let p = psi(tp, &x, &y);
            let lhs = boundary(tp, &p);
            let rhs = psi_chain(tp, &tt.differential(&x, &y));
            r.compare("d ψ = ψ d_t", el, lhs == rhs, || show(&lhs), || show(&rhs));
            let lhs = p.map(|c| aw_cell(tp, c));
            let mut rhs = Chain::zero();
            for (((a, b), (c, e)), k) in tt.diagonal(&x, &y).iter() {
                rhs.add_assign_scaled(&tensor(&psi(tp, a, b), &psi(tp, c, e)), k);
            }
            r.compare("Δ ψ = (ψ⊗ψ) Δ", el, lhs == rhs, || show2(&lhs), || show2(&rhs));
            let (e1, e2) = (augment(&p), tt.counit(&x, &y));
            r.compare("ε ψ = ε", el, e1 == e2, || e1.to_string(), || e2.to_string());
        }
    }
    if tp.group().finite_group().is_none() {
        r.notes.push("quasi-isomorphism check skipped: the loop-group fibre has infinitely many simplices".into());
        return Ok(r);
    }
    let (src, src_bases) = twisted_complex(&tt, dim)?;
    let tgt_bases: Vec<Vec<Pair<Simplex, F::Cell>>> = (0..=dim).map(|d| tp.nondegenerate(d)).collect::<Result<_>>()?;
    let tgt = FiniteComplex::from_bases(0, &tgt_bases, |c| boundary_cell(tp, c))?;
    let f = chain_map_matrices(&src_bases, &tgt_bases, |(x, y)| psi(tp, x, y))?;
    let through = dim as i64 - 1;
    let qi = is_quasi_iso(&src, &tgt, &f, through)?;
    r.compare(
        "mapping cone of ψ acyclic",
        || format!("degrees 0..={through}"),
        qi,
        || src.all_homology().iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", "),
        || tgt.all_homology().iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", "),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn suites_pass_on_models() {
        let tw = models::loop_twist(models::minimal_sphere(2), 5);
        assert!(twisting(&tw, 4).unwrap().passed());
        assert!(comultiplicativity(&tw, 4).unwrap().passed());
        assert!(baues(&models::collapsed_simplex(4, 1), 4).unwrap().passed());
        let cover = models::double_cover();
        let r = psi_dgc(&cover, 3).unwrap();
        assert!(r.passed(), "{}", r.render());
        assert!(degeneracy(&cover, 4).unwrap().passed());
        assert!(psi_dgc(&models::trivial_bundle(), 3).unwrap().passed());
    }

    #[test]
    fn broken_twist_yields_a_witness() {
        let base = std::sync::Arc::new(models::collapsed_simplex(3, 0));
        let good = models::loop_twist(models::collapsed_simplex(3, 0), 4);
        let group = good.group().clone();
        let mut table = good.table().clone();
        let top = base.lookup("x0123").unwrap();
        let w = table[&top].clone();
        table.insert(top, group.inv(&w));
        let bad = TwistingFunction::new_unchecked(group.loop_base().unwrap().clone(), group.clone(), table).unwrap();
        let r = twisting(&bad, 3).unwrap();
        let w = r.witness.expect("failure");
        assert_eq!(w.element, "x0123");
        assert_ne!(w.lhs, w.rhs);
    }
}
