//! Presentation files, expression parsing and chain printing.
//!
//! A presentation file is a JSON object:
//!
//! ```json
//! {
//!   "name": "S1",
//!   "generators": [["pt"], ["e"]],
//!   "faces": {"e.0": "pt", "e.1": "pt"},
//!   "group": {"finite": {"elements": ["1", "g"], "table": [["1", "g"], ["g", "1"]]}},
//!   "twist": {"e": "g"},
//!   "fibre": "group"
//! }
//! ```
//!
//! `group` may instead be `{"cyclic": m}` or `{"loopgroup_of": "S1", "truncation": 5}`.
//! `fibre` is `"group"`, `"point"` or an inline presentation; `action` maps a group
//! element to a permutation of fibre generators.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::chain::{Basis, Chain};
use crate::cobar::CobarWord;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupKind, GroupWord, SimplicialGroup};
use crate::presentation::{valid_name, Presentation, PresentationBuilder};
use crate::simplex::Simplex;
use crate::twist::{Action, GroupFibre, SetFibre, TwistedProduct, TwistingFunction};

/// `1`, a finite-group element name, or loop letters `x~` / `(s_1 x)~^-1` joined by `*`.
pub fn render_group_word(group: &SimplicialGroup, w: &GroupWord) -> String {
    match (w, group.kind()) {
        (GroupWord::Finite { elem, .. }, GroupKind::Finite(g)) => g.name(*elem).to_string(),
        (GroupWord::Free { letters, .. }, GroupKind::Loop(base)) => {
            if letters.is_empty() {
                return "1".into();
            }
            letters
                .iter()
                .map(|l| {
                    let s = base.render(&l.base);
                    let s = if l.base.is_degenerate() { format!("({s})~") } else { format!("{s}~") };
                    if l.exp < 0 {
                        format!("{s}^-1")
                    } else {
                        s
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        }
        _ => format!("{w:?}"),
    }
}

pub fn render_cobar_word(x: &Presentation, w: &CobarWord) -> String {
    if w.0.is_empty() {
        return "[]".into();
    }
    format!("[{}]", w.0.iter().map(|c| x.render(c)).collect::<Vec<_>>().join("|"))
}

/// Terms in basis order as `+ b`, `- b` or `+ 3 b`; the zero chain prints as `0`.
pub fn render_chain<B: Basis>(c: &Chain<B>, mut show: impl FnMut(&B) -> String) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (b, k) in c.iter() {
        let sign = if k.is_negative() { "-" } else { "+" };
        let mag = k.abs();
        if mag.is_one() {
            parts.push(format!("{sign} {}", show(b)));
        } else {
            parts.push(format!("{sign} {mag} {}", show(b)));
        }
    }
    parts.join(" ")
}

#[derive(Serialize, Deserialize)]
struct JsonTerm<B> {
    basis: B,
    coeff: String,
}

pub fn chain_to_json<B: Basis + Serialize>(c: &Chain<B>) -> serde_json::Value {
    let terms: Vec<JsonTerm<&B>> = c.iter().map(|(b, k)| JsonTerm { basis: b, coeff: k.to_string() }).collect();
    serde_json::to_value(terms).expect("serializable chain")
}

pub fn chain_from_json<B: Basis + DeserializeOwned>(v: &serde_json::Value) -> Result<Chain<B>> {
    let terms: Vec<JsonTerm<B>> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let mut c = Chain::zero();
    for t in terms {
        let k: BigInt = t.coeff.parse().map_err(|_| Error::Parse(format!("bad coefficient {}", t.coeff)))?;
        c.add_term(t.basis, k);
    }
    Ok(c)
}

/// `s_{j_1} … s_{j_r} name` (also `s_j` without braces), whitespace-insensitive.
pub fn parse_simplex(x: &Presentation, s: &str) -> Result<Simplex> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    let (name, degs) = tokens.split_last().ok_or_else(|| Error::Parse("empty simplex".into()))?;
    let gen = x.lookup(name).ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
    let mut word = Vec::new();
    for t in degs {
        let j = t
            .strip_prefix("s_")
            .map(|r| r.trim_start_matches('{').trim_end_matches('}'))
            .and_then(|r| r.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad degeneracy {t:?}")))?;
        word.push(j);
    }
    Simplex::from_degeneracy_word(gen, x.generator_info(gen).dim, &word)
}

/// Inverse of [`render_group_word`]; `level` is checked when given.
pub fn parse_group_word(group: &SimplicialGroup, s: &str, level: Option<usize>) -> Result<GroupWord> {
    let s = s.trim();
    match group.kind() {
        GroupKind::Finite(fg) => {
            let e = fg.lookup(s).ok_or_else(|| Error::Parse(format!("unknown group element {s:?}")))?;
            Ok(group.element(level.unwrap_or(0), e))
        }
        GroupKind::Loop(base) => {
            if s == "1" {
                let l = level.ok_or_else(|| Error::Parse("identity needs a level".into()))?;
                return Ok(group.identity(l));
            }
            let mut acc: Option<GroupWord> = None;
            for factor in s.split('*') {
                let f = factor.trim();
                let (body, inverse) = match f.strip_suffix("^-1") {
                    Some(b) => (b.trim(), true),
                    None => (f, false),
                };
                let body = body.strip_suffix('~').ok_or_else(|| Error::Parse(format!("loop letter {f:?} must end in ~")))?;
                let body = body.trim();
                let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
                let x = parse_simplex(base, body)?;
                if x.dim() == 0 {
                    return Err(Error::Parse(format!("letter on a vertex: {f:?}")));
                }
                let mut w = group.bar(&x);
                if inverse {
                    w = group.inv(&w);
                }
                acc = Some(match acc {
                    None => w,
                    Some(a) => group.try_mul(&a, &w)?,
                });
            }
            let w = acc.ok_or_else(|| Error::Parse("empty group word".into()))?;
            if let Some(l) = level {
                if w.level() != l {
                    return Err(Error::LevelMismatch(w.level(), l));
                }
            }
            Ok(w)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetSpec {
    #[serde(default)]
    name: Option<String>,
    generators: Vec<Vec<String>>,
    #[serde(default)]
    faces: BTreeMap<String, String>,
    #[serde(default)]
    basepoint: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteSpec {
    elements: Vec<String>,
    table: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    #[serde(default)]
    finite: Option<FiniteSpec>,
    #[serde(default)]
    cyclic: Option<usize>,
    #[serde(default)]
    loopgroup_of: Option<String>,
    #[serde(default)]
    truncation: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FibreSpec {
    Named(String),
    Set(SetSpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    #[serde(default)]
    name: Option<String>,
    generators: Vec<Vec<String>>,
    #[serde(default)]
    faces: BTreeMap<String, String>,
    #[serde(default)]
    basepoint: Option<String>,
    #[serde(default)]
    group: Option<GroupSpec>,
    #[serde(default)]
    twist: Option<BTreeMap<String, String>>,
    #[serde(default)]
    fibre: Option<FibreSpec>,
    #[serde(default)]
    action: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

fn build_set(name: &str, generators: &[Vec<String>], faces: &BTreeMap<String, String>, basepoint: Option<&str>) -> Result<Presentation> {
    let mut b = PresentationBuilder::new(name);
    let mut seen = std::collections::BTreeSet::new();
    for (d, names) in generators.iter().enumerate() {
        for g in names {
            if !valid_name(g) {
                return Err(Error::Parse(format!("invalid generator name {g:?}")));
            }
            if d == 0 {
                b.vertex(g)?;
            } else {
                let mut fs = Vec::with_capacity(d + 1);
                let partial = b.clone().build_unchecked()?;
                for i in 0..=d {
                    let key = format!("{g}.{i}");
                    let expr = faces.get(&key).ok_or_else(|| Error::Parse(format!("missing face {key}")))?;
                    seen.insert(key);
                    fs.push(parse_simplex(&partial, expr)?);
                }
                b.generator(g, fs)?;
            }
        }
    }
    if let Some(extra) = faces.keys().find(|k| !seen.contains(*k)) {
        return Err(Error::Parse(format!("face {extra} names no generator")));
    }
    if let Some(p) = basepoint {
        b.set_basepoint(p);
    }
    b.build()
}

/// The fibre of a loaded bundle.
#[derive(Clone, Debug)]
pub enum Fibre {
    Group(GroupFibre),
    Set(SetFibre),
}

/// Everything a presentation file describes.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub base: Arc<Presentation>,
    pub group: Option<Arc<SimplicialGroup>>,
    /// Loaded without verification so that a broken twist can be diagnosed.
    pub twist: Option<Arc<TwistingFunction>>,
    pub fibre: Option<Fibre>,
}

pub enum Bundle {
    Group(TwistedProduct<GroupFibre>),
    Set(TwistedProduct<SetFibre>),
}

impl Loaded {
    pub fn twist(&self) -> Result<&Arc<TwistingFunction>> {
        self.twist.as_ref().ok_or_else(|| Error::Invalid("the file declares no group or twist".into()))
    }

    /// The twist after verifying its identities through `max_dim`.
    pub fn verified_twist(&self, max_dim: usize) -> Result<&Arc<TwistingFunction>> {
        let t = self.twist()?;
        t.verify(max_dim)?;
        Ok(t)
    }

    pub fn bundle(&self) -> Result<Bundle> {
        let tw = self.twist()?.clone();
        match self.fibre.clone() {
            Some(Fibre::Group(f)) => Ok(Bundle::Group(TwistedProduct::new(tw, f)?)),
            Some(Fibre::Set(f)) => Ok(Bundle::Set(TwistedProduct::new(tw, f)?)),
            None => Err(Error::Invalid("the file declares no fibre".into())),
        }
    }
}

pub fn load_path(path: &Path, truncation: Option<usize>) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    load_str(&text, truncation)
}

/// Parses a presentation file; `truncation` overrides the loop-group truncation in the file.
pub fn load_str(text: &str, truncation: Option<usize>) -> Result<Loaded> {
    let spec: FileSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let name = spec.name.clone().unwrap_or_else(|| "X".into());
    let base = Arc::new(build_set(&name, &spec.generators, &spec.faces, spec.basepoint.as_deref())?);
    let group = match &spec.group {
        None => None,
        Some(g) => Some(Arc::new(build_group(g, &base, truncation)?)),
    };
    let twist = match (&group, &spec.twist) {
        (None, Some(_)) => return Err(Error::Parse("twist without a group".into())),
        (None, None) => None,
        (Some(g), None) => Some(Arc::new(match g.kind() {
            GroupKind::Loop(_) => TwistingFunction::canonical(g.clone())?,
            GroupKind::Finite(_) => TwistingFunction::trivial(base.clone(), g.clone())?,
        })),
        (Some(g), Some(t)) => {
            let mut table = BTreeMap::new();
            for (gen, word) in t {
                let id = base.lookup(gen).ok_or_else(|| Error::Parse(format!("twist on unknown generator {gen:?}")))?;
                let d = base.generator_info(id).dim;
                if d == 0 {
                    return Err(Error::Parse(format!("twist on the vertex {gen}")));
                }
                table.insert(id, parse_group_word(g, word, Some(d - 1))?);
            }
            Some(Arc::new(TwistingFunction::new_unchecked(base.clone(), g.clone(), table)?))
        }
    };
    let fibre = match (&group, &spec.fibre) {
        (_, None) | (None, _) => {
            if spec.fibre.is_some() && group.is_none() {
                return Err(Error::Parse("fibre without a group".into()));
            }
            group.as_ref().map(|g| Fibre::Group(GroupFibre { group: g.clone(), word_bound: None }))
        }
        (Some(g), Some(FibreSpec::Named(n))) => match n.as_str() {
            "group" => Some(Fibre::Group(GroupFibre { group: g.clone(), word_bound: None })),
            "point" => {
                let mut b = PresentationBuilder::new("point");
                b.vertex("p")?;
                Some(Fibre::Set(SetFibre::new(Arc::new(b.build()?), g.clone(), Action::Trivial)?))
            }
            other => return Err(Error::Parse(format!("unknown fibre {other:?}"))),
        },
        (Some(g), Some(FibreSpec::Set(s))) => {
            let space = Arc::new(build_set(s.name.as_deref().unwrap_or("F"), &s.generators, &s.faces, s.basepoint.as_deref())?);
            let action = match &spec.action {
                None => Action::Trivial,
                Some(a) => {
                    let fg = g.finite_group().ok_or_else(|| Error::InvalidAction("action tables need a finite group".into()))?;
                    let mut table = vec![(0..space.num_generators() as u32).collect::<Vec<_>>(); fg.order()];
                    for (elem, perm) in a {
                        let e = fg.lookup(elem).ok_or_else(|| Error::Parse(format!("unknown group element {elem:?}")))?;
                        for (from, to) in perm {
                            let f = space.lookup(from).ok_or_else(|| Error::Parse(format!("unknown fibre generator {from:?}")))?;
                            let t = space.lookup(to).ok_or_else(|| Error::Parse(format!("unknown fibre generator {to:?}")))?;
                            table[e as usize][f as usize] = t;
                        }
                    }
                    Action::Table(table)
                }
            };
            Some(Fibre::Set(SetFibre::new(space, g.clone(), action)?))
        }
    };
    if spec.action.is_some() && !matches!(spec.fibre, Some(FibreSpec::Set(_))) {
        return Err(Error::Parse("action needs an inline fibre".into()));
    }
    Ok(Loaded { base, group, twist, fibre })
}

fn build_group(g: &GroupSpec, base: &Arc<Presentation>, truncation: Option<usize>) -> Result<SimplicialGroup> {
    match (&g.finite, g.cyclic, &g.loopgroup_of) {
        (Some(f), None, None) => {
            let index: BTreeMap<&str, u32> = f.elements.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
            let mut table = Vec::new();
            for row in &f.table {
                let mut r = Vec::new();
                for n in row {
                    r.push(*index.get(n.as_str()).ok_or_else(|| Error::Parse(format!("unknown group element {n:?}")))?);
                }
                table.push(r);
            }
            Ok(SimplicialGroup::finite(FiniteGroup::new(f.elements.clone(), table)?))
        }
        (None, Some(m), None) if m >= 1 => Ok(SimplicialGroup::finite(FiniteGroup::cyclic(m))),
        (None, None, Some(of)) => {
            if of != base.name() && of != "self" {
                return Err(Error::Parse(format!("loopgroup_of {of:?} does not name this set")));
            }
            let n = truncation.or(g.truncation).unwrap_or(5);
            SimplicialGroup::loop_group(base.clone(), n)
        }
        _ => Err(Error::Parse("group must be exactly one of finite, cyclic, loopgroup_of".into())),
    }
}

/// The expressions understood by `eval`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    T(String),
    Delta(String),
    Psi(String, String),
    Sz(Vec<usize>, String),
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let s = s.trim();
    let inner = |open: char, close: char, prefix: &str| -> Option<String> {
        let rest = s.strip_prefix(prefix)?.trim_start();
        let rest = rest.strip_prefix(open)?.strip_suffix(close)?;
        Some(rest.trim().to_string())
    };
    if let Some(x) = inner('(', ')', "t") {
        return Ok(Expr::T(x));
    }
    if let Some(x) = inner('[', ']', "Delta") {
        return Ok(Expr::Delta(x));
    }
    if let Some(x) = inner('(', ')', "psi") {
        let (a, b) = x.split_once(',').ok_or_else(|| Error::Parse("psi takes two arguments".into()))?;
        return Ok(Expr::Psi(a.trim().into(), b.trim().into()));
    }
    if let Some(x) = inner('(', ')', "Sz") {
        let x = x.trim_start();
        let body = x.strip_prefix('(').ok_or_else(|| Error::Parse("Sz takes an index list (…)".into()))?;
        let (list, rest) = body.split_once(')').ok_or_else(|| Error::Parse("unclosed index list".into()))?;
        let idx = list
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad index {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let simplex = rest.trim_start().strip_prefix(',').ok_or_else(|| Error::Parse("Sz takes two arguments".into()))?;
        return Ok(Expr::Sz(idx, simplex.trim().into()));
    }
    Err(Error::Parse(format!("unknown expression {s:?}")))
}

/// Result of `eval`: a canonical text line and the JSON form of the chain.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub text: String,
    pub json: serde_json::Value,
}

pub fn eval(l: &Loaded, e: &Expr) -> Result<Evaluated> {
    use crate::szczarba::{psi, sz, sz_vertex_factors, szczarba_t, t_vertex_notation};
    let base = &l.base;
    match e {
        Expr::T(x) => {
            let x = parse_simplex(base, x)?;
            let tw = l.verified_twist(x.dim().max(1))?;
            let c = szczarba_t(tw, &x);
            let mut text = render_chain(&c, |w| render_group_word(tw.group(), w));
            if x.dim() >= 1 && !x.is_degenerate() {
                let n = x.dim();
                let vertices: String = (0..=n).map(|v| v.to_string()).collect();
                text = format!("t({vertices}) = {}\n{text}", t_vertex_notation(n).join(" "));
            }
            Ok(Evaluated { text, json: chain_to_json(&c) })
        }
        Expr::Delta(x) => {
            let x = parse_simplex(base, x)?;
            if !base.is_reduced() {
                return Err(Error::NotReduced);
            }
            if x.dim() == 0 {
                return Err(Error::DegreeZeroLetter);
            }
            let c = crate::cobar::diagonal(base, &CobarWord::letter(x));
            let text = render_chain(&c, |(a, b)| format!("{} ⊗ {}", render_cobar_word(base, a), render_cobar_word(base, b)));
            Ok(Evaluated { text, json: chain_to_json(&c) })
        }
        Expr::Sz(i, x) => {
            let x = parse_simplex(base, x)?;
            let tw = l.verified_twist(x.dim().max(1))?;
            let w = sz(tw, i, &x)?;
            let factors = sz_vertex_factors(i)?;
            let notation: String = factors.iter().map(|f| format!("σ({})", f.iter().map(|v| v.to_string()).collect::<String>())).collect();
            let c = Chain::basis(w.clone());
            let text = format!("{notation}\n{}", render_chain(&c, |w| render_group_word(tw.group(), w)));
            Ok(Evaluated { text, json: chain_to_json(&c) })
        }
        Expr::Psi(x, y) => {
            let x = parse_simplex(base, x)?;
            l.verified_twist(x.dim().max(1))?;
            match l.bundle()? {
                Bundle::Group(tp) => {
                    let y = parse_group_word(tp.group(), y, None)?;
                    let c = psi(&tp, &x, &y);
                    Ok(Evaluated { text: render_chain(&c, |p| tp.render(p)), json: chain_to_json(&c) })
                }
                Bundle::Set(tp) => {
                    let y = parse_simplex(&tp.fibre.space, y)?;
                    let c = psi(&tp, &x, &y);
                    Ok(Evaluated { text: render_chain(&c, |p| tp.render(p)), json: chain_to_json(&c) })
                }
            }
        }
    }
}
