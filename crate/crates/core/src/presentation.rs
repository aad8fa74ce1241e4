//! Finitely presented simplicial sets: named nondegenerate generators with
//! faces given as normal-form simplices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::simplex::{low_bits, mask_compose, mask_face, GenId, Simplex, MAX_DIM};
use crate::simplicial::Simplicial;

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub dim: usize,
    pub faces: Vec<Simplex>,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    gens: Vec<Generator>,
    by_dim: Vec<Vec<GenId>>,
    index: HashMap<String, GenId>,
    basepoint: Option<GenId>,
}

pub fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_degeneracy_token(name)
}

fn is_degeneracy_token(name: &str) -> bool {
    name.strip_prefix("s_").is_some_and(|rest| rest.starts_with(|c: char| c.is_ascii_digit() || c == '{'))
}

/// All masks on `n` positions with exactly `bits` set bits, in increasing order.
pub fn masks_with_bits(n: usize, bits: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if bits > n {
        return out;
    }
    fn rec(start: usize, n: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for j in start..=n - left {
            rec(j + 1, n, left - 1, acc | 1 << j, out);
        }
    }
    rec(0, n, bits, 0, &mut out);
    out.sort_unstable();
    out
}

#[derive(Clone)]
pub struct PresentationBuilder {
    name: String,
    gens: Vec<Generator>,
    index: HashMap<String, GenId>,
    basepoint: Option<String>,
}

impl PresentationBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        PresentationBuilder { name: name.into(), gens: Vec::new(), index: HashMap::new(), basepoint: None }
    }

    pub fn vertex(&mut self, name: &str) -> Result<GenId> {
        self.push(name, 0, Vec::new())
    }

    /// Adds a generator of dimension `faces.len() - 1`; faces must already exist.
    pub fn generator(&mut self, name: &str, faces: Vec<Simplex>) -> Result<GenId> {
        if faces.len() < 2 {
            return Err(Error::Invalid(format!("generator {name} needs at least two faces")));
        }
        let dim = faces.len() - 1;
        for (i, f) in faces.iter().enumerate() {
            if f.dim() + 1 != dim {
                return Err(Error::DimensionMismatch(format!("{name}.{i} has dimension {}, expected {}", f.dim(), dim - 1)));
            }
            if f.gen() as usize >= self.gens.len() {
                return Err(Error::Invalid(format!("{name}.{i} refers to an unknown generator")));
            }
        }
        self.push(name, dim, faces)
    }

    fn push(&mut self, name: &str, dim: usize, faces: Vec<Simplex>) -> Result<GenId> {
        if !valid_name(name) {
            return Err(Error::Parse(format!("invalid generator name {name:?}")));
        }
        if dim > MAX_DIM {
            return Err(Error::Invalid(format!("dimension {dim} too large")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Parse(format!("duplicate generator {name}")));
        }
        let id = self.gens.len() as GenId;
        self.gens.push(Generator { name: name.to_string(), dim, faces });
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.index.get(name).copied()
    }

    pub fn simplex(&self, name: &str) -> Result<Simplex> {
        let id = self.lookup(name).ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
        Ok(Simplex::generator(id, self.gens[id as usize].dim))
    }

    pub fn set_basepoint(&mut self, name: &str) {
        self.basepoint = Some(name.to_string());
    }

    pub fn build(self) -> Result<Presentation> {
        let p = self.build_unchecked()?;
        p.check_face_identities()?;
        Ok(p)
    }

    /// The generators added so far, without checking the face identities.
    pub fn build_unchecked(self) -> Result<Presentation> {
        let max = self.gens.iter().map(|g| g.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); max + 1];
        for (id, g) in self.gens.iter().enumerate() {
            by_dim[g.dim].push(id as GenId);
        }
        let basepoint = match &self.basepoint {
            Some(b) => {
                let id = *self.index.get(b).ok_or_else(|| Error::Parse(format!("unknown basepoint {b}")))?;
                if self.gens[id as usize].dim != 0 {
                    return Err(Error::Invalid(format!("basepoint {b} is not a vertex")));
                }
                Some(id)
            }
            None if by_dim.first().is_some_and(|v| v.len() == 1) => Some(by_dim[0][0]),
            None => None,
        };
        Ok(Presentation { name: self.name, gens: self.gens, by_dim, index: self.index, basepoint })
    }
}

impl Presentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generator_info(&self, g: GenId) -> &Generator {
        &self.gens[g as usize]
    }

    pub fn gen_name(&self, g: GenId) -> &str {
        &self.gens[g as usize].name
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.index.get(name).copied()
    }

    pub fn generator(&self, name: &str) -> Result<Simplex> {
        let id = self.lookup(name).ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
        Ok(Simplex::generator(id, self.gens[id as usize].dim))
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn max_dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn generators_in(&self, dim: usize) -> &[GenId] {
        self.by_dim.get(dim).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Nondegenerate simplices of dimension `dim`, i.e. the generators.
    pub fn nondegenerate(&self, dim: usize) -> Vec<Simplex> {
        self.generators_in(dim).iter().map(|&g| Simplex::generator(g, dim)).collect()
    }

    /// Every simplex of dimension `dim`, degenerate ones included.
    pub fn simplices(&self, dim: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for d in 0..=dim.min(self.max_dim()) {
            for &g in self.generators_in(d) {
                for m in masks_with_bits(dim, dim - d) {
                    out.push(Simplex::from_parts(g, dim, m));
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.generators_in(0).len() == 1
    }

    pub fn is_one_reduced(&self) -> bool {
        self.is_reduced() && self.generators_in(1).is_empty()
    }

    pub fn basepoint(&self) -> Option<GenId> {
        self.basepoint
    }

    /// The totally degenerate simplex `s_0^dim *` on the basepoint.
    pub fn base_simplex(&self, dim: usize) -> Result<Simplex> {
        let b = self.basepoint.ok_or(Error::NoBasepoint)?;
        Ok(Simplex::from_parts(b, dim, low_bits(dim)))
    }

    pub fn gen_face(&self, g: GenId, i: usize) -> Simplex {
        self.gens[g as usize].faces[i]
    }

    fn check_face_identities(&self) -> Result<()> {
        for (id, g) in self.gens.iter().enumerate() {
            if g.dim < 2 {
                continue;
            }
            let x = Simplex::generator(id as GenId, g.dim);
            for j in 1..=g.dim {
                for i in 0..j {
                    let lhs = self.face(i, &self.face(j, &x));
                    let rhs = self.face(j - 1, &self.face(i, &x));
                    if lhs != rhs {
                        return Err(Error::Identity(format!(
                            "∂_{i}∂_{j} {} = {} but ∂_{}∂_{i} {} = {}",
                            g.name,
                            self.render(&lhs),
                            j - 1,
                            g.name,
                            self.render(&rhs)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks all simplicial identities on every simplex up to `max_dim`.
    pub fn verify_identities(&self, max_dim: usize) -> Result<()> {
        for n in 0..=max_dim {
            for x in self.simplices(n) {
                let fail = |what: &str| Err(Error::Identity(format!("{what} on {}", self.render(&x))));
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = self.degeneracy(i, &self.degeneracy(j, &x));
                        let rhs = self.degeneracy(j + 1, &self.degeneracy(i, &x));
                        if lhs != rhs {
                            return fail(&format!("s_{i}s_{j} = s_{}s_{i}", j + 1));
                        }
                    }
                }
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            if self.face(i, &self.face(j, &x)) != self.face(j - 1, &self.face(i, &x)) {
                                return fail(&format!("∂_{i}∂_{j} = ∂_{}∂_{i}", j - 1));
                            }
                        }
                    }
                }
                for j in 0..=n {
                    let sx = self.degeneracy(j, &x);
                    for i in 0..=n + 1 {
                        let lhs = self.face(i, &sx);
                        let rhs = if i < j {
                            self.degeneracy(j - 1, &self.face(i, &x))
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.degeneracy(j, &self.face(i - 1, &x))
                        };
                        if lhs != rhs {
                            return fail(&format!("∂_{i}s_{j}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `s_{j_1} ⋯ s_{j_r} name`, degeneracies in normal-form order.
    pub fn render(&self, x: &Simplex) -> String {
        let mut parts: Vec<String> = x.degeneracies().iter().map(|j| format!("s_{j}")).collect();
        parts.push(self.gen_name(x.gen()).to_string());
        parts.join(" ")
    }
}

impl Simplicial for Presentation {
    type Cell = Simplex;

    fn face(&self, i: usize, x: &Simplex) -> Simplex {
        let n = x.dim();
        assert!(n >= 1 && i <= n, "∂_{i} on a {n}-simplex");
        let (m, miss) = mask_face(x.mask(), n, i);
        match miss {
            None => Simplex::from_parts(x.gen(), n - 1, m),
            Some(v) => {
                let y = self.gen_face(x.gen(), v);
                Simplex::from_parts(y.gen(), n - 1, mask_compose(m, n - 1, y.mask()))
            }
        }
    }

    fn degeneracy(&self, i: usize, x: &Simplex) -> Simplex {
        x.degeneracy(i)
    }
}
