//! Standard presentations used by the test suites and the CLI fixtures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::group::{FiniteGroup, SimplicialGroup};
use crate::presentation::{Presentation, PresentationBuilder};
use crate::simplex::{low_bits, Simplex};
use crate::simplicial::Simplicial;
use crate::twist::{Action, GroupFibre, SetFibre, TwistedProduct, TwistingFunction};

fn collapsed_point(pt: u32, dim: usize) -> Simplex {
    Simplex::from_parts(pt, dim, low_bits(dim))
}

/// One vertex `pt` and one `k`-simplex `sigma` (named `e` when `k = 1`) with all faces collapsed.
pub fn minimal_sphere(k: usize) -> Presentation {
    assert!(k >= 1);
    let mut b = PresentationBuilder::new(format!("S{k}"));
    let pt = b.vertex("pt").unwrap();
    let face = collapsed_point(pt, k - 1);
    let name = if k == 1 { "e" } else { "sigma" };
    b.generator(name, vec![face; k + 1]).unwrap();
    b.build().unwrap()
}

fn subset_name(s: &[usize]) -> String {
    if s.iter().all(|&v| v < 10) {
        format!("x{}", s.iter().map(|v| v.to_string()).collect::<String>())
    } else {
        format!("x{}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("_"))
    }
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, size: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == size {
            out.push(acc.clone());
            return;
        }
        for v in start..=n {
            acc.push(v);
            rec(v + 1, n, size, acc, out);
            acc.pop();
        }
    }
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// The standard simplex `Δ^n`; the face on vertices `S` is named `x` followed by `S`.
pub fn standard_simplex(n: usize) -> Presentation {
    let mut b = PresentationBuilder::new(format!("Delta{n}"));
    for size in 1..=n + 1 {
        for s in subsets_of_size(n, size) {
            let name = subset_name(&s);
            if size == 1 {
                b.vertex(&name).unwrap();
            } else {
                let faces = (0..size)
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        b.simplex(&subset_name(&f)).unwrap()
                    })
                    .collect();
                b.generator(&name, faces).unwrap();
            }
        }
    }
    b.build().unwrap()
}

/// `Δ^n / sk_m Δ^n`: one vertex `pt`; the faces of dimension > `m` survive under their
/// vertex names. `m = 0` gives a reduced set, `m = 1` a 1-reduced one.
pub fn collapsed_simplex(n: usize, m: usize) -> Presentation {
    let mut b = PresentationBuilder::new(format!("Delta{n}_sk{m}"));
    let pt = b.vertex("pt").unwrap();
    for size in m + 2..=n + 1 {
        for s in subsets_of_size(n, size) {
            let faces = (0..size)
                .map(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    if f.len() <= m + 1 {
                        collapsed_point(pt, f.len() - 1)
                    } else {
                        b.simplex(&subset_name(&f)).unwrap()
                    }
                })
                .collect();
            b.generator(&subset_name(&s), faces).unwrap();
        }
    }
    b.build().unwrap()
}

/// A seeded random 1-reduced set with `n2` 2-generators, `n3` 3-generators and up to
/// `n4` 4-generators whose faces are searched for among all 3-simplices.
pub fn random_one_reduced(seed: u64, n2: usize, n3: usize, n4: usize) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = PresentationBuilder::new(format!("random{seed}"));
    let pt = b.vertex("pt").unwrap();
    let mut two = vec![collapsed_point(pt, 2)];
    for k in 0..n2 {
        let g = b.generator(&format!("a{k}"), vec![collapsed_point(pt, 1); 3]).unwrap();
        two.push(Simplex::generator(g, 2));
    }
    for k in 0..n3 {
        let mut faces: Vec<Simplex> = (0..4).map(|_| *two.choose(&mut rng).unwrap()).collect();
        if faces.iter().all(|f| f.is_degenerate()) {
            faces[rng.gen_range(0..4)] = two[1 + rng.gen_range(0..n2)];
        }
        b.generator(&format!("b{k}"), faces).unwrap();
    }
    let partial = b.clone().build().unwrap();
    let mut three = partial.simplices(3);
    let mut found = 0;
    let mut attempts = 0;
    while found < n4 && attempts < 200 {
        attempts += 1;
        three.shuffle(&mut rng);
        if let Some(faces) = search_faces(&partial, &three, &mut Vec::new()) {
            if faces.iter().any(|f| !f.is_degenerate()) {
                b.generator(&format!("c{found}"), faces).unwrap();
                found += 1;
            }
        }
    }
    b.build().unwrap()
}

fn search_faces(p: &Presentation, candidates: &[Simplex], chosen: &mut Vec<Simplex>) -> Option<Vec<Simplex>> {
    let j = chosen.len();
    if j == 5 {
        return Some(chosen.clone());
    }
    for c in candidates {
        let ok = (0..j).all(|i| p.face(i, c) == p.face(j - 1, &chosen[i]));
        if ok {
            chosen.push(*c);
            if let Some(r) = search_faces(p, candidates, chosen) {
                return Some(r);
            }
            chosen.pop();
        }
    }
    None
}

/// The connected double cover of the circle: base minimal `S¹`, `G = ℤ/2`,
/// `τ(e) = g`, fibre `G`.
pub fn double_cover() -> TwistedProduct<GroupFibre> {
    cyclic_cover(2)
}

/// The connected `m`-fold cover of the circle.
pub fn cyclic_cover(m: usize) -> TwistedProduct<GroupFibre> {
    let base = Arc::new(minimal_sphere(1));
    let group = Arc::new(SimplicialGroup::finite(FiniteGroup::cyclic(m)));
    let e = base.lookup("e").unwrap();
    let table = [(e, group.element(0, 1 % m as u32))].into_iter().collect();
    let twist = Arc::new(TwistingFunction::new(base, group.clone(), table).unwrap());
    TwistedProduct::new(twist, GroupFibre { group, word_bound: None }).unwrap()
}

/// Minimal `S¹` × minimal `S¹` with the trivial group and trivial twist.
pub fn trivial_bundle() -> TwistedProduct<SetFibre> {
    let base = Arc::new(minimal_sphere(1));
    let group = Arc::new(SimplicialGroup::trivial());
    let twist = Arc::new(TwistingFunction::trivial(base, group.clone()).unwrap());
    let fibre = SetFibre::new(Arc::new(minimal_sphere(1)), group, Action::Trivial).unwrap();
    TwistedProduct::new(twist, fibre).unwrap()
}

/// The canonical twist into the loop group of a reduced set.
pub fn loop_twist(base: Presentation, truncation: usize) -> Arc<TwistingFunction> {
    let group = Arc::new(SimplicialGroup::loop_group(Arc::new(base), truncation).unwrap());
    Arc::new(TwistingFunction::canonical(group).unwrap())
}

/// `Δ^n / sk_0` with a ℤ/m twist `τ(ab) = g^{b−a}` on edges, fibre `G`.
pub fn simplex_cover(n: usize, m: usize) -> TwistedProduct<GroupFibre> {
    let base = Arc::new(collapsed_simplex(n, 0));
    let group = Arc::new(SimplicialGroup::finite(FiniteGroup::cyclic(m)));
    let mut table = std::collections::BTreeMap::new();
    for &g in base.generators_in(1) {
        let name = base.gen_name(g);
        let a = name[1..2].parse::<usize>().unwrap();
        let c = name[2..3].parse::<usize>().unwrap();
        table.insert(g, group.element(0, ((c - a) % m) as u32));
    }
    let twist = Arc::new(TwistingFunction::new(base, group.clone(), table).unwrap());
    TwistedProduct::new(twist, GroupFibre { group, word_bound: None }).unwrap()
}

/// ℤ/2 acting on the two points of `S⁰` by swapping, over the minimal circle.
pub fn swap_fibre_bundle() -> TwistedProduct<SetFibre> {
    let base = Arc::new(minimal_sphere(1));
    let group = Arc::new(SimplicialGroup::finite(FiniteGroup::cyclic(2)));
    let e = base.lookup("e").unwrap();
    let table = [(e, group.element(0, 1))].into_iter().collect();
    let twist = Arc::new(TwistingFunction::new(base, group.clone(), table).unwrap());
    let mut fb = PresentationBuilder::new("S0");
    fb.vertex("n").unwrap();
    fb.vertex("s").unwrap();
    let fibre_space = Arc::new(fb.build().unwrap());
    let fibre = SetFibre::new(fibre_space, group, Action::Table(vec![vec![0, 1], vec![1, 0]])).unwrap();
    TwistedProduct::new(twist, fibre).unwrap()
}
