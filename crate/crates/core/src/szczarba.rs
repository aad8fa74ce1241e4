//! Szczarba operators, the twisting cochain `t`, the twisted shuffle map `ψ`,
//! the bijection `Ψ_p` and the degeneracy map `Φ`.

use crate::chain::{sign, Chain};
use crate::chainmaps::shuffles;
use crate::error::{Error, Result};
use crate::group::GroupWord;
use crate::simplex::{OperatorWord, Simplex};
use crate::simplicial::{Cell, Pair, Simplicial};
use crate::twist::{GSpace, TwistedProduct, TwistingFunction};

/// `S_{n,l}`: sequences `(i_1, …, i_l)` with `0 ≤ i_s ≤ n − s`, in lexicographic order.
pub fn s_nl(n: usize, l: usize) -> Vec<Vec<usize>> {
    if l > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    fn rec(n: usize, l: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let s = acc.len() + 1;
        if acc.len() == l {
            out.push(acc.clone());
            return;
        }
        for v in 0..=n - s {
            acc.push(v);
            rec(n, l, acc, out);
            acc.pop();
        }
    }
    rec(n, l, &mut Vec::new(), &mut out);
    out
}

/// `S_n = S_{n,n}`; it has `n!` elements.
pub fn s_n(n: usize) -> Vec<Vec<usize>> {
    s_nl(n, n)
}

pub fn in_s_n(i: &[usize]) -> bool {
    let n = i.len();
    i.iter().enumerate().all(|(s, &v)| v < n - s)
}

pub fn degree(i: &[usize]) -> usize {
    i.iter().sum()
}

fn check_s_n(i: &[usize]) -> Result<()> {
    if in_s_n(i) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{i:?} is not in S_{}", i.len())))
    }
}

/// The operator `D^k_i : X_m → X_{m+k}` for `i ∈ S_n`, `0 ≤ k ≤ n`.
pub fn d_operator(k: usize, i: &[usize]) -> Result<OperatorWord> {
    check_s_n(i)?;
    if k > i.len() {
        return Err(Error::Invalid(format!("D^{k} needs k ≤ {}", i.len())));
    }
    Ok(d_rec(k, i))
}

fn d_rec(k: usize, i: &[usize]) -> OperatorWord {
    let Some((&i1, rest)) = i.split_first() else {
        return OperatorWord::identity();
    };
    if k < i1 {
        d_rec(k, rest).derived().then_after(&OperatorWord::degen(0)).then_after(&OperatorWord::face(i1 - k))
    } else if k == i1 {
        d_rec(k, rest).derived()
    } else {
        d_rec(k - 1, rest).derived().then_after(&OperatorWord::degen(0))
    }
}

/// `Sz_i x = D^0_i σ(x) · D^1_i σ(∂_0 x) ⋯ D^{n−1}_i σ(∂_0^{n−1} x)` for `x ∈ X_n`, `i ∈ S_{n−1}`.
pub fn sz(tw: &TwistingFunction, i: &[usize], x: &Simplex) -> Result<GroupWord> {
    let n = x.dim();
    if n == 0 || i.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!("Sz_{i:?} on a {n}-simplex")));
    }
    check_s_n(i)?;
    let g = &**tw.group();
    let b = &**tw.base();
    let mut acc = g.identity(n - 1);
    let mut face = *x;
    for k in 0..n {
        let w = g.apply(&d_rec(k, i), &tw.sigma(&face))?;
        acc = g.mul(&acc, &w);
        if k + 1 < n {
            face = b.face(0, &face);
        }
    }
    Ok(acc)
}

/// Szczarba's twisting cochain on a single simplex.
pub fn szczarba_t(tw: &TwistingFunction, x: &Simplex) -> Chain<GroupWord> {
    let n = x.dim();
    let g = tw.group();
    match n {
        0 => Chain::zero(),
        1 => Chain::basis(tw.sigma(x)).minus(&Chain::basis(g.identity(0))),
        _ => {
            let mut out = Chain::zero();
            for i in s_n(n - 1) {
                let w = sz(tw, &i, x).expect("index in range");
                out.add_signed(w, degree(&i) % 2 == 1);
            }
            out
        }
    }
}

pub fn szczarba_t_chain(tw: &TwistingFunction, c: &Chain<Simplex>) -> Chain<GroupWord> {
    c.map(|x| szczarba_t(tw, x))
}

/// `hatSz_i x = (D^0_i x, D^1_i σ(x) ⋯ D^n_i σ(∂_0^{n−1} x))` for `i ∈ S_n`.
pub fn hat_sz(tw: &TwistingFunction, i: &[usize], x: &Simplex) -> Result<Pair<Simplex, GroupWord>> {
    let n = x.dim();
    if i.len() != n {
        return Err(Error::DimensionMismatch(format!("hatSz_{i:?} on a {n}-simplex")));
    }
    check_s_n(i)?;
    let g = &**tw.group();
    let b = &**tw.base();
    let first = b.apply(&d_rec(0, i), x)?;
    let mut acc = g.identity(n);
    let mut face = *x;
    for k in 1..=n {
        let w = g.apply(&d_rec(k, i), &tw.sigma(&face))?;
        acc = g.mul(&acc, &w);
        if k < n {
            face = b.face(0, &face);
        }
    }
    Ok(Pair(first, acc))
}

/// Szczarba's twisted shuffle map `ψ(x ⊗ y)` into `C(X ×_τ F)`.
pub fn psi<F: GSpace>(tp: &TwistedProduct<F>, x: &Simplex, y: &F::Cell) -> Chain<Pair<Simplex, F::Cell>> {
    let n = x.dim();
    let m = y.dim();
    let g = &**tp.group();
    let b = &**tp.base();
    let mut out = Chain::zero();
    let shuf = shuffles(&[n, m]);
    for i in s_n(n) {
        let Pair(a, h) = hat_sz(&tp.twist, &i, x).expect("index in range");
        let odd_i = degree(&i) % 2 == 1;
        for (masks, odd) in &shuf {
            let a2 = b.degenerate_by_mask(masks[0], &a);
            let h2 = g.degenerate_by_mask(masks[0], &h);
            let y2 = tp.fibre.degenerate_by_mask(masks[1], y);
            out.add_signed(Pair(a2, tp.fibre.act(&h2, &y2)), odd_i ^ odd);
        }
    }
    out
}

pub fn psi_chain<F: GSpace>(tp: &TwistedProduct<F>, c: &Chain<(Simplex, F::Cell)>) -> Chain<Pair<Simplex, F::Cell>>
where
    F::Cell: crate::chain::Basis,
{
    c.map(|(x, y)| psi(tp, x, y))
}

/// `Φ(i, p) = (j, q)` for `i ∈ S_n`, `0 ≤ p ≤ n`.
pub fn phi(i: &[usize], p: usize) -> Result<(Vec<usize>, usize)> {
    check_s_n(i)?;
    if i.is_empty() || p > i.len() {
        return Err(Error::Invalid(format!("Φ({i:?}, {p}) out of range")));
    }
    Ok(phi_rec(i, p))
}

fn phi_rec(i: &[usize], p: usize) -> (Vec<usize>, usize) {
    let i1 = i[0];
    let rest = &i[1..];
    if p < i1 {
        let (j, q) = phi_rec(rest, p);
        let mut out = vec![i1 - 1];
        out.extend(j);
        (out, q + 1)
    } else if p == i1 || p == i1 + 1 {
        (rest.to_vec(), 0)
    } else {
        let (j, q) = phi_rec(rest, p - 1);
        let mut out = vec![i1];
        out.extend(j);
        (out, q + 1)
    }
}

/// The image `(α, j_1, …, j_k)` of `Ψ_p`. `interval[q]` is the interval (0-based)
/// that the `q`-th removal falls into, so `α_s = {q : interval[q] = s}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsiImage {
    pub interval: Vec<usize>,
    pub js: Vec<Vec<usize>>,
}

impl PsiImage {
    pub fn alpha(&self, s: usize) -> Vec<usize> {
        (0..self.interval.len()).filter(|&q| self.interval[q] == s).collect()
    }

    /// The mask of `ᾱ_s = {0..l−1} ∖ α_s`.
    pub fn alpha_bar_mask(&self, s: usize) -> u64 {
        self.interval.iter().enumerate().filter(|(_, &t)| t != s).fold(0, |m, (q, _)| m | (1 << q))
    }

    /// The sign exponent `(α)` of the shuffle.
    pub fn inversions(&self) -> usize {
        let v = &self.interval;
        (0..v.len()).map(|a| (a + 1..v.len()).filter(|&b| v[a] > v[b]).count()).sum()
    }
}

fn check_cut(n: usize, p: &[usize]) -> Result<()> {
    if p.first() != Some(&0) || p.last() != Some(&n) || p.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(format!("{p:?} is not a strictly increasing cut of [0..{n}]")));
    }
    Ok(())
}

/// `Ψ_p : S_{n−1}(p) → Shuff(q_1−1, …, q_k−1) × S_{q_1−1} × ⋯ × S_{q_k−1}`.
pub fn psi_p(n: usize, p: &[usize], i: &[usize]) -> Result<PsiImage> {
    check_cut(n, p)?;
    let k = p.len() - 1;
    let l = n - k;
    let bad = || Error::NotInSnp(format!("{i:?} for p = {p:?}"));
    if i.len() != l {
        return Err(bad());
    }
    let mut list: Vec<usize> = (0..=n).collect();
    let mut interval = Vec::with_capacity(l);
    let mut js = vec![Vec::new(); k];
    for &iq in i {
        let pos = iq + 1;
        if pos >= list.len() - 1 {
            return Err(bad());
        }
        let v = list[pos];
        let s = match p.iter().position(|&b| b > v) {
            Some(t) if t >= 1 && p[t - 1] < v => t - 1,
            _ => return Err(bad()),
        };
        let local = list.iter().filter(|&&u| u >= p[s] && u <= p[s + 1]).position(|&u| u == v).unwrap();
        interval.push(s);
        js[s].push(local - 1);
        list.remove(pos);
    }
    if list != p {
        return Err(bad());
    }
    Ok(PsiImage { interval, js })
}

/// Inverse of [`psi_p`].
pub fn psi_p_inverse(n: usize, p: &[usize], img: &PsiImage) -> Result<Vec<usize>> {
    check_cut(n, p)?;
    let k = p.len() - 1;
    if img.js.len() != k || img.interval.len() != n - k {
        return Err(Error::Invalid("shape of (α, j) does not match p".into()));
    }
    for s in 0..k {
        let q = p[s + 1] - p[s];
        if img.js[s].len() != q - 1 || !in_s_n(&img.js[s]) || img.alpha(s).len() != q - 1 {
            return Err(Error::Invalid(format!("j_{} = {:?} does not match q = {q}", s + 1, img.js[s])));
        }
    }
    let mut list: Vec<usize> = (0..=n).collect();
    let mut used = vec![0usize; k];
    let mut out = Vec::new();
    for &s in &img.interval {
        let e = img.js[s][used[s]];
        used[s] += 1;
        let local: Vec<usize> = list.iter().copied().filter(|&u| u >= p[s] && u <= p[s + 1]).collect();
        let v = local[e + 1];
        let pos = list.iter().position(|&u| u == v).unwrap();
        out.push(pos - 1);
        list.remove(pos);
    }
    Ok(out)
}

/// `S_{n−1}(p)`, in lexicographic order.
pub fn s_n_minus_1_of_p(n: usize, p: &[usize]) -> Result<Vec<Vec<usize>>> {
    check_cut(n, p)?;
    let l = n + 1 - p.len();
    Ok(s_nl(n - 1, l).into_iter().filter(|i| psi_p(n, p, i).is_ok()).collect())
}

/// All strictly increasing cuts `0 = p_0 < … < p_k = n`.
pub fn strict_cuts(n: usize) -> Vec<Vec<usize>> {
    (0..1u64 << n.saturating_sub(1))
        .map(|m| {
            let mut p = vec![0];
            p.extend((1..n).filter(|v| m >> (v - 1) & 1 == 1));
            p.push(n);
            p
        })
        .collect()
}

/// The vertex lists of the factors of `Sz_i` on the standard `n`-simplex:
/// factor `k` is `σ` of `(D^k_i)′` applied to the vertices `k, …, n`.
pub fn sz_vertex_factors(i: &[usize]) -> Result<Vec<Vec<usize>>> {
    check_s_n(i)?;
    let n = i.len() + 1;
    (0..n).map(|k| d_rec(k, i).derived().apply_to_vertices(&(k..=n).collect::<Vec<_>>())).collect()
}

/// `t` on the standard `n`-simplex in vertex notation, one line per term.
pub fn t_vertex_notation(n: usize) -> Vec<String> {
    let fmt = |v: &[usize]| format!("σ({})", v.iter().map(|d| d.to_string()).collect::<String>());
    match n {
        0 => vec![],
        1 => vec!["+ σ(01) - 1".into()],
        _ => s_n(n - 1)
            .into_iter()
            .map(|i| {
                let factors = sz_vertex_factors(&i).expect("index in range");
                let body: String = factors.iter().map(|f| fmt(f)).collect();
                format!("{} {body}", if degree(&i) % 2 == 1 { "-" } else { "+" })
            })
            .collect(),
    }
}

/// `t(x)` written with `σ` of pulled-back simplices, by brute force over vertex lists.
pub fn t_from_vertex_lists(tw: &TwistingFunction, x: &Simplex) -> Result<Chain<GroupWord>> {
    let n = x.dim();
    if n < 2 {
        return Ok(szczarba_t(tw, x));
    }
    let g = tw.group();
    let mut out = Chain::zero();
    for i in s_n(n - 1) {
        let mut acc = g.identity(n - 1);
        for f in sz_vertex_factors(&i)? {
            let y = tw.base().pullback(x, &f)?;
            acc = g.mul(&acc, &tw.sigma(&y));
        }
        out.add_term(acc, sign(degree(&i) % 2 == 1));
    }
    Ok(out)
}
