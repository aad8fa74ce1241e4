//! One PASS/FAIL line per acceptance criterion. Every comparison is exact (integer
//! or rational equality); the only tolerance is the wall-clock budget per criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use sztwist::chainmaps::boundary_cell;
use sztwist::cobar::{differential, words_up_to, CobarWord};
use sztwist::cuts::IntervalCut;
use sztwist::homology::augmentation::{
    augmentation_filtration, base_filtered, compare_d1_with_t_star, field_homology, fibre_filtered, filtration_comultiplicative, transposed_pages,
    twisted_complex,
};
use sztwist::homology::{Field, FiniteComplex, Homology};
use sztwist::io::{eval, load_str, parse_expr};
use sztwist::models;
use sztwist::suites::{self, SuiteReport};
use sztwist::szczarba::{degree, psi_p, psi_p_inverse, s_n, s_n_minus_1_of_p, s_nl, strict_cuts, szczarba_t, t_from_vertex_lists, t_vertex_notation};
use sztwist::twisted_tensor::TwistedTensor;
use sztwist::{Basis, GroupFibre, Presentation, TwistedProduct};

/// Per-criterion wall-clock budget.
const BUDGET: Duration = Duration::from_secs(300);
/// Seed and generator counts (dims 2, 3, 4) of the randomized 1-reduced presentation.
const RANDOM: (u64, usize, usize, usize) = (7, 2, 3, 1);
const LOOP_TRUNCATION: usize = 5;

type Outcome = Result<String, String>;

fn suite(r: SuiteReport) -> Outcome {
    if r.passed() {
        Ok(format!("{} {} checks", r.suite, r.checked))
    } else {
        Err(r.render())
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_base() -> Presentation {
    let (seed, a, b, c) = RANDOM;
    models::random_one_reduced(seed, a, b, c)
}

fn golden() -> Outcome {
    let expected: [&[&str]; 4] = [
        &["+ σ(01) - 1"],
        &["+ σ(012)σ(122)"],
        &["+ σ(0123)σ(1223)σ(2333)", "- σ(0113)σ(1233)σ(2333)"],
        &[
            "+ σ(01234)σ(12234)σ(23334)σ(34444)",
            "- σ(01224)σ(12224)σ(23344)σ(34444)",
            "- σ(01134)σ(12334)σ(23334)σ(34444)",
            "+ σ(01114)σ(12344)σ(23344)σ(34444)",
            "+ σ(01124)σ(12224)σ(23444)σ(34444)",
            "- σ(01114)σ(12244)σ(23444)σ(34444)",
        ],
    ];
    for (k, want) in expected.iter().enumerate() {
        let got = t_vertex_notation(k + 1);
        ensure(got == *want, || format!("t on a {}-simplex: {got:?}", k + 1))?;
    }
    // The vertex notation must describe the group-level t.
    let tw = models::loop_twist(models::collapsed_simplex(4, 0), LOOP_TRUNCATION);
    let mut n = 0;
    for d in 1..=4 {
        for x in tw.base().nondegenerate(d) {
            let direct = szczarba_t(&tw, &x);
            ensure(direct == t_from_vertex_lists(&tw, &x).map_err(|e| e.to_string())?, || format!("vertex lists disagree on {}", tw.base().render(&x)))?;
            n += 1;
        }
    }
    Ok(format!("4 example lines, {n} group-level cross-checks"))
}

fn twisting() -> Outcome {
    let mut notes = Vec::new();
    let sphere = models::loop_twist(models::minimal_sphere(2), LOOP_TRUNCATION);
    notes.push(suite(suites::twisting(&sphere, 5).map_err(|e| e.to_string())?)?);
    let cover = models::double_cover();
    notes.push(suite(suites::twisting(&cover.twist, 6).map_err(|e| e.to_string())?)?);
    let base = random_base();
    ensure(base.generators_in(2).len() >= 2 && base.generators_in(3).len() >= 2, || "random presentation too small".into())?;
    let random = models::loop_twist(base, LOOP_TRUNCATION);
    notes.push(suite(suites::twisting(&random, 4).map_err(|e| e.to_string())?)?);
    Ok(notes.join("; "))
}

fn comultiplicative() -> Outcome {
    let sphere = models::loop_twist(models::minimal_sphere(2), LOOP_TRUNCATION);
    let a = suite(suites::comultiplicativity(&sphere, 5).map_err(|e| e.to_string())?)?;
    let random = models::loop_twist(random_base(), LOOP_TRUNCATION);
    let b = suite(suites::comultiplicativity(&random, 4).map_err(|e| e.to_string())?)?;
    Ok(format!("{a}; {b}"))
}

fn shuffle_count(qs: &[usize]) -> usize {
    // multinomial (Σ (q_s − 1))! / Π (q_s − 1)!
    let fact = |m: usize| (1..=m).product::<usize>();
    fact(qs.iter().map(|q| q - 1).sum()) / qs.iter().map(|&q| fact(q - 1)).product::<usize>()
}

fn bijection() -> Outcome {
    let img = psi_p(7, &[0, 3, 4, 7], &[5, 0, 0, 2]).map_err(|e| e.to_string())?;
    ensure(img.js == vec![vec![0, 0], vec![], vec![1, 0]], || format!("worked example j = {:?}", img.js))?;
    ensure(img.alpha(0) == [1, 2] && img.alpha(1).is_empty() && img.alpha(2) == [0, 3], || "worked example α".into())?;
    let mut checked = 0;
    for n in 1..=7 {
        let mut covered = BTreeMap::new();
        for p in strict_cuts(n) {
            let k = p.len() - 1;
            let qs: Vec<usize> = p.windows(2).map(|w| w[1] - w[0]).collect();
            let dom = s_n_minus_1_of_p(n, &p).map_err(|e| e.to_string())?;
            let cod = shuffle_count(&qs) * qs.iter().map(|&q| s_n(q - 1).len()).product::<usize>();
            ensure(dom.len() == cod, || format!("n={n} p={p:?}: |domain| {} vs |codomain| {cod}", dom.len()))?;
            let mut images = std::collections::BTreeSet::new();
            for i in &dom {
                let im = psi_p(n, &p, i).map_err(|e| e.to_string())?;
                ensure(&psi_p_inverse(n, &p, &im).map_err(|e| e.to_string())? == i, || format!("inverse fails at {i:?}"))?;
                let rhs = im.inversions() + im.js.iter().map(|j| degree(j)).sum::<usize>() + (1..=k).map(|s| (s - 1) * (qs[s - 1] - 1)).sum::<usize>();
                ensure((degree(i) + rhs) % 2 == 0, || format!("degree congruence fails at n={n} p={p:?} i={i:?}"))?;
                images.insert((im.interval, im.js));
                checked += 1;
            }
            ensure(images.len() == dom.len(), || format!("not injective at n={n} p={p:?}"))?;
            *covered.entry(n + 1 - p.len()).or_insert(0) += dom.len();
        }
        // Each i in S_{n-1,l} lies in S_{n-1}(p) for exactly one p with n - l intervals.
        for (&l, &c) in &covered {
            let all = s_nl(n - 1, l).len();
            ensure(c == all, || format!("n={n} l={l}: cuts cover {c} of {all}"))?;
        }
    }
    Ok(format!("{checked} index sequences, worked example n=7"))
}

fn cut_lemmas() -> Outcome {
    let mut checked = 0;
    for n in 0..=7 {
        for p in IntervalCut::enumerate_all(n) {
            if p.ell() == 0 {
                ensure(p.epsilon() == p.closed_formula(), || format!("closed formula at {p}"))?;
            }
            ensure(p.epsilon() == p.epsilon_direct(), || format!("direct sign at {p}"))?;
            for r in p.refinements() {
                ensure(r.epsilon() == p.epsilon(), || format!("refinement {p} → {r} changes the sign"))?;
            }
            ensure(p.cuts_above().len() == 1 << p.ell(), || format!("{} cuts above {p}", p.cuts_above().len()))?;
            ensure(p.cuts_below().len() == 1 << p.ell1(), || format!("{} cuts below {p}", p.cuts_below().len()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} cuts"))
}

fn cobar() -> Outcome {
    let mut total = 0;
    for n in 2..=6 {
        let x = models::collapsed_simplex(n, 1);
        // Three-letter words on the 6-simplex cost hours; two letters already mix every degree.
        let max_len = if n < 6 { 3 } else { 2 };
        let r = suites::baues_bounded(&x, n, max_len).map_err(|e| e.to_string())?;
        total += r.checked;
        suite(r).map_err(|e| format!("collapsed Δ^{n}: {e}"))?;
    }
    Ok(format!("collapsed Δ^2..Δ^6, {total} checks"))
}

fn homology_ranks(c: &FiniteComplex, through: i64) -> Vec<Homology> {
    (0..=through).map(|n| c.homology(n)).collect()
}

fn psi_quasi_iso() -> Outcome {
    let cover = models::double_cover();
    let a = suite(suites::psi_dgc(&cover, 4).map_err(|e| e.to_string())?)?;
    let b = suite(suites::psi_dgc(&models::trivial_bundle(), 4).map_err(|e| e.to_string())?)?;
    let tt = TwistedTensor::new(&cover);
    let (c, _) = twisted_complex(&tt, 4).map_err(|e| e.to_string())?;
    let bases: Vec<_> = (0..=4).map(|d| cover.nondegenerate(d)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let direct = FiniteComplex::from_bases(0, &bases, |p| boundary_cell(&cover, p)).map_err(|e| e.to_string())?;
    let (h_tt, h_direct) = (homology_ranks(&c, 3), homology_ranks(&direct, 3));
    let show = |hs: &[Homology]| hs.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", ");
    ensure(h_tt == h_direct, || format!("homology {} vs {}", show(&h_tt), show(&h_direct)))?;
    let expect = |h: &Homology| h.torsion.is_empty() && h.rank == usize::from(h.degree <= 1);
    ensure(h_tt.iter().all(expect), || format!("twisted tensor homology {}", show(&h_tt)))?;
    Ok(format!("{a}; {b}; H = (Z, Z)"))
}

fn degeneracies() -> Outcome {
    let tw = models::loop_twist(models::collapsed_simplex(5, 0), 7);
    let tp = TwistedProduct::new(tw.clone(), GroupFibre { group: tw.group().clone(), word_bound: Some(1) }).map_err(|e| e.to_string())?;
    let a = suite(suites::degeneracy(&tp, 5).map_err(|e| e.to_string())?)?;
    let b = suite(suites::degeneracy(&models::double_cover(), 5).map_err(|e| e.to_string())?)?;
    let c = suite(suites::degeneracy(&models::trivial_bundle(), 5).map_err(|e| e.to_string())?)?;
    Ok(format!("{a}; {b}; {c}"))
}

fn fibre_spectral_sequence() -> Outcome {
    let cover = models::double_cover();
    let f2 = Field::Prime(2);
    let ff = fibre_filtered(&cover, f2.clone(), 3).map_err(|e| e.to_string())?;
    let aug = augmentation_filtration(&cover.fibre, f2.clone(), 0).map_err(|e| e.to_string())?;
    let gr: Vec<usize> = aug.powers[0].windows(2).map(|w| w[0] - w[1]).collect();
    let base_bases: Vec<_> = (0..=3).map(|d| cover.base().nondegenerate(d)).collect();
    let base = FiniteComplex::from_bases(0, &base_bases, |x| boundary_cell(&**cover.base(), x)).map_err(|e| e.to_string())?;
    let h_base = field_homology(f2.clone(), &base);
    let e1 = ff.ss.page(1).ok_or("no E^1")?;
    for n in 0..=2i64 {
        for (q, &g) in gr.iter().enumerate() {
            let want = h_base.get(n as usize).copied().unwrap_or(0) * g;
            let got = e1.dim(-(q as i64), n);
            ensure(got == want, || format!("E^1 at (s={}, n={n}): {got} vs {want}", -(q as i64)))?;
        }
    }
    let (compared, bad) = compare_d1_with_t_star(&cover, &ff).map_err(|e| e.to_string())?;
    ensure(bad.is_empty(), || bad.join("; "))?;
    let problems = ff.ss.check_pages();
    ensure(problems.is_empty(), || problems.join("; "))?;
    let comult = filtration_comultiplicative(&cover, &ff);
    ensure(comult.is_empty(), || comult.join("; "))?;
    let dual = transposed_pages(&ff.ss);
    ensure(dual.is_empty(), || dual.join("; "))?;
    Ok(format!("E^1 = H(S^1;F2) ⊗ gr, d^1 = t_* on {compared} classes, dual pages transposed"))
}

fn kunneth() -> Outcome {
    let tp = models::trivial_bundle();
    let q = Field::Rational;
    let (ss, _) = base_filtered(&tp, q.clone(), 3).map_err(|e| e.to_string())?;
    let h = |p: &Presentation| -> Result<Vec<usize>, String> {
        let b: Vec<_> = (0..=4).map(|d| p.nondegenerate(d)).collect();
        Ok(field_homology(q.clone(), &FiniteComplex::from_bases(0, &b, |x| boundary_cell(p, x)).map_err(|e| e.to_string())?))
    };
    let hx = h(tp.base())?;
    let hf = h(&tp.fibre.space)?;
    let get = |v: &[usize], i: i64| if i < 0 { 0 } else { v.get(i as usize).copied().unwrap_or(0) };
    let e2 = ss.page(2).ok_or("no E^2")?;
    for s in 0..=2 {
        for n in 0..=3 {
            let want = get(&hx, s) * get(&hf, n - s);
            ensure(e2.dim(s, n) == want, || format!("E^2 at ({s},{n}): {} vs {want}", e2.dim(s, n)))?;
        }
    }
    for p in ss.pages.iter().filter(|p| p.r >= 2) {
        let nz: BTreeMap<_, _> = p.groups.keys().map(|&(s, n)| ((s, n), p.rank_d(&q, s, n))).filter(|(_, r)| *r > 0).collect();
        ensure(nz.is_empty(), || format!("d^{} nonzero at {nz:?}", p.r))?;
    }
    let last = ss.pages.last().ok_or("no pages")?;
    for n in 0..=2 {
        let inf: usize = (0..=n).map(|s| last.dim(s, n)).sum();
        let kun: usize = (0..=n).map(|s| get(&hx, s) * get(&hf, n - s)).sum();
        ensure(inf == kun, || format!("E^inf in degree {n}: {inf} vs Künneth {kun}"))?;
    }
    let problems = ss.check_pages();
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok("E^2 = H(X) ⊗ H(F), higher d = 0".into())
}

fn loop_space_proxy() -> Outcome {
    let sphere = models::loop_twist(models::minimal_sphere(2), LOOP_TRUNCATION);
    let r = suite(suites::bialgebra_morphism(&sphere, 4, 4).map_err(|e| e.to_string())?)?;
    let x = sphere.base();
    let words = words_up_to(x, 5, 5);
    let bases: Vec<Vec<CobarWord>> = (0..=5).map(|d| words.iter().filter(|w| w.degree() == d).cloned().collect()).collect();
    let c = FiniteComplex::from_bases(0, &bases, |w| differential(x, w)).map_err(|e| e.to_string())?;
    let hs = homology_ranks(&c, 4);
    ensure(hs.iter().all(|h| h.rank == 1 && h.torsion.is_empty()), || hs.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", "))?;
    // The same answer through the file front end.
    let l = load_str(r#"{"name": "S2", "generators": [["pt"], [], ["sigma"]], "faces": {"sigma.0": "s_0 pt", "sigma.1": "s_0 pt", "sigma.2": "s_0 pt"}, "group": {"loopgroup_of": "self"}}"#, None)
        .map_err(|e| e.to_string())?;
    let e = eval(&l, &parse_expr("Delta[sigma]").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(e.text == "+ [] ⊗ [sigma] + [sigma] ⊗ []", || e.text.clone())?;
    Ok(format!("{r}; H(ΩC(S^2)) = Z in degrees 0..4"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("golden t examples", golden),
        ("twisting cochain condition", twisting),
        ("comultiplicativity of Sz", comultiplicative),
        ("Psi_p bijection and degree congruence", bijection),
        ("cut signs and counts", cut_lemmas),
        ("cobar dg-bialgebra and Baues diagonal", cobar),
        ("psi quasi-isomorphism of dgcs", psi_quasi_iso),
        ("degeneracies", degeneracies),
        ("fibre-filtration spectral sequence over F2", fibre_spectral_sequence),
        ("base-filtration spectral sequence over Q", kunneth),
        ("loop-space proxy", loop_space_proxy),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|m| if elapsed > BUDGET { Err(format!("over budget: {elapsed:.1?}")) } else { Ok(m) });
        match outcome {
            Ok(m) => println!("PASS {:>2}. {name}: {m} [{elapsed:.1?}]", k + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {m} [{elapsed:.1?}]", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
