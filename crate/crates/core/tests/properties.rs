use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use proptest::prelude::*;

use sztwist::chainmaps::{aw, aw_cell, boundary, boundary_cell};
use sztwist::cobar::{cup, diagonal, differential, differential_chain, hom_differential, CobarWord, GroupAlgebra};
use sztwist::cuts::IntervalCut;
use sztwist::homology::snf::{mat_mul, smith_normal_form};
use sztwist::homology::Field;
use sztwist::io::{chain_from_json, chain_to_json};
use sztwist::models;
use sztwist::szczarba::{degree, hat_sz, phi, psi, psi_p, psi_p_inverse, s_n, s_n_minus_1_of_p, strict_cuts, sz, szczarba_t};
use sztwist::twisted_tensor::TwistedTensor;
use sztwist::{Chain, Presentation, Simplex, Simplicial, TwistingFunction};

fn delta4() -> &'static Presentation {
    static X: OnceLock<Presentation> = OnceLock::new();
    X.get_or_init(|| models::collapsed_simplex(4, 0))
}

fn twist4() -> &'static Arc<TwistingFunction> {
    static T: OnceLock<Arc<TwistingFunction>> = OnceLock::new();
    T.get_or_init(|| models::loop_twist(models::collapsed_simplex(4, 0), 6))
}

/// A nondegenerate simplex of the collapsed 4-simplex followed by a few degeneracies.
fn simplex(x: &Presentation, max_extra: usize) -> impl Strategy<Value = Simplex> + '_ {
    (1..=4usize)
        .prop_flat_map(move |d| (Just(d), 0..x.nondegenerate(d).len(), proptest::collection::vec(0..8usize, 0..=max_extra)))
        .prop_map(move |(d, k, degs)| {
            let mut s = x.nondegenerate(d)[k];
            for j in degs {
                s = x.degeneracy(j % (s.dim() + 1), &s);
            }
            s
        })
}

fn chain_of(x: &'static Presentation, dim: usize) -> impl Strategy<Value = Chain<Simplex>> {
    let n = x.nondegenerate(dim).len();
    proptest::collection::vec((0..n, -3i64..=3), 0..5)
        .prop_map(move |terms| Chain::from_terms(terms.into_iter().map(|(k, c)| (x.nondegenerate(dim)[k], BigInt::from(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplicial_identities(x in simplex(delta4(), 2), i in 0usize..8, j in 0usize..8) {
        let s = delta4();
        let n = x.dim();
        let (i, j) = (i % (n + 1), j % (n + 1));
        if n >= 2 && i < j {
            prop_assert_eq!(s.face(i, &s.face(j, &x)), s.face(j - 1, &s.face(i, &x)));
        }
        if i <= j {
            prop_assert_eq!(s.degeneracy(i, &s.degeneracy(j, &x)), s.degeneracy(j + 1, &s.degeneracy(i, &x)));
        }
        let sj = s.degeneracy(j, &x);
        prop_assert_eq!(s.face(j, &sj), x);
        prop_assert_eq!(s.face(j + 1, &sj), x);
    }

    #[test]
    fn boundary_squares_to_zero(c in chain_of(delta4(), 4)) {
        prop_assert!(boundary(delta4(), &boundary(delta4(), &c)).is_zero());
    }

    #[test]
    fn alexander_whitney_is_a_chain_map(x in simplex(delta4(), 0)) {
        let s = delta4();
        let lhs = aw(s, &boundary_cell(s, &x));
        let d = |y: &Simplex| boundary_cell(s, y);
        let rhs = sztwist::chain::tensor_differential(&aw_cell(s, &x), d, d);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cut_signs_survive_refinement(n in 0usize..=7, pick in any::<prop::sample::Index>()) {
        let all = IntervalCut::enumerate_all(n);
        let p = pick.get(&all);
        prop_assert_eq!(p.epsilon(), p.maximal_refinement().epsilon());
        prop_assert_eq!(p.epsilon(), p.epsilon_direct());
        for r in p.refinements() {
            prop_assert_eq!(r.epsilon(), p.epsilon());
            prop_assert_eq!(r.ell() + 1, p.ell());
        }
        prop_assert_eq!(p.cuts_above().len(), 1 << p.ell());
    }

    #[test]
    fn psi_p_round_trips(n in 1usize..=7, pick in any::<prop::sample::Index>(), pick_i in any::<prop::sample::Index>()) {
        let cuts = strict_cuts(n);
        let p = pick.get(&cuts);
        let dom = s_n_minus_1_of_p(n, p).unwrap();
        prop_assume!(!dom.is_empty());
        let i = pick_i.get(&dom);
        let img = psi_p(n, p, i).unwrap();
        prop_assert_eq!(&psi_p_inverse(n, p, &img).unwrap(), i);
        let qs: Vec<usize> = p.windows(2).map(|w| w[1] - w[0]).collect();
        let rhs = img.inversions() + img.js.iter().map(|j| degree(j)).sum::<usize>()
            + qs.iter().enumerate().map(|(s, q)| s * (q - 1)).sum::<usize>();
        prop_assert_eq!(degree(i) % 2, rhs % 2);
    }

    #[test]
    fn szczarba_commutes_with_degeneracies(n in 1usize..=3, pick in any::<prop::sample::Index>(), p in 0usize..4,
                                           pi in any::<prop::sample::Index>(), pj in any::<prop::sample::Index>()) {
        let tw = twist4();
        let g = tw.group();
        let xs = tw.base().nondegenerate(n);
        let x = pick.get(&xs);
        let p = p % (n + 1);
        let sx = x.degeneracy(p);
        let i = pi.get(&s_n(n)).clone();
        let (j, q) = phi(&i, p).unwrap();
        prop_assert_eq!(sz(tw, &i, &sx).unwrap(), g.degeneracy(q, &sz(tw, &j, x).unwrap()));
        let i = pj.get(&s_n(n + 1)).clone();
        let (j, q) = phi(&i, p + 1).unwrap();
        let sztwist::Pair(a, h) = hat_sz(tw, &j, x).unwrap();
        prop_assert_eq!(hat_sz(tw, &i, &sx).unwrap(), sztwist::Pair(a.degeneracy(q), g.degeneracy(q, &h)));
    }

    #[test]
    fn t_vanishes_on_degenerate_simplices(x in simplex(twist4().base(), 2)) {
        prop_assume!(x.is_degenerate() && x.dim() <= 5);
        prop_assert!(szczarba_t(twist4(), &x).is_zero());
    }

    #[test]
    fn t_is_a_twisting_cochain_on_random_simplices(x in simplex(twist4().base(), 1)) {
        prop_assume!(x.dim() <= 5);
        let tw = twist4();
        let a = GroupAlgebra(tw.group());
        let t = |c: &Simplex| szczarba_t(tw, c);
        prop_assert_eq!(hom_differential(tw.base(), &a, t, -1, &x), cup(tw.base(), &a, t, t, -1, &x));
    }

    #[test]
    fn cobar_differential_squares_to_zero(k in 0usize..3, letters in proptest::collection::vec((2usize..=4, any::<prop::sample::Index>()), 1..3)) {
        let x = sphere_free();
        let w = CobarWord::new(letters.iter().take(k + 1).map(|(d, i)| *i.get(&x.nondegenerate(*d))).collect()).unwrap();
        prop_assert!(differential_chain(x, &differential(x, &w)).is_zero());
        let dw = diagonal(x, &w);
        let counit_left: BigInt = dw.iter().filter(|((a, _), _)| a.is_empty()).map(|(_, c)| c.clone()).sum();
        prop_assert_eq!(counit_left, BigInt::from(1));
    }

    #[test]
    fn twisted_differential_squares_to_zero(m in 2usize..=4, d in 0usize..=3, pick in any::<prop::sample::Index>()) {
        let tp = models::simplex_cover(3, m);
        let tt = TwistedTensor::new(&tp);
        let basis = tt.basis(d).unwrap();
        prop_assume!(!basis.is_empty());
        let (x, y) = pick.get(&basis);
        prop_assert!(tt.differential_chain(&tt.differential(x, y)).is_zero());
        let p = psi(&tp, x, y);
        prop_assert_eq!(boundary(&tp, &p), sztwist::szczarba::psi_chain(&tp, &tt.differential(x, y)));
    }

    #[test]
    fn smith_form_diagonalizes(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..=6, 25)) {
        let a: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 5 + j])).collect()).collect();
        let snf = smith_normal_form(&a, cols);
        let d = mat_mul(&mat_mul(&snf.u, &a, rows), &snf.v, cols);
        for i in 0..rows {
            for j in 0..cols {
                let want = if i == j && i < snf.diagonal.len() { snf.diagonal[i].clone() } else { BigInt::from(0) };
                prop_assert_eq!(&d[i][j], &want);
            }
        }
        for w in snf.diagonal.windows(2) {
            prop_assert!(w[0] != BigInt::from(0) && (&w[1] % &w[0]) == BigInt::from(0));
        }
        let q = Field::Rational;
        let vecs: Vec<_> = a.iter().map(|r| r.iter().map(|c| q.from_int(c)).collect()).collect();
        prop_assert_eq!(snf.rank(), q.rank(&vecs, cols));
    }

    #[test]
    fn chains_round_trip_through_json(c in chain_of(delta4(), 2)) {
        let back: Chain<Simplex> = chain_from_json(&chain_to_json(&c)).unwrap();
        prop_assert_eq!(back, c);
    }
}

fn sphere_free() -> &'static Presentation {
    static X: OnceLock<Presentation> = OnceLock::new();
    X.get_or_init(|| models::collapsed_simplex(4, 1))
}
