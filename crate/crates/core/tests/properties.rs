use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wellrounded::cohomology::cochain::dd_vanishes;
use wellrounded::cohomology::filling::random_word;
use wellrounded::cohomology::{rho_sym, FormalChain, SymTensor, Term};
use wellrounded::complex::soule::{fundamental_cube, Cube};
use wellrounded::complex::{Cell, GammaElt};
use wellrounded::contraction::geom::origin;
use wellrounded::contraction::{subdivision, trace_h3, TraceContext};
use wellrounded::intvec::{vec_cmp, IntVec, OrderResult};
use wellrounded::rational::{format_rat, parse_rat, rat};
use wellrounded::suites::sample_point;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero3() -> impl Strategy<Value = IntVec<3>> {
    prop::array::uniform3(-6i64..=6).prop_filter("nonzero", |a| a.iter().any(|&x| x != 0)).prop_map(IntVec)
}

fn ctx() -> &'static TraceContext {
    static CTX: OnceLock<TraceContext> = OnceLock::new();
    CTX.get_or_init(|| TraceContext::new(2, rat(1, 8)).expect("radius 2 fixpoint"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn preorder_is_antisymmetric(v in nonzero3(), w in nonzero3()) {
        prop_assert_eq!(vec_cmp(&v, &w), vec_cmp(&w, &v).reverse());
        prop_assert_eq!(vec_cmp(&v, &-v), OrderResult::Approx);
    }

    #[test]
    fn preorder_is_transitive(u in nonzero3(), v in nonzero3(), w in nonzero3()) {
        let le = |a, b| vec_cmp(a, b) != OrderResult::Greater;
        if le(&u, &v) && le(&v, &w) {
            prop_assert!(le(&u, &w));
        }
    }

    #[test]
    fn sign_classes_ignore_sign(v in nonzero3()) {
        if v.is_primitive().unwrap() {
            let c = v.canon().unwrap();
            prop_assert_eq!(c, (-v).canon().unwrap());
            prop_assert_eq!(c.rep().canon().unwrap(), c);
        } else {
            prop_assert!(v.canon().is_err());
        }
    }

    #[test]
    fn words_are_invertible(seed in any::<u64>()) {
        let g = random_word(&mut rng(seed), 6);
        prop_assert_eq!(g.det().abs(), 1);
        prop_assert_eq!(g.mul(&g.inverse()), GammaElt::identity());
    }

    #[test]
    fn rho_is_a_homomorphism(seed in any::<u64>(), n in 0usize..5) {
        let mut r = rng(seed);
        let (g, h) = (random_word(&mut r, 4), random_word(&mut r, 4));
        let t = SymTensor::<3>::random(n, 5, &mut r);
        let lhs = rho_sym(&g.mul(&h), n, &t).unwrap();
        let rhs = rho_sym(&g, n, &rho_sym(&h, n, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(rho_sym(&GammaElt::identity(), n, &t).unwrap(), t);
    }

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>(), arity in 0usize..3, n in 0usize..4) {
        let mut r = rng(seed);
        let args: Vec<_> = (0..arity + 2).map(|_| random_word(&mut r, 3)).collect();
        prop_assert!(dd_vanishes(arity, n, &args, &mut r).unwrap());
    }

    #[test]
    fn chain_boundary_squares_to_zero(seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let sub = subdivision();
        let mut c = FormalChain::zero();
        for _ in 0..r.gen_range(1..8) {
            let cell = r.gen_range(0..sub.catalogue.len());
            c.terms.push(Term { coeff: r.gen_range(-4..=4), gamma: random_word(&mut r, 3), cell, dim: sub.catalogue[cell].dim });
        }
        prop_assert!(c.boundary().boundary().global().unwrap().is_empty());
        let g = random_word(&mut r, 3);
        prop_assert!(c.translate(&g).boundary().equivalent(&c.boundary().translate(&g)).unwrap());
    }

    #[test]
    fn rationals_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x);
    }

    #[test]
    fn tensors_and_matrices_round_trip(seed in any::<u64>(), n in 0usize..4) {
        let mut r = rng(seed);
        let g = random_word(&mut r, 5);
        let back: GammaElt<3> = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
        let t = SymTensor::<3>::random(n, 7, &mut r);
        let back: SymTensor<3> = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn traces_end_at_the_center(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let c = ctx();
        let cubes: Vec<Cell<3>> = c.record.tops_with(|d| d <= 2);
        let cell = &cubes[pick.index(cubes.len())];
        let x = sample_point(&mut rng(seed));
        let t = trace_h3(c, &Cube::from_cell(cell).unwrap(), &x).unwrap();
        let (end_cube, end) = t.end().expect("at least one piece");
        let s0 = fundamental_cube();
        prop_assert_eq!(end_cube, s0.cell());
        prop_assert_eq!(end, &origin());
        prop_assert!(t.is_monotone());
        for w in t.pieces.windows(2) {
            prop_assert!(w[0].t1 <= w[1].t0 + 1e-12);
        }
    }
}
