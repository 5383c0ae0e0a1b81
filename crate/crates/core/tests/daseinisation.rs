mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use topos_core::{
    daseinise_proposition, daseinise_selfadjoint, inner_daseinise_projection,
    outer_daseinise_projection, spectral_order_leq, ContextPoset, Mode, Operator,
};

fn posets() -> Vec<ContextPoset> {
    vec![
        standard_poset(),
        poset_of("two_basis.json"),
        poset_of("daseinisation_classes.json"),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sandwich_and_brute_force(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let rank = rng.gen_range(1..=3);
        let p = random_projector(&mut rng, rank);
        let t = tol();
        for poset in posets() {
            for v in poset.contexts() {
                let outer = outer_daseinise_projection(&p, v, &t).unwrap();
                let inner = inner_daseinise_projection(&p, v, &t).unwrap();
                prop_assert!(below(&inner, &p) && below(&p, &outer));
                prop_assert!(outer.approx_eq(&brute_outer(&p, v), 1e-7));
                prop_assert!(inner.approx_eq(&brute_inner(&p, v), 1e-7));
            }
        }
    }

    #[test]
    fn monotone_in_context_and_operator(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_projector(&mut rng, 1);
        // q ≥ p.
        let q = &p + &{
            let c = &Operator::identity(4) - &p;
            let support = random_support(&mut rng);
            let w = random_vector(&mut rng, &support);
            let cw: topos_core::StateVector = c.matrix() * &w;
            let n = cw.norm();
            if n < 1e-3 { Operator::zeros(4) } else { Operator::ket_bra(&(cw / topos_core::Complex64::new(n, 0.0))) }
        };
        let t = tol();
        for poset in posets() {
            for (sub, sup) in poset.inclusions() {
                let (vs, vl) = (poset.context(sub), poset.context(sup));
                let o_small = outer_daseinise_projection(&p, vs, &t).unwrap();
                let o_large = outer_daseinise_projection(&p, vl, &t).unwrap();
                prop_assert!(below(&o_large, &o_small));
                let i_small = inner_daseinise_projection(&p, vs, &t).unwrap();
                let i_large = inner_daseinise_projection(&p, vl, &t).unwrap();
                prop_assert!(below(&i_small, &i_large));
            }
            for v in poset.contexts() {
                prop_assert!(below(
                    &outer_daseinise_projection(&p, v, &t).unwrap(),
                    &outer_daseinise_projection(&q, v, &t).unwrap()
                ));
                prop_assert!(below(
                    &inner_daseinise_projection(&p, v, &t).unwrap(),
                    &inner_daseinise_projection(&q, v, &t).unwrap()
                ));
            }
            // 𝔖 is order preserving: P ≤ Q gives δ(P) ⊆ δ(Q).
            let dp = daseinise_proposition(&p, &poset).unwrap();
            let dq = daseinise_proposition(&q, &poset).unwrap();
            prop_assert!(dp.subobject.is_subset(&dq.subobject));
        }
    }

    #[test]
    fn selfadjoint_against_stieltjes_oracle(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, spectrum) = random_selfadjoint(&mut rng);
        let t = tol();
        for poset in posets().into_iter().take(2) {
            for v in poset.contexts() {
                let outer = daseinise_selfadjoint(&a, v, Mode::Outer, &t).unwrap();
                let inner = daseinise_selfadjoint(&a, v, Mode::Inner, &t).unwrap();
                prop_assert!(outer.approx_eq(&oracle_outer_selfadjoint(&a, &spectrum, v), 1e-6));
                prop_assert!(inner.approx_eq(&oracle_inner_selfadjoint(&a, &spectrum, v), 1e-6));
                prop_assert!(spectrum_within(&outer, &spectrum));
                prop_assert!(spectrum_within(&inner, &spectrum));
                prop_assert!(spectral_order_leq(&a, &outer, &t).unwrap());
                prop_assert!(spectral_order_leq(&inner, &a, &t).unwrap());
                prop_assert!(psd(&(&outer - &a)) && psd(&(&a - &inner)));
            }
        }
    }
}

/// Coarser contexts give coarser approximations in the spectral order.
#[test]
fn selfadjoint_daseinisation_is_monotone_in_context() {
    let mut rng = rng(11);
    let t = tol();
    let poset = poset_of("two_basis.json");
    for _ in 0..10 {
        let (a, _) = random_selfadjoint(&mut rng);
        for (sub, sup) in poset.inclusions() {
            let (vs, vl) = (poset.context(sub), poset.context(sup));
            let o_s = daseinise_selfadjoint(&a, vs, Mode::Outer, &t).unwrap();
            let o_l = daseinise_selfadjoint(&a, vl, Mode::Outer, &t).unwrap();
            assert!(spectral_order_leq(&o_l, &o_s, &t).unwrap());
            let i_s = daseinise_selfadjoint(&a, vs, Mode::Inner, &t).unwrap();
            let i_l = daseinise_selfadjoint(&a, vl, Mode::Inner, &t).unwrap();
            assert!(spectral_order_leq(&i_s, &i_l, &t).unwrap());
        }
    }
}
