//! Property tests for the algebraic substrates: cyclotomic ring axioms,
//! polynomial division/gcd contracts, the module action laws, and
//! character multiplicativity, over randomly drawn inputs.

use proptest::prelude::*;

use ffchar::characters::{additive_eval, AdditiveChar};
use ffchar::cyclotomic::{root_power, CycInt};
use ffchar::fields::{build_field, FieldCtx};
use ffchar::linearized::apply_linearized;
use ffchar::polyring::{PolyQ, PolyRing};
use ffchar::FqCtx;

fn cyc_element(n: u64, spec: &[(u64, i64)]) -> CycInt {
    let mut acc = CycInt::zero(n).unwrap();
    for &(k, c) in spec {
        acc = acc.add(&root_power(n, k % n).unwrap().scale(c % 50)).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cyclotomic_ring_axioms(
        n in 1u64..=40,
        a in proptest::collection::vec((0u64..200, -50i64..50), 1..4),
        b in proptest::collection::vec((0u64..200, -50i64..50), 1..4),
        c in proptest::collection::vec((0u64..200, -50i64..50), 1..4),
    ) {
        let (a, b, c) = (cyc_element(n, &a), cyc_element(n, &b), cyc_element(n, &c));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.add(&a.neg()).unwrap().is_zero(), true);
        prop_assert_eq!(a.mul(&CycInt::one(n).unwrap()).unwrap(), a);
    }

    #[test]
    fn root_power_is_a_homomorphism(n in 1u64..=60, i in 0u64..300, j in 0u64..300) {
        let lhs = root_power(n, (i + j) % n).unwrap();
        let rhs = root_power(n, i).unwrap().mul(&root_power(n, j).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

fn arb_poly(q: u64, max_len: usize) -> impl Strategy<Value = PolyQ> {
    proptest::collection::vec(0..q, 0..max_len).prop_map(PolyQ::from_coeffs)
}

fn fq_cases() -> Vec<FqCtx> {
    vec![
        FqCtx::new(2, 1).unwrap(),
        FqCtx::new(3, 1).unwrap(),
        FqCtx::new(5, 1).unwrap(),
        FqCtx::new(2, 2).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn divrem_and_gcd_contracts(
        which in 0usize..4,
        a_raw in proptest::collection::vec(0u64..5, 0..9),
        b_raw in proptest::collection::vec(0u64..5, 0..9),
    ) {
        let fq = &fq_cases()[which];
        let ring = PolyRing::new(fq);
        let a = PolyQ::from_coeffs(a_raw.iter().map(|&c| c % fq.q()).collect());
        let b = PolyQ::from_coeffs(b_raw.iter().map(|&c| c % fq.q()).collect());
        if b.is_zero() {
            prop_assert!(ring.divrem(&a, &b).is_err());
        } else {
            let (quot, rem) = ring.divrem(&a, &b).unwrap();
            prop_assert_eq!(ring.add(&ring.mul(&quot, &b), &rem), a.clone());
            prop_assert!(rem.degree() < b.degree() || rem.is_zero());
        }
        let g = ring.gcd(&a, &b);
        if !a.is_zero() || !b.is_zero() {
            prop_assert!(g.is_monic());
            prop_assert!(ring.rem(&a, &g).unwrap().is_zero());
            prop_assert!(ring.rem(&b, &g).unwrap().is_zero());
        } else {
            prop_assert!(g.is_zero());
        }
    }
}

fn ctx_cases() -> Vec<FieldCtx> {
    vec![
        build_field(2, 1, 3, 4096).unwrap(),
        build_field(3, 1, 2, 4096).unwrap(),
        build_field(2, 2, 2, 4096).unwrap(),
        build_field(5, 1, 2, 4096).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn linearized_action_is_a_module_action(
        which in 0usize..4,
        f_raw in proptest::collection::vec(0u64..25, 0..9),
        g_raw in proptest::collection::vec(0u64..25, 0..9),
        alpha_seed in 0u64..10_000,
    ) {
        let ctx = &ctx_cases()[which];
        let ring = PolyRing::new(ctx.fq());
        let f = PolyQ::from_coeffs(f_raw.iter().map(|&c| c % ctx.q()).collect());
        let g = PolyQ::from_coeffs(g_raw.iter().map(|&c| c % ctx.q()).collect());
        let alpha = ctx.element(alpha_seed % ctx.size());
        // additive in the polynomial
        let lhs = apply_linearized(ctx, &ring.add(&f, &g), &alpha);
        let rhs = ctx.add_elem(
            &apply_linearized(ctx, &f, &alpha),
            &apply_linearized(ctx, &g, &alpha),
        );
        prop_assert_eq!(lhs, rhs);
        // composition law (fg)∘α = f∘(g∘α)
        let lhs = apply_linearized(ctx, &ring.mul(&f, &g), &alpha);
        let rhs = apply_linearized(ctx, &f, &apply_linearized(ctx, &g, &alpha));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_characters_are_multiplicative_over_addition(
        which in 0usize..4,
        beta_seed in 0u64..10_000,
        g1 in 0u64..10_000,
        g2 in 0u64..10_000,
    ) {
        let ctx = &ctx_cases()[which];
        let chi = AdditiveChar { beta: ctx.element(beta_seed % ctx.size()) };
        let a = ctx.element(g1 % ctx.size());
        let b = ctx.element(g2 % ctx.size());
        let lhs = additive_eval(ctx, &chi, &ctx.add_elem(&a, &b));
        let rhs = additive_eval(ctx, &chi, &a)
            .mul(&additive_eval(ctx, &chi, &b))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dlog_exp_round_trip(which in 0usize..4, k in 0u64..10_000) {
        let ctx = &ctx_cases()[which];
        let n = ctx.group_order();
        let k = k % n;
        let gamma = ctx.pow_elem(ctx.primitive(), k);
        prop_assert_eq!(ffchar::fields::discrete_log(ctx, &gamma).unwrap(), k);
    }
}
