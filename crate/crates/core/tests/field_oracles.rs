use proptest::prelude::*;
use semiorbit::ff_core::FieldContext;
use semiorbit_oracles::{euler_phi, first_irreducible, prime_powers_up_to, trial_factor, NaiveField};

fn naive(ctx: &FieldContext) -> NaiveField {
    NaiveField::new(ctx.characteristic(), ctx.modulus().to_vec())
}

#[test]
fn modulus_is_first_irreducible() {
    for (p, s) in prime_powers_up_to(3000) {
        let ctx = FieldContext::extension(p, s).unwrap();
        assert_eq!(ctx.modulus(), first_irreducible(p, s).as_slice(), "F_{p}^{s}");
    }
}

#[test]
fn arithmetic_matches_naive_field() {
    for (p, s) in [(2, 5), (3, 3), (5, 2), (7, 2), (13, 1)] {
        let ctx = FieldContext::extension(p, s).unwrap();
        let nf = naive(&ctx);
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert_eq!(ctx.mul(a, b).index(), nf.mul(a.index(), b.index()));
                assert_eq!(ctx.add(a, b).index(), nf.add(a.index(), b.index()));
            }
        }
    }
}

#[test]
fn orders_match_powering_on_small_fields() {
    for (p, s) in prime_powers_up_to(256) {
        let ctx = FieldContext::extension(p, s).unwrap();
        let nf = naive(&ctx);
        for u in ctx.elements().skip(1) {
            let tau = ctx.mul_order(u).unwrap();
            assert_eq!(tau, nf.order_by_powering(u.index()), "u={u} in F_{p}^{s}");
            assert_eq!((ctx.size() - 1) % tau, 0);
        }
    }
}

#[test]
fn small_order_set_sizes() {
    for (p, s) in [(2, 6), (7, 1), (3, 4), (31, 1), (11, 2)] {
        let ctx = FieldContext::extension(p, s).unwrap();
        let q1 = ctx.size() - 1;
        let divisors: Vec<u64> = (1..=q1).filter(|l| q1 % l == 0).collect();
        for t in [1, 2, 3, 6, 10, q1] {
            let expected: u64 = divisors.iter().filter(|&&l| l <= t).map(|&l| euler_phi(l)).sum();
            let set = ctx.small_order_set(t).unwrap();
            assert_eq!(set.len() as u64, expected, "t={t} in F_{p}^{s}");
            assert!(set.iter().all(|&v| ctx.mul_order(v).unwrap() <= t));
        }
    }
}

#[test]
fn primitive_element_generates() {
    for (p, s) in [(2, 8), (5, 3), (101, 1), (3, 5)] {
        let ctx = FieldContext::extension(p, s).unwrap();
        let g = ctx.primitive_element().unwrap();
        assert_eq!(ctx.mul_order(g).unwrap(), ctx.size() - 1);
        let factors: u64 = trial_factor(ctx.size() - 1).iter().map(|&(q, e)| q.pow(e)).product();
        assert_eq!(factors, ctx.size() - 1);
    }
}

fn f125() -> FieldContext {
    FieldContext::extension(5, 3).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(a in 0u64..125, b in 0u64..125, c in 0u64..125) {
        let ctx = f125();
        let (a, b, c) = (ctx.element(a).unwrap(), ctx.element(b).unwrap(), ctx.element(c).unwrap());
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), ctx.zero());
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            prop_assert_eq!(ctx.pow(a, 124), ctx.one());
        }
    }

    #[test]
    fn order_divides_exponents(a in 1u64..125, e in 1u128..1000) {
        let ctx = f125();
        let a = ctx.element(a).unwrap();
        let tau = ctx.mul_order(a).unwrap() as u128;
        prop_assert_eq!(ctx.pow(a, e) == ctx.one(), e % tau == 0);
    }
}
