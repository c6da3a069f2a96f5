use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiorbit::intpoly::{cyclotomic, is_special, IntPolynomial, SpecialKind};
use semiorbit::orbits::{GeneratorSet, Word};
use semiorbit::verify::composition_height_check;
use semiorbit_oracles::{poly_mul, sylvester_resultant};

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> IntPolynomial {
    let deg = rng.random_range(0..=max_deg);
    let mut c: Vec<i64> = (0..=deg).map(|_| rng.random_range(-9..=9)).collect();
    if c[deg] == 0 {
        c[deg] = 1;
    }
    IntPolynomial::from_i64s(&c)
}

#[test]
fn cyclotomic_products() {
    for n in 1..=60u64 {
        let prod = (1..=n)
            .filter(|d| n % d == 0)
            .fold(vec![BigInt::from(1)], |acc, d| poly_mul(&acc, cyclotomic(d).unwrap().coeffs()));
        let mut expected = vec![BigInt::from(0); n as usize + 1];
        expected[0] = BigInt::from(-1);
        expected[n as usize] = BigInt::from(1);
        assert_eq!(prod, expected, "n={n}");
    }
}

#[test]
fn resultant_matches_sylvester() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..150 {
        let f = random_poly(&mut rng, 5);
        let g = random_poly(&mut rng, 5);
        if f.degree() == Some(0) && g.degree() == Some(0) {
            continue;
        }
        let res = f.resultant(&g).unwrap();
        assert_eq!(res, sylvester_resultant(f.coeffs(), g.coeffs()), "f={f} g={g}");
    }
}

#[test]
fn resultant_goldens() {
    let p = |s: &str| s.parse::<IntPolynomial>().unwrap();
    assert_eq!(p("X - 1").resultant(&p("X + 1")).unwrap(), BigInt::from(2));
    assert_eq!(p("X^2 + 1").resultant(&p("X^2 - 1")).unwrap(), BigInt::from(4));
    assert_eq!(p("X^2 - 1").resultant(&p("X - 1")).unwrap(), BigInt::from(0));
}

#[test]
fn special_classification() {
    let p = |s: &str| s.parse::<IntPolynomial>().unwrap();
    assert_eq!(is_special(&p("X^2 - 2")).unwrap().kind, SpecialKind::ChebyshevConjugate);
    assert_eq!(is_special(&p("X^3")).unwrap().kind, SpecialKind::MonomialConjugate);
    assert_eq!(is_special(&p("X^2 + 2X")).unwrap().kind, SpecialKind::MonomialConjugate);
    assert_eq!(is_special(&p("X^2 + 2X + 1")).unwrap().kind, SpecialKind::NonSpecial);
    assert_eq!(is_special(&p("X^3 - 3X")).unwrap().kind, SpecialKind::ChebyshevConjugate);
}

#[test]
fn composition_heights_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let k = rng.random_range(1..=2);
        let polys: Vec<IntPolynomial> = (0..k)
            .map(|_| {
                let d = rng.random_range(2..=3);
                let mut c: Vec<i64> = (0..=d).map(|_| rng.random_range(-9..=9)).collect();
                c[d] = if rng.random_bool(0.5) { 1 } else { -2 };
                IntPolynomial::from_i64s(&c)
            })
            .collect();
        let gens = GeneratorSet::new(polys).unwrap();
        let n = rng.random_range(1..=3);
        let word = Word::new((0..n).map(|_| rng.random_range(1..=k as u32)).collect());
        let check = composition_height_check(&gens, &word).unwrap();
        assert!(check.holds && check.height <= check.bound + 1e-9, "{check:?}");
    }
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = IntPolynomial> {
    proptest::collection::vec(-9i64..=9, 1..=max_deg + 1)
        .prop_map(|c| IntPolynomial::from_i64s(&c))
        .prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_antisymmetry(f in poly_strategy(4), g in poly_strategy(4)) {
        let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
        prop_assume!(df + dg > 0);
        let sign = if df * dg % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(f.resultant(&g).unwrap(), g.resultant(&f).unwrap() * sign);
    }

    #[test]
    fn resultant_multiplicative(f in poly_strategy(3), g in poly_strategy(3), h in poly_strategy(3)) {
        prop_assume!(f.degree().unwrap() > 0);
        let lhs = f.resultant(&(&g * &h)).unwrap();
        let rhs = f.resultant(&g).unwrap() * f.resultant(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn height_scale_invariant(f in poly_strategy(5), c in -50i64..=50) {
        prop_assume!(c != 0);
        let scaled = f.scale(&BigInt::from(c));
        prop_assert_eq!(scaled.height().unwrap(), f.height().unwrap());
    }

    #[test]
    fn composition_degree_multiplies(f in poly_strategy(3), g in poly_strategy(3)) {
        let h = f.compose(&g);
        if let (Some(df), Some(dg)) = (f.degree(), g.degree()) {
            if dg > 0 || df == 0 {
                prop_assert_eq!(h.degree(), Some(df * dg));
            }
        }
        let x = BigInt::from(3);
        prop_assert_eq!(h.eval(&x), f.eval(&g.eval(&x)));
    }
}
