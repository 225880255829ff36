use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;

fn ring(cr: CoefficientRing) -> PolyRing {
    PolyRing::grevlex(cr, &["x", "y", "z"]).unwrap()
}

fn zz() -> PolyRing {
    ring(CoefficientRing::integers())
}

#[test]
fn parse_examples() {
    let r = PolyRing::grevlex(CoefficientRing::integers(), &["x", "y"]).unwrap();
    let f = r.parse("y^2 - x^2 + 2*x + 2").unwrap();
    assert_eq!(f.len(), 4);
    assert!(r.parse("0").unwrap().is_zero());
    let z4 = PolyRing::grevlex(CoefficientRing::mod_prime_power(2, 2).unwrap(), &["x"]).unwrap();
    let g = z4.parse("2*x + 2").unwrap();
    assert_eq!(g.terms().iter().map(|t| t.1.clone()).collect::<Vec<_>>(), vec![BigInt::from(2); 2]);
    assert_eq!(z4.parse("4*x + 2").unwrap().len(), 1);
}

#[test]
fn arithmetic_examples() {
    let r = PolyRing::grevlex(CoefficientRing::integers(), &["x", "y"]).unwrap();
    let p = |s: &str| r.parse(s).unwrap();
    assert_eq!(&p("x + y") * &p("x + y"), p("x^2 + 2*x*y + y^2"));
    assert_eq!(
        &(&p("x + y") * &p("x + y")) + &p("y^2 - x^2 + 2*x + 2"),
        p("2*y^2 + 2*x*y + 2*x + 2")
    );
    let z4 = r.with_coefficients(CoefficientRing::mod_prime_power(2, 2).unwrap());
    let q = |s: &str| z4.parse(s).unwrap();
    assert!((&q("2*x + 2") * &q("2*y + 2")).is_zero());
    let other = PolyRing::grevlex(CoefficientRing::integers(), &["x", "z"]).unwrap();
    assert!(matches!(p("x").try_add(&other.parse("x").unwrap()), Err(Error::RingMismatch(_))));
}

#[test]
fn derivative_examples() {
    let r = zz();
    let p = |s: &str| r.parse(s).unwrap();
    assert_eq!(p("y^2 - x^2 + 2*x + 2").partial_derivative("x").unwrap(), p("-2*x + 2"));
    assert!(p("x*z - 2").partial_derivative("y").unwrap().is_zero());
    assert_eq!(p("x").partial_derivative("w"), Err(Error::UnknownVariable("w".into())));
    let f5 = ring(CoefficientRing::prime_field(5).unwrap());
    assert!(f5.parse("x^5").unwrap().partial_derivative("x").unwrap().is_zero());
}

#[test]
fn change_coefficient_examples() {
    let r = zz();
    let p = |s: &str| r.parse(s).unwrap();
    let z4 = CoefficientRing::mod_prime_power(2, 2).unwrap();
    let z8 = CoefficientRing::mod_prime_power(2, 3).unwrap();
    let f2 = CoefficientRing::prime_field(2).unwrap();
    assert!(p("4*y + 4").change_coefficients(&z4).unwrap().is_zero());
    let h = p("x + 5").change_coefficients(&f2).unwrap();
    assert_eq!(h.to_string(), "x + 1");
    let g = p("2*x + 3").change_coefficients(&z8).unwrap();
    let g4 = g.change_coefficients(&z4).unwrap();
    assert_eq!(g4, p("2*x + 3").change_coefficients(&z4).unwrap());
    assert!(matches!(g4.change_coefficients(&z8), Err(Error::NoCanonicalMap { .. })));
}

#[test]
fn evaluation_in_extension_field() {
    let r = zz();
    let f4 = crate::finite_field::GaloisField::new(BigInt::from(2), 2).unwrap();
    let a = f4.generator();
    let zero = f4.zero();
    // x^2 + x + 1 vanishes at the generator of F_4
    let f = r.parse("x^2 + x + 1").unwrap();
    assert_eq!(f.evaluate(&f4, &[a.clone(), zero.clone(), zero.clone()]).unwrap(), f4.zero());
    let f3 = ring(CoefficientRing::prime_field(3).unwrap());
    assert!(f3.one().evaluate(&f4, &[a, zero.clone(), zero]).is_err());
}

#[test]
fn printing_is_readable() {
    let r = zz();
    assert_eq!(r.parse("-(x + 1)^2").unwrap().to_string(), "-x^2 - 2*x - 1");
    let z8 = ring(CoefficientRing::mod_prime_power(2, 3).unwrap());
    assert_eq!(z8.parse("7*x*y + 9").unwrap().to_string(), "-x*y + 1");
}

// Strategies

fn coefficient_ring() -> impl Strategy<Value = CoefficientRing> {
    prop_oneof![
        Just(CoefficientRing::integers()),
        Just(CoefficientRing::mod_prime_power(2, 3).unwrap()),
        Just(CoefficientRing::mod_prime_power(3, 2).unwrap()),
        Just(CoefficientRing::prime_field(5).unwrap()),
        Just(CoefficientRing::finite_field(2, 3).unwrap()),
    ]
}

fn poly_in(r: PolyRing, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, 3), -20i64..20), 0..max_terms).prop_map(
        move |terms| {
            let cr = r.coefficients().clone();
            r.from_terms(terms.into_iter().map(|(e, c)| {
                let c = match cr.galois_field() {
                    // random field element, not just the prime subfield
                    Some(f) => BigInt::from(c.rem_euclid(8)) % f.order(),
                    None => BigInt::from(c),
                };
                (Monomial::from_exponents(&e).unwrap(), c)
            }))
        },
    )
}

fn triple() -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    coefficient_ring().prop_flat_map(|cr| {
        let r = ring(cr);
        (poly_in(r.clone(), 5), poly_in(r.clone(), 5), poly_in(r, 5))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_print_round_trip((a, _, _) in triple()) {
        let back = a.ring().parse(&a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn leibniz_rule((a, b, _) in triple(), v in 0usize..3) {
        let name = ["x", "y", "z"][v];
        let lhs = (&a * &b).partial_derivative(name).unwrap();
        let rhs = &(&a * &b.partial_derivative(name).unwrap()) + &(&b * &a.partial_derivative(name).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_a_homomorphism(a in poly_in(zz(), 5), b in poly_in(zz(), 5)) {
        for target in [
            CoefficientRing::mod_prime_power(2, 3).unwrap(),
            CoefficientRing::prime_field(3).unwrap(),
            CoefficientRing::finite_field(2, 2).unwrap(),
        ] {
            let h = |f: &Polynomial| f.change_coefficients(&target).unwrap();
            prop_assert_eq!(h(&(&a + &b)), &h(&a) + &h(&b));
            prop_assert_eq!(h(&(&a * &b)), &h(&a) * &h(&b));
        }
    }

    #[test]
    fn gcd_divides_and_scales(
        a in poly_in(zz(), 4),
        b in poly_in(zz(), 4),
        c in poly_in(zz(), 3),
    ) {
        let g = poly_gcd(&a, &b).unwrap();
        if !g.is_zero() {
            prop_assert!(a.div_exact(&g).is_ok());
            prop_assert!(b.div_exact(&g).is_ok());
        }
        if !c.is_zero() {
            let gc = poly_gcd(&(&a * &c), &(&b * &c)).unwrap();
            let expected = &g * &c;
            // equal up to sign
            prop_assert!(gc == expected || gc == -&expected);
        }
    }

    #[test]
    fn gcd_over_prime_field(
        a in poly_in(ring(CoefficientRing::prime_field(5).unwrap()), 4),
        c in poly_in(ring(CoefficientRing::prime_field(5).unwrap()), 3),
    ) {
        let b = &a * &c;
        let g = poly_gcd(&a, &b).unwrap();
        if !a.is_zero() {
            let lc = a.leading_coefficient().unwrap();
            let inv = a.coefficient_ring().inverse(lc).unwrap();
            prop_assert_eq!(g, a.scale_raw(&inv));
        }
    }
}
