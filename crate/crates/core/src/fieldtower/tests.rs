use super::dense::{bareiss_det, norm_polynomial};
use super::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn z(cs: &[i64]) -> ZPoly {
    ztrim(cs.iter().map(|&c| BigInt::from(c)).collect())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tower(p: i64, ells: &[u64], seed: u64) -> Vec<Extension> {
    let mut r = rng(seed);
    let mut node = NumberFieldNode::rationals(p.into()).unwrap();
    let mut out = Vec::new();
    for &ell in ells {
        let ext = extend_inert(&node, ell, &ExtendOptions::default(), &mut r).unwrap();
        node = ext.field.clone();
        out.push(ext);
    }
    out
}

fn monotone(trace: &[BigInt]) -> bool {
    trace.windows(2).all(|w| w[1] <= w[0])
}

fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
    fn go(m: &[Vec<BigInt>], row: usize, used: &mut Vec<bool>, sign: i64) -> BigInt {
        if row == m.len() {
            return BigInt::from(sign);
        }
        let mut acc = BigInt::zero();
        for col in 0..m.len() {
            if used[col] || m[row][col].is_zero() {
                continue;
            }
            let inversions = (0..col).filter(|&c| !used[c]).count();
            let s = if inversions % 2 == 0 { sign } else { -sign };
            used[col] = true;
            acc += &m[row][col] * go(m, row + 1, used, s);
            used[col] = false;
        }
        acc
    }
    go(m, 0, &mut vec![false; m.len()], 1)
}

fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

#[test]
fn inertness_examples() {
    let two = BigInt::from(2);
    assert_eq!(is_inert(&z(&[1, 1, 1]), &two), Ok(true));
    assert_eq!(is_inert(&z(&[-1, 0, 1]), &BigInt::from(3)), Ok(false));
    assert_eq!(is_inert(&z(&[1, 1, 0, 0, 1]), &two), Ok(true));
    assert_eq!(is_inert(&z(&[1, 0, 1]), &two), Err(Error::NotSquarefree("2".into())));
    assert!(is_inert(&z(&[1, 1, 2]), &two).is_err());
    assert!(is_inert(&z(&[1, 1, 1]), &BigInt::from(4)).is_err());
}

#[test]
fn resultant_examples() {
    // x^2 - 2 against x^2 - 3: product of (r^2 - 3) over r = ±√2
    assert_eq!(resultant(&z(&[-2, 0, 1]), &z(&[-3, 0, 1])), BigInt::from(1));
    assert_eq!(discriminant(&z(&[1, 1, 1])), BigInt::from(-3));
    assert_eq!(discriminant(&z(&[-2, 0, 1])), BigInt::from(8));
    // x^3 + a x + b: -4a^3 - 27b^2
    assert_eq!(discriminant(&z(&[1, -1, 0, 1])), BigInt::from(4 - 27));
    assert_eq!(resultant(&z(&[5]), &z(&[1, 0, 1])), BigInt::from(25));
    assert_eq!(resultant(&[], &z(&[1, 1])), BigInt::zero());
}

#[test]
fn compositum_by_resultant() {
    let k = z(&[-2, 0, 1]);
    let r = vec![z(&[-3]), z(&[0]), z(&[1])];
    // √2 + √3
    assert_eq!(norm_polynomial(&k, &r, &z(&[0, 1])), z(&[1, 0, -10, 0, 1]));
    // relative: t^2 - y over ℚ(√2) gives the fourth root of 2
    let r = vec![z(&[0, -1]), z(&[0]), z(&[1])];
    assert_eq!(norm_polynomial(&k, &r, &[]), z(&[-2, 0, 0, 0, 1]));
}

#[test]
fn extend_rationals_quadratic() {
    let ext = &tower(2, &[2], 1)[0];
    let f = &ext.field;
    assert_eq!(f.degree, 2);
    assert_eq!(zmod(&f.defining_poly, &BigInt::from(2)), z(&[1, 1, 1]));
    assert_eq!(f.tower(), vec![1, 2]);
    assert!(subfield_property_check(f).ok);
}

#[test]
fn extend_three_then_two() {
    let exts = tower(2, &[3, 2], 11);
    let l = &exts[1].field;
    assert_eq!(l.degree, 6);
    assert_eq!(l.subfields.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 6]);
    for s in l.subfields.values() {
        assert_eq!(degree(&s.defining_poly), Some(s.degree));
        assert_eq!(is_inert(&s.defining_poly, &l.p), Ok(true));
    }
    assert_eq!(l.tower(), vec![1, 3, 6]);
    assert!(subfield_property_check(l).ok);
}

#[test]
fn extend_two_twice() {
    let exts = tower(2, &[2, 2], 5);
    let l = &exts[1].field;
    assert_eq!(l.degree, 4);
    assert!(l.subfield(2).is_some());
    assert!(subfield_property_check(l).ok);
    // the relative polynomial lives over the quadratic subfield
    assert_eq!(exts[1].relative.len(), 3);
}

#[test]
fn towers_at_odd_primes() {
    for (p, ells) in [(3, vec![2, 3]), (5, vec![3, 2, 2]), (3, vec![2, 2, 2])] {
        let exts = tower(p, &ells, 3);
        let l = &exts.last().unwrap().field;
        assert_eq!(l.degree, ells.iter().product::<u64>() as usize);
        assert_eq!(is_inert(&l.defining_poly, &l.p), Ok(true));
        assert!(subfield_property_check(l).ok, "p = {p}, ells = {ells:?}");
        for e in &exts {
            assert!(monotone(&e.trace));
        }
    }
}

#[test]
fn extension_is_deterministic() {
    assert_eq!(tower(2, &[2, 3], 42), tower(2, &[2, 3], 42));
}

#[test]
fn extend_errors() {
    let q = NumberFieldNode::rationals(2.into()).unwrap();
    let opts = ExtendOptions::default();
    assert!(matches!(extend_inert(&q, 4, &opts, &mut rng(0)), Err(Error::InvalidArgument(_))));
    let k = tower(2, &[2], 0).remove(0).field;
    assert!(matches!(extend_inert(&k, 13, &opts, &mut rng(0)), Err(Error::Budget(_))));
    // p = 2 splits in ℚ(√-7)
    let split = NumberFieldNode::new(z(&[2, -1, 1]), 2.into(), k.subfields.clone()).unwrap();
    assert!(extend_inert(&split, 2, &opts, &mut rng(0)).is_err());
}

#[test]
fn audit_reports_missing_degrees() {
    let q = NumberFieldNode::rationals(2.into()).unwrap();
    assert_eq!(subfield_property_check(&q), Audit { ok: true, missing: vec![] });

    let f = z(&[1, 1, 0, 0, 1]);
    let mut registry = q.subfields.clone();
    registry.insert(4, Subfield { degree: 4, defining_poly: f.clone(), embedding: vec![BigRational::zero(), BigRational::one()] });
    let hand = NumberFieldNode::new(f, 2.into(), registry).unwrap();
    assert_eq!(subfield_property_check(&hand), Audit { ok: false, missing: vec![2] });

    // a corrupted witness is caught
    let mut l = tower(2, &[2, 2], 9).pop().unwrap().field;
    l.subfields.get_mut(&2).unwrap().embedding.push(BigRational::one());
    assert_eq!(subfield_property_check(&l).missing, vec![2]);
}

#[test]
fn descent_examples() {
    let two = BigInt::from(2);
    let f = z(&[1, 1, 1]);
    let d = optimise_discriminant(&f, &two, 0, &mut rng(0));
    assert_eq!(d.poly, f);
    assert_eq!(d.trace, vec![BigInt::from(3)]);

    let big = z(&[2_000_001, 1, 1]);
    let d = optimise_discriminant(&big, &two, 200, &mut rng(1));
    assert!(monotone(&d.trace));
    assert_eq!(d.trace.len(), 201);
    assert!(discriminant(&d.poly).abs() < discriminant(&big).abs());
    assert_eq!(zmod(&d.poly, &two), f);
    assert_eq!(is_inert(&d.poly, &two), Ok(true));
}

fn inert_poly(p: i64) -> impl Strategy<Value = ZPoly> {
    (2usize..5, proptest::collection::vec(-20i64..20, 4)).prop_filter_map("not inert", move |(d, cs)| {
        let mut f = z(&cs[..d]);
        f.resize(d, BigInt::zero());
        f.push(BigInt::one());
        matches!(is_inert(&f, &BigInt::from(p)), Ok(true)).then_some(f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bareiss_matches_leibniz(n in 1usize..5, entries in proptest::collection::vec(-9i64..10, 16)) {
        let m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(entries[i * 4 + j])).collect()).collect();
        prop_assert_eq!(bareiss_det(m.clone()), leibniz(&m));
    }

    #[test]
    fn resultant_is_product_over_roots(roots in proptest::collection::vec(-6i64..7, 1..4), b in proptest::collection::vec(-5i64..6, 1..4)) {
        let a = roots.iter().fold(z(&[1]), |acc, &r| dense::zmul(&acc, &z(&[-r, 1])));
        let b = z(&b);
        let expected = roots.iter().fold(BigInt::one(), |acc, &r| acc * eval(&b, &BigInt::from(r)));
        prop_assert_eq!(resultant(&a, &b), expected);
    }

    #[test]
    fn descent_preserves_residue(f in inert_poly(3), seed in 0u64..1000) {
        let three = BigInt::from(3);
        let d = optimise_discriminant(&f, &three, 25, &mut rng(seed));
        prop_assert!(monotone(&d.trace));
        prop_assert_eq!(d.trace[0].clone(), discriminant(&f).abs());
        prop_assert_eq!(d.trace.last().unwrap().clone(), discriminant(&d.poly).abs());
        prop_assert_eq!(zmod(&d.poly, &three), zmod(&f, &three));
        prop_assert_eq!(is_inert(&d.poly, &three), Ok(true));
    }
}

#[test]
fn tower_two_three_two() {
    let exts = tower(2, &[2, 3, 2], 2024);
    let l = &exts[2].field;
    assert_eq!(l.degree, 12);
    assert_eq!(l.subfields.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4, 6, 12]);
    assert_eq!(l.tower(), vec![1, 2, 6, 12]);
    assert!(subfield_property_check(l).ok);
    assert!(exts.iter().all(|e| monotone(&e.trace)));
}
