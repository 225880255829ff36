// Coefficient domains for the Gröbner engine. Leading coefficients of basis
// elements are kept normalised (1 over fields, positive over ℤ, an exact power
// p^v over ℤ/p^n), so the numerically smallest leading coefficient is always
// the strongest reducer.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polyring::{CoefficientRing, RingKind};

pub(crate) trait Domain {
    type C: Clone + PartialEq + Ord + Debug;

    fn is_field(&self) -> bool {
        false
    }
    fn is_zero(&self, a: &Self::C) -> bool;
    fn one(&self) -> Self::C;
    fn sub(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    fn from_big(&self, c: &BigInt) -> Self::C;
    fn to_big(&self, c: &Self::C) -> BigInt;
    /// The unit taking `c` to its normal form.
    fn normalizer(&self, c: &Self::C) -> Self::C;
    fn divides(&self, d: &Self::C, c: &Self::C) -> bool;
    /// Euclidean division with a canonical remainder.
    fn quo_rem(&self, c: &Self::C, d: &Self::C) -> (Self::C, Self::C);
    /// `(u, v)` with `u a = v b = lcm(a, b)`.
    fn lcm_cofactors(&self, a: &Self::C, b: &Self::C) -> (Self::C, Self::C);
    /// Bezout cofactors `(s, t)` with `s a + t b = gcd(a, b)`, when neither
    /// divides the other; ℤ needs these G-polynomials on top of S-polynomials.
    fn gcd_cofactors(&self, _a: &Self::C, _b: &Self::C) -> Option<(Self::C, Self::C)> {
        None
    }
    /// For a normalised leading coefficient `a` that is a zero divisor, the
    /// element generating its annihilator.
    fn annihilator(&self, _a: &Self::C) -> Option<Self::C> {
        None
    }
    /// Whether the product criterion is valid for a pair with these leading
    /// coefficients.
    fn product_criterion_ok(&self, a: &Self::C, b: &Self::C) -> bool;
}

pub(crate) struct IntDomain;

impl Domain for IntDomain {
    type C = BigInt;

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn from_big(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn to_big(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn normalizer(&self, c: &BigInt) -> BigInt {
        if c.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
    fn divides(&self, d: &BigInt, c: &BigInt) -> bool {
        c.is_multiple_of(d)
    }
    fn quo_rem(&self, c: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
        c.div_mod_floor(d)
    }
    fn lcm_cofactors(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let l = a.lcm(b);
        (&l / a, &l / b)
    }
    fn gcd_cofactors(&self, a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
        if a.is_multiple_of(b) || b.is_multiple_of(a) {
            return None;
        }
        let e = a.extended_gcd(b);
        Some((e.x, e.y))
    }
    fn product_criterion_ok(&self, a: &BigInt, b: &BigInt) -> bool {
        a.gcd(b).is_one()
    }
}

/// ℤ/p^n (including 𝔽_p as n = 1) with modulus below 2^63.
pub(crate) struct SmallChain {
    p: u64,
    n: u32,
    m: u64,
}

impl SmallChain {
    pub(crate) fn new(p: u64, n: u32) -> Self {
        SmallChain { p, n, m: p.pow(n) }
    }

    fn split(&self, mut a: u64) -> (u32, u64) {
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        (v, a)
    }

    fn inv(&self, a: u64) -> u64 {
        let e = (a as i128).extended_gcd(&(self.m as i128));
        debug_assert_eq!(e.gcd, 1);
        e.x.rem_euclid(self.m as i128) as u64
    }

    fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            self.n
        } else {
            self.split(a).0
        }
    }
}

impl Domain for SmallChain {
    type C = u64;

    fn is_field(&self) -> bool {
        self.n == 1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.m - b)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.m - a
        }
    }
    fn from_big(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.m)).to_u64().unwrap()
    }
    fn to_big(&self, c: &u64) -> BigInt {
        BigInt::from(*c)
    }
    fn normalizer(&self, c: &u64) -> u64 {
        let (_, u) = self.split(*c);
        self.inv(u % self.m)
    }
    fn divides(&self, d: &u64, c: &u64) -> bool {
        self.valuation(*d) <= self.valuation(*c)
    }
    fn quo_rem(&self, c: &u64, d: &u64) -> (u64, u64) {
        (c / d, c % d)
    }
    fn lcm_cofactors(&self, a: &u64, b: &u64) -> (u64, u64) {
        if a >= b {
            (1, a / b)
        } else {
            (b / a, 1)
        }
    }
    fn annihilator(&self, a: &u64) -> Option<u64> {
        let v = self.valuation(*a);
        (v > 0).then(|| self.p.pow(self.n - v))
    }
    fn product_criterion_ok(&self, a: &u64, b: &u64) -> bool {
        *a == 1 && *b == 1
    }
}

/// ℤ/p^n with an arbitrary-size modulus.
pub(crate) struct BigChain {
    p: BigInt,
    n: u32,
    m: BigInt,
}

impl BigChain {
    pub(crate) fn new(p: BigInt, n: u32) -> Self {
        let m = num_traits::pow(p.clone(), n as usize);
        BigChain { p, n, m }
    }

    fn valuation(&self, a: &BigInt) -> u32 {
        if a.is_zero() {
            return self.n;
        }
        crate::arith::valuation(a, &self.p)
    }
}

impl Domain for BigChain {
    type C = BigInt;

    fn is_field(&self) -> bool {
        self.n == 1
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a - b;
        if s.is_negative() {
            s + &self.m
        } else {
            s
        }
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) % &self.m
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            BigInt::zero()
        } else {
            &self.m - a
        }
    }
    fn from_big(&self, c: &BigInt) -> BigInt {
        c.mod_floor(&self.m)
    }
    fn to_big(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn normalizer(&self, c: &BigInt) -> BigInt {
        let (_, u) = crate::arith::split_valuation(c, &self.p);
        crate::arith::mod_inverse(&u, &self.m).expect("unit")
    }
    fn divides(&self, d: &BigInt, c: &BigInt) -> bool {
        self.valuation(d) <= self.valuation(c)
    }
    fn quo_rem(&self, c: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
        c.div_rem(d)
    }
    fn lcm_cofactors(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        if a >= b {
            (BigInt::one(), a / b)
        } else {
            (b / a, BigInt::one())
        }
    }
    fn annihilator(&self, a: &BigInt) -> Option<BigInt> {
        let v = self.valuation(a);
        (v > 0).then(|| num_traits::pow(self.p.clone(), (self.n - v) as usize))
    }
    fn product_criterion_ok(&self, a: &BigInt, b: &BigInt) -> bool {
        a.is_one() && b.is_one()
    }
}

/// 𝔽_{p^k}, with elements packed as in [`CoefficientRing`].
pub(crate) struct ExtField(pub(crate) CoefficientRing);

impl Domain for ExtField {
    type C = BigInt;

    fn is_field(&self) -> bool {
        true
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.0.mul(a, b)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.0.neg(a)
    }
    fn from_big(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn to_big(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn normalizer(&self, c: &BigInt) -> BigInt {
        self.0.inverse(c).expect("nonzero field element")
    }
    fn divides(&self, _d: &BigInt, _c: &BigInt) -> bool {
        true
    }
    fn quo_rem(&self, c: &BigInt, _d: &BigInt) -> (BigInt, BigInt) {
        (c.clone(), BigInt::zero())
    }
    fn lcm_cofactors(&self, _a: &BigInt, _b: &BigInt) -> (BigInt, BigInt) {
        (BigInt::one(), BigInt::one())
    }
    fn product_criterion_ok(&self, _a: &BigInt, _b: &BigInt) -> bool {
        true
    }
}

pub(crate) enum AnyDomain {
    Int(IntDomain),
    Small(SmallChain),
    Big(BigChain),
    Ext(ExtField),
}

pub(crate) fn domain_for(cr: &CoefficientRing) -> AnyDomain {
    let chain = |p: &BigInt, n: u32| {
        let m = num_traits::pow(p.clone(), n as usize);
        if m.bits() < 63 {
            AnyDomain::Small(SmallChain::new(p.to_u64().unwrap(), n))
        } else {
            AnyDomain::Big(BigChain::new(p.clone(), n))
        }
    };
    match cr.kind() {
        RingKind::Integers => AnyDomain::Int(IntDomain),
        RingKind::ModPrimePower { p, e } => chain(p, *e),
        RingKind::PrimeField { p } => chain(p, 1),
        RingKind::FiniteField { .. } => AnyDomain::Ext(ExtField(cr.clone())),
    }
}

/// Runs `$body` with `$d` bound to the concrete domain of `$cr`.
macro_rules! with_domain {
    ($cr:expr, $d:ident => $body:expr) => {
        match $crate::groebner::domain::domain_for($cr) {
            $crate::groebner::domain::AnyDomain::Int(dom) => {
                let $d = &dom;
                $body
            }
            $crate::groebner::domain::AnyDomain::Small(dom) => {
                let $d = &dom;
                $body
            }
            $crate::groebner::domain::AnyDomain::Big(dom) => {
                let $d = &dom;
                $body
            }
            $crate::groebner::domain::AnyDomain::Ext(dom) => {
                let $d = &dom;
                $body
            }
        }
    };
}
pub(crate) use with_domain;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_big_chain_agree() {
        let s = SmallChain::new(2, 5);
        let b = BigChain::new(BigInt::from(2), 5);
        for x in 0..32u64 {
            for y in 1..32u64 {
                let (bx, by) = (BigInt::from(x), BigInt::from(y));
                assert_eq!(BigInt::from(s.mul(&x, &y)), b.mul(&bx, &by));
                assert_eq!(BigInt::from(s.sub(&x, &y)), b.sub(&bx, &by));
                assert_eq!(s.divides(&y, &x), b.divides(&by, &bx));
                assert_eq!(BigInt::from(s.normalizer(&y)), b.normalizer(&by));
            }
        }
        assert_eq!(s.annihilator(&4), Some(8));
        assert_eq!(s.annihilator(&1), None);
    }

    #[test]
    fn normalised_leading_coefficients() {
        let s = SmallChain::new(3, 3);
        // 6 = 3 * 2, normalised to 3
        assert_eq!(s.mul(&6, &s.normalizer(&6)), 3);
        assert_eq!(IntDomain.gcd_cofactors(&BigInt::from(4), &BigInt::from(6)).map(|(x, y)| x * 4 + y * 6), Some(BigInt::from(2)));
        assert_eq!(IntDomain.gcd_cofactors(&BigInt::from(2), &BigInt::from(6)), None);
    }
}
