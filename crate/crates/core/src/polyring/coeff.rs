use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, mod_inverse, split_valuation};
use crate::error::{Error, Result};
use crate::finite_field::{FieldOps, GaloisField};

/// The coefficient rings polynomials live over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    /// ℤ/p^e with e >= 1.
    ModPrimePower { p: BigInt, e: u32 },
    PrimeField { p: BigInt },
    /// 𝔽_{p^k}; elements are stored packed as `sum c_i p^i`. `generator` is the
    /// symbol used for the root of the modulus when parsing and printing.
    FiniteField { field: GaloisField, generator: String },
}

/// A coefficient ring together with its arithmetic on canonical `BigInt`
/// representatives: any integer over ℤ, `[0, p^e)` over ℤ/p^e, `[0, p)` over
/// 𝔽_p and the packed coordinate integer in `[0, p^k)` over 𝔽_{p^k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientRing {
    kind: RingKind,
    modulus: Option<BigInt>,
}

impl CoefficientRing {
    pub fn integers() -> Self {
        CoefficientRing { kind: RingKind::Integers, modulus: None }
    }

    pub fn mod_prime_power(p: impl Into<BigInt>, e: u32) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidRing("exponent must be at least 1".into()));
        }
        let modulus = num_traits::pow(p.clone(), e as usize);
        Ok(CoefficientRing { kind: RingKind::ModPrimePower { p, e }, modulus: Some(modulus) })
    }

    pub fn prime_field(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(CoefficientRing { modulus: Some(p.clone()), kind: RingKind::PrimeField { p } })
    }

    /// 𝔽_{p^k} with the default modulus and generator symbol `a`.
    pub fn finite_field(p: impl Into<BigInt>, k: usize) -> Result<Self> {
        let field = GaloisField::new(p.into(), k)?;
        Ok(Self::from_galois_field(field, "a"))
    }

    pub fn from_galois_field(field: GaloisField, generator: &str) -> Self {
        CoefficientRing {
            modulus: Some(field.order()),
            kind: RingKind::FiniteField { field, generator: generator.to_string() },
        }
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    /// The characteristic, or `None` for ℤ.
    pub fn characteristic_prime(&self) -> Option<&BigInt> {
        match &self.kind {
            RingKind::Integers => None,
            RingKind::ModPrimePower { p, .. } | RingKind::PrimeField { p } => Some(p),
            RingKind::FiniteField { field, .. } => Some(field.characteristic()),
        }
    }

    /// `p^e` for ℤ/p^e, `p` for 𝔽_p, `p^k` for 𝔽_{p^k}, `None` for ℤ.
    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn is_field(&self) -> bool {
        match &self.kind {
            RingKind::Integers => false,
            RingKind::ModPrimePower { e, .. } => *e == 1,
            _ => true,
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self.kind, RingKind::Integers)
    }

    pub fn galois_field(&self) -> Option<&GaloisField> {
        match &self.kind {
            RingKind::FiniteField { field, .. } => Some(field),
            _ => None,
        }
    }

    pub(crate) fn generator_symbol(&self) -> Option<&str> {
        match &self.kind {
            RingKind::FiniteField { generator, .. } => Some(generator),
            _ => None,
        }
    }

    /// Image of an integer.
    pub fn from_int(&self, n: &BigInt) -> BigInt {
        match &self.kind {
            RingKind::Integers => n.clone(),
            RingKind::FiniteField { field, .. } => n.mod_floor(field.characteristic()),
            _ => n.mod_floor(self.modulus.as_ref().unwrap()),
        }
    }

    pub fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        match &self.kind {
            RingKind::Integers => a + b,
            RingKind::FiniteField { field, .. } => {
                field.encode(&field.add(&field.decode(a), &field.decode(b)))
            }
            _ => {
                let m = self.modulus.as_ref().unwrap();
                let s = a + b;
                if &s >= m {
                    s - m
                } else {
                    s
                }
            }
        }
    }

    pub fn neg(&self, a: &BigInt) -> BigInt {
        match &self.kind {
            RingKind::Integers => -a,
            RingKind::FiniteField { field, .. } => field.encode(&field.neg(&field.decode(a))),
            _ => {
                if a.is_zero() {
                    BigInt::zero()
                } else {
                    self.modulus.as_ref().unwrap() - a
                }
            }
        }
    }

    pub fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        match &self.kind {
            RingKind::Integers => a * b,
            RingKind::FiniteField { field, .. } => {
                field.encode(&field.mul(&field.decode(a), &field.decode(b)))
            }
            _ => (a * b) % self.modulus.as_ref().unwrap(),
        }
    }

    pub fn is_unit(&self, a: &BigInt) -> bool {
        match &self.kind {
            RingKind::Integers => a.abs().is_one(),
            RingKind::ModPrimePower { p, .. } => !(a % p).is_zero(),
            _ => !a.is_zero(),
        }
    }

    pub fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        match &self.kind {
            RingKind::Integers => a.abs().is_one().then(|| a.clone()),
            RingKind::FiniteField { field, .. } => {
                field.inv(&field.decode(a)).map(|x| field.encode(&x))
            }
            _ => mod_inverse(a, self.modulus.as_ref().unwrap()),
        }
    }

    /// `a / b` if `b` divides `a` exactly (over ℤ/p^e: in the ring sense, choosing
    /// the least nonnegative quotient).
    pub fn divide(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return if a.is_zero() { Some(BigInt::zero()) } else { None };
        }
        match &self.kind {
            RingKind::Integers => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(q)
            }
            RingKind::ModPrimePower { p, e } => {
                if a.is_zero() {
                    return Some(BigInt::zero());
                }
                let (vb, ub) = split_valuation(b, p);
                let (va, ua) = split_valuation(a, p);
                if va < vb {
                    return None;
                }
                let m = num_traits::pow(p.clone(), (*e - vb) as usize);
                let inv = mod_inverse(&ub, &m)?;
                let q = (ua * num_traits::pow(p.clone(), (va - vb) as usize) * inv).mod_floor(&m);
                Some(q)
            }
            _ => {
                let inv = self.inverse(b)?;
                Some(self.mul(a, &inv))
            }
        }
    }

    /// Positive canonical generator of the ideal `(a)`, as used for leading
    /// coefficient normalisation: `|a|` over ℤ, `p^v(a)` over ℤ/p^e, `1` over fields.
    pub fn associate_normal(&self, a: &BigInt) -> BigInt {
        match &self.kind {
            RingKind::Integers => a.abs(),
            RingKind::ModPrimePower { p, .. } => {
                let (v, _) = split_valuation(a, p);
                num_traits::pow(p.clone(), v as usize)
            }
            _ => BigInt::one(),
        }
    }

    pub(crate) fn print_coeff(&self, c: &BigInt) -> String {
        match &self.kind {
            RingKind::FiniteField { field, generator } => {
                let coords = field.decode(c);
                let mut parts = Vec::new();
                for (i, x) in coords.iter().enumerate().rev() {
                    if x.is_zero() {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => generator.clone(),
                        _ => format!("{generator}^{i}"),
                    };
                    parts.push(match (x.is_one(), mono.is_empty()) {
                        (_, true) => x.to_string(),
                        (true, false) => mono,
                        (false, false) => format!("{x}*{mono}"),
                    });
                }
                if parts.len() == 1 {
                    parts.pop().unwrap()
                } else {
                    format!("({})", parts.join(" + "))
                }
            }
            _ => c.to_string(),
        }
    }

    /// Whether a canonical ring map `self -> target` exists.
    pub fn has_canonical_map_to(&self, target: &CoefficientRing) -> bool {
        use RingKind::*;
        let target_p = target.characteristic_prime();
        match (&self.kind, &target.kind) {
            (Integers, _) => true,
            (_, Integers) => false,
            (ModPrimePower { p, e }, ModPrimePower { p: q, e: f }) => p == q && f <= e,
            (ModPrimePower { p, .. }, PrimeField { p: q }) => p == q,
            (ModPrimePower { p, .. }, FiniteField { .. }) => Some(p) == target_p,
            (PrimeField { p }, ModPrimePower { p: q, e: 1 }) => p == q,
            (PrimeField { p }, PrimeField { p: q }) => p == q,
            (PrimeField { p }, FiniteField { .. }) => Some(p) == target_p,
            (FiniteField { .. }, _) => self == target,
            _ => false,
        }
    }

    /// Image of a canonical representative of `self` in `target`. The caller
    /// has checked [`has_canonical_map_to`](Self::has_canonical_map_to).
    pub(crate) fn map_coeff(&self, c: &BigInt, target: &CoefficientRing) -> BigInt {
        if self == target {
            return c.clone();
        }
        target.from_int(c)
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Integers => write!(f, "ZZ"),
            RingKind::ModPrimePower { p, e } => write!(f, "ZZ/{p}^{e}"),
            RingKind::PrimeField { p } => write!(f, "GF({p})"),
            RingKind::FiniteField { field, .. } => {
                write!(f, "GF({}^{})", field.characteristic(), field.degree())
            }
        }
    }
}

/// Accepts `ZZ`, `ZZ/n` for a prime power `n`, `ZZ/p^e`, `GF(p)` and `GF(p^k)`.
impl FromStr for CoefficientRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidRing(format!("cannot parse ring `{s}`"));
        let power = |t: &str| -> Result<(BigInt, u32)> {
            match t.split_once('^') {
                Some((b, e)) => Ok((b.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?)),
                None => Ok((t.parse().map_err(|_| bad())?, 1)),
            }
        };
        if s == "ZZ" || s == "Z" {
            return Ok(Self::integers());
        }
        if let Some(rest) = s.strip_prefix("ZZ/").or_else(|| s.strip_prefix("Z/")) {
            let (b, e) = power(rest)?;
            if e == 1 && !is_prime(&b) {
                // n given as an integer: factor it as a prime power by trial division
                let n = b;
                let mut p = BigInt::from(2);
                while &p * &p <= n {
                    if (&n % &p).is_zero() {
                        let (v, r) = split_valuation(&n, &p);
                        if !r.is_one() {
                            return Err(Error::InvalidRing(format!("{n} is not a prime power")));
                        }
                        return Self::mod_prime_power(p, v);
                    }
                    p += 1;
                }
                return Err(Error::InvalidRing(format!("{n} is not a prime power")));
            }
            return Self::mod_prime_power(b, e);
        }
        if let Some(rest) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let (b, e) = power(rest)?;
            return if e == 1 { Self::prime_field(b) } else { Self::finite_field(b, e as usize) };
        }
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn parse_ring_names() {
        assert!("ZZ".parse::<CoefficientRing>().unwrap().is_integers());
        let r: CoefficientRing = "ZZ/8".parse().unwrap();
        assert_eq!(r.modulus(), Some(&b(8)));
        let r: CoefficientRing = "ZZ/2^18".parse().unwrap();
        assert_eq!(r.modulus(), Some(&b(1 << 18)));
        assert!("ZZ/12".parse::<CoefficientRing>().is_err());
        assert!("GF(4)".parse::<CoefficientRing>().is_err());
        let r: CoefficientRing = "GF(2^3)".parse().unwrap();
        assert_eq!(r.modulus(), Some(&b(8)));
    }

    #[test]
    fn chain_ring_division() {
        let r = CoefficientRing::mod_prime_power(2, 3).unwrap();
        // 6 / 2 = 3 mod 4, and 2 * 3 = 6
        let q = r.divide(&b(6), &b(2)).unwrap();
        assert_eq!(r.mul(&q, &b(2)), b(6));
        assert_eq!(r.divide(&b(2), &b(4)), None);
        assert_eq!(r.associate_normal(&b(6)), b(2));
    }

    #[test]
    fn canonical_maps() {
        let z = CoefficientRing::integers();
        let z8 = CoefficientRing::mod_prime_power(2, 3).unwrap();
        let z4 = CoefficientRing::mod_prime_power(2, 2).unwrap();
        let f2 = CoefficientRing::prime_field(2).unwrap();
        let f4 = CoefficientRing::finite_field(2, 2).unwrap();
        assert!(z.has_canonical_map_to(&z8));
        assert!(z8.has_canonical_map_to(&z4));
        assert!(!z4.has_canonical_map_to(&z8));
        assert!(f2.has_canonical_map_to(&f4));
        assert!(!f4.has_canonical_map_to(&f2));
        assert!(!z8.has_canonical_map_to(&z));
    }
}
