//! Sparse multivariate polynomials over ℤ, ℤ/p^e, 𝔽_p and 𝔽_{p^k}.
//!
//! A [`PolyRing`] fixes the coefficient ring, the variable names and the
//! monomial order; it is a cheap reference-counted handle. A [`Polynomial`]
//! keeps its terms sorted by that order, leading term first, with no zero
//! coefficients.

mod coeff;
mod gcd;
mod monomial;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use coeff::{CoefficientRing, RingKind};
pub use gcd::{poly_gcd, pseudo_remainder};
pub use monomial::{Monomial, MonomialOrder, MAX_EXPONENT};
pub(crate) use monomial::grevlex as grevlex_slices;

use crate::error::{Error, Result};
use crate::finite_field::{FieldOps, GaloisField};

struct PolyRingData {
    coeffs: CoefficientRing,
    vars: Vec<String>,
    order: MonomialOrder,
}

/// Coefficient ring, variable names and monomial order.
#[derive(Clone)]
pub struct PolyRing(Arc<PolyRingData>);

impl PolyRing {
    pub fn new<S: AsRef<str>>(
        coeffs: CoefficientRing,
        vars: &[S],
        order: MonomialOrder,
    ) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !parse::is_identifier(v) {
                return Err(Error::InvalidArgument(format!("`{v}` is not a valid variable name")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("variable `{v}` listed twice")));
            }
            if coeffs.generator_symbol() == Some(v.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "variable `{v}` clashes with the field generator symbol"
                )));
            }
        }
        if let MonomialOrder::Block(k) = order {
            if k > vars.len() {
                return Err(Error::InvalidArgument(format!(
                    "block split {k} exceeds the number of variables"
                )));
            }
        }
        Ok(PolyRing(Arc::new(PolyRingData { coeffs, vars, order })))
    }

    /// Grevlex ring, the common case.
    pub fn grevlex<S: AsRef<str>>(coeffs: CoefficientRing, vars: &[S]) -> Result<Self> {
        Self::new(coeffs, vars, MonomialOrder::Grevlex)
    }

    pub fn coefficients(&self) -> &CoefficientRing {
        &self.0.coeffs
    }

    pub fn variables(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.0
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Same variables and order over a different coefficient ring.
    pub fn with_coefficients(&self, coeffs: CoefficientRing) -> PolyRing {
        PolyRing(Arc::new(PolyRingData {
            coeffs,
            vars: self.0.vars.clone(),
            order: self.0.order,
        }))
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<PolyRing> {
        Self::new(self.0.coeffs.clone(), &self.0.vars, order)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(&BigInt::one())
    }

    pub fn constant(&self, c: &BigInt) -> Polynomial {
        self.term(c, Monomial::one(self.nvars()))
    }

    pub fn term(&self, c: &BigInt, m: Monomial) -> Polynomial {
        let c = self.0.coeffs.from_int(c);
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: self.clone(), terms }
    }

    pub fn var(&self, name: &str) -> Result<Polynomial> {
        let i = self.variable_index(name)?;
        Ok(self.term(&BigInt::one(), Monomial::variable(self.nvars(), i)))
    }

    /// Builds a polynomial from arbitrary terms: coefficients are reduced, like
    /// monomials combined and zeros dropped. Over 𝔽_{p^k} coefficients must
    /// already be packed field elements.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Polynomial {
        let cr = &self.0.coeffs;
        let reduce = |c: BigInt| match cr.kind() {
            RingKind::FiniteField { field, .. } => field.encode(&field.decode(&c)),
            _ => cr.from_int(&c),
        };
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), self.nvars());
            match acc.get_mut(&m) {
                Some(x) => *x = cr.add(x, &reduce(c)),
                None => {
                    acc.insert(m, reduce(c));
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.sort_terms(&mut terms);
        Polynomial { ring: self.clone(), terms }
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse::parse(self, text)
    }

    fn sort_terms(&self, terms: &mut [(Monomial, BigInt)]) {
        let order = self.0.order;
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
    }
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.coeffs == other.0.coeffs
                && self.0.vars == other.0.vars
                && self.0.order == other.0.order)
    }
}
impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] ({:?})", self.0.coeffs, self.0.vars.join(","), self.0.order)
    }
}

/// Parses `text` as a polynomial over `ring` in `variables` with grevlex order.
pub fn parse_polynomial<S: AsRef<str>>(
    text: &str,
    ring: &CoefficientRing,
    variables: &[S],
) -> Result<Polynomial> {
    PolyRing::grevlex(ring.clone(), variables)?.parse(text)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: PolyRing,
    terms: Vec<(Monomial, BigInt)>,
}

impl Polynomial {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn coefficient_ring(&self) -> &CoefficientRing {
        self.ring.coefficients()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.terms.first().map(|t| &t.1)
    }

    /// The constant coefficient (zero if absent).
    pub fn constant_term(&self) -> BigInt {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.0[var]).max()
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, subtract: bool) -> Polynomial {
        use std::cmp::Ordering::*;
        let cr = self.ring.coefficients();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let b_coeff = |c: &BigInt| if subtract { cr.neg(c) } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.compare(ma, mb) {
                Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Less => {
                    out.push((mb.clone(), b_coeff(cb)));
                    j += 1;
                }
                Equal => {
                    let c = if subtract { cr.sub(ca, cb) } else { cr.add(ca, cb) };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), b_coeff(c))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let cr = self.ring.coefficients();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.try_mul(mb)?;
                let c = cr.mul(ca, cb);
                if c.is_zero() {
                    continue;
                }
                match acc.get_mut(&m) {
                    Some(x) => *x = cr.add(x, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.ring.sort_terms(&mut terms);
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn try_pow(&self, mut e: u32) -> Result<Polynomial> {
        let mut result = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Multiplication by a ring element given as an integer representative.
    pub fn scale(&self, c: &BigInt) -> Polynomial {
        let cr = self.ring.coefficients();
        let c = cr.from_int(c);
        self.scale_raw(&c)
    }

    /// Multiplication by a canonical coefficient (a packed element over 𝔽_{p^k}).
    pub fn scale_raw(&self, c: &BigInt) -> Polynomial {
        let cr = self.ring.coefficients();
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, x)| {
                let y = cr.mul(x, c);
                (!y.is_zero()).then(|| (m.clone(), y))
            })
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| Ok((t.try_mul(m)?, c.clone())))
            .collect::<Result<_>>()?;
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial> {
        let i = self.ring.variable_index(var)?;
        Ok(self.derivative_index(i))
    }

    pub(crate) fn derivative_index(&self, i: usize) -> Polynomial {
        let cr = self.ring.coefficients();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .filter_map(|(m, c)| {
                let c = cr.mul(c, &cr.from_int(&BigInt::from(m.0[i])));
                if c.is_zero() {
                    return None;
                }
                let mut m = m.clone();
                m.0[i] -= 1;
                Some((m, c))
            })
            .collect();
        // dividing every surviving term by x_i keeps them sorted
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Coefficientwise image under the canonical map to `target`.
    pub fn change_coefficients(&self, target: &CoefficientRing) -> Result<Polynomial> {
        let src = self.ring.coefficients();
        if !src.has_canonical_map_to(target) {
            return Err(Error::NoCanonicalMap { from: src.to_string(), to: target.to_string() });
        }
        let ring = self.ring.with_coefficients(target.clone());
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let c = src.map_coeff(c, target);
                (!c.is_zero()).then(|| (m.clone(), c))
            })
            .collect();
        Ok(Polynomial { ring, terms })
    }

    /// Reinterprets `self` in `target`, which must have the same coefficient
    /// ring and contain every variable `self` actually uses.
    pub fn embed(&self, target: &PolyRing) -> Result<Polynomial> {
        if target.coefficients() != self.coefficient_ring() {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.coefficient_ring(),
                target.coefficients()
            )));
        }
        let src_vars = self.ring.variables();
        let map: Vec<Option<usize>> = src_vars
            .iter()
            .map(|v| target.variable_index(v).ok())
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut out = Monomial::one(target.nvars());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UnknownVariable(src_vars[i].clone()))?;
                out.0[j] = e;
            }
            terms.push((out, c.clone()));
        }
        target.sort_terms(&mut terms);
        Ok(Polynomial { ring: target.clone(), terms })
    }

    /// Evaluates at a point of `field^n`. Coefficients must map canonically
    /// into the field (ℤ, ℤ/p^e and 𝔽_p of the right characteristic, or the
    /// same 𝔽_{p^k}).
    pub fn evaluate(&self, field: &GaloisField, point: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
        if point.len() != self.ring.nvars() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let cr = self.coefficient_ring();
        let p = field.characteristic();
        let coeff = |c: &BigInt| -> Result<Vec<BigInt>> {
            match cr.kind() {
                RingKind::Integers => Ok(field.from_int(c)),
                RingKind::ModPrimePower { p: q, .. } | RingKind::PrimeField { p: q } if q == p => {
                    Ok(field.from_int(c))
                }
                RingKind::FiniteField { field: f, .. } if f == field => Ok(field.decode(c)),
                _ => Err(Error::NoCanonicalMap {
                    from: cr.to_string(),
                    to: format!("GF({}^{})", p, field.degree()),
                }),
            }
        };
        // powers of each coordinate, computed lazily
        let mut powers: Vec<Vec<Vec<BigInt>>> = point.iter().map(|x| vec![field.one(), x.clone()]).collect();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c)?;
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = field.mul(powers[i].last().unwrap(), &point[i]);
                    powers[i].push(next);
                }
                t = field.mul(&t, &powers[i][e]);
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// `self / other` when the division is exact, over ℤ or a field.
    pub fn div_exact(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        gcd::div_exact(self, other)
    }

    pub(crate) fn from_sorted(ring: PolyRing, terms: Vec<(Monomial, BigInt)>) -> Polynomial {
        Polynomial { ring, terms }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let cr = self.coefficient_ring();
        let vars = self.ring.variables();
        let symmetric = |c: &BigInt| -> BigInt {
            // print residues in the balanced range so that e.g. -1 mod 8 reads as -1
            match cr.kind() {
                RingKind::ModPrimePower { .. } | RingKind::PrimeField { .. } => {
                    let m = cr.modulus().unwrap();
                    if c * 2 > *m {
                        c - m
                    } else {
                        c.clone()
                    }
                }
                _ => c.clone(),
            }
        };
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let is_ff = cr.galois_field().is_some();
            let c = if is_ff { c.clone() } else { symmetric(c) };
            let negative = !is_ff && c.is_negative();
            let abs = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { vars[j].clone() } else { format!("{}^{}", vars[j], e) })
                .collect();
            let cs = cr.print_coeff(&abs);
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", cs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self} in {:?})", self.ring)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for &Polynomial {
            type Output = Polynomial;
            /// Panics on a ring mismatch or exponent overflow; use the `try_`
            /// variant to handle those.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let cr = self.coefficient_ring();
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), cr.neg(c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests;
