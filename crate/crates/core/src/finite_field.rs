//! Finite fields 𝔽_p and 𝔽_{p^k}, and dense univariate polynomials over them.
//!
//! Elements of 𝔽_{p^k} are coordinate vectors with respect to the power basis
//! `1, a, ..., a^(k-1)` where `a` is a root of the stored modulus. The modulus
//! of [`GaloisField::new`] is the first monic irreducible polynomial in
//! ascending order of the integer `c_0 + c_1 p + ... + c_(k-1) p^(k-1)`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, mod_inverse};
use crate::error::{Error, Result};

/// Arithmetic of a finite field.
pub trait FieldOps {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn characteristic(&self) -> &BigInt;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    /// Coordinates over 𝔽_p.
    fn coordinates(&self, a: &Self::Elem) -> Vec<BigInt>;

    fn order(&self) -> BigInt {
        num_traits::pow(self.characteristic().clone(), self.degree())
    }

    fn pow(&self, a: &Self::Elem, e: &BigInt) -> Self::Elem {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e.clone();
        while e.is_positive() {
            if e.is_odd() {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: BigInt,
}

impl PrimeField {
    pub fn new(p: BigInt) -> Result<Self> {
        if !is_prime(&p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }
}

impl FieldOps for PrimeField {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a - b;
        if s.is_negative() {
            s + &self.p
        } else {
            s
        }
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) % &self.p
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            BigInt::zero()
        } else {
            &self.p - a
        }
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        mod_inverse(a, &self.p)
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.p)
    }
    fn characteristic(&self) -> &BigInt {
        &self.p
    }
    fn degree(&self) -> usize {
        1
    }
    fn coordinates(&self, a: &BigInt) -> Vec<BigInt> {
        vec![a.clone()]
    }
}

/// The field 𝔽_{p^k} = 𝔽_p[a]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    base: PrimeField,
    k: usize,
    /// Monic, low-to-high, length `k + 1`.
    modulus: Vec<BigInt>,
}

impl GaloisField {
    /// 𝔽_{p^k} with the deterministic default modulus.
    pub fn new(p: BigInt, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidRing("extension degree must be at least 1".into()));
        }
        let base = PrimeField::new(p)?;
        let modulus = first_irreducible(&base, k);
        Ok(GaloisField { base, k, modulus })
    }

    /// 𝔽_{p^k} with a caller-supplied modulus (monic, low-to-high), verified irreducible.
    pub fn with_modulus(p: BigInt, modulus: Vec<BigInt>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let modulus: Vec<BigInt> = modulus.iter().map(|c| base.from_int(c)).collect();
        let modulus = trim(&base, modulus);
        if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
            return Err(Error::InvalidRing("modulus must be monic of degree >= 1".into()));
        }
        if !is_irreducible(&base, &modulus) {
            return Err(Error::InvalidRing("modulus is not irreducible".into()));
        }
        let k = modulus.len() - 1;
        Ok(GaloisField { base, k, modulus })
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.base
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// The generator `a` (a root of the modulus).
    pub fn generator(&self) -> Vec<BigInt> {
        let mut g = vec![BigInt::zero(); self.k];
        if self.k == 1 {
            // the root of x + c_0
            g[0] = self.base.neg(&self.modulus[0]);
        } else {
            g[1] = BigInt::one();
        }
        g
    }

    /// Packs an element into the integer `sum c_i p^i`.
    pub fn encode(&self, a: &[BigInt]) -> BigInt {
        a.iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &self.base.p + c)
    }

    pub fn decode(&self, n: &BigInt) -> Vec<BigInt> {
        let mut n = n.mod_floor(&self.order());
        let mut out = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            let (q, r) = n.div_rem(&self.base.p);
            out.push(r);
            n = q;
        }
        out
    }

    /// Builds an element from arbitrary integer coordinates, reducing mod p.
    pub fn element(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        if coords.len() > self.k {
            return Err(Error::InvalidArgument(format!(
                "element of 𝔽_(p^{}) given {} coordinates",
                self.k,
                coords.len()
            )));
        }
        let mut out: Vec<BigInt> = coords.iter().map(|c| self.base.from_int(c)).collect();
        out.resize(self.k, BigInt::zero());
        Ok(out)
    }
}

impl FieldOps for GaloisField {
    type Elem = Vec<BigInt>;

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.k]
    }
    fn one(&self) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = BigInt::one();
        v
    }
    fn is_zero(&self, a: &Vec<BigInt>) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let prod = poly_mul(&self.base, a, b);
        let mut r = poly_rem(&self.base, &prod, &self.modulus);
        r.resize(self.k, BigInt::zero());
        r
    }
    fn neg(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<BigInt>) -> Option<Vec<BigInt>> {
        if self.is_zero(a) {
            return None;
        }
        // a^(q-2)
        let e = self.order() - 2u32;
        Some(self.pow(a, &e))
    }
    fn from_int(&self, n: &BigInt) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = self.base.from_int(n);
        v
    }
    fn characteristic(&self) -> &BigInt {
        &self.base.p
    }
    fn degree(&self) -> usize {
        self.k
    }
    fn coordinates(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        a.clone()
    }
}

// Dense univariate polynomials over a field, low-to-high, no trailing zeros.

pub fn trim<F: FieldOps>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn poly_add<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn poly_sub<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn poly_mul<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem<F: FieldOps>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let lead_inv = f.inv(b.last().unwrap()).expect("nonzero leading coefficient");
    let mut r: Vec<F::Elem> = trim(f, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = f.mul(r.last().unwrap(), &lead_inv);
        for (j, y) in b.iter().enumerate() {
            r[shift + j] = f.sub(&r[shift + j], &f.mul(&c, y));
        }
        q[shift] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn poly_rem<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    poly_divrem(f, a, b).1
}

pub fn poly_monic<F: FieldOps>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero leading coefficient");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

/// Monic gcd.
pub fn poly_gcd<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    poly_monic(f, &a)
}

pub fn poly_derivative<F: FieldOps>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(&f.from_int(&BigInt::from(i)), c))
        .collect();
    trim(f, out)
}

/// `base^e mod m`.
pub fn poly_powmod<F: FieldOps>(
    f: &F,
    base: &[F::Elem],
    e: &BigInt,
    m: &[F::Elem],
) -> Vec<F::Elem> {
    let mut result = vec![f.one()];
    let mut b = poly_rem(f, base, m);
    let mut e = e.clone();
    while e.is_positive() {
        if e.is_odd() {
            result = poly_rem(f, &poly_mul(f, &result, &b), m);
        }
        b = poly_rem(f, &poly_mul(f, &b, &b), m);
        e >>= 1;
    }
    poly_rem(f, &result, m)
}

pub fn poly_eval<F: FieldOps>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn is_squarefree<F: FieldOps>(f: &F, a: &[F::Elem]) -> bool {
    let g = poly_gcd(f, a, &poly_derivative(f, a));
    g.len() == 1
}

/// Ben-Or style irreducibility test: `a` (degree d >= 1) is irreducible iff
/// `gcd(a, x^(q^i) - x) = 1` for all `1 <= i <= d/2`.
pub fn is_irreducible<F: FieldOps>(f: &F, a: &[F::Elem]) -> bool {
    let a = poly_monic(f, &trim(f, a.to_vec()));
    if a.len() < 2 {
        return false;
    }
    let d = a.len() - 1;
    if d == 1 {
        return true;
    }
    let q = f.order();
    let x = vec![f.zero(), f.one()];
    let mut frob = x.clone();
    for _ in 1..=d / 2 {
        frob = poly_powmod(f, &frob, &q, &a);
        let diff = poly_sub(f, &frob, &x);
        if poly_gcd(f, &a, &diff).len() != 1 {
            return false;
        }
    }
    true
}

/// Degrees of the irreducible factors found by distinct-degree factorisation of
/// a squarefree polynomial, with multiplicity.
pub fn distinct_degree_pattern<F: FieldOps>(f: &F, a: &[F::Elem]) -> Vec<usize> {
    let mut rest = poly_monic(f, &trim(f, a.to_vec()));
    let q = f.order();
    let x = vec![f.zero(), f.one()];
    let mut frob = x.clone();
    let mut degrees = Vec::new();
    let mut i = 0;
    while rest.len() > 1 {
        i += 1;
        if 2 * i > rest.len() - 1 {
            degrees.push(rest.len() - 1);
            break;
        }
        frob = poly_powmod(f, &frob, &q, &rest);
        let g = poly_gcd(f, &rest, &poly_sub(f, &frob, &x));
        if g.len() > 1 {
            let count = (g.len() - 1) / i;
            degrees.extend(std::iter::repeat_n(i, count));
            rest = poly_divrem(f, &rest, &g).0;
            frob = poly_rem(f, &frob, &rest);
        }
    }
    degrees
}

/// First monic irreducible of degree `k` in ascending order of the packed
/// lower coefficients.
pub fn first_irreducible<F: FieldOps>(f: &F, k: usize) -> Vec<F::Elem>
where
    F::Elem: From<BigInt>,
{
    let p = f.order();
    let total = num_traits::pow(p.clone(), k);
    let mut n = BigInt::zero();
    while n < total {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut m = n.clone();
        for _ in 0..k {
            let (q, r) = m.div_rem(&p);
            coeffs.push(F::Elem::from(r));
            m = q;
        }
        coeffs.push(f.one());
        if is_irreducible(f, &coeffs) {
            return coeffs;
        }
        n += 1;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Monic irreducible polynomials of degree `k` over an arbitrary finite field,
/// enumerated in the same ascending order as [`first_irreducible`] but with
/// coefficients drawn from the given list of field elements.
pub fn irreducible_over<F: FieldOps>(
    f: &F,
    k: usize,
    elements: &[F::Elem],
    skip: usize,
) -> Option<Vec<F::Elem>> {
    let q = elements.len();
    let total = q.checked_pow(k as u32)?;
    let mut found = 0;
    for n in 0..total {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut m = n;
        for _ in 0..k {
            coeffs.push(elements[m % q].clone());
            m /= q;
        }
        coeffs.push(f.one());
        if is_irreducible(f, &coeffs) {
            if found == skip {
                return Some(coeffs);
            }
            found += 1;
        }
    }
    None
}

/// All elements of a (small) finite field, in ascending packed order.
pub fn all_elements(field: &GaloisField) -> Vec<Vec<BigInt>> {
    let q = field.order();
    let mut out = Vec::new();
    let mut n = BigInt::zero();
    while n < q {
        out.push(field.decode(&n));
        n += 1;
    }
    out
}
