//! Towers of number fields in which a prime `p` stays inert and every
//! divisor of the degree is the degree of a subfield.
//!
//! Fields are given by monic integer defining polynomials. Subfields are not
//! detected but carried along: each node keeps, for every divisor `d` of its
//! degree, a defining polynomial of a degree-`d` subfield together with the
//! polynomial expressing that subfield's generator in the field's generator.
//! [`subfield_property_check`] re-verifies these witnesses.
//!
//! ```
//! use bsdkit::fieldtower::{extend_inert, subfield_property_check, ExtendOptions, NumberFieldNode};
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let q = NumberFieldNode::rationals(2.into()).unwrap();
//! let k = extend_inert(&q, 3, &ExtendOptions::default(), &mut rng).unwrap().field;
//! let l = extend_inert(&k, 2, &ExtendOptions::default(), &mut rng).unwrap().field;
//! assert_eq!(l.degree, 6);
//! assert_eq!(l.subfields.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 6]);
//! assert!(subfield_property_check(&l).ok);
//! ```

mod dense;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::arith::is_prime;
use crate::finite_field::{is_irreducible, is_squarefree, FieldOps, GaloisField, PrimeField};
use crate::{Error, Result};

pub use dense::{discriminant, resultant, ZPoly};
use dense::{
    compose_mod, degree, eval_mod, norm_polynomial, qadd, qmulmod, qpad, qrem, solve_columns, to_q, zmod, ztrim,
    BiAlgebra, QPoly,
};

/// Largest absolute degree [`extend_inert`] will build.
pub const MAX_DEGREE: usize = 24;

/// A subfield of degree `degree`, generated by a root of `defining_poly`,
/// sitting in the ambient field as `embedding(θ)` for the ambient generator θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subfield {
    pub degree: usize,
    pub defining_poly: ZPoly,
    pub embedding: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberFieldNode {
    pub degree: usize,
    /// Monic, low-to-high.
    pub defining_poly: ZPoly,
    pub p: BigInt,
    pub parent: Option<Box<NumberFieldNode>>,
    pub subfields: BTreeMap<usize, Subfield>,
}

impl NumberFieldNode {
    /// ℚ, presented as `ℚ[x]/(x)`.
    pub fn rationals(p: BigInt) -> Result<Self> {
        let x = vec![BigInt::zero(), BigInt::one()];
        let q = Subfield { degree: 1, defining_poly: x.clone(), embedding: Vec::new() };
        Self::new(x, p, BTreeMap::from([(1, q)]))
    }

    /// A root node from raw data. Only the shape is checked; use
    /// [`subfield_property_check`] and [`is_inert`] for the rest.
    pub fn new(defining_poly: ZPoly, p: BigInt, subfields: BTreeMap<usize, Subfield>) -> Result<Self> {
        let defining_poly = ztrim(defining_poly);
        let degree = monic_degree(&defining_poly)?;
        if !is_prime(&p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(NumberFieldNode { degree, defining_poly, p, parent: None, subfields })
    }

    pub fn subfield(&self, d: usize) -> Option<&Subfield> {
        self.subfields.get(&d)
    }

    /// Degrees from the root of the tower down to this node.
    pub fn tower(&self) -> Vec<usize> {
        let mut out = self.parent.as_ref().map(|p| p.tower()).unwrap_or_default();
        out.push(self.degree);
        out
    }
}

fn monic_degree(f: &[BigInt]) -> Result<usize> {
    match degree(f) {
        Some(d) if d >= 1 && f[d].is_one() => Ok(d),
        _ => Err(Error::InvalidArgument("defining polynomial must be monic of degree at least 1".into())),
    }
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Whether `f` stays irreducible modulo `p`, which for a monogenic order
/// means `p` is inert.
pub fn is_inert(f: &[BigInt], p: &BigInt) -> Result<bool> {
    monic_degree(&ztrim(f.to_vec()))?;
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let field = PrimeField::new(p.clone())?;
    let fbar = zmod(f, p);
    if !is_squarefree(&field, &fbar) {
        return Err(Error::NotSquarefree(p.to_string()));
    }
    Ok(is_irreducible(&field, &fbar))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audit {
    pub ok: bool,
    pub missing: Vec<usize>,
}

/// For every divisor `d` of the degree: a registered subfield of degree `d`
/// whose defining polynomial is irreducible (mod `p`, hence over ℚ) and
/// vanishes at its registered embedding modulo the field's defining
/// polynomial.
pub fn subfield_property_check(k: &NumberFieldNode) -> Audit {
    let missing: Vec<usize> = divisors(k.degree)
        .into_iter()
        .filter(|&d| !k.subfield(d).is_some_and(|s| witness_holds(k, s, d)))
        .collect();
    Audit { ok: missing.is_empty(), missing }
}

fn witness_holds(k: &NumberFieldNode, s: &Subfield, d: usize) -> bool {
    s.degree == d
        && monic_degree(&s.defining_poly).ok() == Some(d)
        && s.embedding.len() <= k.degree
        && matches!(is_inert(&s.defining_poly, &k.p), Ok(true))
        && eval_mod(&s.defining_poly, &s.embedding, &k.defining_poly).is_empty()
}

/// Result of the greedy discriminant descent; `trace[i]` is `|disc|` after
/// `i` proposals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    pub poly: ZPoly,
    pub trace: Vec<BigInt>,
}

/// Repeatedly adds `±p` times a random non-leading monomial to `f`, keeping
/// the change unless `|disc f|` grows. `f` is assumed monic and irreducible
/// mod `p`; both are preserved.
pub fn optimise_discriminant<R: Rng + ?Sized>(f: &[BigInt], p: &BigInt, iterations: usize, rng: &mut R) -> Descent {
    let f = ztrim(f.to_vec());
    let x = [BigInt::zero(), BigInt::one()];
    let r: Vec<ZPoly> = f.iter().map(|c| ztrim(vec![c.clone()])).collect();
    let (r, trace) = descend(&x, r, &[], p, iterations, rng);
    Descent { poly: r.into_iter().map(|c| c.first().cloned().unwrap_or_default()).collect(), trace }
}

/// The same descent on a relative polynomial `r(t, y)` over `ℚ[y]/(k)`,
/// scored by the absolute polynomial of `t + h(y)`.
fn descend<R: Rng + ?Sized>(
    k: &[BigInt],
    mut r: Vec<ZPoly>,
    h: &[BigInt],
    p: &BigInt,
    iterations: usize,
    rng: &mut R,
) -> (Vec<ZPoly>, Vec<BigInt>) {
    let dk = degree(k).unwrap_or(0).max(1);
    let dr = r.len() - 1;
    let score = |r: &[ZPoly]| discriminant(&norm_polynomial(k, r, h)).abs();
    let mut best = score(&r);
    let mut trace = vec![best.clone()];
    if dr == 0 {
        trace.resize(iterations + 1, best);
        return (r, trace);
    }
    for _ in 0..iterations {
        let (j, i) = (rng.gen_range(0..dr), rng.gen_range(0..dk));
        let step = if rng.gen_bool(0.5) { p.clone() } else { -p };
        let mut candidate = r.clone();
        let mut c = candidate[j].clone();
        c.resize(c.len().max(i + 1), BigInt::zero());
        c[i] += step;
        candidate[j] = ztrim(c);
        let s = score(&candidate);
        if s <= best {
            r = candidate;
            best = s;
        }
        trace.push(best.clone());
    }
    (r, trace)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtendOptions {
    /// Attempts allowed for each random search (residue polynomial, shift).
    pub budget: usize,
    /// Proposals for the discriminant descent.
    pub iterations: usize,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions { budget: 200, iterations: 32 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub field: NumberFieldNode,
    /// The relative polynomial of `L_(ℓ^(e+1)) / K_(ℓ^e)`, by `t`-coefficients
    /// over `ℤ[y]`.
    pub relative: Vec<ZPoly>,
    /// The descent trace of `|disc|` for the absolute polynomial of `L_(ℓ^(e+1))`.
    pub trace: Vec<BigInt>,
}

/// A degree-`ℓ` extension `L ⊃ K` with `p` inert and the subfield property.
///
/// Writing `[K:ℚ] = ℓ^e m` with `ℓ ∤ m`: an irreducible degree-`ℓ`
/// polynomial over the residue field of `K_(ℓ^e)` is lifted to give
/// `L_(ℓ^(e+1))`, and `L` is its compositum with `K_m`. Subfields of `L`
/// are those of `K` plus the composita `L_(ℓ^(e+1)) K_(m')`.
pub fn extend_inert<R: Rng + ?Sized>(
    k: &NumberFieldNode,
    ell: u64,
    opts: &ExtendOptions,
    rng: &mut R,
) -> Result<Extension> {
    let p = &k.p;
    if !is_prime(&BigInt::from(ell)) {
        return Err(Error::InvalidArgument(format!("ℓ = {ell} is not prime")));
    }
    let ell = ell as usize;
    let n = k.degree;
    if n * ell > MAX_DEGREE {
        return Err(Error::Budget(format!("degree {} exceeds the cap of {MAX_DEGREE}", n * ell)));
    }
    let audit = subfield_property_check(k);
    if !audit.ok {
        return Err(Error::InvalidArgument(format!("K lacks subfields of degree {:?}", audit.missing)));
    }
    if !is_inert(&k.defining_poly, p)? {
        return Err(Error::InvalidArgument(format!("{p} is not inert in K")));
    }
    let (mut le, mut m) = (1, n);
    while m % ell == 0 {
        le *= ell;
        m /= ell;
    }
    let a = &k.subfields[&le];
    let mu = &k.subfields[&m];

    // L_(ℓ^(e+1)) = K_(ℓ^e)[t] / (r), r lifted from the residue field
    let residue = GaloisField::with_modulus(p.clone(), a.defining_poly.clone())?;
    let rbar = random_irreducible(&residue, ell, opts.budget, rng)?;
    let r: Vec<ZPoly> = rbar.iter().map(|c| ztrim(c.clone())).collect();
    let (h, _) = find_shift(&a.defining_poly, &r, p, opts.budget, rng)?;
    let (r, trace) = descend(&a.defining_poly, r, &h, p, opts.iterations, rng);
    let big_n = norm_polynomial(&a.defining_poly, &r, &h);
    check_norm(&big_n, le * ell, p)?;
    let alg = BiAlgebra { k: &a.defining_poly, r: &r };
    let (alpha_in_n, _) = alg
        .express_generators(&h)
        .ok_or_else(|| Error::Degenerate("shifted generator does not generate L_(ℓ^(e+1))".into()))?;
    verify(&a.defining_poly, &alpha_in_n, &big_n)?;

    // L = K_m · L_(ℓ^(e+1))
    let n_coeffs: Vec<ZPoly> = big_n.iter().map(|c| ztrim(vec![c.clone()])).collect();
    let (f_l, mu_in_l, lambda_in_l) = if m == 1 {
        (big_n.clone(), Vec::new(), vec![BigRational::zero(), BigRational::one()])
    } else {
        let (h2, f_l) = find_shift(&mu.defining_poly, &n_coeffs, p, opts.budget, rng)?;
        let alg = BiAlgebra { k: &mu.defining_poly, r: &n_coeffs };
        let (y, t) = alg
            .express_generators(&h2)
            .ok_or_else(|| Error::Degenerate("shifted generator does not generate the compositum".into()))?;
        (f_l, y, t)
    };
    check_norm(&f_l, n * ell, p)?;
    verify(&mu.defining_poly, &mu_in_l, &f_l)?;
    verify(&big_n, &lambda_in_l, &f_l)?;
    let alpha_in_l = compose_mod(&alpha_in_n, &lambda_in_l, &f_l);

    let theta = embed_generator(k, a, mu, &mu_in_l, &alpha_in_l, &f_l)?;
    verify(&k.defining_poly, &theta, &f_l)?;

    let mut subfields = BTreeMap::new();
    for d in divisors(n * ell) {
        let entry = if n % d == 0 {
            let s = &k.subfields[&d];
            Subfield { embedding: compose_mod(&s.embedding, &theta, &f_l), ..s.clone() }
        } else if d == n * ell {
            Subfield { degree: d, defining_poly: f_l.clone(), embedding: vec![BigRational::zero(), BigRational::one()] }
        } else if d == le * ell {
            Subfield { degree: d, defining_poly: big_n.clone(), embedding: lambda_in_l.clone() }
        } else {
            let s = &k.subfields[&(d / (le * ell))];
            let s_in_l = compose_mod(&s.embedding, &theta, &f_l);
            let (h3, poly) = find_shift(&s.defining_poly, &n_coeffs, p, opts.budget, rng)?;
            check_norm(&poly, d, p)?;
            let embedding = qadd(&lambda_in_l, &eval_mod(&h3, &s_in_l, &f_l));
            Subfield { degree: d, defining_poly: poly, embedding }
        };
        verify(&entry.defining_poly, &entry.embedding, &f_l)?;
        subfields.insert(d, entry);
    }
    let field = NumberFieldNode {
        degree: n * ell,
        defining_poly: f_l,
        p: p.clone(),
        parent: Some(Box::new(k.clone())),
        subfields,
    };
    let audit = subfield_property_check(&field);
    if !audit.ok {
        return Err(Error::Degenerate(format!("registry audit failed at degrees {:?}", audit.missing)));
    }
    Ok(Extension { field, relative: r, trace })
}

/// A random monic irreducible of degree `ell` over `field`, as coordinate
/// vectors of its coefficients.
fn random_irreducible<R: Rng + ?Sized>(
    field: &GaloisField,
    ell: usize,
    budget: usize,
    rng: &mut R,
) -> Result<Vec<Vec<BigInt>>> {
    let p = field.characteristic().clone();
    let k = field.degree();
    for _ in 0..budget.max(1) {
        let mut coeffs: Vec<Vec<BigInt>> = (0..ell)
            .map(|_| (0..k).map(|_| BigInt::from(rng.gen::<u64>()).mod_floor(&p)).collect())
            .collect();
        coeffs.push(field.one());
        if is_irreducible(field, &coeffs) {
            return Ok(coeffs);
        }
    }
    Err(Error::SearchExhausted(format!("no irreducible of degree {ell} over 𝔽_(p^{k}) in {budget} draws")))
}

/// A shift `h(y)` making `Res_y(k(y), r(x - h(y), y))` squarefree and
/// irreducible mod `p`. Tries `y`, `2y`, `-y`, then small random `h`.
fn find_shift<R: Rng + ?Sized>(
    k: &[BigInt],
    r: &[ZPoly],
    p: &BigInt,
    budget: usize,
    rng: &mut R,
) -> Result<(ZPoly, ZPoly)> {
    let dk = degree(k).unwrap_or(0).max(1);
    for attempt in 0..budget.max(1) {
        let h: ZPoly = match attempt {
            0 => vec![BigInt::zero(), BigInt::one()],
            1 => vec![BigInt::zero(), BigInt::from(2)],
            2 => vec![BigInt::zero(), BigInt::from(-1)],
            _ => ztrim((0..dk).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect()),
        };
        let poly = norm_polynomial(k, r, &h);
        if matches!(is_inert(&poly, p), Ok(true)) {
            return Ok((h, poly));
        }
    }
    Err(Error::SearchExhausted(format!("no inert shift found in {budget} attempts")))
}

fn check_norm(f: &[BigInt], expected: usize, p: &BigInt) -> Result<()> {
    if degree(f) != Some(expected) || !f[expected].is_one() {
        return Err(Error::Degenerate(format!("resultant has degree {:?}, expected {expected}", degree(f))));
    }
    if !is_inert(f, p)? {
        return Err(Error::Degenerate(format!("{p} is not inert in the constructed field")));
    }
    Ok(())
}

fn verify(g: &[BigInt], e: &[BigRational], f: &[BigInt]) -> Result<()> {
    if eval_mod(g, e, f).is_empty() {
        Ok(())
    } else {
        Err(Error::Degenerate("embedding witness does not satisfy its defining polynomial".into()))
    }
}

/// `θ_K` in terms of the generator of `L`: first write `θ_K` in the basis
/// `μ^i α^j` of `K = K_m · K_(ℓ^e)`, then substitute the images of `μ, α`.
fn embed_generator(
    k: &NumberFieldNode,
    a: &Subfield,
    mu: &Subfield,
    mu_in_l: &[BigRational],
    alpha_in_l: &[BigRational],
    f_l: &[BigInt],
) -> Result<QPoly> {
    let n = k.degree;
    let f = &k.defining_poly;
    let one = vec![BigRational::one()];
    let mut columns = Vec::with_capacity(n);
    let mut images = Vec::with_capacity(n);
    let (mut mu_k, mut mu_l) = (one.clone(), one.clone());
    for _ in 0..mu.degree {
        let (mut both_k, mut both_l) = (mu_k.clone(), mu_l.clone());
        for _ in 0..a.degree {
            columns.push(qpad(&both_k, n));
            images.push(both_l.clone());
            both_k = qmulmod(&both_k, &a.embedding, f);
            both_l = qmulmod(&both_l, alpha_in_l, f_l);
        }
        mu_k = qmulmod(&mu_k, &mu.embedding, f);
        mu_l = qmulmod(&mu_l, mu_in_l, f_l);
    }
    let target = qpad(&qrem(&to_q(&[BigInt::zero(), BigInt::one()]), f), n);
    let c = solve_columns(&columns, &target)
        .ok_or_else(|| Error::Degenerate("K_m and K_(ℓ^e) do not span K".into()))?;
    Ok(c.iter().zip(&images).fold(Vec::new(), |acc, (ci, img)| qadd(&acc, &dense::qscale(img, ci))))
}

#[cfg(test)]
mod tests;
