// Multivariate gcd by primitive pseudo-remainder sequences in a main variable,
// with contents handled recursively in the remaining variables.

use num_integer::Integer;
use num_traits::{One, Signed};

use super::{Monomial, Polynomial, RingKind};
use crate::error::{Error, Result};

/// Greatest common divisor over ℤ or a field.
///
/// Over a field the result is monic. Over ℤ it has positive leading
/// coefficient and carries the gcd of the integer contents, so that
/// `gcd(2x + 2, 4x^2 - 4) = 2x + 2`.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(format!("{:?} vs {:?}", a.ring(), b.ring())));
    }
    let cr = a.coefficient_ring();
    if !(cr.is_integers() || cr.is_field()) {
        return Err(Error::UnsupportedRing(format!("gcd over {cr}")));
    }
    Ok(normalize(&gcd_rec(a, b)))
}

fn normalize(f: &Polynomial) -> Polynomial {
    let cr = f.coefficient_ring();
    match f.leading_coefficient() {
        None => f.clone(),
        Some(lc) if cr.is_integers() => {
            if lc.is_negative() {
                -f
            } else {
                f.clone()
            }
        }
        Some(lc) => f.scale_raw(&cr.inverse(lc).expect("field element is invertible")),
    }
}

fn main_variable(a: &Polynomial, b: &Polynomial) -> Option<usize> {
    let n = a.ring().nvars();
    (0..n)
        .rev()
        .find(|&i| a.terms().iter().chain(b.terms()).any(|(m, _)| m.0[i] > 0))
}

fn gcd_rec(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let ring = a.ring();
    let Some(v) = main_variable(a, b) else {
        return match ring.coefficients().kind() {
            RingKind::Integers => ring.constant(&a.constant_term().gcd(&b.constant_term())),
            _ => ring.one(),
        };
    };
    let da = a.degree_in(v).unwrap();
    let db = b.degree_in(v).unwrap();
    if da == 0 {
        return gcd_rec(a, &content(b, v));
    }
    if db == 0 {
        return gcd_rec(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = div_exact(a, &ca).expect("content divides");
    let pb = div_exact(b, &cb).expect("content divides");
    let (mut r0, mut r1) = if da >= db { (pa, pb) } else { (pb, pa) };
    // subresultant PRS: the divisions by beta are exact, and contents are
    // only taken once at the end
    let (mut g, mut h) = (ring.one(), ring.one());
    let result = loop {
        let delta = (r0.degree_in(v).unwrap() - r1.degree_in(v).unwrap()) as u32;
        let r = pseudo_remainder_index(&r0, &r1, v);
        if r.is_zero() {
            break primitive_part(&r1, v);
        }
        if r.degree_in(v) == Some(0) {
            break ring.one();
        }
        let beta = &g * &pow(&h, delta);
        r0 = r1;
        r1 = div_exact(&r, &beta).expect("subresultant division is exact");
        g = leading_coefficient_in(&r0, v);
        if delta > 0 {
            h = div_exact(&pow(&g, delta), &pow(&h, delta - 1)).expect("subresultant division is exact");
        }
    };
    &c * &result
}

fn pow(f: &Polynomial, e: u32) -> Polynomial {
    (0..e).fold(f.ring().one(), |acc, _| &acc * f)
}

fn leading_coefficient_in(f: &Polynomial, v: usize) -> Polynomial {
    to_univariate(f, v).pop().expect("nonzero polynomial")
}

fn primitive_part(f: &Polynomial, v: usize) -> Polynomial {
    let c = content(f, v);
    normalize(&div_exact(f, &c).expect("content divides"))
}

/// gcd of the coefficients of `f` viewed as a polynomial in variable `v`.
fn content(f: &Polynomial, v: usize) -> Polynomial {
    let coeffs = to_univariate(f, v);
    let mut g = f.ring().zero();
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, c);
        if g.is_constant() && !g.coefficient_ring().is_integers() {
            break;
        }
    }
    normalize(&g)
}

/// Coefficients of `f` in variable `v`, indexed by degree.
pub(crate) fn to_univariate(f: &Polynomial, v: usize) -> Vec<Polynomial> {
    let ring = f.ring();
    let d = f.degree_in(v).unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<(Monomial, num_bigint::BigInt)>> = vec![Vec::new(); d + 1];
    for (m, c) in f.terms() {
        let mut m2 = m.clone();
        let e = m2.0[v] as usize;
        m2.0[v] = 0;
        buckets[e].push((m2, c.clone()));
    }
    // each bucket inherits the descending order of `f` restricted to it, and
    // removing a common factor x_v^e preserves that order
    buckets
        .into_iter()
        .map(|t| Polynomial::from_sorted(ring.clone(), t))
        .collect()
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`, everything taken in the variable `var`.
pub fn pseudo_remainder(a: &Polynomial, b: &Polynomial, var: &str) -> Result<Polynomial> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(format!("{:?} vs {:?}", a.ring(), b.ring())));
    }
    if b.is_zero() {
        return Err(Error::InvalidArgument("pseudo-remainder by zero".into()));
    }
    let v = a.ring().variable_index(var)?;
    Ok(pseudo_remainder_index(a, b, v))
}

fn pseudo_remainder_index(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let ring = a.ring();
    let bu = to_univariate(b, v);
    let db = bu.len() - 1;
    let lc = bu[db].clone();
    let mut r = a.clone();
    let da = a.degree_in(v).unwrap_or(0) as usize;
    if a.is_zero() || da < db {
        return r;
    }
    let mut steps = 0;
    let vmono = |k: usize| {
        let mut m = Monomial::one(ring.nvars());
        m.0[v] = k as u16;
        m
    };
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap() as usize;
        if dr < db {
            break;
        }
        let ru = to_univariate(&r, v);
        let lr = &ru[dr];
        r = &(&lc * &r) - &(lr * &b.mul_monomial(&vmono(dr - db)).expect("degree bounded by a"));
        steps += 1;
    }
    let missing = da + 1 - db - steps;
    for _ in 0..missing {
        r = &lc * &r;
    }
    r
}

/// Exact division; fails with `InexactDivision` if `b` does not divide `a`.
pub(crate) fn div_exact(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if b.is_zero() {
        return Err(Error::InexactDivision);
    }
    let ring = a.ring();
    let cr = ring.coefficients();
    let (lm, lc) = (&b.terms()[0].0, &b.terms()[0].1);
    if b.len() == 1 && lc.is_one() && lm.is_one() {
        return Ok(a.clone());
    }
    let mut q = Vec::new();
    let mut r = a.clone();
    while let Some((rm, rc)) = r.terms().first() {
        if !lm.divides(rm) {
            return Err(Error::InexactDivision);
        }
        let c = cr.divide(rc, lc).ok_or(Error::InexactDivision)?;
        let m = rm.div(lm);
        let t = ring.from_terms([(m.clone(), c.clone())]);
        r = &r - &(&t * b);
        q.push((m, c));
    }
    Ok(Polynomial::from_sorted(ring.clone(), q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{CoefficientRing, PolyRing};

    fn zz() -> PolyRing {
        PolyRing::grevlex(CoefficientRing::integers(), &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let r = zz();
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(poly_gcd(&p("x^2 - y^2"), &p("x - y")).unwrap(), p("x - y"));
        assert_eq!(poly_gcd(&p("-3*x + 6"), &r.zero()).unwrap(), p("3*x - 6"));
        assert_eq!(poly_gcd(&p("2*x + 2"), &p("4*x^2 - 4")).unwrap(), p("2*x + 2"));
        assert_eq!(poly_gcd(&p("x*y + x*z"), &p("y^2 - z^2")).unwrap(), p("y + z"));
        assert_eq!(poly_gcd(&p("x + 1"), &p("x + 2")).unwrap(), r.one());
    }

    #[test]
    fn gcd_with_three_variable_cofactors() {
        // these blew up under a primitive PRS with per-step contents
        let r = zz();
        let p = |s: &str| r.parse(s).unwrap();
        let a = p("3*y*z^3 - x*z + 4*y");
        let b = p("4*x^3*y + 5*x*z^3 + 2*x*y*z - 3*y - 2");
        let h = p("x*y - z^2 + 2");
        assert_eq!(poly_gcd(&a, &b).unwrap(), r.one());
        assert_eq!(poly_gcd(&(&a * &h), &(&b * &h)).unwrap(), h);
        let g = poly_gcd(&(&(&a * &h) * &p("2")), &(&(&h * &h) * &p("6*x"))).unwrap();
        assert_eq!(g, &h * &p("2"));
    }

    #[test]
    fn gcd_over_fields() {
        let r = PolyRing::grevlex(CoefficientRing::prime_field(7).unwrap(), &["x", "y"]).unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        let g = poly_gcd(&p("3*x^2 - 3*y^2"), &p("2*x*y + 2*y^2")).unwrap();
        assert_eq!(g, p("x + y"));
        let z4 = PolyRing::grevlex(CoefficientRing::mod_prime_power(2, 2).unwrap(), &["x"]).unwrap();
        assert!(matches!(poly_gcd(&z4.one(), &z4.one()), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn pseudo_remainder_identity() {
        let r = zz();
        let p = |s: &str| r.parse(s).unwrap();
        // prem(x^2 + 1, 2x + 1) = 4(x^2+1) mod (2x+1) = 5
        assert_eq!(pseudo_remainder(&p("x^2 + 1"), &p("2*x + 1"), "x").unwrap(), p("5"));
        assert_eq!(div_exact(&p("x^2 - 1"), &p("x + 1")).unwrap(), p("x - 1"));
        assert_eq!(div_exact(&p("x^2 + 1"), &p("x + 1")), Err(Error::InexactDivision));
    }
}
