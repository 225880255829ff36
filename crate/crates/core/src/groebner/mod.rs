//! Strong Gröbner bases over fields, ℤ and ℤ/p^n, and the ideal operations
//! built on them.
//!
//! Over ℤ and ℤ/p^n a basis is *strong*: every leading term of the ideal is
//! divisible, coefficient included, by the leading term of a single basis
//! element. Normal forms use Euclidean remainders on coefficients, so they
//! are canonical once the basis is reduced.
//!
//! ```
//! use bsdkit::groebner::Ideal;
//! use bsdkit::polyring::{CoefficientRing, PolyRing};
//!
//! let r = PolyRing::grevlex(CoefficientRing::integers(), &["x", "y"]).unwrap();
//! let i = Ideal::parse(&r, &["x + y", "2"]).unwrap();
//! assert!(i.contains(&r.parse("2*x + 4*y").unwrap()).unwrap());
//! assert!(!i.contains(&r.parse("x").unwrap()).unwrap());
//! ```

pub(crate) mod domain;
pub(crate) mod engine;

use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::polyring::{CoefficientRing, MonomialOrder, PolyRing, Polynomial};
use domain::{with_domain, Domain};
use engine::{from_engine, reduce, to_engine, Basis, Ctx, Engine, Mon, Outcome, Poly};

/// Resource caps for a single Gröbner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_degree: u32,
}

static MAX_PAIRS: AtomicUsize = AtomicUsize::new(1_000_000);
static MAX_DEGREE: AtomicU32 = AtomicU32::new(400);

/// The caps used by every computation in this process.
pub fn default_budget() -> Budget {
    Budget {
        max_pairs: MAX_PAIRS.load(Ordering::Relaxed),
        max_degree: MAX_DEGREE.load(Ordering::Relaxed),
    }
}

pub fn set_default_budget(b: Budget) {
    MAX_PAIRS.store(b.max_pairs, Ordering::Relaxed);
    MAX_DEGREE.store(b.max_degree, Ordering::Relaxed);
}

/// An ideal given by generators, with its reduced Gröbner basis computed on
/// first use and cached.
pub struct Ideal {
    ring: PolyRing,
    generators: Vec<Polynomial>,
    gb: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal { ring: self.ring.clone(), generators: self.generators.clone(), gb }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &PolyRing, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            if g.ring() != ring {
                return Err(Error::RingMismatch(format!("{:?} vs {:?}", g.ring(), ring)));
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), generators, gb: OnceLock::new() })
    }

    pub fn parse(ring: &PolyRing, generators: &[&str]) -> Result<Self> {
        let gens = generators.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, gens)
    }

    pub fn zero(ring: &PolyRing) -> Self {
        Ideal { ring: ring.clone(), generators: Vec::new(), gb: OnceLock::new() }
    }

    pub fn unit(ring: &PolyRing) -> Self {
        Ideal { ring: ring.clone(), generators: vec![ring.one()], gb: OnceLock::new() }
    }

    /// An ideal whose generators are already a reduced Gröbner basis, as
    /// returned by [`groebner_basis`](Self::groebner_basis).
    pub(crate) fn from_groebner_basis(ring: &PolyRing, gb: Vec<Polynomial>) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(gb.clone());
        Ideal { ring: ring.clone(), generators: gb, gb: cell }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    fn check_supported(&self) -> Result<()> {
        let cr = self.ring.coefficients();
        if cr.is_integers() || cr.is_field() || cr.modulus().is_some() {
            Ok(())
        } else {
            Err(Error::UnsupportedRing(cr.to_string()))
        }
    }

    /// The reduced (strong) Gröbner basis with the process-wide budget.
    pub fn groebner_basis(&self) -> Result<&[Polynomial]> {
        self.groebner_basis_with(default_budget())
    }

    pub fn groebner_basis_with(&self, budget: Budget) -> Result<&[Polynomial]> {
        if let Some(b) = self.gb.get() {
            return Ok(b);
        }
        self.check_supported()?;
        let ring = &self.ring;
        let gb = with_domain!(ring.coefficients(), d => {
            let mut eng = Engine::new(d, ring.order(), false, budget);
            for g in &self.generators {
                eng.add_input(to_engine(d, g, 0));
            }
            eng.run(|_| false)?;
            eng.reduced().iter().map(|p| from_engine(d, ring, p, 0)).collect::<Vec<_>>()
        });
        // a racing thread computes the same basis, so either value is fine
        let _ = self.gb.set(gb);
        Ok(self.gb.get().unwrap())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", f.ring(), self.ring)));
        }
        let gb = self.groebner_basis()?;
        Ok(with_domain!(self.ring.coefficients(), d => {
            let basis = Basis::from_polys(gb.iter().map(|g| to_engine(d, g, 0)).collect());
            let ctx = Ctx { order: self.ring.order() };
            let r = reduce(d, &ctx, &basis, to_engine(d, f, 0), true);
            from_engine(d, &self.ring, &r, 0)
        }))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contained_in(&self, other: &Ideal) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contained_in(other)? && other.contained_in(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        let one = self.ring.one();
        self.contains(&one)
    }

    /// `a * b + c`, generated by pairwise products and the generators of `c`.
    pub fn sum_product(a: &Ideal, b: &Ideal, c: &Ideal) -> Result<Ideal> {
        let ring = &a.ring;
        if &b.ring != ring || &c.ring != ring {
            return Err(Error::RingMismatch("ideals live in different rings".into()));
        }
        let mut gens = Vec::with_capacity(a.generators.len() * b.generators.len() + c.generators.len());
        for f in &a.generators {
            for g in &b.generators {
                gens.push(f.try_mul(g)?);
            }
        }
        gens.extend(c.generators.iter().cloned());
        Ideal::new(ring, gens)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// `(self : (f)) = {g : g f ∈ self}`.
    pub fn quotient(&self, f: &Polynomial) -> Result<Ideal> {
        match self.quotient_impl(f, |_| Ok(false))? {
            QuotientOutcome::Complete(gb) => Ok(Ideal::from_groebner_basis(&self.ring, gb)),
            QuotientOutcome::Stopped => unreachable!(),
        }
    }

    /// Whether `(self : (f))` is not contained in `p`. Stops at the first
    /// quotient element found outside `p`.
    pub fn quotient_escapes(&self, f: &Polynomial, p: &Ideal) -> Result<bool> {
        p.groebner_basis()?;
        match self.quotient_impl(f, |h| Ok(!p.contains(h)?))? {
            QuotientOutcome::Stopped => Ok(true),
            QuotientOutcome::Complete(_) => Ok(false),
        }
    }

    // Syzygy route: the submodule of R^2 generated by (g, 0) for g in the
    // basis and (f, 1), under position-over-term order; its elements with
    // zero first component are exactly (0, h) with h f in the ideal.
    fn quotient_impl(
        &self,
        f: &Polynomial,
        mut hook: impl FnMut(&Polynomial) -> Result<bool>,
    ) -> Result<QuotientOutcome> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", f.ring(), self.ring)));
        }
        if f.is_zero() {
            return Err(Error::QuotientByZero);
        }
        let gb = self.groebner_basis()?;
        let ring = &self.ring;
        with_domain!(ring.coefficients(), d => {
            let mut eng = Engine::new(d, ring.order(), true, default_budget());
            eng.add_basis(gb.iter().map(|g| to_engine(d, g, 0)).collect());
            let mut input = to_engine(d, f, 0);
            input.push((Mon::one(ring.nvars(), 1), d.one()));
            eng.add_input(input);
            let mut hook_err = None;
            let outcome = eng.run(|h| {
                if h[0].0.comp != 1 {
                    return false;
                }
                match hook(&from_engine(d, ring, h, 1)) {
                    Ok(stop) => stop,
                    Err(e) => {
                        hook_err = Some(e);
                        true
                    }
                }
            })?;
            if let Some(e) = hook_err {
                return Err(e);
            }
            Ok(match outcome {
                Outcome::Stopped => QuotientOutcome::Stopped,
                Outcome::Complete => {
                    let ctx = eng.ctx();
                    let comp1: Vec<Poly<_>> = eng
                        .basis
                        .polys
                        .iter()
                        .filter(|p| p[0].0.comp == 1)
                        .map(|p| p.iter().filter(|t| t.0.comp == 1).map(|(m, c)| (Mon { comp: 0, ..m.clone() }, c.clone())).collect())
                        .collect();
                    let reduced = engine::reduce_basis(d, &ctx, comp1);
                    QuotientOutcome::Complete(reduced.iter().map(|p| from_engine(d, ring, p, 0)).collect())
                }
            })
        })
    }

    /// `self ∩ other`, by eliminating a tag variable from `t self + (1 - t) other`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        let ring = &self.ring;
        if &other.ring != ring {
            return Err(Error::RingMismatch("ideals live in different rings".into()));
        }
        let mut tag = "t".to_string();
        while ring.variables().contains(&tag) {
            tag.push('_');
        }
        let mut vars = vec![tag.clone()];
        vars.extend(ring.variables().iter().cloned());
        let big = PolyRing::new(ring.coefficients().clone(), &vars, MonomialOrder::Block(1))?;
        let t = big.var(&tag)?;
        let one_minus_t = &big.one() - &t;
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(&t * &g.embed(&big)?);
        }
        for g in &other.generators {
            gens.push(&one_minus_t * &g.embed(&big)?);
        }
        let elim = Ideal::new(&big, gens)?;
        let kept = elim
            .groebner_basis()?
            .iter()
            .filter(|g| g.degree_in(0) == Some(0))
            .map(|g| g.embed(ring))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, kept)
    }

    /// Image of the ideal under a canonical coefficient map.
    pub fn change_coefficients(&self, target: &CoefficientRing) -> Result<Ideal> {
        let ring = self.ring.with_coefficients(target.clone());
        let gens = self
            .generators
            .iter()
            .map(|g| g.change_coefficients(target))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&ring, gens)
    }

    /// Audits the cached basis: all generators reduce to zero, and the basis
    /// passes the strong Gröbner criterion (S-, G- and annihilator
    /// polynomials reduce to zero).
    pub fn verify_groebner_basis(&self) -> Result<bool> {
        let gb = self.groebner_basis()?;
        for g in &self.generators {
            if !self.normal_form(g)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(is_groebner_basis(&self.ring, gb))
    }
}

enum QuotientOutcome {
    Complete(Vec<Polynomial>),
    Stopped,
}

/// The strong Gröbner criterion for an arbitrary list of polynomials
/// (leading coefficients are normalised first).
pub fn is_groebner_basis(ring: &PolyRing, polys: &[Polynomial]) -> bool {
    with_domain!(ring.coefficients(), d => {
        let ctx = Ctx { order: ring.order() };
        let basis: Vec<_> = polys
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| engine::normalize(d, to_engine(d, p, 0)))
            .collect();
        engine::is_groebner(d, &ctx, &basis)
    })
}

/// Reduced strong Gröbner basis of the ideal generated by `generators`.
pub fn groebner_basis(ring: &PolyRing, generators: &[Polynomial]) -> Result<Vec<Polynomial>> {
    Ok(Ideal::new(ring, generators.to_vec())?.groebner_basis()?.to_vec())
}
