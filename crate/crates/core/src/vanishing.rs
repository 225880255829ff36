//! Orders of vanishing along components of the special fibre.
//!
//! A component is given by a prime ideal `I` containing the patch ideal `J`
//! and the prime `p`. A polynomial `f` vanishes to order at least `n` along
//! `V(I)` exactly when `(I^n + J : (f))` is not contained in `I`; the order is
//! found by walking the chain `I_n = I_{n-1} I + J` until the quotient falls
//! back inside `I`.
//!
//! The [`Mode::Modified`] chain replaces `I_n` by an ideal with the same
//! localisation at `I` but a much smaller Gröbner basis: it keeps only the
//! basis elements of the previous step that already vanish to the new order.
//!
//! ```
//! use bsdkit::polyring::{CoefficientRing, PolyRing};
//! use bsdkit::groebner::Ideal;
//! use bsdkit::vanishing::{vanishing_order, ComponentLocus, Mode};
//!
//! let r = PolyRing::grevlex(CoefficientRing::integers(), &["x", "y"]).unwrap();
//! let j = Ideal::parse(&r, &["y^2 - x^2 + 2*x + 2"]).unwrap();
//! let i = Ideal::parse(&r, &["x + y", "2"]).unwrap();
//! let locus = ComponentLocus::new(j, i, 2).unwrap();
//! let two = r.parse("2").unwrap();
//! let ord = vanishing_order(&two, &locus, Mode::Direct, 64).unwrap();
//! assert_eq!((ord.order, ord.exact), (2, true));
//! ```

use num_bigint::BigInt;

use crate::groebner::Ideal;
use crate::polyring::{CoefficientRing, PolyRing, Polynomial, RingKind};
use crate::{Error, Result};

/// Default cap on the order searched for.
pub const DEFAULT_MAX_ORDER: u32 = 64;

/// A component `V(I)` of the special fibre of the patch `V(J)`.
#[derive(Clone, Debug)]
pub struct ComponentLocus {
    j: Ideal,
    i: Ideal,
    p: BigInt,
}

impl ComponentLocus {
    /// Checks that `J ⊆ I` and `p ∈ I`. Primality of `I` and regularity of the
    /// local ring are the caller's responsibility.
    pub fn new(j: Ideal, i: Ideal, p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if j.ring() != i.ring() {
            return Err(Error::RingMismatch("J and I live in different rings".into()));
        }
        if !crate::arith::is_prime(&p) {
            return Err(Error::InvalidLocus(format!("{p} is not prime")));
        }
        match i.ring().coefficients().characteristic_prime() {
            Some(q) if q != &p => {
                return Err(Error::InvalidLocus(format!("coefficients have characteristic {q}, not {p}")))
            }
            _ => {}
        }
        if i.ring().coefficients().is_field() {
            return Err(Error::InvalidLocus("coefficient ring must be ZZ or ZZ/p^e".into()));
        }
        for g in j.generators() {
            if !i.contains(g)? {
                return Err(Error::InvalidLocus(format!("J generator {g} is not in I")));
            }
        }
        let pc = i.ring().constant(&p);
        if !i.contains(&pc)? {
            return Err(Error::InvalidLocus(format!("{p} is not in I")));
        }
        if i.is_unit()? {
            return Err(Error::InvalidLocus("I is the unit ideal".into()));
        }
        Ok(ComponentLocus { j, i, p })
    }

    pub fn ring(&self) -> &PolyRing {
        self.i.ring()
    }

    /// The patch ideal `J`.
    pub fn patch(&self) -> &Ideal {
        &self.j
    }

    /// The component ideal `I`.
    pub fn component(&self) -> &Ideal {
        &self.i
    }

    pub fn prime(&self) -> &BigInt {
        &self.p
    }

    /// The same locus over `ZZ/p^e`.
    pub fn truncate(&self, e: u32) -> Result<ComponentLocus> {
        let cr = CoefficientRing::mod_prime_power(self.p.clone(), e)?;
        Ok(ComponentLocus {
            j: self.j.change_coefficients(&cr)?,
            i: self.i.change_coefficients(&cr)?,
            p: self.p.clone(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// `I_n = I_{n-1} I + J`.
    #[default]
    Direct,
    /// The smaller ideals with the same localisation at `I`.
    Modified,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Mode::Direct),
            "modified" => Ok(Mode::Modified),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}` (expected direct or modified)"))),
        }
    }
}

/// One step of a chain. In direct mode `j_n` is `None` and `ideal` is `I_n`;
/// in modified mode `j_n` is `J_n` and `ideal` is `I_n^modified`.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub n: u32,
    pub j_n: Option<Ideal>,
    pub ideal: Ideal,
}

/// Iterates the ideal chain of a locus, one step per call to
/// [`advance`](Chain::advance). The ideals carry their Gröbner bases.
#[derive(Debug)]
pub struct Chain<'a> {
    locus: &'a ComponentLocus,
    mode: Mode,
    state: Option<ChainState>,
}

impl<'a> Chain<'a> {
    pub fn new(locus: &'a ComponentLocus, mode: Mode) -> Self {
        Chain { locus, mode, state: None }
    }

    pub fn state(&self) -> Option<&ChainState> {
        self.state.as_ref()
    }

    pub fn advance(&mut self) -> Result<&ChainState> {
        let l = self.locus;
        let ring = l.ring();
        let next = match self.state.take() {
            None => {
                // I_1 = I + J = I, in both modes
                let ideal = reduced(l.i.sum(&l.j)?)?;
                let j_n = (self.mode == Mode::Modified).then(|| ideal.clone());
                ChainState { n: 1, j_n, ideal }
            }
            Some(prev) => {
                let step = reduced(Ideal::sum_product(&prev.ideal, &l.i, &l.j)?)?;
                match self.mode {
                    Mode::Direct => ChainState { n: prev.n + 1, j_n: None, ideal: step },
                    Mode::Modified => {
                        let mut extra = Vec::new();
                        for x in prev.ideal.groebner_basis()? {
                            if step.contains(x)? {
                                continue;
                            }
                            if step.quotient_escapes(x, &l.i)? {
                                extra.push(x.clone());
                            }
                        }
                        let ideal = if extra.is_empty() {
                            step.clone()
                        } else {
                            let mut gens = step.groebner_basis()?.to_vec();
                            gens.extend(extra);
                            reduced(Ideal::new(ring, gens)?)?
                        };
                        ChainState { n: prev.n + 1, j_n: Some(step), ideal }
                    }
                }
            }
        };
        Ok(self.state.insert(next))
    }
}

fn reduced(ideal: Ideal) -> Result<Ideal> {
    let gb = ideal.groebner_basis()?.to_vec();
    Ok(Ideal::from_groebner_basis(ideal.ring(), gb))
}

/// The order found by a chain walk. `exact == false` means the walk hit its
/// cap and the true order is at least `order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Order {
    pub order: u32,
    pub exact: bool,
}

/// The order of vanishing of `f` along the component, searching up to
/// `max_order`.
pub fn vanishing_order(f: &Polynomial, locus: &ComponentLocus, mode: Mode, max_order: u32) -> Result<Order> {
    if f.ring() != locus.ring() {
        return Err(Error::RingMismatch("function and locus live in different rings".into()));
    }
    if locus.ring().coefficients().is_integers() && locus.j.contains(f)? {
        return Err(Error::VanishesIdentically);
    }
    walk(f, locus, mode, max_order)
}

fn walk(f: &Polynomial, locus: &ComponentLocus, mode: Mode, max_order: u32) -> Result<Order> {
    if !locus.i.contains(f)? {
        return Ok(Order { order: 0, exact: true });
    }
    let mut chain = Chain::new(locus, mode);
    chain.advance()?;
    // f ∈ I, so the order is at least 1
    for n in 2..=max_order {
        let state = chain.advance()?;
        if !state.ideal.quotient_escapes(f, &locus.i)? {
            return Ok(Order { order: n - 1, exact: true });
        }
    }
    Ok(Order { order: max_order, exact: false })
}

/// Result of a run over a truncated coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncated {
    /// The order, known to be below the threshold and therefore exact.
    Exact(u32),
    /// The order is at least this threshold.
    AtLeast(u32),
}

/// Decides whether `f` vanishes to order at least `r` along a component of
/// multiplicity `m`, computing over `ZZ/p^(floor(r/m)+1)` only.
pub fn vanishing_order_truncated(
    f: &Polynomial,
    locus: &ComponentLocus,
    r: u32,
    m: u32,
    mode: Mode,
) -> Result<Truncated> {
    if r == 0 || m == 0 {
        return Err(Error::InvalidArgument("threshold and multiplicity must be positive".into()));
    }
    if !locus.ring().coefficients().is_integers() {
        return Err(Error::UnsupportedRing("truncation starts from a locus over ZZ".into()));
    }
    if locus.j.contains(f)? {
        return Err(Error::VanishesIdentically);
    }
    let e = truncation_exponent(r, m);
    let small = locus.truncate(e)?;
    let g = f.change_coefficients(small.ring().coefficients())?;
    if g.is_zero() {
        return Ok(Truncated::AtLeast(r));
    }
    let ord = walk(&g, &small, mode, r)?;
    Ok(if ord.order < r { Truncated::Exact(ord.order) } else { Truncated::AtLeast(r) })
}

/// Multiplicity of the component in the special fibre: the order of `p`.
///
/// Computed over `ZZ/p^2`. This is exact for `f = p` at every step, since
/// `p ∈ I^n + (p^2)` locally forces `p (1 - p b) ∈ I^n` and `1 - p b` is a
/// local unit. The exponent is doubled only if the order cap is reached.
pub fn multiplicity(locus: &ComponentLocus, mode: Mode) -> Result<u32> {
    multiplicity_with_cap(locus, mode, DEFAULT_MAX_ORDER)
}

pub fn multiplicity_with_cap(locus: &ComponentLocus, mode: Mode, max_order: u32) -> Result<u32> {
    let available = match locus.ring().coefficients().kind() {
        RingKind::Integers => u32::MAX,
        RingKind::ModPrimePower { e, .. } => *e,
        _ => return Err(Error::UnsupportedRing("multiplicity needs ZZ or ZZ/p^e".into())),
    };
    if available < 2 {
        return Err(Error::UnsupportedRing("multiplicity needs at least ZZ/p^2".into()));
    }
    let mut e = 2;
    loop {
        let small = locus.truncate(e)?;
        let p = small.ring().constant(&locus.p);
        let ord = walk(&p, &small, mode, max_order)?;
        if ord.exact {
            return Ok(ord.order);
        }
        if e >= available || e >= 64 {
            return Err(Error::Budget(format!("multiplicity exceeds the order cap {max_order}")));
        }
        e = (2 * e).min(available);
    }
}

/// `ord(f) - ord(g)` for the function `f/g`, each given as a list of factors
/// whose orders are summed.
pub fn rational_function_order(
    numerator: &[Polynomial],
    denominator: &[Polynomial],
    locus: &ComponentLocus,
    mode: Mode,
) -> Result<i64> {
    let mut total = 0i64;
    for (factors, sign) in [(numerator, 1i64), (denominator, -1)] {
        for f in factors {
            let ord = vanishing_order(f, locus, mode, DEFAULT_MAX_ORDER)?;
            if !ord.exact {
                return Err(Error::Budget(format!("order of {f} exceeds {DEFAULT_MAX_ORDER}")));
            }
            total += sign * i64::from(ord.order);
        }
    }
    Ok(total)
}

/// Smallest `e` with `p^e` covering orders below `r` on a multiplicity-`m`
/// component.
pub fn truncation_exponent(r: u32, m: u32) -> u32 {
    r / m.max(1) + 1
}
