// Rewriting differentials on a patch in terms of dx, without a function
// field: the relations df = dg = 0 are solved with the adjugate of the
// (y, z) block of the Jacobian matrix.

use serde::{Deserialize, Serialize};

use crate::polyring::{poly_gcd, Polynomial};
use crate::{Error, Result};

/// The coordinate differential a representation is written against. The
/// variables of a patch are taken as `x, y[, z]` in ring order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    #[default]
    Dx,
    Dy,
    Dz,
}

impl std::str::FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dx" => Ok(Base::Dx),
            "dy" => Ok(Base::Dy),
            "dz" => Ok(Base::Dz),
            _ => Err(Error::InvalidArgument(format!("unknown base differential `{s}`"))),
        }
    }
}

/// `(numerator / denominator) · base` on one patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialRep {
    pub patch: String,
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub base: Base,
}

/// `a · dx = b · dv` for some coordinate `v`, with `a` and `b` coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub a: Polynomial,
    pub b: Polynomial,
}

/// Everything computed while converting on a patch `f = g = 0` in three
/// variables.
#[derive(Clone, Debug)]
pub struct Conversion {
    /// The Jacobian matrix `N` of `(f, g)`.
    pub jacobian: [[Polynomial; 3]; 2],
    /// `adj(M)` for the `(y, z)` block `M` of `N`.
    pub adjugate: [[Polynomial; 2]; 2],
    /// `adj(M) · N`, of the shape `[[F, D, 0], [G, 0, D]]`.
    pub product: [[Polynomial; 3]; 2],
    pub dy: Relation,
    pub dz: Relation,
}

impl Conversion {
    pub fn big_f(&self) -> &Polynomial {
        &self.product[0][0]
    }

    pub fn big_g(&self) -> &Polynomial {
        &self.product[1][0]
    }

    pub fn det(&self) -> &Polynomial {
        &self.product[0][1]
    }
}

fn mul(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    a.try_mul(b)
}

/// From `c · dx + d · dv = 0` with `d ≠ 0`: `a = -c/gcd`, `b = d/gcd`.
fn relation(c: &Polynomial, d: &Polynomial) -> Result<Relation> {
    let g = poly_gcd(c, d)?;
    Ok(Relation { a: (-c).div_exact(&g)?, b: d.div_exact(&g)? })
}

/// Converts on the patch `f = g = 0` of `K[x, y, z]`.
///
/// Multiplying `N · (dx, dy, dz)ᵀ = 0` by `adj(M)` gives `F dx + D dy = 0`
/// and `G dx + D dz = 0` with `D = det M`. The shape of `adj(M) · N` is
/// checked before returning.
pub fn convert_differential(f: &Polynomial, g: &Polynomial) -> Result<Conversion> {
    let ring = f.ring();
    if g.ring() != ring {
        return Err(Error::RingMismatch("the two patch equations live in different rings".into()));
    }
    if ring.nvars() != 3 {
        return Err(Error::InvalidArgument(format!("expected a patch in three variables, got {}", ring.nvars())));
    }
    let d = |h: &Polynomial, i: usize| h.derivative_index(i);
    let jacobian = [[d(f, 0), d(f, 1), d(f, 2)], [d(g, 0), d(g, 1), d(g, 2)]];
    let [[_, fy, fz], [_, gy, gz]] = &jacobian;
    let adjugate = [[gz.clone(), -fz], [-gy, fy.clone()]];
    let entry = |i: usize, j: usize| mul(&adjugate[i][0], &jacobian[0][j])?.try_add(&mul(&adjugate[i][1], &jacobian[1][j])?);
    let product = [[entry(0, 0)?, entry(0, 1)?, entry(0, 2)?], [entry(1, 0)?, entry(1, 1)?, entry(1, 2)?]];
    let det = mul(fy, gz)?.try_sub(&mul(fz, gy)?)?;
    let shape_ok = product[0][1] == det && product[1][2] == det && product[0][2].is_zero() && product[1][1].is_zero();
    if !shape_ok {
        // cannot happen for polynomials over a commutative ring
        return Err(Error::Degenerate("adj(M) · N does not have the expected shape".into()));
    }
    if det.is_zero() {
        return Err(Error::Degenerate("det of the (y, z) Jacobian block vanishes identically".into()));
    }
    let dy = relation(&product[0][0], &det)?;
    let dz = relation(&product[1][0], &det)?;
    Ok(Conversion { jacobian, adjugate, product, dy, dz })
}

/// On a plane patch `f = 0` in `x, y`: `f_x dx + f_y dy = 0`.
pub fn convert_plane(f: &Polynomial) -> Result<Relation> {
    if f.ring().nvars() != 2 {
        return Err(Error::InvalidArgument(format!("expected a patch in two variables, got {}", f.ring().nvars())));
    }
    let fy = f.derivative_index(1);
    if fy.is_zero() {
        return Err(Error::Degenerate("∂f/∂y vanishes identically".into()));
    }
    relation(&f.derivative_index(0), &fy)
}

/// Rewrites `rep` over `dx`, given the equations of its patch: one equation
/// in two variables, or two in three.
pub fn to_dx(rep: &DifferentialRep, equations: &[Polynomial]) -> Result<DifferentialRep> {
    let rel = match (rep.base, rep.numerator.ring().nvars(), equations) {
        (Base::Dx, _, _) => return Ok(rep.clone()),
        (Base::Dy, 2, [f]) => convert_plane(f)?,
        (Base::Dy, 3, [f, g]) => convert_differential(f, g)?.dy,
        (Base::Dz, 3, [f, g]) => convert_differential(f, g)?.dz,
        (base, n, eqs) => {
            return Err(Error::InvalidArgument(format!(
                "cannot convert a {base:?} differential on a patch with {n} variables and {} equations",
                eqs.len()
            )))
        }
    };
    // (u/v) dv' = (u/v)(a/b) dx
    Ok(DifferentialRep {
        patch: rep.patch.clone(),
        numerator: mul(&rep.numerator, &rel.a)?,
        denominator: mul(&rep.denominator, &rel.b)?,
        base: Base::Dx,
    })
}
