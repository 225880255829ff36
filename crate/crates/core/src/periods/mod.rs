//! Real periods: covolumes of the big period matrix, the generator of their
//! lattice, conversion of differentials to a common base, and the
//! per-prime scaling that makes a basis of differentials a Néron basis.
//!
//! The big period matrix, the number of real components and the local
//! generators of the dualizing sheaf are inputs. The result is
//! `Ω = m · W · P` with `W = Π_p p^(a_p - b_p)`.
//!
//! ```
//! use bsdkit::periods::{covolumes, lattice_generator, real_period, BigPeriodMatrix, DEFAULT_TOLERANCE};
//! use num_rational::BigRational;
//!
//! // genus one, periods 2 and 1 + 3i
//! let m = BigPeriodMatrix::from_decimal_pairs(&[vec![("2", "0")], vec![("1", "3")]]).unwrap();
//! let values: Vec<_> = covolumes(&m).into_iter().map(|c| c.value).collect();
//! let p = lattice_generator(&values, DEFAULT_TOLERANCE).unwrap();
//! assert_eq!(p.value, BigRational::from_integer(2.into()));
//! let omega = real_period(&p.value, &BigRational::from_integer(1.into()), 2).unwrap();
//! assert_eq!(omega, BigRational::from_integer(4.into()));
//! ```

mod differential;
mod neron;
mod numeric;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::{Error, Result};

pub use differential::{convert_differential, convert_plane, to_dx, Base, Conversion, DifferentialRep, Relation};
pub use neron::{
    combination, differential_order_on_component, enumerate_points, neron_basis_adjust, vanishes_on_fibre,
    vanishing_subspace, AdjustOptions, AdjustStep, Adjustment, ComponentChart, Differential, SamplePoint, Subspace,
    MAX_LINES,
};
pub use numeric::{
    covolumes, determinant, format_decimal, lattice_generator, parse_decimal, rational_from_f64, BigPeriodMatrix,
    Covolume, Generator, DEFAULT_TOLERANCE,
};

/// `Ω = m_real · W · P`.
pub fn real_period(p: &BigRational, w: &BigRational, m_real: u32) -> Result<BigRational> {
    if !p.is_positive() || !w.is_positive() || m_real == 0 {
        return Err(Error::InvalidArgument(format!("need P > 0, W > 0 and m >= 1; got P = {p}, W = {w}, m = {m_real}")));
    }
    Ok(BigRational::from_integer(m_real.into()) * w * p)
}

/// The local factor `p^(a - b)` found at one bad prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactor {
    pub p: BigInt,
    pub a: u32,
    pub b: u32,
}

impl PrimeFactor {
    pub fn w(&self) -> BigRational {
        let p = BigRational::from_integer(self.p.clone());
        num_traits::pow(p.clone(), self.a as usize) / num_traits::pow(p, self.b as usize)
    }
}

impl From<&Adjustment> for PrimeFactor {
    fn from(adj: &Adjustment) -> Self {
        PrimeFactor { p: adj.p.clone(), a: adj.a, b: adj.b }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodResult {
    pub covolumes: Vec<Covolume>,
    pub generator: Generator,
    pub primes: Vec<PrimeFactor>,
    pub w: BigRational,
    pub m_real: u32,
    pub omega: BigRational,
}

/// Runs the lattice steps on `matrix` and combines them with the local
/// factors.
pub fn assemble_period(matrix: &BigPeriodMatrix, primes: Vec<PrimeFactor>, m_real: u32, tol: f64) -> Result<PeriodResult> {
    let covolumes = covolumes(matrix);
    let values: Vec<BigRational> = covolumes.iter().map(|c| c.value.clone()).collect();
    let generator = lattice_generator(&values, tol)?;
    let w = primes.iter().fold(BigRational::one(), |acc, f| acc * f.w());
    let omega = real_period(&generator.value, &w, m_real)?;
    Ok(PeriodResult { covolumes, generator, primes, w, m_real, omega })
}
