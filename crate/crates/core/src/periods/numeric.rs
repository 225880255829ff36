// Exact real arithmetic on the period side. Decimal inputs are held as the
// rationals they denote, so covolumes are exact functions of the input and
// the only tolerance is the one used to recognise the lattice.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Relative tolerance used when recognising the lattice of covolumes.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Parses `-12.5e-3` style decimals exactly.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("`{text}` is not a decimal number"));
    let s = text.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if shift >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Fixed-point rendering with `digits` digits after the point, rounded to
/// nearest.
pub fn format_decimal(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.abs() * BigRational::from_integer(scale.clone())).round().to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if x.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>digits$}")
    }
}

pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("{x} is not finite")))
}

/// The `2g × g` matrix of periods `∫_{γ_i} ω_j` over a symplectic basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigPeriodMatrix {
    g: usize,
    rows: Vec<Vec<Complex<BigRational>>>,
}

impl BigPeriodMatrix {
    pub fn new(rows: Vec<Vec<Complex<BigRational>>>) -> Result<Self> {
        let g = rows.first().map_or(0, Vec::len);
        if g == 0 || rows.len() != 2 * g || rows.iter().any(|r| r.len() != g) {
            return Err(Error::InvalidArgument(format!(
                "a period matrix has 2g rows of g entries with g >= 1; got {} rows of lengths {:?}",
                rows.len(),
                rows.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        Ok(BigPeriodMatrix { g, rows })
    }

    /// Builds the matrix from `(re, im)` decimal strings.
    pub fn from_decimal_pairs<S: AsRef<str>>(rows: &[Vec<(S, S)>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(re, im)| Ok(Complex::new(parse_decimal(re.as_ref())?, parse_decimal(im.as_ref())?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn rows(&self) -> &[Vec<Complex<BigRational>>] {
        &self.rows
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(Complex::conj).collect()).collect();
        BigPeriodMatrix { g: self.g, rows }
    }

    /// The matrix for the basis with `ω_j` replaced by `c · ω_j`.
    pub fn scale_column(&self, j: usize, c: &BigRational) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            row[j] = row[j].scale(c.clone());
        }
        out
    }
}

/// `P_I` for one `g`-subset `I` of the rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covolume {
    pub rows: Vec<usize>,
    pub value: BigRational,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant by Gaussian elimination over ℚ.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let q = &m[i][c] / &pivot;
            for j in c..n {
                let t = &q * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Every `P_I = |det(M_I + conj(M_I))|`, subsets in lexicographic order.
/// Since `z + conj(z) = 2 Re z` the blocks are real.
pub fn covolumes(m: &BigPeriodMatrix) -> Vec<Covolume> {
    let two = BigRational::from_integer(2.into());
    subsets(2 * m.g, m.g)
        .into_iter()
        .map(|rows| {
            let block = rows.iter().map(|&i| m.rows[i].iter().map(|z| &z.re * &two).collect()).collect();
            Covolume { value: determinant(block).abs(), rows }
        })
        .collect()
}

/// A generator of the lattice spanned by some reals, with the integer
/// combination of the inputs that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub value: BigRational,
    pub witness: Vec<BigInt>,
}

/// Generator of the subgroup of ℝ spanned by `values`, by real Euclid.
///
/// Values at most `tol · max` count as zero. Remainders at most `tol · max`
/// end a Euclid run; a divisor below `sqrt(tol) · max` means the values do
/// not look discrete at this tolerance.
pub fn lattice_generator(values: &[BigRational], tol: f64) -> Result<Generator> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} is not in (0, 1)")));
    }
    if let Some(v) = values.iter().find(|v| v.is_negative()) {
        return Err(Error::InvalidArgument(format!("lattice values must be non-negative, got {v}")));
    }
    let max = values.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let zero_below = &max * rational_from_f64(tol)?;
    let floor = &max * rational_from_f64(tol.sqrt())?;
    let n = values.len();
    let unit = |i: usize| (0..n).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect::<Vec<_>>();
    let mut live = (0..n).filter(|&i| values[i] > zero_below);
    let Some(first) = live.next() else {
        return Err(Error::Degenerate("every value is zero at this tolerance".into()));
    };
    let (mut g, mut wg) = (values[first].clone(), unit(first));
    for i in live {
        let (mut a, mut wa) = (g, wg);
        let (mut b, mut wb) = (values[i].clone(), unit(i));
        if b > a {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut wa, &mut wb);
        }
        while b > zero_below {
            if b < floor {
                return Err(Error::NonDiscrete(format!(
                    "Euclid reached {} below the floor {}",
                    b.to_f64().unwrap_or(f64::NAN),
                    floor.to_f64().unwrap_or(f64::NAN)
                )));
            }
            let q = (&a / &b).floor().to_integer();
            let r = &a - &b * BigRational::from_integer(q.clone());
            let wr: Vec<BigInt> = wa.iter().zip(&wb).map(|(x, y)| x - &q * y).collect();
            (a, wa) = (b, wb);
            (b, wb) = (r, wr);
        }
        (g, wg) = (a, wa);
    }
    for v in values.iter().filter(|v| **v > zero_below) {
        let k = (v / &g).round();
        if (v - &k * &g).abs() > zero_below {
            return Err(Error::NonDiscrete(format!("{} is not a multiple of {}", v, g)));
        }
    }
    Ok(Generator { value: g, witness: wg })
}
