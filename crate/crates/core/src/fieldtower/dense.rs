// Dense univariate polynomials over ℤ and ℚ (low-to-high, no trailing
// zeros), resultants, and arithmetic in ℚ[x]/(f) and ℚ[y, t]/(k(y), r(t, y)).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn qtrim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn degree(a: &[BigInt]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

pub fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

pub fn zderivative(a: &[BigInt]) -> ZPoly {
    ztrim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

pub fn zmod(a: &[BigInt], p: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(p)).collect())
}

/// `r(s(y), y)` for `r = Σ r_j(y) t^j`.
fn substitute(r: &[ZPoly], s: &[BigInt]) -> ZPoly {
    let mut acc: ZPoly = Vec::new();
    for rj in r.iter().rev() {
        acc = zadd(&zmul(&acc, s), rj);
    }
    acc
}

/// Fraction-free (Bareiss) determinant.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// `Res(a, b)` as the determinant of the Sylvester matrix.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (Some(m), Some(n)) = (degree(a), degree(b)) else {
        return BigInt::zero();
    };
    if m == 0 {
        return num_traits::pow(a[0].clone(), n);
    }
    if n == 0 {
        return num_traits::pow(b[0].clone(), m);
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, d, copies) in [(a, m, n), (b, n, m)] {
        for shift in 0..copies {
            let mut row = vec![BigInt::zero(); size];
            for i in 0..=d {
                row[shift + i] = poly[d - i].clone();
            }
            rows.push(row);
        }
    }
    bareiss_det(rows)
}

/// `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = degree(f).unwrap_or(0);
    if n == 0 {
        return BigInt::zero();
    }
    let r = resultant(f, &zderivative(f)) / &f[n];
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// `Res_y(k(y), r(x - h(y), y))` as a polynomial in `x`, by evaluation at
/// `x = 0, …, D` and interpolation. `r` is given by its `t`-coefficients.
pub fn norm_polynomial(k: &[BigInt], r: &[ZPoly], h: &[BigInt]) -> ZPoly {
    let dk = degree(k).unwrap_or(0);
    let dr = r.len().saturating_sub(1);
    let total = dk * dr;
    let xs: Vec<BigInt> = (0..=total).map(BigInt::from).collect();
    let values: Vec<BigInt> = xs
        .iter()
        .map(|x0| {
            let shift = zadd(std::slice::from_ref(&x0), &h.iter().map(|c| -c).collect::<Vec<_>>());
            resultant(k, &substitute(r, &shift))
        })
        .collect();
    let q = interpolate(&xs, &values);
    ztrim(
        q.into_iter()
            .map(|c| {
                debug_assert!(c.is_integer(), "resultant of integer polynomials is integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// Newton interpolation through `(xs[i], ys[i])`, expanded to the monomial basis.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> QPoly {
    let n = xs.len();
    let xq: Vec<BigRational> = xs.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut coef: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xq[i] - &xq[i - j]);
        }
    }
    let mut out: QPoly = vec![BigRational::zero()];
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + coef[i]
        let mut next = vec![BigRational::zero(); out.len() + 1];
        for (j, c) in out.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * &xq[i];
        }
        next[0] += &coef[i];
        out = next;
    }
    qtrim(out)
}

pub fn to_q(a: &[BigInt]) -> QPoly {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

pub fn qadd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    qtrim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

pub fn qscale(a: &[BigRational], c: &BigRational) -> QPoly {
    qtrim(a.iter().map(|x| x * c).collect())
}

pub fn qmul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(out)
}

/// Remainder modulo a monic integer polynomial.
pub fn qrem(a: &[BigRational], f: &[BigInt]) -> QPoly {
    let n = degree(f).expect("nonzero modulus");
    let mut a = qtrim(a.to_vec());
    while a.len() > n {
        let top = a.pop().unwrap();
        let shift = a.len() - n;
        for i in 0..n {
            a[shift + i] -= &top * &f[i];
        }
        a = qtrim(a);
    }
    a
}

pub fn qmulmod(a: &[BigRational], b: &[BigRational], f: &[BigInt]) -> QPoly {
    qrem(&qmul(a, b), f)
}

/// `g(e(x)) mod f` for an integer polynomial `g`.
pub fn eval_mod(g: &[BigInt], e: &[BigRational], f: &[BigInt]) -> QPoly {
    let mut acc: QPoly = Vec::new();
    for c in g.iter().rev() {
        acc = qadd(&qmulmod(&acc, e, f), &[BigRational::from_integer(c.clone())]);
    }
    acc
}

/// `g(e(x)) mod f` for a rational polynomial `g`.
pub fn compose_mod(g: &[BigRational], e: &[BigRational], f: &[BigInt]) -> QPoly {
    let mut acc: QPoly = Vec::new();
    for c in g.iter().rev() {
        acc = qadd(&qmulmod(&acc, e, f), std::slice::from_ref(c));
    }
    acc
}

pub fn qpad(a: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut v = a.to_vec();
    v.resize(n, BigRational::zero());
    v
}

/// Solves `A c = b` for square `A` given by its columns; `None` if singular.
pub fn solve_columns(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    if columns.len() != n {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(pivot, col);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..=n {
                    let v = &m[col][j] * &factor;
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// `ℚ[y, t] / (k(y), r(t, y))` with `k` monic in `y` and `r` monic in `t`.
/// Elements are lists of `t`-coefficients, each a polynomial in `y` reduced
/// modulo `k`.
pub struct BiAlgebra<'a> {
    pub k: &'a [BigInt],
    pub r: &'a [ZPoly],
}

impl BiAlgebra<'_> {
    pub fn dims(&self) -> (usize, usize) {
        (degree(self.k).unwrap_or(0), self.r.len() - 1)
    }

    pub fn reduce(&self, mut a: Vec<QPoly>) -> Vec<QPoly> {
        let (_, dr) = self.dims();
        while a.len() > dr {
            let top = a.pop().unwrap();
            let shift = a.len() - dr;
            for l in 0..dr {
                let v = qmul(&top, &to_q(&self.r[l]));
                a[shift + l] = qadd(&a[shift + l], &qscale(&v, &-BigRational::one()));
            }
        }
        a.resize(dr, Vec::new());
        a.into_iter().map(|c| qrem(&c, self.k)).collect()
    }

    pub fn mul(&self, a: &[QPoly], b: &[QPoly]) -> Vec<QPoly> {
        let mut out = vec![Vec::new(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = qadd(&out[i + j], &qrem(&qmul(x, y), self.k));
            }
        }
        self.reduce(out)
    }

    /// Coordinates in the basis `y^i t^j`, `j`-major.
    pub fn flatten(&self, a: &[QPoly]) -> Vec<BigRational> {
        let (dk, _) = self.dims();
        a.iter().flat_map(|c| qpad(c, dk)).collect()
    }

    /// Writes `y` and `t` as polynomials in `γ = t + h(y)`; `None` if `γ` does
    /// not generate the algebra.
    pub fn express_generators(&self, h: &[BigInt]) -> Option<(QPoly, QPoly)> {
        let (dk, dr) = self.dims();
        let n = dk * dr;
        let gamma = self.reduce(vec![to_q(h), vec![BigRational::one()]]);
        let mut power = self.reduce(vec![vec![BigRational::one()]]);
        let mut columns = Vec::with_capacity(n);
        for _ in 0..n {
            columns.push(self.flatten(&power));
            power = self.mul(&power, &gamma);
        }
        let y = self.flatten(&self.reduce(vec![vec![BigRational::zero(), BigRational::one()]]));
        let t = self.flatten(&self.reduce(vec![Vec::new(), vec![BigRational::one()]]));
        let ey = solve_columns(&columns, &y)?;
        let et = solve_columns(&columns, &t)?;
        Some((qtrim(ey), qtrim(et)))
    }
}
