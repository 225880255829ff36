// Integer matrices: Hermite and Smith normal forms with transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn row_axpy(m: &mut Mat, dst: usize, q: &BigInt, src: usize) {
    // m[dst] -= q * m[src]
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut Mat, dst: usize, q: &BigInt, src: usize) {
    for row in m.iter_mut() {
        let t = q * &row[src];
        row[dst] -= t;
    }
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Row-style Hermite normal form of the row lattice of `a`: echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`, zero rows
/// dropped.
pub fn hnf_rows(a: &Mat, cols: usize) -> Mat {
    let mut m: Mat = a.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            // smallest nonzero entry at or below row r in column c
            let piv = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].abs());
            let Some(p) = piv else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    row_axpy(&mut m, i, &q, r);
                    if !m[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    row_axpy(&mut m, i, &q, r);
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Pivot column of each row of an echelon matrix.
pub fn pivots(h: &Mat) -> Vec<usize> {
    h.iter().map(|row| row.iter().position(|x| !x.is_zero()).unwrap()).collect()
}

/// Coordinates of `v` in the row basis `h` (in Hermite form), if `v` lies in
/// the lattice.
pub fn coordinates(h: &Mat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut out = Vec::with_capacity(h.len());
    for (row, &c) in h.iter().zip(&pivots(h)) {
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
        out.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(out)
}

/// Basis of `{x : w · x = 0}` in Hermite form.
pub fn kernel_of_row(w: &[BigInt]) -> Mat {
    let n = w.len();
    // column operations on w, mirrored on the rows of an identity basis
    let mut row = w.to_vec();
    let mut basis = identity(n);
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| !row[i].is_zero()).collect();
        if nz.len() <= 1 {
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| row[i].abs()).unwrap();
        for &i in &nz {
            if i != p {
                let q = row[i].div_floor(&row[p]);
                let t = &q * &row[p];
                row[i] -= t;
                // basis vector i -= q * basis vector p keeps w·b_i = row[i]
                let bp = basis[p].clone();
                for (x, y) in basis[i].iter_mut().zip(&bp) {
                    *x -= &q * y;
                }
            }
        }
    }
    let kept: Mat = (0..n).filter(|&i| row[i].is_zero()).map(|i| basis[i].clone()).collect();
    hnf_rows(&kept, n)
}

/// `u * a * v = diag(d)` with `u`, `v` unimodular; `d` is a divisibility chain
/// of non-negative entries, padded with zeros to `min(rows, cols)`.
pub struct Smith {
    pub d: Vec<BigInt>,
    pub u: Mat,
    pub v: Mat,
    pub v_inv: Mat,
}

pub fn smith(a: &Mat, cols: usize) -> Smith {
    let rows = a.len();
    let mut m: Mat = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            let piv = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = piv else { break };
            m.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);
            v_inv.swap(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    row_axpy(&mut m, i, &q, t);
                    row_axpy(&mut u, i, &q, t);
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    col_axpy(&mut m, j, &q, t);
                    col_axpy(&mut v, j, &q, t);
                    // inverse of the column operation: row t += q * row j
                    let neg = -&q;
                    row_axpy(&mut v_inv, t, &neg, j);
                    clean &= m[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the submatrix
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut m, t, &minus_one, i);
                    row_axpy(&mut u, t, &minus_one, i);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            m[t][t] = -&m[t][t];
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let d = (0..k).map(|t| m[t][t].clone()).collect();
    Smith { d, u, v, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(d: &[BigInt], rows: usize, cols: usize) -> Mat {
        (0..rows)
            .map(|i| (0..cols).map(|j| if i == j { d[i].clone() } else { BigInt::zero() }).collect())
            .collect()
    }

    fn det(m: &Mat) -> BigInt {
        // cofactor expansion; test sizes only
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        (0..n)
            .map(|j| {
                let minor: Mat = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
                let s = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                s * &m[0][j] * det(&minor)
            })
            .sum()
    }

    #[test]
    fn small_smith_forms() {
        let s = smith(&from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), 3);
        assert_eq!(s.d, [2, 6, 12].map(BigInt::from));
        let s = smith(&from_i64(&[vec![-2, 2], vec![2, -2]]), 2);
        assert_eq!(s.d, [2, 0].map(BigInt::from));
    }

    #[test]
    fn kernel_of_multiplicities() {
        let k = kernel_of_row(&[6, 10, 15].map(BigInt::from));
        assert_eq!(k.len(), 2);
        for row in &k {
            let dot: BigInt = row.iter().zip([6, 10, 15]).map(|(x, w)| x * w).sum();
            assert!(dot.is_zero());
        }
        // the kernel of a primitive vector has covolume |w|^2 = 361 as a Gram determinant
        let gram: Mat = k.iter().map(|a| k.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect();
        assert_eq!(det(&gram), BigInt::from(361));
    }

    proptest! {
        #[test]
        fn smith_transforms_are_consistent(
            (r, c, entries) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..10, r * c)))
        ) {
            let a: Mat = entries.chunks(c).map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let s = smith(&a, c);
            prop_assert_eq!(mul(&mul(&s.u, &a), &s.v), diag(&s.d, r, c));
            prop_assert_eq!(mul(&s.v, &s.v_inv), identity(c));
            prop_assert!(det(&s.u).abs().is_one());
            for w in s.d.windows(2) {
                prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
            }
        }

        #[test]
        fn hermite_form_spans_the_same_lattice(
            (r, c, entries) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..10, r * c)))
        ) {
            let _ = r;
            let a: Mat = entries.chunks(c).map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let h = hnf_rows(&a, c);
            for row in &a {
                prop_assert!(coordinates(&h, row).is_some());
            }
            // and the Hermite rows lie in the original lattice
            let back = hnf_rows(&a.iter().chain(h.iter()).cloned().collect::<Vec<_>>(), c);
            prop_assert_eq!(back, h);
        }
    }
}
