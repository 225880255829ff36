//! Component groups and Tamagawa numbers from the combinatorics of the special
//! fibre.
//!
//! For a fibre with components `Γ_1, …, Γ_n`, multiplicities `m_i` and
//! intersection matrix `A`, the group of components of the Néron model of the
//! Jacobian over the algebraic closure is
//!
//! ```text
//! φ = ker(β̄) / im(ᾱ),   β̄(x) = Σ m_i x_i,   ᾱ = A : ℤ^n → ℤ^n,
//! ```
//!
//! with Frobenius acting by permuting components. The Tamagawa number is the
//! number of Frobenius-fixed elements of `φ`.
//!
//! ```
//! use bsdkit::compgroup::{component_group, tamagawa_number, SpecialFibre};
//!
//! // a cycle of five (-2)-curves; a rotation acts trivially on the group
//! let fibre = SpecialFibre::cycle(5, 1);
//! let group = component_group(&fibre).unwrap();
//! assert_eq!(group.invariant_factors, [5u32.into()]);
//! assert_eq!(tamagawa_number(&fibre).unwrap(), 5u32.into());
//!
//! // a reflection acts as -1, which fixes only the identity
//! let reflected = SpecialFibre { frobenius: vec![0, 4, 3, 2, 1], ..fibre };
//! assert_eq!(tamagawa_number(&reflected).unwrap(), 1u32.into());
//! ```

pub mod lattice;
mod oracle;
mod orbit;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};
use lattice::Mat;

pub use oracle::{brute_force_component_group, GroupTable};
pub use orbit::{expand_orbit, AmbientLink, OrbitCluster};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    pub multiplicity: u64,
}

/// Combinatorial special fibre over the algebraic closure of `𝔽_p`.
/// `frobenius[i]` is the index of the image of component `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialFibre {
    pub p: u64,
    pub components: Vec<Component>,
    pub intersections: Vec<Vec<i64>>,
    pub frobenius: Vec<usize>,
}

impl SpecialFibre {
    pub fn new(p: u64, components: Vec<Component>, intersections: Vec<Vec<i64>>, frobenius: Vec<usize>) -> Self {
        SpecialFibre { p, components, intersections, frobenius }
    }

    /// A cycle of `n` reduced rational curves (type I_n), each meeting its two
    /// neighbours once, with Frobenius rotating by `shift`. For `n = 1` the
    /// single component has self-intersection 0.
    pub fn cycle(n: usize, shift: usize) -> Self {
        let mut a = vec![vec![0i64; n]; n];
        if n == 2 {
            a = vec![vec![-2, 2], vec![2, -2]];
        } else if n > 2 {
            for i in 0..n {
                a[i][i] = -2;
                a[i][(i + 1) % n] = 1;
                a[(i + 1) % n][i] = 1;
            }
        }
        let components = (0..n).map(|i| Component { id: format!("C{i}"), multiplicity: 1 }).collect();
        let frobenius = (0..n).map(|i| (i + shift) % n.max(1)).collect();
        SpecialFibre { p: 2, components, intersections: a, frobenius }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    fn multiplicities(&self) -> Vec<BigInt> {
        self.components.iter().map(|c| BigInt::from(c.multiplicity)).collect()
    }

    /// The same fibre with component `i` renamed to position `tau[i]`.
    pub fn relabel(&self, tau: &[usize]) -> SpecialFibre {
        let n = self.len();
        let mut components = self.components.clone();
        let mut a = vec![vec![0; n]; n];
        let mut frob = vec![0; n];
        for i in 0..n {
            components[tau[i]] = self.components[i].clone();
            frob[tau[i]] = tau[self.frobenius[i]];
            for j in 0..n {
                a[tau[i]][tau[j]] = self.intersections[i][j];
            }
        }
        SpecialFibre { p: self.p, components, intersections: a, frobenius: frob }
    }
}

/// Every violated invariant of the fibre, empty when it is valid.
pub fn validate_fibre(f: &SpecialFibre) -> Vec<String> {
    let mut out = structural_problems(f);
    if out.is_empty() && !is_connected(f) {
        out.push("the intersection graph is disconnected".into());
    }
    out
}

fn structural_problems(f: &SpecialFibre) -> Vec<String> {
    let n = f.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push("the fibre has no components".into());
        return out;
    }
    if f.p < 2 || !crate::arith::is_prime(&BigInt::from(f.p)) {
        out.push(format!("p = {} is not prime", f.p));
    }
    let mut seen = std::collections::HashSet::new();
    for c in &f.components {
        if !seen.insert(&c.id) {
            out.push(format!("duplicate component id `{}`", c.id));
        }
        if c.multiplicity == 0 {
            out.push(format!("component `{}` has multiplicity 0", c.id));
        }
    }
    if f.intersections.len() != n || f.intersections.iter().any(|r| r.len() != n) {
        out.push(format!("intersection matrix is not {n}x{n}"));
        return out;
    }
    let id = |i: usize| &f.components[i].id;
    for i in 0..n {
        for j in i + 1..n {
            if f.intersections[i][j] != f.intersections[j][i] {
                out.push(format!(
                    "intersection matrix is not symmetric at ({}, {}): {} != {}",
                    id(i),
                    id(j),
                    f.intersections[i][j],
                    f.intersections[j][i]
                ));
            }
            if f.intersections[i][j] < 0 {
                out.push(format!("distinct components {} and {} have negative intersection", id(i), id(j)));
            }
        }
    }
    for i in 0..n {
        let s: i128 = (0..n).map(|j| i128::from(f.components[j].multiplicity) * i128::from(f.intersections[i][j])).sum();
        if s != 0 {
            out.push(format!("weighted row sum of {} is {s}, not 0", id(i)));
        }
    }
    let mut hit = vec![false; n];
    let perm_ok = f.frobenius.len() == n && f.frobenius.iter().all(|&j| j < n && !std::mem::replace(&mut hit[j], true));
    if !perm_ok {
        out.push("frobenius is not a permutation of the components".into());
        return out;
    }
    let s = &f.frobenius;
    for i in 0..n {
        if f.components[s[i]].multiplicity != f.components[i].multiplicity {
            out.push(format!("frobenius maps {} to {} with a different multiplicity", id(i), id(s[i])));
        }
        for j in 0..n {
            if f.intersections[s[i]][s[j]] != f.intersections[i][j] {
                out.push(format!("frobenius does not preserve the intersection of ({}, {})", id(i), id(j)));
            }
        }
    }
    out
}

fn is_connected(f: &SpecialFibre) -> bool {
    let n = f.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && f.intersections[i][j] != 0 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// A finite abelian group `⊕ ℤ/d_i` with an automorphism.
///
/// `kernel_basis` is the Hermite basis of `ker β̄` (rows, in component
/// coordinates); `generators[j]` is the `j`-th cyclic generator in those
/// kernel coordinates; Frobenius maps generator `j` to
/// `Σ_i action[i][j] · generator i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroupWithAction {
    pub invariant_factors: Vec<BigInt>,
    pub kernel_basis: Vec<Vec<BigInt>>,
    pub generators: Vec<Vec<BigInt>>,
    pub action: Vec<Vec<BigInt>>,
}

impl FinAbGroupWithAction {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Generator `j` as a divisor: integer coefficients on the components.
    pub fn generator_divisor(&self, j: usize) -> Vec<BigInt> {
        let n = self.kernel_basis.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); n];
        for (c, row) in self.generators[j].iter().zip(&self.kernel_basis) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        out
    }

    /// Number of elements fixed by the action: `|ker(action - 1)| =
    /// |coker(action - 1)|`, read off the Smith form of `[action - 1 | diag(d)]`.
    pub fn fixed_points(&self) -> BigInt {
        let k = self.invariant_factors.len();
        if k == 0 {
            return BigInt::one();
        }
        let stacked: Mat = (0..k)
            .map(|i| {
                let mut row: Vec<BigInt> = (0..k)
                    .map(|j| &self.action[i][j] - if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect();
                row.extend((0..k).map(|j| if i == j { self.invariant_factors[i].clone() } else { BigInt::zero() }));
                row
            })
            .collect();
        lattice::smith(&stacked, 2 * k).d.iter().product()
    }

    /// Number of elements killed by `n`: `Π gcd(n, d_i)`, a complete invariant
    /// of the group as `n` ranges over divisors of the exponent.
    pub fn killed_by(&self, n: &BigInt) -> BigInt {
        self.invariant_factors.iter().map(|d| d.gcd(n)).product()
    }
}

/// `ker β̄ / im ᾱ` with its Frobenius action.
pub fn component_group(f: &SpecialFibre) -> Result<FinAbGroupWithAction> {
    let problems = structural_problems(f);
    if !problems.is_empty() {
        return Err(Error::InvalidFibre(problems));
    }
    let n = f.len();
    let kernel = lattice::kernel_of_row(&f.multiplicities());
    let k = kernel.len();
    // columns of A in kernel coordinates, as rows of the relation matrix
    let a = lattice::from_i64(&f.intersections);
    let relations: Mat = (0..n)
        .map(|j| {
            let col: Vec<BigInt> = (0..n).map(|i| a[i][j].clone()).collect();
            lattice::coordinates(&kernel, &col).expect("weighted row sums vanish, so columns lie in the kernel")
        })
        .collect();
    // Frobenius on kernel coordinates: row b of the basis goes to σ(b)
    let frob: Mat = kernel
        .iter()
        .map(|b| {
            let mut img = vec![BigInt::zero(); n];
            for i in 0..n {
                img[f.frobenius[i]] = b[i].clone();
            }
            lattice::coordinates(&kernel, &img).expect("frobenius preserves multiplicities")
        })
        .collect();
    let s = lattice::smith(&relations, k);
    if s.d.len() < k || s.d.iter().any(Zero::is_zero) {
        return Err(Error::DisconnectedFibre);
    }
    // y = x V puts the group in the form ⊕ ℤ/d_i; on y, Frobenius is V^-1 F V
    let action_rows = lattice::mul(&lattice::mul(&s.v_inv, &frob), &s.v);
    let keep: Vec<usize> = (0..k).filter(|&i| !s.d[i].is_one()).collect();
    let invariant_factors: Vec<BigInt> = keep.iter().map(|&i| s.d[i].clone()).collect();
    let generators = keep.iter().map(|&i| s.v_inv[i].clone()).collect();
    let action = keep
        .iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| {
                    // generator j maps to row j of the action; coefficient on generator i
                    action_rows[j][i].mod_floor(&s.d[i])
                })
                .collect()
        })
        .collect();
    Ok(FinAbGroupWithAction { invariant_factors, kernel_basis: kernel, generators, action })
}

/// The Tamagawa number `c_p`: Frobenius-fixed points of the component group.
pub fn tamagawa_number(f: &SpecialFibre) -> Result<BigInt> {
    Ok(component_group(f)?.fixed_points())
}

/// Like [`component_group`], but first reports every violated invariant.
pub fn checked_component_group(f: &SpecialFibre) -> Result<FinAbGroupWithAction> {
    let problems = structural_problems(f);
    if !problems.is_empty() {
        return Err(Error::InvalidFibre(problems));
    }
    if !is_connected(f) {
        return Err(Error::DisconnectedFibre);
    }
    component_group(f)
}
