// Brute-force component group: breadth-first enumeration of ker β̄ modulo
// im ᾱ with canonical coset representatives. Deliberately shares no code
// with the Smith-form path; it uses i128 arithmetic throughout.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;

use super::{structural_problems, SpecialFibre};
use crate::{Error, Result};

/// Every element of the component group, as canonical representatives.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub elements: Vec<Vec<i128>>,
    /// Number of elements fixed by Frobenius.
    pub fixed: usize,
    relations: Vec<(usize, Vec<i128>)>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// How many elements `k` kills.
    pub fn killed_by(&self, k: usize) -> usize {
        self.elements
            .iter()
            .filter(|e| {
                let mut v: Vec<i128> = e.iter().map(|x| x * k as i128).collect();
                reduce(&self.relations, &mut v);
                v.iter().all(|&x| x == 0)
            })
            .count()
    }

    /// Invariant factors `d_1 | d_2 | ...`, recovered from the counts of
    /// elements killed by prime powers: `|G[q^j]| / |G[q^(j-1)]|` is `q` to the
    /// number of factors divisible by `q^j`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let order = self.order();
        let mut per_prime: Vec<(usize, Vec<usize>)> = Vec::new();
        let (mut rest, mut q) = (order, 2);
        while rest > 1 {
            if rest % q == 0 {
                while rest % q == 0 {
                    rest /= q;
                }
                let mut counts = Vec::new();
                let (mut prev, mut qj) = (1, q);
                while order % qj == 0 {
                    let now = self.killed_by(qj);
                    counts.push((now / prev).ilog(q) as usize);
                    prev = now;
                    qj *= q;
                }
                per_prime.push((q, counts));
            }
            q += 1;
        }
        let len = per_prime.iter().map(|(_, c)| c[0]).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (q, counts) in per_prime {
            for c in counts {
                for f in &mut factors[len - c..] {
                    *f *= q as u64;
                }
            }
        }
        factors.into_iter().map(BigInt::from).collect()
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Row echelon form with positive pivots; enough for canonical reduction.
fn echelon(mut rows: Vec<Vec<i128>>, n: usize) -> Vec<(usize, Vec<i128>)> {
    let mut out = Vec::new();
    for c in 0..n {
        loop {
            let live: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            let p = *live.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &live {
                if i != p {
                    let q = rows[i][c].div_euclid(rows[p][c]);
                    let src = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&src) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(i) = rows.iter().position(|r| r[c] != 0) {
            let mut r = rows.swap_remove(i);
            if r[c] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push((c, r));
        }
    }
    out
}

fn reduce(ech: &[(usize, Vec<i128>)], v: &mut [i128]) {
    for (c, row) in ech {
        let q = v[*c].div_euclid(row[*c]);
        if q != 0 {
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
    }
}

/// Enumerates the component group of `f` if its order is at most `cap`.
pub fn brute_force_component_group(f: &SpecialFibre, cap: usize) -> Result<GroupTable> {
    let problems = structural_problems(f);
    if !problems.is_empty() {
        return Err(Error::InvalidFibre(problems));
    }
    let n = f.len();
    let m: Vec<i128> = f.components.iter().map(|c| i128::from(c.multiplicity)).collect();
    let cols: Vec<Vec<i128>> = (0..n).map(|j| (0..n).map(|i| i128::from(f.intersections[i][j])).collect()).collect();
    let ech = echelon(cols, n);
    // pairwise syzygies of the multiplicities generate ker β̄
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let g = gcd(m[i], m[j]);
            let mut v = vec![0i128; n];
            v[i] = m[j] / g;
            v[j] = -m[i] / g;
            gens.push(v.clone());
            gens.push(v.iter().map(|x| -x).collect());
        }
    }
    let zero = vec![0i128; n];
    let mut index: HashMap<Vec<i128>, usize> = HashMap::from([(zero.clone(), 0)]);
    let mut elements = vec![zero];
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let mut v: Vec<i128> = elements[e].iter().zip(g).map(|(a, b)| a + b).collect();
            reduce(&ech, &mut v);
            if !index.contains_key(&v) {
                if elements.len() == cap {
                    return Err(Error::SearchExhausted(format!("component group has more than {cap} elements")));
                }
                index.insert(v.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(v);
            }
        }
    }
    let fixed = elements
        .iter()
        .filter(|e| {
            let mut img = vec![0i128; n];
            for i in 0..n {
                img[f.frobenius[i]] = e[i];
            }
            reduce(&ech, &mut img);
            &&img == e
        })
        .count();
    Ok(GroupTable { elements, fixed, relations: ech })
}
