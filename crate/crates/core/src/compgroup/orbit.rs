// Frobenius-orbit expansion: a cluster of components defined over a degree-m
// extension is copied m times, with Frobenius moving copy i to copy i + 1
// and closing the cycle through the cluster's own permutation.

use serde::{Deserialize, Serialize};

use super::{Component, SpecialFibre};
use crate::{Error, Result};

/// Intersections of the copy-0 cluster components with one ambient component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientLink {
    pub ambient: String,
    pub values: Vec<i64>,
}

/// Components found over `𝔽_{p^(ℓ m)}` whose Galois orbit has `m` members.
/// `permutation` is the action of `Frob^m` on the copy-0 components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCluster {
    pub ell: u32,
    pub copies: usize,
    pub components: Vec<Component>,
    pub intersections: Vec<Vec<i64>>,
    pub permutation: Vec<usize>,
    pub ambient_links: Vec<AmbientLink>,
}

fn incompatible(msg: String) -> Error {
    Error::IncompatibleOrbit(msg)
}

/// Appends the `m` copies of `cluster` to `ambient`. Copy `i` of component
/// `c` gets id `"{c}#{i}"`; copies do not meet each other, and copy `i` meets
/// an ambient `E` as copy 0 meets `σ^{-i}(E)`.
pub fn expand_orbit(cluster: &OrbitCluster, ambient: &SpecialFibre) -> Result<SpecialFibre> {
    let k = cluster.components.len();
    let m = cluster.copies;
    let a = ambient.len();
    if m == 0 || cluster.ell == 0 {
        return Err(incompatible("copies and ell must be positive".into()));
    }
    if cluster.intersections.len() != k || cluster.intersections.iter().any(|r| r.len() != k) {
        return Err(incompatible(format!("cluster intersection matrix is not {k}x{k}")));
    }
    let mut hit = vec![false; k];
    if cluster.permutation.len() != k
        || !cluster.permutation.iter().all(|&j| j < k && !std::mem::replace(&mut hit[j], true))
    {
        return Err(incompatible("cluster permutation is not a permutation".into()));
    }
    let pi = &cluster.permutation;
    for i in 0..k {
        if cluster.components[pi[i]].multiplicity != cluster.components[i].multiplicity {
            return Err(incompatible("cluster permutation changes a multiplicity".into()));
        }
        for j in 0..k {
            if cluster.intersections[pi[i]][pi[j]] != cluster.intersections[i][j] {
                return Err(incompatible("cluster permutation does not preserve intersections".into()));
            }
        }
    }
    // copy-0 links as a k x a table
    let mut link = vec![vec![0i64; a]; k];
    for l in &cluster.ambient_links {
        let e = ambient
            .index_of(&l.ambient)
            .ok_or_else(|| incompatible(format!("unknown ambient component `{}`", l.ambient)))?;
        if l.values.len() != k {
            return Err(incompatible(format!("link to `{}` has {} values, expected {k}", l.ambient, l.values.len())));
        }
        for c in 0..k {
            link[c][e] = l.values[c];
        }
    }
    let sigma = &ambient.frobenius;
    if sigma.len() != a {
        return Err(incompatible("ambient frobenius has the wrong length".into()));
    }
    let mut sigma_inv = vec![0; a];
    for (i, &j) in sigma.iter().enumerate() {
        sigma_inv[j] = i;
    }
    let power = |e: usize, times: usize, s: &[usize]| (0..times).fold(e, |x, _| s[x]);
    // Frob^m fixes the cluster as a set: link(π c, σ^m E) = link(c, E)
    for c in 0..k {
        for e in 0..a {
            if link[pi[c]][power(e, m, sigma)] != link[c][e] {
                return Err(incompatible(format!(
                    "ambient frobenius is incompatible with {m} copies: link of {} to {} is not preserved",
                    cluster.components[c].id, ambient.components[e].id
                )));
            }
        }
    }

    let n = a + m * k;
    let mut out = ambient.clone();
    for row in out.intersections.iter_mut() {
        row.resize(n, 0);
    }
    out.intersections.resize(n, vec![0; n]);
    out.frobenius.resize(n, 0);
    let idx = |copy: usize, c: usize| a + copy * k + c;
    for copy in 0..m {
        for comp in &cluster.components {
            out.components.push(Component { id: format!("{}#{copy}", comp.id), multiplicity: comp.multiplicity });
        }
    }
    for copy in 0..m {
        for c in 0..k {
            for d in 0..k {
                out.intersections[idx(copy, c)][idx(copy, d)] = cluster.intersections[c][d];
            }
            for e in 0..a {
                let v = link[c][power(e, copy, &sigma_inv)];
                out.intersections[idx(copy, c)][e] = v;
                out.intersections[e][idx(copy, c)] = v;
            }
            out.frobenius[idx(copy, c)] = if copy + 1 < m { idx(copy + 1, c) } else { idx(0, pi[c]) };
        }
    }
    Ok(out)
}
