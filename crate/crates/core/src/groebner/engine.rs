// Buchberger completion over a `Domain`, for ideals and for submodules of
// R^2 with a position-over-term order (component 0 above component 1).
//
// Over ℤ the completion adds G-polynomials, over ℤ/p^n annihilator
// polynomials p^(n-v) g for each basis element with leading coefficient p^v.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use smallvec::SmallVec;

use super::domain::Domain;
use super::Budget;
use crate::error::{Error, Result};
use crate::polyring::{grevlex_slices, Monomial, MonomialOrder, PolyRing, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mon {
    pub e: SmallVec<[u16; 8]>,
    pub deg: u32,
    pub comp: u8,
}

impl Mon {
    pub(crate) fn one(n: usize, comp: u8) -> Mon {
        Mon { e: SmallVec::from_elem(0, n), deg: 0, comp }
    }

    fn mask(&self) -> u64 {
        self.e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .fold(0u64, |m, (i, _)| m | (1 << (i % 64)))
    }

    fn divides(&self, other: &Mon) -> bool {
        self.comp == other.comp
            && self.deg <= other.deg
            && self.e.iter().zip(&other.e).all(|(a, b)| a <= b)
    }

    /// Product with a component-free shift.
    fn shifted(&self, s: &Mon) -> Mon {
        Mon {
            e: self.e.iter().zip(&s.e).map(|(a, b)| a + b).collect(),
            deg: self.deg + s.deg,
            comp: self.comp,
        }
    }

    fn quotient(&self, d: &Mon) -> Mon {
        Mon { e: self.e.iter().zip(&d.e).map(|(a, b)| a - b).collect(), deg: self.deg - d.deg, comp: 0 }
    }

    fn lcm(&self, other: &Mon) -> Mon {
        let e: SmallVec<[u16; 8]> = self.e.iter().zip(&other.e).map(|(&a, &b)| a.max(b)).collect();
        let deg = e.iter().map(|&x| x as u32).sum();
        Mon { e, deg, comp: self.comp }
    }

    fn coprime(&self, other: &Mon) -> bool {
        self.e.iter().zip(&other.e).all(|(&a, &b)| a == 0 || b == 0)
    }
}

pub(crate) type Poly<C> = Vec<(Mon, C)>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Ctx {
    pub order: MonomialOrder,
}

impl Ctx {
    pub fn cmp(&self, a: &Mon, b: &Mon) -> Ordering {
        if a.comp != b.comp {
            return b.comp.cmp(&a.comp);
        }
        match self.order {
            MonomialOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| {
                for (x, y) in a.e.iter().zip(&b.e).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::Lex => a.e.cmp(&b.e),
            MonomialOrder::Block(k) => {
                let k = k.min(a.e.len());
                grevlex_slices(&a.e[..k], &b.e[..k])
                    .then_with(|| grevlex_slices(&a.e[k..], &b.e[k..]))
            }
        }
    }
}

pub(crate) fn to_engine<D: Domain>(d: &D, f: &Polynomial, comp: u8) -> Poly<D::C> {
    f.terms()
        .iter()
        .map(|(m, c)| {
            let e: SmallVec<[u16; 8]> = m.exponents().iter().copied().collect();
            let deg = e.iter().map(|&x| x as u32).sum();
            (Mon { e, deg, comp }, d.from_big(c))
        })
        .collect()
}

/// The terms of `f` in component `comp`, as a polynomial of `ring`.
pub(crate) fn from_engine<D: Domain>(d: &D, ring: &PolyRing, f: &Poly<D::C>, comp: u8) -> Polynomial {
    let terms = f
        .iter()
        .filter(|(m, _)| m.comp == comp)
        .map(|(m, c)| {
            let mono = Monomial::from_exponents(&m.e.iter().map(|&x| x as u32).collect::<Vec<_>>())
                .expect("exponents fit");
            (mono, d.to_big(c))
        });
    ring.from_terms(terms)
}

/// A list of polynomials with cached divisibility masks, used as a reducer set.
pub(crate) struct Basis<C> {
    pub polys: Vec<Poly<C>>,
    masks: Vec<u64>,
}

impl<C: Clone + Ord> Basis<C> {
    pub fn new() -> Self {
        Basis { polys: Vec::new(), masks: Vec::new() }
    }

    pub fn from_polys(polys: Vec<Poly<C>>) -> Self {
        let masks = polys.iter().map(|p| p[0].0.mask()).collect();
        Basis { polys, masks }
    }

    fn push(&mut self, p: Poly<C>) {
        self.masks.push(p[0].0.mask());
        self.polys.push(p);
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    fn lm(&self, i: usize) -> &Mon {
        &self.polys[i][0].0
    }

    fn lc(&self, i: usize) -> &C {
        &self.polys[i][0].1
    }

    /// The strongest reducer for a term with monomial `m`: smallest
    /// normalised leading coefficient, then fewest terms.
    fn find_reducer(&self, m: &Mon) -> Option<usize> {
        let mask = m.mask();
        let mut best: Option<usize> = None;
        for i in 0..self.polys.len() {
            if self.masks[i] & !mask != 0 || !self.lm(i).divides(m) {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    let better = match self.lc(i).cmp(self.lc(b)) {
                        Ordering::Less => true,
                        Ordering::Equal => self.polys[i].len() < self.polys[b].len(),
                        Ordering::Greater => false,
                    };
                    Some(if better { i } else { b })
                }
            };
        }
        best
    }
}

/// `f - q * s * g`, merging in descending order.
fn sub_mul<D: Domain>(d: &D, ctx: &Ctx, f: &[(Mon, D::C)], q: &D::C, s: &Mon, g: &[(Mon, D::C)]) -> Poly<D::C> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let next_g = |j: usize| -> (Mon, D::C) { (g[j].0.shifted(s), d.mul(q, &g[j].1)) };
    let mut gj = if g.is_empty() { None } else { Some(next_g(0)) };
    while i < f.len() {
        let Some((gm, gc)) = &gj else { break };
        match ctx.cmp(&f[i].0, gm) {
            Ordering::Greater => {
                out.push(f[i].clone());
                i += 1;
            }
            Ordering::Less => {
                if !d.is_zero(gc) {
                    out.push((gm.clone(), d.neg(gc)));
                }
                j += 1;
                gj = (j < g.len()).then(|| next_g(j));
            }
            Ordering::Equal => {
                let c = d.sub(&f[i].1, gc);
                if !d.is_zero(&c) {
                    out.push((f[i].0.clone(), c));
                }
                i += 1;
                j += 1;
                gj = (j < g.len()).then(|| next_g(j));
            }
        }
    }
    out.extend_from_slice(&f[i..]);
    while let Some((gm, gc)) = gj {
        if !d.is_zero(&gc) {
            out.push((gm, d.neg(&gc)));
        }
        j += 1;
        gj = (j < g.len()).then(|| next_g(j));
    }
    out
}

fn scale<D: Domain>(d: &D, f: &[(Mon, D::C)], c: &D::C) -> Poly<D::C> {
    f.iter()
        .filter_map(|(m, x)| {
            let y = d.mul(x, c);
            (!d.is_zero(&y)).then(|| (m.clone(), y))
        })
        .collect()
}

/// Reduces `f` by `basis`. With `full == false` only the leading term is
/// reduced (until it becomes irreducible).
pub(crate) fn reduce<D: Domain>(d: &D, ctx: &Ctx, basis: &Basis<D::C>, f: Poly<D::C>, full: bool) -> Poly<D::C> {
    let mut out: Poly<D::C> = Vec::new();
    let mut rest = f;
    let mut start = 0;
    while start < rest.len() {
        let (m, c) = &rest[start];
        if let Some(g) = basis.find_reducer(m) {
            let (q, r) = d.quo_rem(c, basis.lc(g));
            if &r != c {
                let s = m.quotient(basis.lm(g));
                rest = sub_mul(d, ctx, &rest[start..], &q, &s, &basis.polys[g]);
                start = 0;
                continue;
            }
        }
        if !full {
            out.extend_from_slice(&rest[start..]);
            return out;
        }
        out.push(rest[start].clone());
        start += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Task {
    deg: u32,
    lcm: SmallVec<[u16; 8]>,
    comp: u8,
    kind: u8,
    i: usize,
    j: usize,
}

const INPUT: u8 = 0;
const ANNIHILATOR: u8 = 1;
const SPOLY: u8 = 2;
const GPOLY: u8 = 3;

pub(crate) struct Engine<'d, D: Domain> {
    d: &'d D,
    ctx: Ctx,
    module: bool,
    budget: Budget,
    pub basis: Basis<D::C>,
    inputs: Vec<Option<Poly<D::C>>>,
    queue: BinaryHeap<Reverse<Task>>,
    pending: HashMap<(usize, usize), Mon>,
    processed: usize,
}

pub(crate) enum Outcome {
    Complete,
    Stopped,
}

impl<'d, D: Domain> Engine<'d, D> {
    pub fn new(d: &'d D, order: MonomialOrder, module: bool, budget: Budget) -> Self {
        Engine {
            d,
            ctx: Ctx { order },
            module,
            budget,
            basis: Basis::new(),
            inputs: Vec::new(),
            queue: BinaryHeap::new(),
            pending: HashMap::new(),
            processed: 0,
        }
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    /// Adds elements already forming a (strong) Gröbner basis with normalised
    /// leading coefficients; no pairs among them are generated.
    pub fn add_basis(&mut self, polys: Vec<Poly<D::C>>) {
        for p in polys {
            if !p.is_empty() {
                self.basis.push(p);
            }
        }
    }

    pub fn add_input(&mut self, p: Poly<D::C>) {
        if p.is_empty() {
            return;
        }
        let lm = &p[0].0;
        self.queue.push(Reverse(Task {
            deg: lm.deg,
            lcm: lm.e.clone(),
            comp: lm.comp,
            kind: INPUT,
            i: self.inputs.len(),
            j: 0,
        }));
        self.inputs.push(Some(p));
    }

    /// Runs the completion. `hook` sees each new basis element and may stop
    /// the computation by returning `true`.
    pub fn run(&mut self, mut hook: impl FnMut(&Poly<D::C>) -> bool) -> Result<Outcome> {
        let d = self.d;
        while let Some(Reverse(task)) = self.queue.pop() {
            let poly = match task.kind {
                INPUT => self.inputs[task.i].take().unwrap(),
                ANNIHILATOR => {
                    let a = d.annihilator(self.basis.lc(task.i)).unwrap();
                    scale(d, &self.basis.polys[task.i], &a)
                }
                SPOLY => {
                    if self.pending.remove(&(task.i, task.j)).is_none() {
                        continue;
                    }
                    self.spoly(task.i, task.j)
                }
                _ => self.gpoly(task.i, task.j),
            };
            self.processed += 1;
            if self.processed > self.budget.max_pairs {
                return Err(Error::Budget(format!(
                    "more than {} critical pairs processed",
                    self.budget.max_pairs
                )));
            }
            let h = reduce(d, &self.ctx, &self.basis, poly, false);
            if h.is_empty() {
                continue;
            }
            let h = reduce(d, &self.ctx, &self.basis, h, true);
            let u = d.normalizer(&h[0].1);
            let h = if u == d.one() { h } else { scale(d, &h, &u) };
            let deg = h.iter().map(|(m, _)| m.deg).max().unwrap();
            if deg > self.budget.max_degree {
                return Err(Error::Budget(format!(
                    "basis element of degree {deg} exceeds the cap {}",
                    self.budget.max_degree
                )));
            }
            let stop = hook(&h);
            self.insert(h);
            if stop {
                return Ok(Outcome::Stopped);
            }
        }
        Ok(Outcome::Complete)
    }

    fn lcm_coeff(&self, i: usize, j: usize) -> D::C {
        let (u, _) = self.d.lcm_cofactors(self.basis.lc(i), self.basis.lc(j));
        self.d.mul(&u, self.basis.lc(i))
    }

    /// Chain criterion: `k` makes the pair `(i, j)` with lcm `l` redundant.
    fn chain_kills(&self, i: usize, j: usize, k: usize, l: &Mon, lc: &D::C) -> bool {
        let mk = self.basis.lm(k);
        mk.divides(l)
            && self.d.divides(self.basis.lc(k), lc)
            && &mk.lcm(self.basis.lm(i)) != l
            && &mk.lcm(self.basis.lm(j)) != l
    }

    fn insert(&mut self, h: Poly<D::C>) {
        let d = self.d;
        let idx = self.basis.len();
        self.basis.push(h);
        let lm_h = self.basis.lm(idx).clone();

        // drop pending pairs the new element makes redundant
        let mut dead = Vec::new();
        for (&(i, j), l) in &self.pending {
            if self.chain_kills(i, j, idx, l, &self.lcm_coeff(i, j)) {
                dead.push((i, j));
            }
        }
        for key in dead {
            self.pending.remove(&key);
        }

        let mut seen_lcms: Vec<Mon> = Vec::new();
        for i in 0..idx {
            let lm_i = self.basis.lm(i);
            if lm_i.comp != lm_h.comp {
                continue;
            }
            let l = lm_i.lcm(&lm_h);
            if l.deg > self.budget.max_degree {
                continue;
            }
            let (lc_i, lc_h) = (self.basis.lc(i), self.basis.lc(idx));
            if d.gcd_cofactors(lc_i, lc_h).is_some() {
                self.queue.push(Reverse(Task {
                    deg: l.deg,
                    lcm: l.e.clone(),
                    comp: l.comp,
                    kind: GPOLY,
                    i,
                    j: idx,
                }));
            }
            if !self.module && lm_i.coprime(&lm_h) && d.product_criterion_ok(lc_i, lc_h) {
                continue;
            }
            let lc = self.lcm_coeff(i, idx);
            if (0..idx).any(|k| k != i && self.chain_kills(i, idx, k, &l, &lc)) {
                continue;
            }
            // over a field one pair per distinct lcm with the new element suffices
            if d.is_field() && !self.module && seen_lcms.contains(&l) {
                continue;
            }
            seen_lcms.push(l.clone());
            self.queue.push(Reverse(Task {
                deg: l.deg,
                lcm: l.e.clone(),
                comp: l.comp,
                kind: SPOLY,
                i,
                j: idx,
            }));
            self.pending.insert((i, idx), l);
        }
        if d.annihilator(self.basis.lc(idx)).is_some() {
            self.queue.push(Reverse(Task {
                deg: lm_h.deg,
                lcm: lm_h.e.clone(),
                comp: lm_h.comp,
                kind: ANNIHILATOR,
                i: idx,
                j: 0,
            }));
        }
    }

    fn spoly(&self, i: usize, j: usize) -> Poly<D::C> {
        let d = self.d;
        let (gi, gj) = (&self.basis.polys[i], &self.basis.polys[j]);
        let l = gi[0].0.lcm(&gj[0].0);
        let (u, v) = d.lcm_cofactors(&gi[0].1, &gj[0].1);
        let si = l.quotient(&gi[0].0);
        let sj = l.quotient(&gj[0].0);
        let first: Poly<D::C> = gi
            .iter()
            .filter_map(|(m, c)| {
                let x = d.mul(c, &u);
                (!d.is_zero(&x)).then(|| (m.shifted(&si), x))
            })
            .collect();
        sub_mul(d, &self.ctx, &first, &v, &sj, gj)
    }

    fn gpoly(&self, i: usize, j: usize) -> Poly<D::C> {
        let d = self.d;
        let (gi, gj) = (&self.basis.polys[i], &self.basis.polys[j]);
        let l = gi[0].0.lcm(&gj[0].0);
        let (s, t) = d.gcd_cofactors(&gi[0].1, &gj[0].1).unwrap();
        let si = l.quotient(&gi[0].0);
        let sj = l.quotient(&gj[0].0);
        let first: Poly<D::C> = gi
            .iter()
            .filter_map(|(m, c)| {
                let x = d.mul(c, &s);
                (!d.is_zero(&x)).then(|| (m.shifted(&si), x))
            })
            .collect();
        sub_mul(d, &self.ctx, &first, &d.neg(&t), &sj, gj)
    }

    /// Interreduced, minimal basis sorted by increasing leading term.
    pub fn reduced(self) -> Vec<Poly<D::C>> {
        reduce_basis(self.d, &self.ctx, self.basis.polys)
    }
}

pub(crate) fn reduce_basis<D: Domain>(d: &D, ctx: &Ctx, mut polys: Vec<Poly<D::C>>) -> Vec<Poly<D::C>> {
    polys.retain(|p| !p.is_empty());
    polys.sort_by(|a, b| ctx.cmp(&a[0].0, &b[0].0).then_with(|| a[0].1.cmp(&b[0].1)));
    let mut kept: Vec<Poly<D::C>> = Vec::new();
    for p in polys {
        let redundant = kept
            .iter()
            .any(|k| k[0].0.divides(&p[0].0) && d.divides(&k[0].1, &p[0].1));
        if !redundant {
            kept.push(p);
        }
    }
    let reducers = Basis::from_polys(kept.clone());
    kept.into_iter()
        .map(|p| {
            let tail = reduce(d, ctx, &reducers, p[1..].to_vec(), true);
            let mut out = vec![p[0].clone()];
            out.extend(tail);
            out
        })
        .collect()
}

/// Every pair polynomial of `basis` reduces to zero, and so does every
/// annihilator polynomial: the strong Gröbner basis criterion.
pub(crate) fn is_groebner<D: Domain>(d: &D, ctx: &Ctx, basis: &[Poly<D::C>]) -> bool {
    let b = Basis::from_polys(basis.to_vec());
    let budget = Budget { max_pairs: usize::MAX, max_degree: u32::MAX };
    let mut eng = Engine::new(d, ctx.order, false, budget);
    eng.ctx = *ctx;
    eng.basis = Basis::from_polys(basis.to_vec());
    for i in 0..basis.len() {
        if let Some(a) = d.annihilator(&basis[i][0].1) {
            if !reduce(d, ctx, &b, scale(d, &basis[i], &a), true).is_empty() {
                return false;
            }
        }
        for j in i + 1..basis.len() {
            if basis[i][0].0.comp != basis[j][0].0.comp {
                continue;
            }
            if !reduce(d, ctx, &b, eng.spoly(i, j), true).is_empty() {
                return false;
            }
            if d.gcd_cofactors(&basis[i][0].1, &basis[j][0].1).is_some()
                && !reduce(d, ctx, &b, eng.gpoly(i, j), true).is_empty()
            {
                return false;
            }
        }
    }
    true
}

pub(crate) fn normalize<D: Domain>(d: &D, f: Poly<D::C>) -> Poly<D::C> {
    match f.first() {
        None => f,
        Some((_, c)) => {
            let u = d.normalizer(c);
            scale(d, &f, &u)
        }
    }
}
