// Orders of differentials along components of the special fibre, the
// sample-point subspace that narrows the search for vanishing combinations,
// and the p-scaling loops that turn a basis into a Néron basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::differential::{Base, DifferentialRep};
use crate::arith::valuation;
use crate::finite_field::{all_elements, FieldOps, GaloisField, PrimeField};
use crate::polyring::Polynomial;
use crate::vanishing::{vanishing_order, vanishing_order_truncated, ComponentLocus, Mode, Truncated, DEFAULT_MAX_ORDER};
use crate::{Error, Result};

/// A closed point given by coordinates in `𝔽_{p^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub field: GaloisField,
    pub coords: Vec<Vec<BigInt>>,
}

/// What is needed to work on one component: its locus on a patch, a local
/// generator `d = (d_num / d_den) · dx` of the relative dualizing sheaf near
/// its generic point, and some closed points on it.
#[derive(Clone, Debug)]
pub struct ComponentChart {
    component: String,
    patch: String,
    locus: ComponentLocus,
    generator_numerator: Polynomial,
    generator_denominator: Polynomial,
    sample_points: Vec<SamplePoint>,
    multiplicity: u32,
    // ord(d_num) - ord(d_den)
    generator_order: i64,
    mode: Mode,
}

/// `f / p^v` with `v` the valuation of the content of `f`.
fn split_p(f: &Polynomial, p: &BigInt) -> (u32, Polynomial) {
    let content = f.terms().iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
    if content.is_zero() {
        return (0, f.clone());
    }
    let v = valuation(&content, p);
    if v == 0 {
        return (0, f.clone());
    }
    let q = num_traits::pow(p.clone(), v as usize);
    (v, f.ring().from_terms(f.terms().iter().map(|(m, c)| (m.clone(), c / &q))))
}

impl ComponentChart {
    /// Validates the chart and computes the multiplicity of the component.
    pub fn new(
        component: impl Into<String>,
        patch: impl Into<String>,
        locus: ComponentLocus,
        generator_numerator: Polynomial,
        generator_denominator: Polynomial,
        sample_points: Vec<SamplePoint>,
        mode: Mode,
    ) -> Result<Self> {
        let component = component.into();
        let ring = locus.ring();
        if !ring.coefficients().is_integers() {
            return Err(Error::UnsupportedRing("component charts live over ZZ".into()));
        }
        if generator_numerator.ring() != ring || generator_denominator.ring() != ring {
            return Err(Error::RingMismatch(format!("generator of `{component}` is not in the patch ring")));
        }
        for pt in &sample_points {
            if pt.field.characteristic() != locus.prime() {
                return Err(Error::InvalidArgument(format!(
                    "sample point on `{component}` lies over characteristic {}, not {}",
                    pt.field.characteristic(),
                    locus.prime()
                )));
            }
            for h in locus.patch().generators().iter().chain(locus.component().generators()) {
                if !pt.field.is_zero(&h.evaluate(&pt.field, &pt.coords)?) {
                    return Err(Error::InvalidArgument(format!(
                        "sample point {:?} is not on `{component}`: {h} does not vanish",
                        pt.coords
                    )));
                }
            }
        }
        let multiplicity = crate::vanishing::multiplicity(&locus, mode)?;
        let mut chart = ComponentChart {
            component,
            patch: patch.into(),
            locus,
            generator_numerator,
            generator_denominator,
            sample_points,
            multiplicity,
            generator_order: 0,
            mode,
        };
        chart.generator_order = chart.order(&chart.generator_numerator)? - chart.order(&chart.generator_denominator)?;
        Ok(chart)
    }

    pub fn component(&self) -> &str {
        &self.component
    }

    pub fn patch(&self) -> &str {
        &self.patch
    }

    pub fn locus(&self) -> &ComponentLocus {
        &self.locus
    }

    pub fn prime(&self) -> &BigInt {
        self.locus.prime()
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn generator(&self) -> (&Polynomial, &Polynomial) {
        (&self.generator_numerator, &self.generator_denominator)
    }

    pub fn sample_points(&self) -> &[SamplePoint] {
        &self.sample_points
    }

    /// Exact order of a polynomial along the component. The `p`-part of the
    /// content is counted as `v · multiplicity` without a chain walk.
    pub fn order(&self, f: &Polynomial) -> Result<i64> {
        let (v, rest) = split_p(f, self.prime());
        let ord = vanishing_order(&rest, &self.locus, self.mode, DEFAULT_MAX_ORDER)?;
        if !ord.exact {
            return Err(Error::Budget(format!("order of {rest} exceeds {DEFAULT_MAX_ORDER}")));
        }
        Ok(i64::from(v) * i64::from(self.multiplicity) + i64::from(ord.order))
    }

    /// Whether `ord(f) >= r`, decided over `ZZ/p^(floor(r/m)+1)`.
    pub fn order_at_least(&self, f: &Polynomial, r: i64) -> Result<bool> {
        let (v, rest) = split_p(f, self.prime());
        let r = r - i64::from(v) * i64::from(self.multiplicity);
        if r <= 0 {
            return Ok(true);
        }
        let r = u32::try_from(r).map_err(|_| Error::Budget(format!("threshold {r} is too large")))?;
        Ok(match vanishing_order_truncated(&rest, &self.locus, r, self.multiplicity, self.mode)? {
            Truncated::AtLeast(_) => true,
            Truncated::Exact(n) => n >= r,
        })
    }

    fn rep_of<'a>(&self, w: &'a Differential) -> Result<&'a DifferentialRep> {
        let rep = w.on(&self.patch).ok_or_else(|| {
            Error::InvalidArgument(format!("differential has no representation on patch `{}`", self.patch))
        })?;
        self.check_rep(rep)?;
        Ok(rep)
    }

    fn check_rep(&self, rep: &DifferentialRep) -> Result<()> {
        if rep.patch != self.patch {
            return Err(Error::InvalidArgument(format!(
                "differential on patch `{}` used with a chart on `{}`",
                rep.patch, self.patch
            )));
        }
        if rep.base != Base::Dx {
            return Err(Error::InvalidArgument("differentials must be converted to base dx first".into()));
        }
        if rep.numerator.ring() != self.locus.ring() || rep.denominator.ring() != self.locus.ring() {
            return Err(Error::RingMismatch(format!("differential is not in the ring of patch `{}`", self.patch)));
        }
        Ok(())
    }
}

/// Order of `w = (f/h) dx` along the chart's component, relative to the local
/// generator `d`: `ord(f · d_den) - ord(h · d_num)`. Negative means a pole.
pub fn differential_order_on_component(w: &DifferentialRep, chart: &ComponentChart) -> Result<i64> {
    chart.check_rep(w)?;
    Ok(chart.order(&w.numerator)? - chart.order(&w.denominator)? - chart.generator_order)
}

/// A global differential, through its representations on the patches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    pub reps: Vec<DifferentialRep>,
}

fn div_p(f: &Polynomial, p: &BigInt) -> Polynomial {
    f.ring().from_terms(f.terms().iter().map(|(m, c)| (m.clone(), c / p)))
}

fn p_divides(f: &Polynomial, p: &BigInt) -> bool {
    !f.is_zero() && f.terms().iter().all(|(_, c)| c.is_multiple_of(p))
}

impl Differential {
    pub fn on(&self, patch: &str) -> Option<&DifferentialRep> {
        self.reps.iter().find(|r| r.patch == patch)
    }

    /// `p · self`, cancelling against the denominator when possible.
    pub fn times_p(&self, p: &BigInt) -> Differential {
        let reps = self
            .reps
            .iter()
            .map(|r| {
                let (numerator, denominator) = if p_divides(&r.denominator, p) {
                    (r.numerator.clone(), div_p(&r.denominator, p))
                } else {
                    (r.numerator.scale(p), r.denominator.clone())
                };
                DifferentialRep { numerator, denominator, ..r.clone() }
            })
            .collect();
        Differential { reps }
    }

    /// `self / p` on the integral representation. When the numerator is not
    /// divisible by `p` the denominator takes the factor.
    pub fn over_p(&self, p: &BigInt) -> Differential {
        let reps = self
            .reps
            .iter()
            .map(|r| {
                let (numerator, denominator) = if p_divides(&r.numerator, p) {
                    (div_p(&r.numerator, p), r.denominator.clone())
                } else {
                    (r.numerator.clone(), r.denominator.scale(p))
                };
                DifferentialRep { numerator, denominator, ..r.clone() }
            })
            .collect();
        Differential { reps }
    }
}

/// `Σ c_j ω_j` with integer coefficients, patch by patch.
pub fn combination(diffs: &[Differential], c: &[BigInt]) -> Result<Differential> {
    if diffs.len() != c.len() || diffs.is_empty() {
        return Err(Error::InvalidArgument(format!("{} coefficients for {} differentials", c.len(), diffs.len())));
    }
    let mut reps = Vec::new();
    for first in &diffs[0].reps {
        let mut acc: Option<(Polynomial, Polynomial)> = None;
        for (w, cj) in diffs.iter().zip(c) {
            if cj.is_zero() {
                continue;
            }
            let rep = w.on(&first.patch).ok_or_else(|| {
                Error::InvalidArgument(format!("differential has no representation on patch `{}`", first.patch))
            })?;
            if rep.base != first.base {
                return Err(Error::InvalidArgument("combined differentials use different bases".into()));
            }
            let n = rep.numerator.scale(cj);
            acc = Some(match acc {
                None => (n, rep.denominator.clone()),
                Some((num, den)) if den == rep.denominator => (num.try_add(&n)?, den),
                Some((num, den)) => {
                    (num.try_mul(&rep.denominator)?.try_add(&n.try_mul(&den)?)?, den.try_mul(&rep.denominator)?)
                }
            });
        }
        let (numerator, denominator) =
            acc.ok_or_else(|| Error::InvalidArgument("combination with all coefficients zero".into()))?;
        reps.push(DifferentialRep { patch: first.patch.clone(), numerator, denominator, base: first.base });
    }
    Ok(Differential { reps })
}

/// Whether `w` is divisible by `p` in the dualizing sheaf: order at least the
/// multiplicity on every component.
pub fn vanishes_on_fibre(w: &Differential, charts: &[ComponentChart]) -> Result<bool> {
    for chart in charts {
        let rep = chart.rep_of(w)?;
        if rep.numerator.is_zero() {
            return Err(Error::Degenerate("the combination is the zero differential".into()));
        }
        let r = i64::from(chart.multiplicity) + chart.order(&rep.denominator)? + chart.generator_order;
        match chart.order_at_least(&rep.numerator, r) {
            Ok(true) => {}
            Ok(false) => return Ok(false),
            Err(Error::VanishesIdentically) => {
                return Err(Error::Degenerate(format!("the combination vanishes identically on patch `{}`", chart.patch)))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// A subspace of `𝔽_p^g`, kept as a basis in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: BigInt,
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
}

/// Most lines [`Subspace::lines`] will list.
pub const MAX_LINES: usize = 1 << 20;

fn rref(field: &PrimeField, mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, i);
        let inv = field.inv(&rows[r][c]).expect("nonzero element of a prime field");
        rows[r] = rows[r].iter().map(|x| field.mul(x, &inv)).collect();
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let q = rows[k][c].clone();
                let src = rows[r].clone();
                for (x, y) in rows[k].iter_mut().zip(&src) {
                    *x = field.sub(x, &field.mul(&q, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

impl Subspace {
    pub fn full(p: &BigInt, g: usize) -> Self {
        let basis = (0..g).map(|i| (0..g).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
        Subspace { p: p.clone(), ambient: g, basis }
    }

    /// Kernel of `rows` (entries in `0..p`) acting on column vectors.
    pub fn kernel(p: &BigInt, rows: Vec<Vec<BigInt>>, g: usize) -> Result<Self> {
        let field = PrimeField::new(p.clone())?;
        let rows = rows.into_iter().map(|r| r.iter().map(|x| field.from_int(x)).collect()).collect();
        let (h, pivots) = rref(&field, rows, g);
        let free: Vec<usize> = (0..g).filter(|c| !pivots.contains(c)).collect();
        let vectors = free
            .iter()
            .map(|&f| {
                let mut v = vec![BigInt::zero(); g];
                v[f] = BigInt::one();
                for (row, &c) in h.iter().zip(&pivots) {
                    v[c] = field.neg(&row[f]);
                }
                v
            })
            .collect();
        let (basis, _) = rref(&field, vectors, g);
        Ok(Subspace { p: p.clone(), ambient: g, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let field = PrimeField::new(self.p.clone()).expect("p was checked on construction");
        let mut rest: Vec<BigInt> = v.iter().map(|x| field.from_int(x)).collect();
        for row in &self.basis {
            let c = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            let q = rest[c].clone();
            if !q.is_zero() {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x = field.sub(x, &field.mul(&q, y));
                }
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    /// One vector per line through the origin, scaled so that its first
    /// nonzero entry is 1, in lexicographic order of basis coordinates.
    pub fn lines(&self) -> Result<Vec<Vec<BigInt>>> {
        let d = self.dim();
        let p = self.p.to_string().parse::<u64>().ok();
        let count = p.and_then(|p| (0..d as u32).try_fold(0u64, |acc, k| acc.checked_add(p.checked_pow(k)?)));
        let p = match (p, count) {
            (Some(p), Some(n)) if n as usize <= MAX_LINES => p,
            _ => return Err(Error::Budget(format!("more than {MAX_LINES} candidate combinations"))),
        };
        let mut out = Vec::new();
        for lead in 0..d {
            let tail = d - lead - 1;
            for idx in 0..p.pow(tail as u32) {
                let mut lambda = vec![0u64; d];
                lambda[lead] = 1;
                let mut rest = idx;
                for k in (lead + 1..d).rev() {
                    lambda[k] = rest % p;
                    rest /= p;
                }
                let v: Vec<BigInt> = (0..self.ambient)
                    .map(|j| {
                        let s: BigInt = lambda.iter().zip(&self.basis).map(|(&l, row)| BigInt::from(l) * &row[j]).sum();
                        s.mod_floor(&self.p)
                    })
                    .collect();
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// Sample-point shortcut: a subspace containing every `(c_j)` for which
/// `Σ c_j ω_j` vanishes on the fibre. Points where some `h_j` vanishes are
/// skipped; if none are left this is [`Error::NoSamplePoints`].
pub fn vanishing_subspace(charts: &[ComponentChart], diffs: &[Differential]) -> Result<Subspace> {
    let p = common_prime(charts)?;
    let g = diffs.len();
    let mut rows = Vec::new();
    let mut usable = 0;
    for chart in charts {
        let (dn, dd) = chart.generator();
        for pt in &chart.sample_points {
            let f = &pt.field;
            let at = |h: &Polynomial| h.evaluate(f, &pt.coords);
            let (d_num, d_den) = (at(dn)?, at(dd)?);
            let mut values = Vec::with_capacity(g);
            for w in diffs {
                let rep = chart.rep_of(w)?;
                let h = f.mul(&at(&rep.denominator)?, &d_num);
                let Some(h_inv) = f.inv(&h) else { break };
                values.push(f.mul(&f.mul(&at(&rep.numerator)?, &d_den), &h_inv));
            }
            if values.len() < g {
                continue;
            }
            usable += 1;
            let coords: Vec<Vec<BigInt>> = values.iter().map(|v| f.coordinates(v)).collect();
            for t in 0..f.degree() {
                rows.push(coords.iter().map(|c| c[t].clone()).collect());
            }
        }
    }
    if usable == 0 {
        return Err(Error::NoSamplePoints);
    }
    Subspace::kernel(p, rows, g)
}

fn common_prime(charts: &[ComponentChart]) -> Result<&BigInt> {
    let first = charts.first().ok_or_else(|| Error::InvalidArgument("no component charts".into()))?;
    if let Some(c) = charts.iter().find(|c| c.prime() != first.prime()) {
        return Err(Error::InvalidArgument(format!(
            "charts at different primes: {} and {}",
            first.prime(),
            c.prime()
        )));
    }
    Ok(first.prime())
}

/// Every point of the component over `field`, by exhaustion over
/// `field^n`. Fails if that space has more than `limit` points.
pub fn enumerate_points(locus: &ComponentLocus, field: &GaloisField, limit: usize) -> Result<Vec<SamplePoint>> {
    let n = locus.ring().nvars();
    let elements = all_elements(field);
    let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(elements.len())).filter(|&t| t <= limit);
    let Some(total) = total else {
        return Err(Error::SearchExhausted(format!("more than {limit} candidate points")));
    };
    let gens: Vec<&Polynomial> = locus.patch().generators().iter().chain(locus.component().generators()).collect();
    let mut out = Vec::new();
    for mut idx in 0..total {
        let coords: Vec<Vec<BigInt>> = (0..n)
            .map(|_| {
                let e = elements[idx % elements.len()].clone();
                idx /= elements.len();
                e
            })
            .collect();
        let mut on = true;
        for h in &gens {
            if !field.is_zero(&h.evaluate(field, &coords)?) {
                on = false;
                break;
            }
        }
        if on {
            out.push(SamplePoint { field: field.clone(), coords });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjustOptions {
    /// Use the sample-point subspace to pick candidates; otherwise every
    /// nonzero combination is tried.
    pub use_subspace: bool,
    /// Bound on `a + b`; default `4 g · (largest multiplicity)`.
    pub cap: Option<usize>,
}

impl Default for AdjustOptions {
    fn default() -> Self {
        AdjustOptions { use_subspace: true, cap: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdjustStep {
    /// `ω_index ← p · ω_index` to clear a pole.
    Multiplied { index: usize },
    /// `ω_index ← (1/p) Σ c_j ω_j` for a combination vanishing on the fibre.
    Divided { index: usize, combination: Vec<BigInt> },
}

#[derive(Clone, Debug)]
pub struct Adjustment {
    pub p: BigInt,
    pub differentials: Vec<Differential>,
    pub a: u32,
    pub b: u32,
    pub steps: Vec<AdjustStep>,
    /// Candidate combinations checked on the whole fibre.
    pub full_checks: usize,
    /// Dimension of the sample-point subspace in each round of the division
    /// loop, `None` where it fell back to every combination.
    pub subspace_dims: Vec<Option<usize>>,
}

impl Adjustment {
    /// `W_p = p^(a - b)`.
    pub fn w(&self) -> BigRational {
        super::PrimeFactor::from(self).w()
    }
}

/// Multiplies by `p` until no differential has a pole on any component, then
/// divides vanishing combinations by `p` until none is left. Returns the
/// adjusted basis and the counts `a`, `b`.
pub fn neron_basis_adjust(
    charts: &[ComponentChart],
    diffs: Vec<Differential>,
    opts: &AdjustOptions,
) -> Result<Adjustment> {
    let p = common_prime(charts)?.clone();
    let g = diffs.len();
    if g == 0 {
        return Err(Error::InvalidArgument("empty differential basis".into()));
    }
    let max_mult = charts.iter().map(|c| c.multiplicity).max().unwrap_or(1).max(1);
    let cap = opts.cap.unwrap_or(4 * g * max_mult as usize);
    let mut out = Adjustment {
        p: p.clone(),
        differentials: diffs,
        a: 0,
        b: 0,
        steps: Vec::new(),
        full_checks: 0,
        subspace_dims: Vec::new(),
    };
    let guard = |out: &Adjustment| {
        if (out.a + out.b) as usize >= cap {
            Err(Error::Divergence(cap))
        } else {
            Ok(())
        }
    };

    // poles: multiplying by p raises the order on D by its multiplicity
    for j in 0..g {
        let mut ords = charts
            .iter()
            .map(|c| differential_order_on_component(c.rep_of(&out.differentials[j])?, c))
            .collect::<Result<Vec<_>>>()?;
        while ords.iter().any(|&o| o < 0) {
            guard(&out)?;
            out.differentials[j] = out.differentials[j].times_p(&p);
            for (o, c) in ords.iter_mut().zip(charts) {
                *o += i64::from(c.multiplicity);
            }
            out.a += 1;
            out.steps.push(AdjustStep::Multiplied { index: j });
        }
    }

    // vanishing combinations
    loop {
        let (candidates, dim) = match opts.use_subspace.then(|| vanishing_subspace(charts, &out.differentials)) {
            Some(Ok(v)) => (v.lines()?, Some(v.dim())),
            Some(Err(Error::NoSamplePoints)) | None => (Subspace::full(&p, g).lines()?, None),
            Some(Err(e)) => return Err(e),
        };
        out.subspace_dims.push(dim);
        let mut found = None;
        for c in candidates {
            out.full_checks += 1;
            let w = combination(&out.differentials, &c)?;
            if vanishes_on_fibre(&w, charts)? {
                found = Some((c, w));
                break;
            }
        }
        let Some((c, w)) = found else { break };
        guard(&out)?;
        let index = c.iter().position(|x| !x.is_zero()).expect("lines are nonzero");
        out.differentials[index] = w.over_p(&p);
        out.b += 1;
        out.steps.push(AdjustStep::Divided { index, combination: c });
    }
    Ok(out)
}
