//! Command-line front end for `bsdkit`. Every command returns a JSON value;
//! errors carry the exit code they map to (2 for malformed input, 3 for
//! mathematical failures).

use std::path::{Path, PathBuf};

use bsdkit::compgroup::{checked_component_group, validate_fibre};
use bsdkit::fieldtower::{extend_inert, is_inert, subfield_property_check, ExtendOptions, NumberFieldNode};
use bsdkit::groebner::{groebner_basis, set_default_budget};
use bsdkit::model::{MatrixFile, ModelFile};
use bsdkit::periods::{assemble_period, format_decimal, neron_basis_adjust, AdjustOptions, PrimeFactor, DEFAULT_TOLERANCE};
use bsdkit::polyring::{CoefficientRing, MonomialOrder, PolyRing};
use bsdkit::vanishing::{multiplicity, vanishing_order, vanishing_order_truncated, Mode, Truncated, DEFAULT_MAX_ORDER};
use bsdkit::Error;
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use serde_json::{json, Value};

/// Environment variable overriding the Gröbner caps, as `PAIRS` or
/// `PAIRS:DEGREE`.
pub const GB_BUDGET_VAR: &str = "BSDKIT_GB_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "bsdkit", version, about = "Tamagawa numbers and real periods from regular-model data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Component group and Tamagawa number of a special fibre.
    Tamagawa {
        model: PathBuf,
        /// Expected prime; must match the model file.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Order of vanishing of a function along a fibre component.
    VanishingOrder {
        model: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long)]
        function: String,
        #[arg(long, default_value = "direct")]
        mode: Mode,
        /// Only decide whether the order is at least this, working modulo a
        /// power of p.
        #[arg(long)]
        truncate: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u32,
    },
    /// Real period from per-prime model files and a big period matrix.
    Period {
        #[arg(required = true)]
        models: Vec<PathBuf>,
        /// Period matrix file; otherwise the first model carrying one is used.
        #[arg(long)]
        matrix_file: Option<PathBuf>,
        #[arg(long, default_value = "direct")]
        mode: Mode,
        /// Digits after the decimal point in printed reals.
        #[arg(long, default_value_t = 12)]
        digits: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Try every combination in the division loop instead of the
        /// sample-point subspace.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Reduced strong Gröbner basis.
    Gb {
        /// Coefficient ring, optionally with variables: `ZZ/2^18[x,y,z]`.
        #[arg(long)]
        ring: String,
        /// Variables, comma separated, if not given with the ring.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long, default_value = "grevlex")]
        order: MonomialOrder,
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Tower of number fields with p inert and the subfield property.
    ExtendField {
        /// Degrees of the successive steps, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ell: Vec<u64>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        iters: usize,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Math(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(_) | Error::Syntax { .. } | Error::UnknownVariable(_) => CliError::Input(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> CliResult<ModelFile> {
    ModelFile::from_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Integers that fit in an `i64` print as JSON numbers, larger ones as strings.
pub fn int_json(n: &BigInt) -> Value {
    i64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn real_json(x: &BigRational, digits: usize) -> Value {
    Value::String(format_decimal(x, digits))
}

/// Reads [`GB_BUDGET_VAR`] and installs it as the process-wide Gröbner budget.
pub fn apply_budget_from_env() -> CliResult<()> {
    let Ok(text) = std::env::var(GB_BUDGET_VAR) else {
        return Ok(());
    };
    let bad = || CliError::Input(format!("{GB_BUDGET_VAR} must be PAIRS or PAIRS:DEGREE, got `{text}`"));
    let mut budget = bsdkit::groebner::default_budget();
    let (pairs, degree) = match text.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (text.as_str(), None),
    };
    budget.max_pairs = pairs.trim().parse().map_err(|_| bad())?;
    if let Some(d) = degree {
        budget.max_degree = d.trim().parse().map_err(|_| bad())?;
    }
    set_default_budget(budget);
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<Value> {
    match &cli.command {
        Command::Tamagawa { model, p } => tamagawa(model, *p),
        Command::VanishingOrder { model, component, function, mode, truncate, max_order } => {
            vanishing(model, component, function, *mode, *truncate, *max_order)
        }
        Command::Period { models, matrix_file, mode, digits, tolerance, exhaustive } => {
            period(models, matrix_file.as_deref(), *mode, *digits, *tolerance, *exhaustive)
        }
        Command::Gb { ring, vars, order, generators } => gb(ring, vars, *order, generators),
        Command::ExtendField { ell, p, seed, iters, budget } => extend_field(ell, *p, *seed, *iters, *budget),
    }
}

fn tamagawa(path: &Path, p: Option<u64>) -> CliResult<Value> {
    let model = load_model(path)?;
    if let Some(p) = p.filter(|&p| p != model.p) {
        return Err(CliError::Input(format!("--p {p} does not match the model's prime {}", model.p)));
    }
    let fibre = model.special_fibre()?;
    let problems = validate_fibre(&fibre);
    if !problems.is_empty() {
        return Err(Error::InvalidFibre(problems).into());
    }
    let group = checked_component_group(&fibre)?;
    Ok(json!({
        "p": model.p,
        "c_p": int_json(&group.fixed_points()),
        "invariant_factors": group.invariant_factors.iter().map(int_json).collect::<Vec<_>>(),
    }))
}

fn vanishing(
    path: &Path,
    component: &str,
    function: &str,
    mode: Mode,
    truncate: Option<u32>,
    max_order: u32,
) -> CliResult<Value> {
    let model = load_model(path)?;
    let locus = model.locus(component)?;
    let f = model.parse_on_component(component, function)?;
    let (order, exact) = match truncate {
        None => {
            let ord = vanishing_order(&f, &locus, mode, max_order)?;
            (ord.order, ord.exact)
        }
        Some(r) => {
            let m = multiplicity(&locus, mode)?;
            match vanishing_order_truncated(&f, &locus, r, m, mode)? {
                Truncated::Exact(n) => (n, true),
                Truncated::AtLeast(n) => (n, false),
            }
        }
    };
    Ok(json!({ "order": order, "exact": exact }))
}

fn period(
    paths: &[PathBuf],
    matrix_file: Option<&Path>,
    mode: Mode,
    digits: usize,
    tolerance: f64,
    exhaustive: bool,
) -> CliResult<Value> {
    let models = paths.iter().map(|p| load_model(p)).collect::<CliResult<Vec<_>>>()?;
    let (matrix, m_real) = match matrix_file {
        Some(path) => {
            let file = MatrixFile::from_json(&read(path)?)?;
            (file.matrix()?, file.real_components)
        }
        None => {
            let model = models
                .iter()
                .find(|m| m.period_matrix.is_some())
                .ok_or_else(|| CliError::Input("no period matrix: pass --matrix-file or add one to a model".into()))?;
            (model.period_matrix()?.expect("checked above"), model.real_components.unwrap_or(1))
        }
    };
    let opts = AdjustOptions { use_subspace: !exhaustive, ..AdjustOptions::default() };
    let mut primes: Vec<PrimeFactor> = Vec::with_capacity(models.len());
    let mut steps = serde_json::Map::new();
    for model in &models {
        if primes.iter().any(|f| f.p == BigInt::from(model.p)) {
            return Err(CliError::Input(format!("two model files for p = {}", model.p)));
        }
        let diffs = model.differentials()?;
        if diffs.len() != matrix.genus() {
            return Err(CliError::Input(format!(
                "model for p = {} has {} differentials, period matrix has genus {}",
                model.p,
                diffs.len(),
                matrix.genus()
            )));
        }
        let charts = model.charts(mode)?;
        let adj = neron_basis_adjust(&charts, diffs, &opts)?;
        steps.insert(model.p.to_string(), json!({ "a": adj.a, "b": adj.b }));
        primes.push(PrimeFactor::from(&adj));
    }
    let result = assemble_period(&matrix, primes, m_real, tolerance)?;
    let w: serde_json::Map<String, Value> =
        result.primes.iter().map(|f| (f.p.to_string(), real_json(&f.w(), digits))).collect();
    let w_exact: serde_json::Map<String, Value> =
        result.primes.iter().map(|f| (f.p.to_string(), Value::String(f.w().to_string()))).collect();
    Ok(json!({
        "precision": digits,
        "P_I": result.covolumes.iter().map(|c| json!({ "rows": c.rows, "value": real_json(&c.value, digits) })).collect::<Vec<_>>(),
        "P": real_json(&result.generator.value, digits),
        "W": w,
        "W_exact": w_exact,
        "exponents": steps,
        "real_components": m_real,
        "omega": real_json(&result.omega, digits),
        "omega_exact": result.omega.to_string(),
    }))
}

fn gb(ring: &str, vars: &[String], order: MonomialOrder, generators: &[String]) -> CliResult<Value> {
    let (coeffs, inline) = match ring.split_once('[') {
        Some((c, rest)) => {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::Input(format!("unbalanced brackets in ring `{ring}`")))?;
            (c, inner.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect())
        }
        None => (ring, Vec::new()),
    };
    let vars = match (inline.is_empty(), vars.is_empty()) {
        (false, true) => inline,
        (true, false) => vars.to_vec(),
        (true, true) => return Err(CliError::Input("no variables: use `--ring R[x,y]` or --vars".into())),
        (false, false) => return Err(CliError::Input("variables given twice".into())),
    };
    let coeffs: CoefficientRing = coeffs.parse().map_err(|e: Error| CliError::Input(e.to_string()))?;
    let ring = PolyRing::new(coeffs, &vars, order).map_err(|e| CliError::Input(e.to_string()))?;
    let gens = generators.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>, _>>()?;
    let basis = groebner_basis(&ring, &gens)?;
    Ok(json!({
        "ring": format!("{}[{}]", ring.coefficients(), vars.join(",")),
        "order": format!("{order:?}").to_lowercase(),
        "size": basis.len(),
        "basis": basis.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    }))
}

fn poly_string(coeffs: &[BigInt]) -> String {
    let ring = PolyRing::grevlex(CoefficientRing::integers(), &["x"]).expect("valid ring");
    let terms = coeffs.iter().enumerate().map(|(i, c)| (bsdkit::polyring::Monomial::from_exponents(&[i as u32]).expect("degree below the cap"), c.clone()));
    ring.from_terms(terms).to_string()
}

fn extend_field(ells: &[u64], p: u64, seed: u64, iters: usize, budget: usize) -> CliResult<Value> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let opts = ExtendOptions { budget, iterations: iters };
    let mut node = NumberFieldNode::rationals(BigInt::from(p))?;
    let mut traces = Vec::new();
    for &ell in ells {
        let ext = extend_inert(&node, ell, &opts, &mut rng)?;
        traces.push(ext.trace.iter().map(int_json).collect::<Vec<_>>());
        node = ext.field;
    }
    let audit = subfield_property_check(&node);
    let subfields: Vec<Value> = node
        .subfields
        .values()
        .map(|s| {
            json!({
                "degree": s.degree,
                "polynomial": poly_string(&s.defining_poly),
                "embedding": s.embedding.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "inert": is_inert(&s.defining_poly, &node.p).unwrap_or(false),
            })
        })
        .collect();
    Ok(json!({
        "p": p,
        "degree": node.degree,
        "polynomial": poly_string(&node.defining_poly),
        "coefficients": node.defining_poly.iter().map(int_json).collect::<Vec<_>>(),
        "tower": node.tower(),
        "subfields": subfields,
        "subfield_property": audit.ok,
        "missing": audit.missing,
        "descent_traces": traces,
    }))
}
