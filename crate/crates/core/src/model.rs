//! The JSON model-file format: one file per bad prime, carrying the patches
//! of a regular model, its special fibre, per-component charts, a basis of
//! differentials and optionally the big period matrix.
//!
//! Structural problems (bad JSON, unknown ids, unparsable polynomials,
//! missing blocks) are reported as [`Error::Schema`]; everything else is left
//! to the mathematical layers.
//!
//! ```
//! use bsdkit::model::ModelFile;
//!
//! let m = ModelFile::from_json(r#"{
//!     "p": 2,
//!     "patches": [{"id": "U", "variables": ["x", "y"], "equations": ["y^2 - x^2 + 2*x + 2"]}],
//!     "special_fibre": {
//!         "components": [{"id": "C", "patch": "U", "prime_ideal": ["x + y", "2"], "multiplicity": 2}],
//!         "intersections": [[0]]
//!     }
//! }"#).unwrap();
//! let locus = m.locus("C").unwrap();
//! let two = locus.ring().parse("2").unwrap();
//! let ord = bsdkit::vanishing::vanishing_order(&two, &locus, Default::default(), 8).unwrap();
//! assert_eq!(ord.order, 2);
//! ```

use std::collections::HashSet;
use std::fmt::Display;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::compgroup::{Component, SpecialFibre};
use crate::finite_field::GaloisField;
use crate::groebner::Ideal;
use crate::periods::{enumerate_points, to_dx, BigPeriodMatrix, ComponentChart, Differential, DifferentialRep, SamplePoint};
use crate::polyring::{CoefficientRing, PolyRing, Polynomial};
use crate::vanishing::{ComponentLocus, Mode};
use crate::{Error, Result};

/// Cap on exhaustively enumerated sample points per chart.
pub const POINT_LIMIT: usize = 100_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub p: u64,
    #[serde(default)]
    pub genus: Option<usize>,
    #[serde(default)]
    pub patches: Vec<PatchSpec>,
    #[serde(default)]
    pub special_fibre: Option<FibreSpec>,
    #[serde(default)]
    pub charts: Vec<ChartSpec>,
    #[serde(default)]
    pub differentials: Vec<Vec<RepSpec>>,
    #[serde(default)]
    pub period_matrix: Option<Vec<Vec<(String, String)>>>,
    #[serde(default)]
    pub real_components: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    pub id: String,
    pub variables: Vec<String>,
    pub equations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibreSpec {
    pub components: Vec<ComponentSpec>,
    pub intersections: Vec<Vec<i64>>,
    /// Image of each component under Frobenius, by id; identity if absent.
    #[serde(default)]
    pub frobenius: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub id: String,
    #[serde(default)]
    pub patch: Option<String>,
    #[serde(default)]
    pub prime_ideal: Vec<String>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub component: String,
    #[serde(default = "one")]
    pub generator_numerator: String,
    #[serde(default = "one")]
    pub generator_denominator: String,
    #[serde(default)]
    pub sample_points: Option<PointsSpec>,
}

/// Points over `GF(p^field_degree)` (default modulus). Without `points`, all
/// points of the component over that field are enumerated.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsSpec {
    #[serde(default = "one_usize")]
    pub field_degree: usize,
    #[serde(default)]
    pub points: Option<Vec<Vec<Coordinate>>>,
}

/// A field element: an integer, or its coordinates in the power basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Int(i64),
    Vector(Vec<i64>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub patch: String,
    pub numerator: String,
    #[serde(default = "one")]
    pub denominator: String,
    #[serde(default)]
    pub base: crate::periods::Base,
}

/// A standalone period-matrix file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub period_matrix: Vec<Vec<(String, String)>>,
    #[serde(default = "one_u32")]
    pub real_components: u32,
}

fn one() -> String {
    "1".into()
}

fn one_usize() -> usize {
    1
}

fn one_u32() -> u32 {
    1
}

fn schema(context: impl Display) -> impl Fn(Error) -> Error {
    move |e| Error::Schema(format!("{context}: {e}"))
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn matrix(&self) -> Result<BigPeriodMatrix> {
        parse_matrix(&self.period_matrix)
    }
}

fn parse_matrix(rows: &[Vec<(String, String)>]) -> Result<BigPeriodMatrix> {
    let pairs: Vec<Vec<(&str, &str)>> =
        rows.iter().map(|r| r.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()).collect();
    BigPeriodMatrix::from_decimal_pairs(&pairs).map_err(schema("period_matrix"))
}

impl ModelFile {
    /// Parses and validates the structure of a model file.
    pub fn from_json(text: &str) -> Result<Self> {
        let model: ModelFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    /// Ids are unique and resolve, matrices have the right shapes, and every
    /// polynomial parses over ℤ in its patch variables.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Schema(m));
        let mut ids = HashSet::new();
        for patch in &self.patches {
            if !ids.insert(patch.id.as_str()) {
                return bad(format!("duplicate patch id `{}`", patch.id));
            }
            let ring = self.patch_ring(&patch.id)?;
            for eq in &patch.equations {
                ring.parse(eq).map_err(schema(format!("patch `{}`", patch.id)))?;
            }
        }
        if let Some(fibre) = &self.special_fibre {
            let n = fibre.components.len();
            let mut comp_ids = HashSet::new();
            for c in &fibre.components {
                if !comp_ids.insert(c.id.as_str()) {
                    return bad(format!("duplicate component id `{}`", c.id));
                }
                if let Some(patch) = &c.patch {
                    let ring = self.patch_ring(patch)?;
                    for g in &c.prime_ideal {
                        ring.parse(g).map_err(schema(format!("component `{}`", c.id)))?;
                    }
                } else if !c.prime_ideal.is_empty() {
                    return bad(format!("component `{}` has a prime ideal but no patch", c.id));
                }
            }
            if fibre.intersections.len() != n || fibre.intersections.iter().any(|r| r.len() != n) {
                return bad(format!("intersection matrix must be {n} × {n}"));
            }
            if let Some(frob) = &fibre.frobenius {
                if frob.len() != n {
                    return bad(format!("frobenius lists {} images for {n} components", frob.len()));
                }
                if let Some(x) = frob.iter().find(|x| !comp_ids.contains(x.as_str())) {
                    return bad(format!("frobenius refers to unknown component `{x}`"));
                }
            }
            for chart in &self.charts {
                let comp = self.component(&chart.component)?;
                let ring = self.component_ring(comp)?;
                for g in [&chart.generator_numerator, &chart.generator_denominator] {
                    ring.parse(g).map_err(schema(format!("chart for `{}`", chart.component)))?;
                }
            }
        } else if !self.charts.is_empty() {
            return bad("charts given without a special_fibre block".into());
        }
        for (i, diff) in self.differentials.iter().enumerate() {
            if diff.is_empty() {
                return bad(format!("differential {i} has no representations"));
            }
            for rep in diff {
                let ring = self.patch_ring(&rep.patch)?;
                for f in [&rep.numerator, &rep.denominator] {
                    ring.parse(f).map_err(schema(format!("differential {i} on `{}`", rep.patch)))?;
                }
            }
        }
        if let (Some(g), false) = (self.genus, self.differentials.is_empty()) {
            if self.differentials.len() != g {
                return bad(format!("genus {g} but {} differentials", self.differentials.len()));
            }
        }
        if let Some(rows) = &self.period_matrix {
            let m = parse_matrix(rows)?;
            if self.genus.is_some_and(|g| g != m.genus()) {
                return bad(format!("period matrix has genus {}, model says {:?}", m.genus(), self.genus));
            }
        }
        Ok(())
    }

    fn patch(&self, id: &str) -> Result<&PatchSpec> {
        self.patches
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| Error::Schema(format!("unknown patch `{id}`")))
    }

    pub fn fibre(&self) -> Result<&FibreSpec> {
        self.special_fibre.as_ref().ok_or_else(|| Error::Schema("missing special_fibre block".into()))
    }

    fn component(&self, id: &str) -> Result<&ComponentSpec> {
        self.fibre()?
            .components
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::Schema(format!("unknown component `{id}`")))
    }

    fn component_ring(&self, c: &ComponentSpec) -> Result<PolyRing> {
        let patch = c.patch.as_ref().ok_or_else(|| Error::Schema(format!("component `{}` has no patch", c.id)))?;
        self.patch_ring(patch)
    }

    /// `ℤ[variables]` for a patch, in grevlex.
    pub fn patch_ring(&self, id: &str) -> Result<PolyRing> {
        let patch = self.patch(id)?;
        PolyRing::grevlex(CoefficientRing::integers(), &patch.variables).map_err(schema(format!("patch `{id}`")))
    }

    pub fn patch_equations(&self, id: &str) -> Result<Vec<Polynomial>> {
        let ring = self.patch_ring(id)?;
        self.patch(id)?.equations.iter().map(|e| ring.parse(e).map_err(schema(format!("patch `{id}`")))).collect()
    }

    /// Parses `expr` in the ring of the patch carrying `component`.
    pub fn parse_on_component(&self, component: &str, expr: &str) -> Result<Polynomial> {
        let ring = self.component_ring(self.component(component)?)?;
        ring.parse(expr).map_err(schema(format!("function on `{component}`")))
    }

    /// The combinatorial fibre for the component-group pipeline.
    pub fn special_fibre(&self) -> Result<SpecialFibre> {
        let fibre = self.fibre()?;
        let index = |id: &String| fibre.components.iter().position(|c| &c.id == id);
        let frobenius = match &fibre.frobenius {
            Some(f) => f
                .iter()
                .map(|id| index(id).ok_or_else(|| Error::Schema(format!("unknown component `{id}`"))))
                .collect::<Result<_>>()?,
            None => (0..fibre.components.len()).collect(),
        };
        let components =
            fibre.components.iter().map(|c| Component { id: c.id.clone(), multiplicity: c.multiplicity }).collect();
        Ok(SpecialFibre::new(self.p, components, fibre.intersections.clone(), frobenius))
    }

    /// `V(I) ⊂ V(J)` for a component, with `I` the prime ideal plus the
    /// patch equations.
    pub fn locus(&self, component: &str) -> Result<ComponentLocus> {
        let c = self.component(component)?;
        let patch = c.patch.as_ref().ok_or_else(|| Error::Schema(format!("component `{component}` has no patch")))?;
        if c.prime_ideal.is_empty() {
            return Err(Error::Schema(format!("component `{component}` has no prime_ideal")));
        }
        let ring = self.patch_ring(patch)?;
        let eqs = self.patch_equations(patch)?;
        let mut gens = c
            .prime_ideal
            .iter()
            .map(|g| ring.parse(g).map_err(schema(format!("component `{component}`"))))
            .collect::<Result<Vec<_>>>()?;
        gens.extend(eqs.iter().cloned());
        ComponentLocus::new(Ideal::new(&ring, eqs)?, Ideal::new(&ring, gens)?, self.p)
    }

    /// One chart per component of the fibre; a missing chart is a schema
    /// error.
    pub fn charts(&self, mode: Mode) -> Result<Vec<ComponentChart>> {
        let fibre = self.fibre()?;
        let mut out = Vec::with_capacity(fibre.components.len());
        for c in &fibre.components {
            let spec = self
                .charts
                .iter()
                .find(|ch| ch.component == c.id)
                .ok_or_else(|| Error::Schema(format!("no chart for component `{}`", c.id)))?;
            let locus = self.locus(&c.id)?;
            let num = self.parse_on_component(&c.id, &spec.generator_numerator)?;
            let den = self.parse_on_component(&c.id, &spec.generator_denominator)?;
            let points = self.sample_points(spec, &locus)?;
            let patch = c.patch.clone().unwrap_or_default();
            out.push(ComponentChart::new(c.id.clone(), patch, locus, num, den, points, mode)?);
        }
        Ok(out)
    }

    fn sample_points(&self, spec: &ChartSpec, locus: &ComponentLocus) -> Result<Vec<SamplePoint>> {
        let Some(ps) = &spec.sample_points else {
            return Ok(Vec::new());
        };
        let field = GaloisField::new(BigInt::from(self.p), ps.field_degree).map_err(schema("sample_points"))?;
        let Some(points) = &ps.points else {
            return enumerate_points(locus, &field, POINT_LIMIT);
        };
        let nvars = locus.ring().nvars();
        points
            .iter()
            .map(|pt| {
                if pt.len() != nvars {
                    return Err(Error::Schema(format!("sample point has {} coordinates, expected {nvars}", pt.len())));
                }
                let coords = pt
                    .iter()
                    .map(|c| {
                        let v: Vec<BigInt> = match c {
                            Coordinate::Int(n) => vec![BigInt::from(*n)],
                            Coordinate::Vector(v) => v.iter().map(|&n| BigInt::from(n)).collect(),
                        };
                        field.element(&v).map_err(schema("sample point"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SamplePoint { field: field.clone(), coords })
            })
            .collect()
    }

    /// The differential basis, rewritten over `dx` on every patch.
    pub fn differentials(&self) -> Result<Vec<Differential>> {
        if self.differentials.is_empty() {
            return Err(Error::Schema("missing differentials block".into()));
        }
        self.differentials
            .iter()
            .map(|reps| {
                let reps = reps
                    .iter()
                    .map(|r| {
                        let ring = self.patch_ring(&r.patch)?;
                        let parse = |s: &str| ring.parse(s).map_err(schema(format!("differential on `{}`", r.patch)));
                        let rep = DifferentialRep {
                            patch: r.patch.clone(),
                            numerator: parse(&r.numerator)?,
                            denominator: parse(&r.denominator)?,
                            base: r.base,
                        };
                        to_dx(&rep, &self.patch_equations(&r.patch)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Differential { reps })
            })
            .collect()
    }

    pub fn period_matrix(&self) -> Result<Option<BigPeriodMatrix>> {
        self.period_matrix.as_deref().map(parse_matrix).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONIC: &str = r#"{
        "p": 2,
        "genus": 1,
        "patches": [{"id": "U", "variables": ["x", "y"], "equations": ["y^2 - x^2 + 2*x + 2"]}],
        "special_fibre": {
            "components": [{"id": "C", "patch": "U", "prime_ideal": ["x + y", "2"], "multiplicity": 2}],
            "intersections": [[0]]
        },
        "charts": [{"component": "C", "generator_denominator": "y", "sample_points": {"field_degree": 2}}],
        "differentials": [[{"patch": "U", "numerator": "1", "denominator": "y"}]],
        "period_matrix": [[["2", "0"]], [["1", "3"]]],
        "real_components": 1
    }"#;

    fn edit(f: impl FnOnce(&mut serde_json::Value)) -> String {
        let mut v: serde_json::Value = serde_json::from_str(CONIC).unwrap();
        f(&mut v);
        v.to_string()
    }

    fn schema_error(text: &str) -> bool {
        matches!(ModelFile::from_json(text), Err(Error::Schema(_)))
    }

    #[test]
    fn loads_every_block() {
        let m = ModelFile::from_json(CONIC).unwrap();
        let fibre = m.special_fibre().unwrap();
        assert_eq!(fibre.frobenius, vec![0]);
        let charts = m.charts(Mode::Direct).unwrap();
        assert_eq!(charts[0].multiplicity(), 2);
        assert!(!charts[0].sample_points().is_empty());
        assert_eq!(m.differentials().unwrap().len(), 1);
        assert_eq!(m.period_matrix().unwrap().unwrap().genus(), 1);
    }

    #[test]
    fn schema_errors() {
        assert!(schema_error("{"));
        assert!(schema_error(r#"{"p": 2, "bogus": 1}"#));
        assert!(schema_error(&edit(|v| v["special_fibre"]["components"][0]["patch"] = "V".into())));
        assert!(schema_error(&edit(|v| v["patches"][0]["equations"][0] = "y^^2".into())));
        assert!(schema_error(&edit(|v| v["special_fibre"]["intersections"] = serde_json::json!([[0, 1]]))));
        assert!(schema_error(&edit(|v| v["special_fibre"]["frobenius"] = serde_json::json!(["D"]))));
        assert!(schema_error(&edit(|v| v["charts"][0]["component"] = "D".into())));
        assert!(schema_error(&edit(|v| v["genus"] = 2.into())));
        assert!(schema_error(&edit(|v| v["period_matrix"] = serde_json::json!([[["1", "0"]]]))));
        assert!(schema_error(&edit(|v| v["differentials"][0][0]["numerator"] = "z".into())));
    }

    #[test]
    fn missing_chart_is_a_schema_error() {
        let m = ModelFile::from_json(&edit(|v| v["charts"] = serde_json::json!([]))).unwrap();
        assert!(matches!(m.charts(Mode::Direct), Err(Error::Schema(_))));
    }

    #[test]
    fn explicit_points() {
        // (x, y) = (a, a) over GF(4): a root of a^2 + a + 1 satisfies x + y = 0 and the patch equation mod 2
        let text = edit(|v| {
            v["charts"][0]["sample_points"] = serde_json::json!({"field_degree": 2, "points": [[[0, 1], [0, 1]]]})
        });
        let m = ModelFile::from_json(&text).unwrap();
        assert_eq!(m.charts(Mode::Direct).unwrap()[0].sample_points().len(), 1);
        let bad = edit(|v| v["charts"][0]["sample_points"] = serde_json::json!({"points": [[1]]}));
        assert!(matches!(ModelFile::from_json(&bad).unwrap().charts(Mode::Direct), Err(Error::Schema(_))));
    }
}
