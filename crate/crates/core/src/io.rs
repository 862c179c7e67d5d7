//! JSON documents: instance files read by the CLI and the result documents
//! it prints. Rationals are always written as `"p/q"` strings (`"p"` when
//! the denominator is 1); on input bare JSON integers are accepted too.

use std::fmt;

use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lp::FarkasCertificate;
use crate::multifunction::{
    AuditReport, GraphMultifunction, Sample, SampledMultifunction, Violation,
};
use crate::polytope::{AffineMap, VPolytope};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::selection::{
    Datum, IntervalSelection, LocalSelection, SelectionOutcome, SelectionStatus, SpotCheck,
    VerificationReport,
};

/// A rational carried through JSON as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = RationalText;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<RationalText, E> {
                Err(E::custom(format!(
                    "decimal {v} is not exact; write it as \"p/q\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RationalText, E> {
                parse_rational(v).map(RationalText).map_err(|e| match e {
                    Error::Input(msg) => E::custom(msg),
                    other => E::custom(other),
                })
            }
        }

        d.deserialize_any(RationalVisitor)
    }
}

fn texts(v: &[Rational]) -> Vec<RationalText> {
    v.iter().cloned().map(RationalText).collect()
}

fn rationals(v: Vec<RationalText>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub point: Vec<RationalText>,
    pub value: Vec<Vec<RationalText>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDoc {
    pub point: Vec<RationalText>,
    pub value: RationalText,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub n: usize,
    pub m: usize,
    pub graph_vertices: Vec<Vec<RationalText>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledDoc {
    pub n: usize,
    pub m: usize,
    pub samples: Vec<SampleDoc>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub inner_approximation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SandwichDoc {
    pub n: usize,
    pub lower: Vec<DatumDoc>,
    pub upper: Vec<DatumDoc>,
}

/// On-disk instance format, discriminated by the `kind` field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceDocument {
    Graph(GraphDoc),
    Sampled(SampledDoc),
    Sandwich(SandwichDoc),
}

/// An instance after validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(GraphMultifunction),
    Sampled(SampledMultifunction),
    Sandwich {
        lower: Vec<Datum>,
        upper: Vec<Datum>,
    },
}

impl From<&GraphMultifunction> for InstanceDocument {
    fn from(g: &GraphMultifunction) -> Self {
        InstanceDocument::Graph(GraphDoc {
            n: g.n(),
            m: g.m(),
            graph_vertices: g.graph().vertices().iter().map(|v| texts(v)).collect(),
        })
    }
}

impl From<&SampledMultifunction> for InstanceDocument {
    fn from(s: &SampledMultifunction) -> Self {
        InstanceDocument::Sampled(SampledDoc {
            n: s.n(),
            m: s.m(),
            samples: s
                .samples()
                .iter()
                .map(|x| SampleDoc {
                    point: texts(&x.point),
                    value: x.value.vertices().iter().map(|v| texts(v)).collect(),
                })
                .collect(),
            inner_approximation: s.is_inner_approximation(),
        })
    }
}

impl From<&Instance> for InstanceDocument {
    fn from(i: &Instance) -> Self {
        match i {
            Instance::Graph(g) => g.into(),
            Instance::Sampled(s) => s.into(),
            Instance::Sandwich { lower, upper } => {
                let doc = |d: &[Datum]| {
                    d.iter()
                        .map(|(p, v)| DatumDoc {
                            point: texts(p),
                            value: RationalText(v.clone()),
                        })
                        .collect()
                };
                InstanceDocument::Sandwich(SandwichDoc {
                    n: lower.first().map_or(0, |d| d.0.len()),
                    lower: doc(lower),
                    upper: doc(upper),
                })
            }
        }
    }
}

fn located(field: &str, e: Error) -> Error {
    match e {
        Error::Input(msg) => Error::Input(format!("{field}: {msg}")),
        other => other,
    }
}

impl InstanceDocument {
    /// Re-checks every invariant and builds the in-memory instance.
    pub fn into_instance(self) -> Result<Instance> {
        match self {
            InstanceDocument::Graph(GraphDoc {
                n,
                m,
                graph_vertices,
            }) => {
                let verts = graph_vertices.into_iter().map(rationals).collect();
                let graph =
                    VPolytope::new(n + m, verts).map_err(|e| located("graph_vertices", e))?;
                Ok(Instance::Graph(GraphMultifunction::new(n, m, graph)?))
            }
            InstanceDocument::Sampled(SampledDoc {
                n,
                m,
                samples,
                inner_approximation,
            }) => {
                let mut out = Vec::with_capacity(samples.len());
                for (i, s) in samples.into_iter().enumerate() {
                    let value = VPolytope::new(m, s.value.into_iter().map(rationals).collect())
                        .map_err(|e| located(&format!("samples[{i}].value"), e))?;
                    out.push(Sample {
                        point: rationals(s.point),
                        value,
                    });
                }
                let sampled = SampledMultifunction::new(n, m, out)?;
                Ok(Instance::Sampled(
                    sampled.with_inner_approximation(inner_approximation),
                ))
            }
            InstanceDocument::Sandwich(SandwichDoc { n, lower, upper }) => {
                let data = |name: &str, docs: Vec<DatumDoc>| -> Result<Vec<Datum>> {
                    docs.into_iter()
                        .enumerate()
                        .map(|(i, d)| {
                            if d.point.len() != n {
                                return Err(Error::input(format!(
                                    "{name}[{i}].point has length {}, expected {n}",
                                    d.point.len()
                                )));
                            }
                            Ok((rationals(d.point), d.value.0))
                        })
                        .collect()
                };
                let lower = data("lower", lower)?;
                let upper = data("upper", upper)?;
                if lower.is_empty() || upper.is_empty() {
                    return Err(Error::input("lower and upper must both be nonempty"));
                }
                Ok(Instance::Sandwich { lower, upper })
            }
        }
    }
}

fn from_value<T: for<'de> Deserialize<'de>>(value: Value, what: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::Input(format!("{what}: {inner}"))
        } else {
            Error::Input(format!("{what} field {path}: {inner}"))
        }
    })
}

fn parse_value(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{what}: {e}")))
}

impl InstanceDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut value = parse_value(text, "instance")?;
        let kind = match value.as_object_mut().map(|o| o.remove("kind")) {
            Some(Some(Value::String(kind))) => kind,
            Some(_) => return Err(Error::input("instance field kind: missing or not a string")),
            None => return Err(Error::input("instance: expected a JSON object")),
        };
        match kind.as_str() {
            "graph" => Ok(InstanceDocument::Graph(from_value(value, "instance")?)),
            "sampled" => Ok(InstanceDocument::Sampled(from_value(value, "instance")?)),
            "sandwich" => Ok(InstanceDocument::Sandwich(from_value(value, "instance")?)),
            other => Err(Error::Input(format!(
                "instance field kind: unknown kind {other:?}, expected graph, sampled or sandwich"
            ))),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    InstanceDocument::from_json(text)?.into_instance()
}

pub fn instance_to_json(instance: &Instance) -> String {
    to_pretty(&InstanceDocument::from(instance))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub n: usize,
    pub m: usize,
    pub matrix: Vec<Vec<RationalText>>,
    pub offset: Vec<RationalText>,
}

impl From<&AffineMap> for MapDoc {
    fn from(map: &AffineMap) -> Self {
        MapDoc {
            n: map.domain_dim(),
            m: map.codomain_dim(),
            matrix: map.matrix().iter().map(|r| texts(r)).collect(),
            offset: texts(map.offset()),
        }
    }
}

impl MapDoc {
    pub fn into_map(self) -> Result<AffineMap> {
        if self.offset.len() != self.m || self.matrix.len() != self.m {
            return Err(Error::input(format!(
                "map: matrix and offset must have {} rows",
                self.m
            )));
        }
        if let Some(r) = self.matrix.iter().position(|row| row.len() != self.n) {
            return Err(Error::input(format!(
                "map field matrix[{r}] must have length {}",
                self.n
            )));
        }
        AffineMap::with_dims(
            self.n,
            self.matrix.into_iter().map(rationals).collect(),
            rationals(self.offset),
        )
    }
}

/// Reads a map document, either bare or as the `map` field of a selection
/// result.
pub fn parse_map(text: &str) -> Result<AffineMap> {
    let mut value = parse_value(text, "map")?;
    if let Some(inner) = value.get_mut("map") {
        value = inner.take();
    }
    from_value::<MapDoc>(value, "map")?.into_map()
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateDoc {
    pub rows: Vec<RationalText>,
    pub bounds: Vec<RationalText>,
    pub verified: bool,
}

impl CertificateDoc {
    pub fn new(cert: &FarkasCertificate, verified: bool) -> Self {
        Self {
            rows: texts(&cert.rows),
            bounds: texts(&cert.bounds),
            verified,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpotCheckDoc {
    pub point: Vec<RationalText>,
    pub value: Vec<RationalText>,
    pub member: bool,
}

impl From<&SpotCheck> for SpotCheckDoc {
    fn from(c: &SpotCheck) -> Self {
        Self {
            point: texts(&c.point),
            value: texts(&c.value),
            member: c.member,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeDoc {
    pub kind: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<MapDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    pub spot_checks: Vec<SpotCheckDoc>,
}

impl OutcomeDoc {
    /// `certificate_verified` is the result of re-checking the certificate
    /// against the LP that produced it; ignored for found outcomes.
    pub fn new(outcome: &SelectionOutcome, certificate_verified: bool) -> Self {
        Self {
            kind: "selection_outcome",
            status: match outcome.status {
                SelectionStatus::Found => "found",
                SelectionStatus::NoneExists => "none_exists",
            },
            map: outcome.map.as_ref().map(MapDoc::from),
            certificate: outcome
                .certificate
                .as_ref()
                .map(|c| CertificateDoc::new(c, certificate_verified)),
            spot_checks: outcome.spot_checks.iter().map(SpotCheckDoc::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationDoc {
    pub kind: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub passed: bool,
    pub failed_points: Vec<SpotCheckDoc>,
}

impl From<&VerificationReport> for VerificationDoc {
    fn from(r: &VerificationReport) -> Self {
        Self {
            kind: "verification_report",
            trials: r.trials,
            failures: r.failures,
            passed: r.passed(),
            failed_points: r
                .checks
                .iter()
                .filter(|c| !c.member)
                .map(SpotCheckDoc::from)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalSelectionDoc {
    pub kind: &'static str,
    pub center: Vec<RationalText>,
    pub simplex: Vec<Vec<RationalText>>,
    pub map: MapDoc,
    pub shrink_exponent: u32,
    pub verification: VerificationDoc,
}

impl From<&LocalSelection> for LocalSelectionDoc {
    fn from(l: &LocalSelection) -> Self {
        Self {
            kind: "local_selection",
            center: texts(&l.center),
            simplex: l.simplex.vertices().iter().map(|v| texts(v)).collect(),
            map: MapDoc::from(&l.map),
            shrink_exponent: l.shrink_exponent,
            verification: VerificationDoc::from(&l.verification),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationDoc {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub t: RationalText,
    pub witness: Vec<RationalText>,
}

impl From<&Violation> for ViolationDoc {
    fn from(v: &Violation) -> Self {
        Self {
            i: v.i,
            j: v.j,
            k: v.k,
            t: RationalText(v.t.clone()),
            witness: texts(&v.witness),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditDoc {
    pub checked_triples: usize,
    pub passed: bool,
    pub violations: Vec<ViolationDoc>,
}

impl From<&AuditReport> for AuditDoc {
    fn from(r: &AuditReport) -> Self {
        Self {
            checked_triples: r.checked_triples,
            passed: r.passed,
            violations: r.violations.iter().map(ViolationDoc::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditPairDoc {
    pub kind: &'static str,
    pub inner_approximation: bool,
    pub convexity: AuditDoc,
    pub intersection: AuditDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalSelectionDoc {
    pub kind: &'static str,
    pub outcome: OutcomeDoc,
    pub intersection_audit: AuditDoc,
}

impl IntervalSelectionDoc {
    pub fn new(sel: &IntervalSelection, certificate_verified: bool) -> Self {
        Self {
            kind: "interval_selection",
            outcome: OutcomeDoc::new(&sel.outcome, certificate_verified),
            intersection_audit: AuditDoc::from(&sel.intersection_audit),
        }
    }
}

/// Copy of `value` with every rational string replaced by its nearest
/// `f64`, for human reading only.
pub fn approximate(value: &Value) -> Value {
    match value {
        Value::String(s) => match parse_rational(s) {
            Ok(r) => r
                .to_f64()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or_else(|| value.clone()),
            Err(_) => value.clone(),
        },
        Value::Array(items) => Value::Array(items.iter().map(approximate).collect()),
        Value::Object(map) => Value::Object(
            map.iter()
                .map(|(k, v)| (k.clone(), approximate(v)))
                .collect(),
        ),
        other => other.clone(),
    }
}
