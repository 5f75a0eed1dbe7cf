//! JSON formats for scalars, points, matrices, group specs, regions and
//! reports.

use ford_rank1_core::ford::{
    CoveringFailure, FordRegion, Generator, GroupSpec, RadiusStats, Reduction, RegionWarning, Slab, SlabKind,
    StabilizerDomain, Truncation, VerificationReport,
};
use ford_rank1_core::isometries::{BruhatIsometry, MatrixLift, Translation};
use ford_rank1_core::matrix::ScalarMatrix;
use ford_rank1_core::models::HPoint;
use ford_rank1_core::spheres::IsometricSphere;
use ford_rank1_core::{CvPair, Field, ModuleVector, Scalar};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;

/// Height band used when tagging parsed points as interior or boundary.
pub const POINT_HEIGHT_TOL: f64 = 1e-12;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::input("format", msg)
}

pub fn parse_json(text: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::input(
            "parse",
            format!("{what}: {} at line {}, column {}", strip_position(&e.to_string()), e.line(), e.column()),
        )
    })
}

fn strip_position(msg: &str) -> &str {
    msg.find(" at line ").map_or(msg, |i| &msg[..i])
}

pub fn field_from_tag(tag: &str) -> Result<Field, CliError> {
    Field::from_tag(tag).ok_or_else(|| bad(format!("unknown field '{tag}', expected R, C or H")))
}

fn numbers(v: &Value, what: &str) -> Result<Vec<f64>, CliError> {
    if let Some(x) = v.as_f64() {
        return if x.is_finite() { Ok(vec![x]) } else { Err(bad(format!("{what}: expected finite numbers"))) };
    }
    let arr = v.as_array().ok_or_else(|| bad(format!("{what}: expected an array of numbers")))?;
    arr.iter()
        .map(|x| x.as_f64().filter(|f| f.is_finite()).ok_or_else(|| bad(format!("{what}: expected finite numbers"))))
        .collect()
}

/// A scalar is an array of 1, 2 or 4 numbers (or a bare real), embedded into `field`.
pub fn parse_scalar(v: &Value, field: Field) -> Result<Scalar, CliError> {
    let c = numbers(v, "scalar")?;
    let own = match c.len() {
        1 => Field::Real,
        2 => Field::Complex,
        4 => Field::Quaternion,
        n => return Err(bad(format!("scalar: expected 1, 2 or 4 numbers, got {n}"))),
    };
    let s = Scalar::from_coords(own, &c)?;
    s.embed(field).map_err(|_| bad(format!("scalar {s} does not fit in field {field}")))
}

pub fn scalar_json(s: &Scalar) -> Value {
    // adding 0.0 turns -0.0 into 0.0
    json!(s.coords().iter().map(|x| x + 0.0).collect::<Vec<_>>())
}

fn vector_json(v: &ModuleVector) -> Value {
    Value::Array(v.entries().iter().map(scalar_json).collect())
}

fn parse_vector(v: &Value, field: Field, len: usize) -> Result<ModuleVector, CliError> {
    let arr = v.as_array().ok_or_else(|| bad("v: expected an array of scalars"))?;
    if arr.len() != len {
        return Err(bad(format!("v: expected {len} entries, got {}", arr.len())));
    }
    Ok(ModuleVector::new(field, arr.iter().map(|s| parse_scalar(s, field)).collect::<Result<_, _>>()?)?)
}

/// `"infinity"`, `{"zeta": scalar, "v": [scalar, ...]}`, or the shorthand
/// string `"(x0, x1, ...)"` holding either the real parts of `ζ` and `v` or
/// all of their real coordinates.
pub fn parse_point(v: &Value, field: Field, len: usize) -> Result<HPoint, CliError> {
    match v {
        Value::String(s) if s.trim() == "infinity" => Ok(HPoint::Infinity),
        Value::String(s) => parse_shorthand(s, field, len),
        Value::Object(o) => {
            let zeta = parse_scalar(o.get("zeta").ok_or_else(|| bad("point: missing 'zeta'"))?, field)?;
            let v = match o.get("v") {
                Some(v) => parse_vector(v, field, len)?,
                None if len == 0 => ModuleVector::zeros(field, 0),
                None => return Err(bad("point: missing 'v'")),
            };
            Ok(HPoint::classify(CvPair::new(zeta, v), POINT_HEIGHT_TOL)?)
        }
        _ => Err(bad("point: expected \"infinity\", an object or a \"(x, ...)\" string")),
    }
}

fn parse_shorthand(s: &str, field: Field, len: usize) -> Result<HPoint, CliError> {
    let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s.trim());
    let xs: Vec<f64> = inner
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad(format!("point: cannot read '{}' as a number", t.trim()))))
        .collect::<Result<_, _>>()?;
    let d = field.dim();
    let (zeta, v) = if xs.len() == 1 + len {
        (Scalar::real(xs[0]), ModuleVector::from_reals(field, &xs[1..]))
    } else if xs.len() == d * (1 + len) {
        (Scalar::from_coords(field, &xs[..d])?, ModuleVector::from_real(field, &xs[d..]))
    } else {
        return Err(bad(format!("point: expected {} or {} numbers, got {}", 1 + len, d * (1 + len), xs.len())));
    };
    Ok(HPoint::classify(CvPair::new(zeta.embed(field)?, v), POINT_HEIGHT_TOL)?)
}

pub fn point_json(p: &HPoint) -> Value {
    match p.coords() {
        None => json!("infinity"),
        Some(c) => json!({"zeta": scalar_json(&c.zeta), "v": vector_json(&c.v)}),
    }
}

/// `{"convention": "row-right", "entries": [[scalar, ...], ...]}` or the bare
/// entries array.
pub fn parse_matrix(v: &Value, field: Field) -> Result<ScalarMatrix, CliError> {
    let entries = match v {
        Value::Object(o) => {
            match o.get("convention").and_then(Value::as_str) {
                None | Some("row-right") => {}
                Some(other) => return Err(bad(format!("matrix: unsupported convention '{other}', expected row-right"))),
            }
            o.get("entries").ok_or_else(|| bad("matrix: missing 'entries'"))?
        }
        other => other,
    };
    let rows = entries.as_array().ok_or_else(|| bad("matrix: expected an array of rows"))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("matrix: every row must be an array"))?
                .iter()
                .map(|s| parse_scalar(s, field))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(bad("matrix: must be square"));
    }
    Ok(ScalarMatrix::from_rows(field, rows)?)
}

pub fn matrix_json(m: &ScalarMatrix) -> Value {
    let rows: Vec<Value> =
        (0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(scalar_json).collect())).collect();
    json!({"convention": "row-right", "entries": rows})
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    label: String,
    matrix: Value,
}

fn default_word_length() -> usize {
    6
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    field: String,
    n: usize,
    generators: Vec<GeneratorFile>,
    #[serde(default)]
    stabilizer_labels: Vec<String>,
    #[serde(default = "default_word_length")]
    word_length: usize,
    #[serde(default)]
    min_radius: f64,
    #[serde(default)]
    seed: u64,
}

/// A parsed spec whose matrices have not been checked yet.
#[derive(Clone, Debug)]
pub struct RawSpec {
    pub field: Field,
    pub n: usize,
    pub generators: Vec<(String, ScalarMatrix)>,
    pub stabilizer_labels: Vec<String>,
    pub word_length: usize,
    pub min_radius: f64,
    pub seed: u64,
}

impl RawSpec {
    pub fn parse(text: &str) -> Result<RawSpec, CliError> {
        let value = parse_json(text, "spec")?;
        let file: SpecFile = serde_json::from_value(value).map_err(|e| bad(format!("spec: {e}")))?;
        let field = field_from_tag(&file.field)?;
        let generators = file
            .generators
            .into_iter()
            .map(|g| {
                let m = parse_matrix(&g.matrix, field).map_err(|e| e.context(&format!("generator '{}'", g.label)))?;
                Ok((g.label, m))
            })
            .collect::<Result<_, CliError>>()?;
        Ok(RawSpec {
            field,
            n: file.n,
            generators,
            stabilizer_labels: file.stabilizer_labels,
            word_length: file.word_length,
            min_radius: file.min_radius,
            seed: file.seed,
        })
    }

    pub fn build(&self) -> Result<GroupSpec, CliError> {
        let gens = self
            .generators
            .iter()
            .map(|(label, m)| {
                let lift = MatrixLift::new(m.clone()).map_err(|e| {
                    CliError::from(e).context(&format!("generator '{label}'"))
                })?;
                Ok(Generator { label: label.clone(), lift })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(GroupSpec::new(
            self.field,
            self.n,
            gens,
            self.stabilizer_labels.clone(),
            self.word_length,
            self.min_radius,
            self.seed,
        )?)
    }
}

pub fn spec_json(spec: &GroupSpec) -> Value {
    json!({
        "field": spec.field.tag(),
        "n": spec.n,
        "generators": spec.generators.iter().map(|g| json!({"label": g.label, "matrix": matrix_json(g.lift.matrix())})).collect::<Vec<_>>(),
        "stabilizer_labels": spec.stabilizer_labels,
        "word_length": spec.word_length,
        "min_radius": spec.min_radius,
        "seed": spec.seed,
    })
}

pub fn translation_json(t: &Translation) -> Value {
    json!({"z": scalar_json(&t.tau0.im()), "u": vector_json(&t.u0)})
}

fn parse_translation(v: &Value, field: Field, len: usize) -> Result<Translation, CliError> {
    let z = parse_scalar(v.get("z").ok_or_else(|| bad("translation: missing 'z'"))?, field)?;
    let u = parse_vector(v.get("u").ok_or_else(|| bad("translation: missing 'u'"))?, field, len)?;
    Ok(Translation::from_heisenberg(z, u))
}

pub fn bruhat_json(b: &BruhatIsometry, phase: &Scalar) -> Value {
    json!({
        "inversion": b.inversion,
        "n1": translation_json(&b.n1),
        "rotation": matrix_json(b.rot.matrix())["entries"],
        "t": b.t,
        "n2": translation_json(&b.n2),
        "radius": b.radius(),
        "phase": scalar_json(phase),
    })
}

fn stabilizer_json(s: &StabilizerDomain) -> Value {
    match s {
        StabilizerDomain::WholeSpace => json!({"kind": "whole-space"}),
        StabilizerDomain::TranslationSlabs(slabs) => json!({
            "kind": "translation-slabs",
            "slabs": slabs.iter().map(|s| json!({
                "label": s.label,
                "direction": match s.kind { SlabKind::Module => "module", SlabKind::Center => "center" },
                "translation": translation_json(&s.translation),
            })).collect::<Vec<_>>(),
        }),
    }
}

fn parse_stabilizer(v: &Value, field: Field, len: usize) -> Result<StabilizerDomain, CliError> {
    match v.get("kind").and_then(Value::as_str) {
        Some("whole-space") => Ok(StabilizerDomain::WholeSpace),
        Some("translation-slabs") => {
            let slabs = v.get("slabs").and_then(Value::as_array).ok_or_else(|| bad("stabilizer: missing 'slabs'"))?;
            let slabs = slabs
                .iter()
                .map(|s| {
                    let label = s.get("label").and_then(Value::as_str).ok_or_else(|| bad("slab: missing 'label'"))?;
                    let kind = match s.get("direction").and_then(Value::as_str) {
                        Some("module") => SlabKind::Module,
                        Some("center") => SlabKind::Center,
                        _ => return Err(bad("slab: 'direction' must be module or center")),
                    };
                    let t = parse_translation(s.get("translation").ok_or_else(|| bad("slab: missing 'translation'"))?, field, len)?;
                    Ok(Slab { label: label.to_string(), kind, translation: t })
                })
                .collect::<Result<_, CliError>>()?;
            Ok(StabilizerDomain::TranslationSlabs(slabs))
        }
        _ => Err(bad("stabilizer: 'kind' must be whole-space or translation-slabs")),
    }
}

pub fn sphere_json(s: &IsometricSphere) -> Value {
    json!({"center": point_json(&s.center), "radius": s.radius, "word": s.word})
}

fn truncation_json(t: &Truncation) -> Value {
    json!({
        "word_length": t.word_length,
        "min_radius": t.min_radius,
        "dedup": t.dedup,
        "elements": t.elements,
        "stabilizer_elements": t.stabilizer_elements,
        "discarded_small": t.discarded_small,
        "duplicates": t.duplicates,
        "dominated": t.dominated,
    })
}

fn parse_truncation(v: &Value) -> Result<Truncation, CliError> {
    let u = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(format!("truncation: missing '{k}'")));
    let f = |k: &str| v.get(k).and_then(Value::as_f64).ok_or_else(|| bad(format!("truncation: missing '{k}'")));
    Ok(Truncation {
        word_length: u("word_length")?,
        min_radius: f("min_radius")?,
        dedup: f("dedup")?,
        elements: u("elements")?,
        stabilizer_elements: u("stabilizer_elements")?,
        discarded_small: u("discarded_small")?,
        duplicates: u("duplicates")?,
        dominated: u("dominated")?,
    })
}

pub fn warnings_json(w: &[RegionWarning]) -> Value {
    Value::Array(w.iter().map(|w| json!(w.to_string())).collect())
}

pub fn radius_stats_json(s: &RadiusStats) -> Value {
    json!({
        "count": s.count,
        "max": if s.count > 0 { json!(s.max) } else { Value::Null },
        "min": if s.count > 0 { json!(s.min) } else { Value::Null },
        "at_least": s.above.iter().map(|(t, n)| json!({"radius": t, "count": n})).collect::<Vec<_>>(),
        "discarded_small": s.discarded_small,
    })
}

pub fn region_json(field: Field, n: usize, r: &FordRegion) -> Value {
    json!({
        "field": field.tag(),
        "n": n,
        "spheres": r.spheres.iter().map(sphere_json).collect::<Vec<_>>(),
        "stabilizer": stabilizer_json(&r.stabilizer),
        "truncation": truncation_json(&r.truncation),
        "warnings": warnings_json(&r.warnings),
    })
}

/// Region read back from [`region_json`] output. It answers membership
/// queries but carries no group elements.
pub fn parse_region(text: &str) -> Result<(Field, usize, FordRegion), CliError> {
    let v = parse_json(text, "region")?;
    let field = field_from_tag(v.get("field").and_then(Value::as_str).ok_or_else(|| bad("region: missing 'field'"))?)?;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("region: missing 'n'"))? as usize;
    if n < 2 {
        return Err(bad("region: n must be at least 2"));
    }
    let len = n - 1;
    let spheres = v
        .get("spheres")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("region: missing 'spheres'"))?
        .iter()
        .map(|s| {
            let center = parse_point(s.get("center").ok_or_else(|| bad("sphere: missing 'center'"))?, field, len)?;
            let radius = s.get("radius").and_then(Value::as_f64).ok_or_else(|| bad("sphere: missing 'radius'"))?;
            let word = s.get("word").and_then(Value::as_str).map(str::to_string);
            Ok(IsometricSphere { center, radius, word })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let stabilizer = parse_stabilizer(v.get("stabilizer").ok_or_else(|| bad("region: missing 'stabilizer'"))?, field, len)?;
    let truncation = parse_truncation(v.get("truncation").ok_or_else(|| bad("region: missing 'truncation'"))?)?;
    Ok((field, n, FordRegion::from_parts(spheres, stabilizer, truncation)?))
}

pub fn reduction_json(spec: &GroupSpec, r: &Reduction) -> Value {
    json!({
        "word": spec.format_word(&r.word),
        "image": point_json(&r.image),
        "steps": r.steps,
        "heights": r.heights,
    })
}

fn covering_failure_json(f: &CoveringFailure) -> Value {
    match f {
        CoveringFailure::BudgetExhausted { steps } => json!({"kind": "BudgetExhausted", "steps": steps}),
        CoveringFailure::OutsideRegion { word } => json!({"kind": "OutsideRegion", "word": word}),
        CoveringFailure::InsideSphere { word } => json!({"kind": "InsideSphere", "word": word}),
        CoveringFailure::Error(e) => json!({"kind": "Error", "message": e.to_string()}),
    }
}

pub fn report_json(r: &VerificationReport) -> Value {
    json!({
        "passed": r.passed(),
        "samples": r.samples,
        "seed": r.seed,
        "membership": {"inside": r.inside, "boundary": r.boundary, "outside": r.outside},
        "elements_checked": r.elements_checked,
        "disjointness": {
            "violations": r.disjointness_violations,
            "witnesses": r.disjointness_witnesses.iter().map(|w| json!({
                "sample": w.sample, "point": point_json(&w.point), "word": w.word, "image": point_json(&w.image),
            })).collect::<Vec<_>>(),
        },
        "covering": {
            "covered": r.covered,
            "failures": r.covering_failures,
            "witnesses": r.covering_witnesses.iter().map(|w| json!({
                "sample": w.sample,
                "point": point_json(&w.point),
                "reached": w.reached.as_ref().map(point_json),
                "word": w.word,
                "failure": covering_failure_json(&w.failure),
            })).collect::<Vec<_>>(),
        },
        "radius_stats": radius_stats_json(&r.radius_stats),
        "assumptions": r.assumptions,
    })
}
