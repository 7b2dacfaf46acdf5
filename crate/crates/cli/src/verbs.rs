//! Per-verb payload schemas and dispatch.

use num_complex::Complex64 as C64;
use qangle::alphasets::{
    atheta_cardinality, collinear_triple_alpha_set, counterexample_witness, dim3_case, double_alpha_set_classify,
    pair_alpha_set, AlphaConfig, AthetaFamily,
};
use qangle::oracle::{default_cloud_size, discover_and_refine, sample_lines, RefineOptions};
use qangle::projspace::{canonical_pair_form, canonical_triple_form, quantum_angle, Line};
use qangle::suites::{run_suite, Suite, SuiteParams};
use qangle::symmetric_sets::{classify_circle, empirical_high_symmetry_check, Circle};
use qangle::wigner::{
    bridge_basis, circle_intersection, exotic_pi4_map, find_angle_violation, fit_from_probes, preservation_report,
    random_wigner, LineMap, Selector, WignerSymmetry,
};
use qangle::{Error, UnitVector};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

/// Why a verb did not produce a result.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or incomplete input; exit status 2.
    Schema(String),
    /// A library error on well-formed input; exit status 1.
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Schema(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Failure::Schema(d) => json!({"error": "SchemaError", "detail": d}),
            Failure::Domain(e) => json!({"error": e.code(), "detail": e.to_string()}),
        }
    }
}

type Out = Result<Value, Failure>;

/// Flags shared by every verb.
#[derive(Clone, Copy, Debug)]
pub struct Globals {
    pub seed: u64,
    pub tol: Option<f64>,
}

fn parse<T: DeserializeOwned>(payload: Value) -> Result<T, Failure> {
    serde_json::from_value(payload).map_err(|e| Failure::Schema(e.to_string()))
}

fn emit(v: impl serde::Serialize) -> Out {
    serde_json::to_value(v).map_err(|e| Failure::Schema(e.to_string()))
}

/// Exactly one of `alpha` (radians) and `a = cos(alpha)`.
fn config(alpha: Option<f64>, a: Option<f64>) -> Result<AlphaConfig, Failure> {
    match (alpha, a) {
        (Some(x), None) => Ok(AlphaConfig::new(x)?),
        (None, Some(x)) => Ok(AlphaConfig::from_cos(x)?),
        _ => Err(Failure::Schema("give exactly one of \"alpha\" and \"a\"".into())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnglePayload {
    u: Line,
    v: Line,
}

pub fn angle(p: Value) -> Out {
    let p: AnglePayload = parse(p)?;
    Ok(json!({"radians": quantum_angle(&p.u, &p.v)?.radians()}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinesPayload {
    lines: Vec<Line>,
}

fn tagged(kind: &str, v: Value) -> Value {
    let mut v = v;
    if let Value::Object(m) = &mut v {
        m.insert("kind".into(), Value::String(kind.into()));
    }
    v
}

pub fn canonical(p: Value) -> Out {
    let p: LinesPayload = parse(p)?;
    match p.lines.as_slice() {
        [u, v] => Ok(tagged("pair", emit(canonical_pair_form(u, v)?)?)),
        [u, v, w] => Ok(tagged("triple", emit(canonical_triple_form(u, v, w)?)?)),
        _ => Err(Failure::Schema(format!("expected 2 or 3 lines, got {}", p.lines.len()))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaLinesPayload {
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
    lines: Vec<Line>,
}

pub fn alphaset(p: Value) -> Out {
    let p: AlphaLinesPayload = parse(p)?;
    let cfg = config(p.alpha, p.a)?;
    match p.lines.as_slice() {
        [u, v] => emit(pair_alpha_set(u, v, &cfg)?),
        [u, v, w] => {
            let t = canonical_triple_form(u, v, w)?;
            emit(collinear_triple_alpha_set(&t, &cfg, u.dim())?)
        }
        _ => Err(Failure::Schema(format!("expected 2 or 3 lines, got {}", p.lines.len()))),
    }
}

pub fn double_alphaset(p: Value) -> Out {
    let p: AlphaLinesPayload = parse(p)?;
    let cfg = config(p.alpha, p.a)?;
    let [u, v, w] = p.lines.as_slice() else {
        return Err(Failure::Schema(format!("expected 3 lines, got {}", p.lines.len())));
    };
    let t = canonical_triple_form(u, v, w)?;
    let descriptor = double_alpha_set_classify(&t, &cfg, u.dim())?;
    let case = (u.dim() == 3).then(|| dim3_case(cfg.a(), t.c, t.d));
    Ok(json!({
        "descriptor": emit(descriptor)?,
        "case": case.map(|(c, _)| emit(c)).transpose()?,
        "margins": case.map(|(_, m)| emit(m)).transpose()?,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CardinalityPayload {
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
    family: AthetaFamily,
    theta: f64,
    c1: C64,
    c2: C64,
    c3: f64,
}

pub fn cardinality(p: Value) -> Out {
    let p: CardinalityPayload = parse(p)?;
    let cfg = config(p.alpha, p.a)?;
    emit(atheta_cardinality(&p.family, p.theta, p.c1, p.c2, p.c3, &cfg)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmpiricalBudget {
    triples: usize,
    alpha_samples: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyPayload {
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
    circle: Circle,
    dim: usize,
    #[serde(default)]
    empirical: Option<EmpiricalBudget>,
}

pub fn classify(p: Value, g: Globals) -> Out {
    let p: ClassifyPayload = parse(p)?;
    let cfg = config(p.alpha, p.a)?;
    let verdict = classify_circle(&p.circle, &cfg, p.dim)?;
    let empirical = match p.empirical {
        Some(b) => Some(emit(empirical_high_symmetry_check(
            &p.circle,
            &cfg,
            p.dim,
            b.triples,
            b.alpha_samples,
            g.seed,
        )?)?),
        None => None,
    };
    Ok(json!({"verdict": emit(verdict)?, "empirical": empirical}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessPayload {
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
    c: f64,
    d: f64,
    /// Fixed free angle; when absent, starts at 0.05 and halves until the
    /// range guard holds.
    #[serde(default)]
    t: Option<f64>,
}

pub fn witness(p: Value) -> Out {
    let p: WitnessPayload = parse(p)?;
    let cfg = config(p.alpha, p.a)?;
    if let Some(t) = p.t {
        let w = counterexample_witness(&cfg, p.c, p.d, t)?;
        return Ok(json!({"t": t, "witness": emit(w)?}));
    }
    let mut t = 0.05;
    loop {
        match counterexample_witness(&cfg, p.c, p.d, t) {
            Ok(w) => return Ok(json!({"t": t, "witness": emit(w)?})),
            Err(Error::WitnessRange(_)) if t > 1e-8 => t *= 0.5,
            Err(e) => return Err(e.into()),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OraclePayload {
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
    generators: Vec<Line>,
    #[serde(default)]
    cloud: Option<usize>,
}

pub fn oracle(p: Value, g: Globals) -> Out {
    let p: OraclePayload = parse(p)?;
    let cfg = config(p.alpha, p.a)?;
    let dim = p.generators.first().map_or(0, |l| l.dim());
    let n = p.cloud.unwrap_or_else(|| default_cloud_size(dim));
    let cloud = sample_lines(dim, n, g.seed)?;
    let mut opts = RefineOptions::default();
    if let Some(t) = g.tol {
        opts.confirm_tol = t;
    }
    let members = discover_and_refine(&p.generators, &cfg, &cloud, &opts)?;
    Ok(json!({"cloud_size": n, "seed": g.seed, "members": emit(members)?}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratePayload {
    dim: usize,
    #[serde(default)]
    antiunitary: bool,
}

pub fn wigner_generate(p: Value, g: Globals) -> Out {
    let p: GeneratePayload = parse(p)?;
    emit(random_wigner(p.dim, g.seed, p.antiunitary)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FitPayload {
    dim: usize,
    images: Vec<Line>,
}

pub fn wigner_fit(p: Value) -> Out {
    let p: FitPayload = parse(p)?;
    emit(fit_from_probes(p.dim, &p.images)?)
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum MapSpec {
    Wigner { symmetry: WignerSymmetry },
    /// `psi` or `psi^perp`, the latter where `||v_1|^2 - 1/2| < band`.
    Exotic { psi: WignerSymmetry, band: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckPayload {
    map: MapSpec,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
    #[serde(default = "default_pairs")]
    pairs: usize,
    /// Optional second angle at which to search for a violation.
    #[serde(default)]
    probe_angle: Option<f64>,
}

fn default_pairs() -> usize {
    1000
}

pub fn wigner_check(p: Value, g: Globals) -> Out {
    let p: CheckPayload = parse(p)?;
    let cfg = config(p.alpha, p.a)?;
    let map: Box<dyn LineMap> = match p.map {
        MapSpec::Wigner { symmetry } => Box::new(symmetry),
        MapSpec::Exotic { psi, band } => Box::new(exotic_pi4_map(psi, Selector::MiddleBand(band))?),
    };
    let dim = map.dim();
    let tol = g.tol.unwrap_or(1e-10);
    let report = preservation_report(map.as_ref(), &cfg, dim, p.pairs, g.seed, tol)?;
    let violation = match p.probe_angle {
        Some(beta) => emit(find_angle_violation(map.as_ref(), beta, p.pairs, g.seed, 1e-3)?)?,
        None => Value::Null,
    };
    Ok(json!({"report": emit(report)?, "violation": violation}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntersectPayload {
    e1: UnitVector,
    e2: UnitVector,
    f1: UnitVector,
    f2: UnitVector,
    c0: f64,
}

pub fn intersect(p: Value) -> Out {
    let p: IntersectPayload = parse(p)?;
    emit(circle_intersection(&p.e1, &p.e2, &p.f1, &p.f2, p.c0)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BridgePayload {
    e1: UnitVector,
    e2: UnitVector,
    f1: UnitVector,
    f2: UnitVector,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
}

pub fn bridge(p: Value) -> Out {
    let p: BridgePayload = parse(p)?;
    let cfg = match (p.alpha, p.a) {
        (None, None) => AlphaConfig::from_cos(1.0 / 3f64.sqrt())?,
        (alpha, a) => config(alpha, a)?,
    };
    emit(bridge_basis(&p.e1, &p.e2, &p.f1, &p.f2, &cfg)?)
}

pub fn verify(suite: Suite, params: &SuiteParams) -> Out {
    emit(run_suite(suite, params)?)
}
