//! Circles and the classification of highly alpha-symmetric sets.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphasets::{
    collinear_triple_alpha_set, counterexample_witness, dim3_case, double_alpha_set_classify, AlphaConfig,
    CaseMargins, Component, Dim3Case,
};
use crate::error::{Error, Result};
use crate::linalg::{self, random_gaussian, UnitVector, C64};
use crate::oracle::{alpha_residual, refine_from_starts, OracleReport, RefineOptions};
use crate::projspace::{canonical_triple_form, line_on_circle, normalise_cd, vector_angle, Line};

/// `{[cfrak e1 + lambda dfrak e2] : |lambda| = 1}`, stored with `cfrak >= dfrak`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircleRepr", into = "CircleRepr")]
pub struct Circle {
    e1: UnitVector,
    e2: UnitVector,
    cfrak: f64,
    dfrak: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleRepr {
    e1: UnitVector,
    e2: UnitVector,
    cfrak: f64,
    dfrak: f64,
}

impl TryFrom<CircleRepr> for Circle {
    type Error = Error;
    fn try_from(r: CircleRepr) -> Result<Self> {
        Circle::new(r.e1, r.e2, r.cfrak, r.dfrak)
    }
}

impl From<Circle> for CircleRepr {
    fn from(c: Circle) -> Self {
        CircleRepr { e1: c.e1, e2: c.e2, cfrak: c.cfrak, dfrak: c.dfrak }
    }
}

impl Circle {
    pub fn new(e1: UnitVector, e2: UnitVector, cfrak: f64, dfrak: f64) -> Result<Self> {
        crate::error::check_dim(e1.dim(), e2.dim())?;
        linalg::check_orthonormal(&[e1.as_slice(), e2.as_slice()])?;
        if !(cfrak > 0.0 && dfrak > 0.0) || (cfrak * cfrak + dfrak * dfrak - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("need cfrak, dfrak > 0 with unit sum of squares, got {cfrak}, {dfrak}")));
        }
        let (e1, e2, c, d) = if cfrak >= dfrak { (e1, e2, cfrak, dfrak) } else { (e2, e1, dfrak, cfrak) };
        let (cfrak, dfrak) = normalise_cd(c, d)?;
        Ok(Circle { e1, e2, cfrak, dfrak })
    }

    /// The standard circle in the first two coordinates of `C^dim`.
    pub fn standard(dim: usize, cfrak: f64, dfrak: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Parameter(format!("dimension {dim} < 2")));
        }
        Circle::new(UnitVector::basis(dim, 0), UnitVector::basis(dim, 1), cfrak, dfrak)
    }

    pub fn e1(&self) -> &UnitVector {
        &self.e1
    }

    pub fn e2(&self) -> &UnitVector {
        &self.e2
    }

    pub fn cfrak(&self) -> f64 {
        self.cfrak
    }

    pub fn dfrak(&self) -> f64 {
        self.dfrak
    }

    pub fn dim(&self) -> usize {
        self.e1.dim()
    }

    pub fn point(&self, lambda: C64) -> Line {
        line_on_circle(&self.e1, &self.e2, self.cfrak, self.dfrak, lambda)
    }

    pub fn component(&self) -> Component {
        Component::Circle { e1: self.e1.clone(), e2: self.e2.clone(), c: self.cfrak, d: self.dfrak }
    }

    pub fn distance(&self, x: &Line) -> Result<f64> {
        self.component().distance(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryTag {
    HighlySymmetric,
    NotHighlySymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryReason {
    /// In dimension at least 4 every circle is highly symmetric.
    Dim4Circle,
    /// Dimension 3 outside the bounded case: the double-alpha-set is the circle.
    Dim3CaseIi,
    /// Dimension 3 with `c / sqrt(1 + c^2) >= a > d`.
    Dim3CaseI,
    Dim3ExceptionalCircleCircle,
    Dim3ExceptionalCirclePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryVerdict {
    pub tag: SymmetryTag,
    pub reason: SymmetryReason,
    pub margins: CaseMargins,
}

/// Decides whether `circle` is highly alpha-symmetric in `C^ambient_dim`.
pub fn classify_circle(circle: &Circle, cfg: &AlphaConfig, ambient_dim: usize) -> Result<SymmetryVerdict> {
    cfg.ensure_classification_range()?;
    crate::error::check_dim(ambient_dim, circle.dim())?;
    if ambient_dim < 3 {
        return Err(Error::Parameter(format!("ambient dimension {ambient_dim} < 3")));
    }
    let (case, margins) = dim3_case(cfg.a(), circle.cfrak, circle.dfrak);
    let (tag, reason) = if ambient_dim >= 4 {
        (SymmetryTag::HighlySymmetric, SymmetryReason::Dim4Circle)
    } else {
        match case {
            Dim3Case::CircleOnly => (SymmetryTag::HighlySymmetric, SymmetryReason::Dim3CaseIi),
            Dim3Case::Bounded => (SymmetryTag::NotHighlySymmetric, SymmetryReason::Dim3CaseI),
            Dim3Case::ExceptionalCircleCircle => {
                (SymmetryTag::NotHighlySymmetric, SymmetryReason::Dim3ExceptionalCircleCircle)
            }
            Dim3Case::ExceptionalCirclePoint => {
                (SymmetryTag::NotHighlySymmetric, SymmetryReason::Dim3ExceptionalCirclePoint)
            }
        }
    };
    Ok(SymmetryVerdict { tag, reason, margins })
}

/// Bisects on `dfrak` in `[lo, hi]` for the dimension-3 verdict change and
/// returns its location.
pub fn locate_transition(cfg: &AlphaConfig, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let tag = |d: f64| -> Result<SymmetryTag> {
        let c = (1.0 - d * d).sqrt();
        Ok(classify_circle(&Circle::standard(3, c, d)?, cfg, 3)?.tag)
    };
    let (mut lo, mut hi) = (lo, hi);
    let t_lo = tag(lo)?;
    if t_lo == tag(hi)? {
        return Err(Error::Parameter(format!("no verdict change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if tag(mid)? == t_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Distinct-member count used as the finite stand-in for "infinite".
pub const INFINITE_PROXY: usize = 50;
/// Pairwise angular separation for counted members.
pub const PROXY_SEPARATION: f64 = 1e-4;

fn random_line<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    random_gaussian(rng, dim)
}

/// Three phases with pairwise separation at least 0.3.
fn random_phases<R: Rng + ?Sized>(rng: &mut R) -> [C64; 3] {
    loop {
        let p: [f64; 3] = [0, 1, 2].map(|_| rng.random_range(0.0..TAU));
        let sep = |x: f64, y: f64| {
            let d = (x - y).rem_euclid(TAU);
            d.min(TAU - d)
        };
        if sep(p[0], p[1]) > 0.3 && sep(p[0], p[2]) > 0.3 && sep(p[1], p[2]) > 0.3 {
            return p.map(|t| C64::from_polar(1.0, t));
        }
    }
}

fn count_distinct(lines: &[Line], sep: f64) -> usize {
    let mut kept: Vec<&Line> = Vec::new();
    for l in lines {
        if kept.iter().all(|k| vector_angle(k.amplitudes(), l.amplitudes()) >= sep) {
            kept.push(l);
        }
    }
    kept.len()
}

#[derive(Default)]
struct TripleOutcome {
    contains_residual: f64,
    on_circle_residual: f64,
    lm_members: u64,
    off_circle_members: u64,
    violation: bool,
}

const STARTS: usize = 48;
const CIRCLE_SAMPLES: usize = 32;

fn check_triple(
    circle: &Circle,
    cfg: &AlphaConfig,
    dim: usize,
    n_alpha_samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<TripleOutcome> {
    let lambdas = random_phases(rng);
    let [u1, u2, u3] = lambdas.map(|l| circle.point(l));
    let triple = canonical_triple_form(&u1, &u2, &u3)?;
    let alpha_set = collinear_triple_alpha_set(&triple, cfg, dim)?;
    let gens = alpha_set.sample(rng, n_alpha_samples);
    let alpha = cfg.alpha();
    let mut out = TripleOutcome::default();

    // Circle samples must be at angle alpha from every sampled alpha-set member.
    for _ in 0..CIRCLE_SAMPLES {
        let p = circle.point(C64::from_polar(1.0, rng.random_range(0.0..TAU)));
        out.contains_residual = out.contains_residual.max(alpha_residual(p.amplitudes(), &gens, alpha));
    }

    // Numeric members of the double-alpha-set, located from random starts.
    let starts: Vec<Vec<C64>> = (0..STARTS).map(|_| random_line(rng, dim)).collect();
    let opts = RefineOptions { confirm_tol: 1e-9, ..RefineOptions::default() };
    let found = refine_from_starts(&gens, cfg, &starts, &opts)?;
    out.lm_members = found.len() as u64;
    let mut candidates: Vec<Line> = Vec::new();
    for m in &found {
        let d = circle.distance(&m.line)?;
        out.on_circle_residual = out.on_circle_residual.max(d);
        if d > 1e-6 {
            out.off_circle_members += 1;
            candidates.push(m.line.clone());
        }
    }

    // Closed-form candidates for the second component in dimension 3.
    if dim == 3 {
        let double = double_alpha_set_classify(&triple, cfg, dim)?;
        for comp in double.components.iter().skip(1) {
            candidates.extend((0..8).map(|_| comp.sample(rng)));
        }
    }
    for x in &candidates {
        let r = alpha_residual(x.amplitudes(), &gens, alpha);
        if r < 1e-9 && circle.distance(x)? > 1e-6 {
            out.violation = true;
        }
    }
    Ok(out)
}

/// Empirical counterpart of [`classify_circle`]: samples triples on the
/// circle, estimates their double-alpha-sets numerically, and reports
/// whether the outcome agrees with the closed-form verdict.
pub fn empirical_high_symmetry_check(
    circle: &Circle,
    cfg: &AlphaConfig,
    ambient_dim: usize,
    n_triples: usize,
    n_alpha_samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    if n_triples < 1 || n_alpha_samples < 3 {
        return Err(Error::Parameter(format!(
            "sample budget too small: {n_triples} triples, {n_alpha_samples} alpha samples (need at least 1 and 3)"
        )));
    }
    let expected = classify_circle(circle, cfg, ambient_dim)?;
    let outcomes: Vec<Result<TripleOutcome>> = (0..n_triples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64 + 1);
            check_triple(circle, cfg, ambient_dim, n_alpha_samples, &mut rng)
        })
        .collect();

    let mut report = OracleReport::new();
    let mut contains = 0.0_f64;
    let mut on_circle = 0.0_f64;
    let mut violations = 0u64;
    for o in outcomes {
        let o = o?;
        contains = contains.max(o.contains_residual);
        on_circle = on_circle.max(o.on_circle_residual);
        violations += o.violation as u64;
        report.count("lm_members", o.lm_members);
        report.count("off_circle_members", o.off_circle_members);
    }
    report.count("triples", n_triples as u64);
    report.count("violating_triples", violations);

    // Members of the alpha-set of the whole circle, for the cardinality proxy.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<Line> =
        (0..12).map(|k| circle.point(C64::from_polar(1.0, TAU * k as f64 / 12.0))).collect();
    let starts: Vec<Vec<C64>> = (0..2 * INFINITE_PROXY).map(|_| random_line(&mut rng, ambient_dim)).collect();
    let members = refine_from_starts(&gens, cfg, &starts, &RefineOptions::default())?;
    let lines: Vec<Line> = members.into_iter().map(|m| m.line).collect();
    let distinct = count_distinct(&lines, PROXY_SEPARATION);
    report.count("distinct_alpha_members", distinct as u64);

    // The explicit witness backs up a negative verdict in dimension 3.
    let mut witness_ok = false;
    if ambient_dim == 3 && expected.tag == SymmetryTag::NotHighlySymmetric {
        let mut t = 0.05;
        while t > 1e-8 {
            match counterexample_witness(cfg, circle.cfrak, circle.dfrak, t) {
                Ok(w) => {
                    witness_ok = w.checks.verified();
                    report.residual(w.checks.max_angle_residual.max(w.checks.max_membership_distance));
                    break;
                }
                Err(Error::WitnessRange(_)) => t *= 0.5,
                Err(e) => return Err(e),
            }
        }
        report.count("witness_verified", witness_ok as u64);
    }

    let symmetric = violations == 0 && contains < 1e-6 && on_circle < 1e-6 && distinct >= INFINITE_PROXY;
    let empirical = if symmetric { SymmetryTag::HighlySymmetric } else { SymmetryTag::NotHighlySymmetric };
    report.residual(contains);
    if symmetric {
        report.residual(on_circle);
    }
    report.note(format!("closed form: {:?} ({:?})", expected.tag, expected.reason));
    report.note(format!("empirical: {empirical:?}"));
    let agrees = empirical == expected.tag
        && (expected.tag == SymmetryTag::HighlySymmetric || ambient_dim != 3 || witness_ok || violations > 0);
    report.check("agreement", agrees, format!("closed form {:?}, empirical {empirical:?}", expected.tag));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn orientation_and_validation() {
        let c = Circle::standard(3, 0.6, 0.8).unwrap();
        assert_eq!(c.cfrak(), 0.8);
        assert_eq!(c.e1(), &UnitVector::basis(3, 1));
        assert!(Circle::standard(3, 0.6, 0.7).is_err());
        let skew = UnitVector::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!(Circle::new(UnitVector::basis(3, 0), skew, 0.8, 0.6).is_err());
    }

    #[test]
    fn classify_examples() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let v = classify_circle(&Circle::standard(4, 0.8, 0.6).unwrap(), &cfg, 4).unwrap();
        assert_eq!((v.tag, v.reason), (SymmetryTag::HighlySymmetric, SymmetryReason::Dim4Circle));
        let v = classify_circle(&Circle::standard(3, 0.8, 0.6).unwrap(), &cfg, 3).unwrap();
        assert_eq!(v.tag, SymmetryTag::HighlySymmetric);
        let v = classify_circle(&Circle::standard(3, 0.9, 0.19f64.sqrt()).unwrap(), &cfg, 3).unwrap();
        assert_eq!((v.tag, v.reason), (SymmetryTag::NotHighlySymmetric, SymmetryReason::Dim3CaseI));
        let s3 = 1.0 / 3f64.sqrt();
        let cfg = AlphaConfig::from_cos(s3).unwrap();
        let v = classify_circle(&Circle::standard(3, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap(), &cfg, 3).unwrap();
        assert_eq!(v.reason, SymmetryReason::Dim3ExceptionalCirclePoint);
        let low = AlphaConfig::from_cos(0.8).unwrap();
        assert!(matches!(classify_circle(&Circle::standard(3, 0.8, 0.6).unwrap(), &low, 3), Err(Error::Range(_))));
    }

    #[test]
    fn verdict_json_shape() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let v = classify_circle(&Circle::standard(3, 0.9, 0.19f64.sqrt()).unwrap(), &cfg, 3).unwrap();
        let j = serde_json::to_value(v).unwrap();
        assert_eq!(j["tag"], "NotHighlySymmetric");
        assert_eq!(j["reason"], "dim3-case-i");
        assert!(j["margins"]["a_minus_d"].is_number());
    }

    #[test]
    fn transition_locations() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let d = locate_transition(&cfg, 0.3, 0.7, 1e-9).unwrap();
        assert!((d - 0.5).abs() < 1e-6);
        let a: f64 = 0.65;
        let cfg = AlphaConfig::from_cos(a).unwrap();
        let d = locate_transition(&cfg, 0.3, 0.64, 1e-9).unwrap();
        assert!((d - ((1.0 - 2.0 * a * a) / (1.0 - a * a)).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn empirical_dim4() {
        let cfg = AlphaConfig::new(1.1).unwrap();
        let circle = Circle::standard(4, 0.8, 0.6).unwrap();
        let rep = empirical_high_symmetry_check(&circle, &cfg, 4, 20, 12, 7).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert!(rep.max_residual < 1e-6);
    }

    #[test]
    fn empirical_dim3_exceptional() {
        let s3 = 1.0 / 3f64.sqrt();
        let cfg = AlphaConfig::from_cos(s3).unwrap();
        let circle = Circle::standard(3, (2.0f64 / 3.0).sqrt(), s3).unwrap();
        let rep = empirical_high_symmetry_check(&circle, &cfg, 3, 4, 12, 1).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert_eq!(rep.counts["witness_verified"], 1);
    }

    #[test]
    fn empirical_dim3_both_branches() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let sym = Circle::standard(3, 0.8, 0.6).unwrap();
        let rep = empirical_high_symmetry_check(&sym, &cfg, 3, 5, 12, 3).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert_eq!(rep.counts["violating_triples"], 0);
        let not = Circle::standard(3, 0.9, 0.19f64.sqrt()).unwrap();
        let rep = empirical_high_symmetry_check(&not, &cfg, 3, 5, 12, 3).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert_eq!(rep.counts["violating_triples"], 5);
    }

    #[test]
    fn empirical_rejects_small_budget() {
        let cfg = AlphaConfig::new(1.1).unwrap();
        let circle = Circle::standard(4, 0.8, 0.6).unwrap();
        assert!(matches!(empirical_high_symmetry_check(&circle, &cfg, 4, 1, 2, 0), Err(Error::Parameter(_))));
    }
}
