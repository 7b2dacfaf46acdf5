//! Named verification suites combining the closed-form constructions with
//! the numeric oracle. Each suite returns an [`OracleReport`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphasets::{
    atheta_cardinality, collinear_triple_alpha_set, dim3_case, double_alpha_set_classify, pair_alpha_set,
    second_circle_coefficients, theta0_and_rho, AlphaConfig, AlphaSetDescriptor, AthetaFamily, Cardinality,
    Component, Dim3Case,
};
use crate::error::{Error, Result};
use crate::linalg::{self, random_gaussian, random_phase, UnitVector, C64, I};
use crate::oracle::{
    alpha_residual, default_cloud_size, discover_and_refine, oracle_cardinality, sample_lines,
    verify_basic_relations, OracleReport, RefineOptions, SampleCloud,
};
use crate::projspace::{canonical_line, canonical_triple_form, quantum_angle, Line};
use crate::symmetric_sets::{empirical_high_symmetry_check, locate_transition, Circle};
use crate::wigner::{bridge_basis, circle_intersection, Intersection};

/// Largest distance from a refined member to its descriptor.
pub const COMPLETENESS_TOL: f64 = 1e-5;
/// Largest angle deviation of a descriptor sample.
pub const SOUNDNESS_TOL: f64 = 1e-9;
/// Inputs this close to an exceptional triple are snapped onto it.
pub const EXCEPTIONAL_SNAP: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Shape,
    CollinAlpha,
    Circle4,
    Circle3,
    InfiniteElement,
    CircleChar,
    Basic,
    Section5,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Shape,
        Suite::CollinAlpha,
        Suite::Circle4,
        Suite::Circle3,
        Suite::InfiniteElement,
        Suite::CircleChar,
        Suite::Basic,
        Suite::Section5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Shape => "shape",
            Suite::CollinAlpha => "collin-alpha",
            Suite::Circle4 => "circle4",
            Suite::Circle3 => "circle3",
            Suite::InfiniteElement => "infinite-element",
            Suite::CircleChar => "circle-char",
            Suite::Basic => "basic",
            Suite::Section5 => "section5",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown suite {s:?}")))
    }
}

/// Optional overrides; unset fields take per-suite defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteParams {
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub d: Option<f64>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub draws: Option<usize>,
    /// Number of lines in the discovery cloud.
    #[serde(default)]
    pub cloud: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

pub fn run_suite(suite: Suite, p: &SuiteParams) -> Result<OracleReport> {
    match suite {
        Suite::Shape => shape(p),
        Suite::CollinAlpha => collin_alpha(p),
        Suite::Circle4 => circle4(p),
        Suite::Circle3 => circle3(p),
        Suite::InfiniteElement => infinite_element(p),
        Suite::CircleChar => circle_char(p),
        Suite::Basic => basic(p),
        Suite::Section5 => section5(p),
    }
}

fn stream(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64 + 1);
    rng
}

fn cloud_for(p: &SuiteParams, dim: usize) -> Result<SampleCloud> {
    sample_lines(dim, p.cloud.unwrap_or_else(|| default_cloud_size(dim)), p.seed)
}

fn config_from(p: &SuiteParams) -> Result<Option<AlphaConfig>> {
    p.a.map(AlphaConfig::from_cos).transpose()
}

/// Alpha drawn from the open classification range, away from its ends.
fn random_config<R: Rng + ?Sized>(rng: &mut R) -> AlphaConfig {
    AlphaConfig::new(rng.random_range(FRAC_PI_4 + 0.02..FRAC_PI_2 - 0.02)).expect("alpha in range")
}

/// An orthonormal pair in `C^dim`.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (UnitVector, UnitVector) {
    let e1 = UnitVector::new(random_gaussian(rng, dim)).expect("nonzero");
    let e2 = linalg::random_unit_orthogonal(rng, dim, &[e1.as_slice()]).expect("dim >= 2");
    (e1, UnitVector::new(e2).expect("unit"))
}

fn random_line<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Line {
    canonical_line(&random_gaussian(rng, dim)).expect("nonzero")
}

/// Three pairwise separated phases.
fn random_lambdas<R: Rng + ?Sized>(rng: &mut R) -> [C64; 3] {
    loop {
        let l = [0, 1, 2].map(|_| random_phase(rng));
        if (l[0] - l[1]).norm() > 0.2 && (l[0] - l[2]).norm() > 0.2 && (l[1] - l[2]).norm() > 0.2 {
            return l;
        }
    }
}

/// Three collinear lines `[c e1 + lambda_j d e2]` in a random frame.
pub fn random_collinear_triple<R: Rng + ?Sized>(rng: &mut R, dim: usize, c: f64) -> [Line; 3] {
    let (e1, e2) = random_frame(rng, dim);
    let d = (1.0 - c * c).sqrt();
    random_lambdas(rng).map(|l| {
        canonical_line(&linalg::combine(&[C64::new(c, 0.0), l * d], &[e1.as_slice(), e2.as_slice()]))
            .expect("unit")
    })
}

/// Both directions of the descriptor check: sampled members reproduce the
/// angle, and refined numeric members lie on the descriptor.
#[derive(Clone, Copy, Debug, Default)]
struct TwoSided {
    sound: f64,
    complete: f64,
    found: usize,
}

fn two_sided(
    gens: &[Line],
    desc: &AlphaSetDescriptor,
    cfg: &AlphaConfig,
    cloud: &SampleCloud,
    samples: &[Line],
) -> Result<TwoSided> {
    let sound = samples
        .iter()
        .map(|x| alpha_residual(x.amplitudes(), gens, cfg.alpha()))
        .fold(0.0, f64::max);
    let found = discover_and_refine(gens, cfg, cloud, &RefineOptions::default())?;
    let mut complete = 0.0_f64;
    for m in &found {
        complete = complete.max(desc.distance(&m.line)?);
    }
    Ok(TwoSided { sound, complete, found: found.len() })
}

fn record(report: &mut OracleReport, label: &str, t: TwoSided, samples: usize) {
    report.count("descriptor_samples", samples as u64);
    report.count("refined_members", t.found as u64);
    report.residual(t.sound.max(t.complete));
    report.check(&format!("{label} soundness"), t.sound <= SOUNDNESS_TOL, format!("angle residual {:e}", t.sound));
    report.check(
        &format!("{label} completeness"),
        t.complete <= COMPLETENESS_TOL,
        format!("descriptor distance {:e} over {} members", t.complete, t.found),
    );
    report.check(&format!("{label} discovery"), t.found > 0, "no refined members");
}

/// Pair alpha-sets against their `A_theta` descriptor.
fn shape(p: &SuiteParams) -> Result<OracleReport> {
    let dim = p.dim.unwrap_or(4);
    let draws = p.draws.unwrap_or(50);
    let fixed = config_from(p)?;
    let cloud = cloud_for(p, dim)?;
    let mut report = OracleReport::new();
    for k in 0..draws {
        let mut rng = stream(p.seed, k);
        let cfg = fixed.unwrap_or_else(|| random_config(&mut rng));
        let (v1, v2) = (random_line(&mut rng, dim), random_line(&mut rng, dim));
        let desc = pair_alpha_set(&v1, &v2, &cfg)?;
        let samples = desc.sample(&mut rng, 500);
        let t = two_sided(&[v1, v2], &desc, &cfg, &cloud, &samples)?;
        record(&mut report, &format!("draw {k}"), t, samples.len());
    }
    report.count("draws", draws as u64);
    Ok(report)
}

/// Alpha-sets of collinear triples against their slice descriptors.
fn collin_alpha(p: &SuiteParams) -> Result<OracleReport> {
    let dim = p.dim.unwrap_or(4);
    let draws = p.draws.unwrap_or(50);
    let fixed = config_from(p)?;
    let cloud = cloud_for(p, dim)?;
    let mut report = OracleReport::new();
    for k in 0..draws {
        let mut rng = stream(p.seed, k);
        let cfg = fixed.unwrap_or_else(|| random_config(&mut rng));
        let c = p.c.unwrap_or_else(|| rng.random_range(FRAC_1_SQRT_2..0.98));
        let lines = random_collinear_triple(&mut rng, dim, c);
        let triple = canonical_triple_form(&lines[0], &lines[1], &lines[2])?;
        let desc = collinear_triple_alpha_set(&triple, &cfg, dim)?;
        let samples = desc.sample(&mut rng, 500);
        let t = two_sided(&lines, &desc, &cfg, &cloud, &samples)?;
        report.count("components", desc.components.len() as u64);
        record(&mut report, &format!("draw {k}"), t, samples.len());
    }
    report.count("draws", draws as u64);
    Ok(report)
}

/// Generators of the double-alpha-set: sampled members of the alpha-set.
const DOUBLE_GENERATORS: usize = 24;

fn double_check(
    lines: &[Line; 3],
    cfg: &AlphaConfig,
    dim: usize,
    cloud: &SampleCloud,
    rng: &mut ChaCha8Rng,
) -> Result<(AlphaSetDescriptor, TwoSided, usize)> {
    let triple = canonical_triple_form(&lines[0], &lines[1], &lines[2])?;
    let alpha_set = collinear_triple_alpha_set(&triple, cfg, dim)?;
    let double = double_alpha_set_classify(&triple, cfg, dim)?;
    let gens = alpha_set.sample(rng, DOUBLE_GENERATORS);
    // The original triple belongs to its own double-alpha-set.
    let mut samples = double.sample(rng, 500);
    samples.extend(lines.iter().cloned());
    let t = two_sided(&gens, &double, cfg, cloud, &samples)?;
    Ok((double, t, samples.len()))
}

/// Double-alpha-sets in dimension at least 4: exactly the circle.
fn circle4(p: &SuiteParams) -> Result<OracleReport> {
    let dim = p.dim.unwrap_or(4);
    if dim < 4 {
        return Err(Error::Parameter(format!("circle4 needs dimension >= 4, got {dim}")));
    }
    let draws = p.draws.unwrap_or(50);
    let fixed = config_from(p)?;
    let cloud = cloud_for(p, dim)?;
    let mut report = OracleReport::new();
    for k in 0..draws {
        let mut rng = stream(p.seed, k);
        let cfg = fixed.unwrap_or_else(|| random_config(&mut rng));
        let c = p.c.unwrap_or_else(|| rng.random_range(FRAC_1_SQRT_2..0.98));
        let lines = random_collinear_triple(&mut rng, dim, c);
        let (double, t, n) = double_check(&lines, &cfg, dim, &cloud, &mut rng)?;
        report.check(
            &format!("draw {k} single circle"),
            double.components.len() == 1,
            format!("{} components", double.components.len()),
        );
        record(&mut report, &format!("draw {k}"), t, n);
    }
    report.count("draws", draws as u64);
    Ok(report)
}

/// Snaps `(a, c, d)` onto an exceptional triple when within [`EXCEPTIONAL_SNAP`].
pub fn snap_exceptional(a: f64, c: f64, d: f64) -> Option<(f64, f64, f64)> {
    let s3 = 1.0 / 3f64.sqrt();
    [(s3, (2.0f64 / 3.0).sqrt(), s3), (s3, FRAC_1_SQRT_2, FRAC_1_SQRT_2)]
        .into_iter()
        .find(|x| (a - x.0).abs().max((c - x.1).abs()).max((d - x.2).abs()) <= EXCEPTIONAL_SNAP)
}

fn case_label(case: Dim3Case) -> &'static str {
    match case {
        Dim3Case::CircleOnly => "case (ii)",
        _ => "case (i)",
    }
}

/// Double-alpha-sets in dimension 3, either for a fixed `(a, c, d)` or for
/// random draws.
fn circle3(p: &SuiteParams) -> Result<OracleReport> {
    let cloud = cloud_for(p, 3)?;
    let mut report = OracleReport::new();
    let fixed = match (p.a, p.c, p.d) {
        (Some(a), Some(c), d) => {
            let d = d.unwrap_or_else(|| (1.0 - c * c).max(0.0).sqrt());
            Some(match snap_exceptional(a, c, d) {
                Some(t) => {
                    report.note(format!("({a}, {c}, {d}) snapped to the exceptional triple {t:?}"));
                    t
                }
                None => (a, c, d),
            })
        }
        (None, None, None) => None,
        _ => return Err(Error::Parameter("circle3 needs both a and c (d optional)".into())),
    };
    let draws = if fixed.is_some() { p.draws.unwrap_or(1) } else { p.draws.unwrap_or(20) };
    for k in 0..draws {
        let mut rng = stream(p.seed, k);
        let (a, c, d) = fixed.unwrap_or_else(|| {
            let a = rng.random_range(0.1..0.7);
            let c: f64 = rng.random_range(FRAC_1_SQRT_2..0.99);
            (a, c, (1.0 - c * c).sqrt())
        });
        let cfg = AlphaConfig::from_cos(a)?;
        let (case, margins) = dim3_case(a, c, d);
        let (e1, e2) = random_frame(&mut rng, 3);
        let lines = random_lambdas(&mut rng).map(|l| {
            canonical_line(&linalg::combine(&[C64::new(c, 0.0), l * d], &[e1.as_slice(), e2.as_slice()]))
                .expect("unit")
        });
        let (double, t, n) = double_check(&lines, &cfg, 3, &cloud, &mut rng)?;
        let expected = if case.has_second_component() { 2 } else { 1 };
        report.count("components", double.components.len() as u64);
        if fixed.is_some() {
            report.note(format!(
                "{} ({case:?}): {} components, margins a-d = {:e}, boundary-a = {:e}",
                case_label(case),
                double.components.len(),
                margins.a_minus_d,
                margins.boundary_minus_a
            ));
            if let Some((pp, qq)) = second_circle_coefficients(a, c).filter(|_| case.has_second_component()) {
                report.note(format!("second component coefficients ({pp}, {qq})"));
            }
        }
        report.check(
            &format!("draw {k} component count"),
            double.components.len() == expected,
            format!("{} components for {case:?}", double.components.len()),
        );
        record(&mut report, &format!("draw {k}"), t, n);
    }
    report.count("draws", draws as u64);
    Ok(report)
}

/// One random cardinality instance: the family, the slice angle and the
/// coordinates of the fixed line.
pub struct CardinalityDraw {
    pub family: AthetaFamily,
    pub theta: f64,
    pub c1: C64,
    pub c2: C64,
    pub c3: f64,
}

impl CardinalityDraw {
    /// The centre `z` and radius `r` of the disk of attainable inner
    /// products, recomputed directly from the draw.
    pub fn disk(&self) -> (C64, f64) {
        let f = &self.family;
        let (s, c) = self.theta.sin_cos();
        let z = self.c1 * (f.a / f.c * c) + self.c2 * (f.a / f.d * s);
        let rho2 = 1.0 - (f.a / f.c * c).powi(2) - (f.a / f.d * s).powi(2);
        (z, self.c3.abs() * rho2.max(0.0).sqrt())
    }
}

pub fn random_cardinality_draw<R: Rng + ?Sized>(rng: &mut R, cfg: &AlphaConfig) -> Result<CardinalityDraw> {
    let a = cfg.a();
    let c: f64 = rng.random_range(a.max(FRAC_1_SQRT_2) + 1e-3..1.0);
    let d = (1.0 - c * c).sqrt();
    let profile = theta0_and_rho(cfg, c, d)?;
    let family = AthetaFamily {
        e1: UnitVector::basis(4, 0),
        e2: UnitVector::basis(4, 1),
        c: profile.c,
        d: profile.d,
        a,
        theta0: profile.theta0,
        ambient_dim: 4,
    };
    let theta = rng.random_range(-profile.theta0..profile.theta0);
    let v = random_gaussian(rng, 3);
    let n = linalg::norm(&v);
    Ok(CardinalityDraw { family, theta, c1: v[0] / n, c2: v[1] / n, c3: v[2].norm() / n })
}

/// Grid used by the brute-force cardinality oracle.
pub const CARDINALITY_GRID: usize = 4096;

/// Closed-form cardinality versus the brute-force root count.
fn infinite_element(p: &SuiteParams) -> Result<OracleReport> {
    let draws = p.draws.unwrap_or(1000);
    let fixed = config_from(p)?;
    let margin = 1e-6;
    let mut report = OracleReport::new();
    let mut accepted = 0usize;
    let mut k = 0usize;
    while accepted < draws {
        let mut rng = stream(p.seed, k);
        k += 1;
        let cfg = match fixed {
            Some(c) => c,
            None => AlphaConfig::new(rng.random_range(0.1..FRAC_PI_2 - 0.02))?,
        };
        let draw = random_cardinality_draw(&mut rng, &cfg)?;
        let verdict = atheta_cardinality(&draw.family, draw.theta, draw.c1, draw.c2, draw.c3, &cfg)?;
        if verdict.margin < margin {
            report.count("skipped_near_boundary", 1);
            continue;
        }
        accepted += 1;
        let (z, r) = draw.disk();
        let oracle = oracle_cardinality(z, r, cfg.a(), CARDINALITY_GRID);
        report.count(
            match verdict.cardinality {
                Cardinality::Zero => "zero",
                Cardinality::One => "one",
                Cardinality::Infinite => "infinite",
            },
            1,
        );
        if oracle != verdict.cardinality {
            report.check(
                "agreement",
                false,
                format!("draw {k}: closed form {:?}, oracle {oracle:?} (z = {z}, r = {r})", verdict.cardinality),
            );
        }
    }
    report.count("draws", draws as u64);
    report.check("agreement", true, "");
    Ok(report)
}

/// Minimum distance of `(a, c, d)` to the dimension-3 case boundaries.
pub fn case_boundary_margin(a: f64, c: f64, d: f64) -> f64 {
    let (_, m) = dim3_case(a, c, d);
    m.a_minus_d.abs().min(m.boundary_minus_a.abs()).min(m.exceptional_distance)
}

/// Closed-form circle classification versus the empirical check, plus the
/// location of both dimension-3 transitions.
fn circle_char(p: &SuiteParams) -> Result<OracleReport> {
    let draws = p.draws.unwrap_or(100);
    let mut report = OracleReport::new();
    let outcomes: Vec<Result<(usize, OracleReport)>> = (0..draws)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(p.seed, k);
            let dim = p.dim.unwrap_or(if k % 2 == 0 { 3 } else { 4 });
            let (a, c, d) = loop {
                let a: f64 = rng.random_range(0.15..0.69);
                let d: f64 = rng.random_range(0.05..FRAC_1_SQRT_2);
                let c = (1.0 - d * d).sqrt();
                if case_boundary_margin(a, c, d) >= 1e-4 {
                    break (a, c, d);
                }
            };
            let cfg = AlphaConfig::from_cos(a)?;
            let (e1, e2) = random_frame(&mut rng, dim);
            let circle = Circle::new(e1, e2, c, d)?;
            let rep = empirical_high_symmetry_check(&circle, &cfg, dim, 3, 12, p.seed.wrapping_add(k as u64))?;
            Ok((k, rep))
        })
        .collect();
    for o in outcomes {
        let (k, rep) = o?;
        if !rep.verdict {
            report.note(format!("draw {k} disagrees"));
        }
        report.merge(rep);
    }
    report.count("draws", draws as u64);

    // The bounded case is d <= min(a, d*) with d* solving c / sqrt(1 + c^2) = a,
    // so the transition sits at d = a below a^2 = (3 - sqrt5)/2 and at d* above.
    for a in [0.5f64, 0.6, 0.65, 0.68] {
        let cfg = AlphaConfig::from_cos(a)?;
        let d = locate_transition(&cfg, 0.01, 0.7, 1e-10)?;
        let c = (1.0 - d * d).sqrt();
        let (label, gap) = if a * a < (3.0 - 5f64.sqrt()) / 2.0 {
            ("d = a", (d - a).abs())
        } else {
            ("c/sqrt(1+c^2) = a", (c / (1.0 + c * c).sqrt() - a).abs())
        };
        report.residual(gap);
        report.check(&format!("a = {a}: transition at {label}"), gap <= 1e-6, format!("found d = {d}, gap {gap:e}"));
    }
    Ok(report)
}

/// Inclusion relations between alpha-sets of nested generator sets.
fn basic(p: &SuiteParams) -> Result<OracleReport> {
    let dim = p.dim.unwrap_or(3);
    let draws = p.draws.unwrap_or(3);
    let fixed = config_from(p)?;
    let cloud = sample_lines(dim, p.cloud.unwrap_or(100_000), p.seed)?;
    let mut report = OracleReport::new();
    for k in 0..draws {
        let mut rng = stream(p.seed, k);
        let cfg = match fixed {
            Some(c) => c,
            None => AlphaConfig::new(rng.random_range(0.3..FRAC_PI_2 - 0.05))?,
        };
        let n1 = 1 + k % 2;
        let s2: Vec<Line> = (0..n1 + 1).map(|_| random_line(&mut rng, dim)).collect();
        report.merge(verify_basic_relations(&s2[..n1], &s2, &cfg, &cloud)?);
    }
    report.count("draws", draws as u64);
    Ok(report)
}

fn circle_distance(x: &Line, u1: &UnitVector, u2: &UnitVector, c0: f64) -> Result<f64> {
    Component::Circle { e1: u1.clone(), e2: u2.clone(), c: c0, d: (1.0 - c0 * c0).sqrt() }.distance(x)
}

/// A second basis of `span(e1, e2)` with `[f1] = [a e1 + mu b e2]` up to phase.
pub fn basis_in_span(e1: &UnitVector, e2: &UnitVector, a: f64, mu: C64, omega: C64) -> (UnitVector, UnitVector) {
    let b = (1.0 - a * a).max(0.0).sqrt();
    let f1 = linalg::combine(&[omega * a, omega * mu * b], &[e1.as_slice(), e2.as_slice()]);
    let f2 = linalg::combine(&[C64::new(b, 0.0), -mu * a], &[e1.as_slice(), e2.as_slice()]);
    (UnitVector::new(f1).expect("unit"), UnitVector::new(f2).expect("unit"))
}

/// Locates the overlap where the `sqrt(7/12)` circles start meeting twice.
pub fn intersection_threshold(e1: &UnitVector, e2: &UnitVector, mu: C64, tol: f64) -> Result<f64> {
    let c0 = (7.0f64 / 12.0).sqrt();
    let twice = |a: f64| -> Result<bool> {
        let (f1, f2) = basis_in_span(e1, e2, a, mu, C64::new(1.0, 0.0));
        Ok(circle_intersection(e1, e2, &f1, &f2, c0)?.at_least_two())
    };
    let (mut lo, mut hi) = (0.01, 0.5);
    if twice(lo)? || !twice(hi)? {
        return Err(Error::Parameter("no intersection-count change on [0.01, 0.5]".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if twice(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Circle intersections and bridge bases at `a = 1/sqrt(3)`.
fn section5(p: &SuiteParams) -> Result<OracleReport> {
    let dim = p.dim.unwrap_or(3);
    if dim < 2 {
        return Err(Error::Parameter(format!("dimension {dim} < 2")));
    }
    let draws = p.draws.unwrap_or(100);
    let cfg = AlphaConfig::from_cos(1.0 / 3f64.sqrt())?;
    let c0 = (7.0f64 / 12.0).sqrt();
    let mut report = OracleReport::new();
    let mut rng = stream(p.seed, 0);

    // Count transition at overlap 1/6.
    let (e1, e2) = random_frame(&mut rng, dim);
    let threshold = intersection_threshold(&e1, &e2, random_phase(&mut rng), 1e-9)?;
    report.residual((threshold - 1.0 / 6.0).abs());
    report.check("threshold at 1/6", (threshold - 1.0 / 6.0).abs() <= 1e-6, format!("found {threshold}"));

    let mut explicit = 0.0_f64;
    let mut bridge_ok = 0u64;
    for k in 0..draws {
        let mut rng = stream(p.seed, k + 1);
        let (e1, e2) = random_frame(&mut rng, dim);

        // Half circles: the two common lines are [e1 +- i mu e2]/sqrt2.
        let a: f64 = rng.random_range(0.01..0.99);
        let mu = random_phase(&mut rng);
        let (f1, f2) = basis_in_span(&e1, &e2, a, mu, random_phase(&mut rng));
        match circle_intersection(&e1, &e2, &f1, &f2, FRAC_1_SQRT_2)? {
            Intersection::Points { lines } if lines.len() == 2 => {
                for sign in [1.0, -1.0] {
                    let s = C64::new(FRAC_1_SQRT_2, 0.0);
                    let want = canonical_line(&linalg::combine(&[s, I * mu * s * sign], &[e1.as_slice(), e2.as_slice()]))?;
                    let best = lines
                        .iter()
                        .map(|l| quantum_angle(l, &want).map(|x| x.radians()))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .fold(f64::MAX, f64::min);
                    explicit = explicit.max(best);
                }
            }
            other => report.check(&format!("draw {k} half-circle points"), false, format!("{other:?}")),
        }

        // Bridges between random bases of the same plane.
        let t: f64 = rng.random_range(0.0..1.0);
        let (f1, f2) = basis_in_span(&e1, &e2, t.sqrt(), random_phase(&mut rng), random_phase(&mut rng));
        let br = bridge_basis(&e1, &e2, &f1, &f2, &cfg)?;
        let mut ok = true;
        for (u1, u2, v1, v2) in [(&e1, &e2, &br.g1, &br.g2), (&br.g1, &br.g2, &f1, &f2)] {
            match circle_intersection(u1, u2, v1, v2, c0)? {
                Intersection::Identical => {}
                Intersection::Points { lines } => {
                    ok &= lines.len() >= 2;
                    for l in &lines {
                        let r = circle_distance(l, u1, u2, c0)?.max(circle_distance(l, v1, v2, c0)?);
                        report.residual(r);
                        ok &= r <= 1e-10;
                    }
                }
            }
        }
        bridge_ok += ok as u64;
        if !ok {
            report.check(&format!("draw {k} bridge"), false, format!("{:?} branch", br.branch));
        }
    }
    report.residual(explicit);
    report.check("half-circle lines", explicit <= 1e-10, format!("max angle {explicit:e}"));
    report.count("bridges_verified", bridge_ok);
    report.count("draws", draws as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SuiteParams {
        SuiteParams { draws: Some(2), cloud: Some(20_000), seed, ..Default::default() }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for s in [Suite::Shape, Suite::CollinAlpha, Suite::Circle4, Suite::Circle3, Suite::Section5] {
            let rep = run_suite(s, &small(1)).unwrap();
            assert!(rep.verdict, "{s}: {rep:?}");
        }
        let rep = run_suite(Suite::InfiniteElement, &SuiteParams { draws: Some(200), ..Default::default() }).unwrap();
        assert!(rep.verdict, "{rep:?}");
    }

    #[test]
    fn circle3_rounded_exceptional_inputs() {
        let p = SuiteParams {
            a: Some(0.57735026919),
            c: Some(0.81649658092),
            d: Some(0.57735026919),
            cloud: Some(20_000),
            ..Default::default()
        };
        let rep = run_suite(Suite::Circle3, &p).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert_eq!(rep.counts["components"], 2);
        assert!(rep.notes.iter().any(|n| n.starts_with("case (i)")), "{:?}", rep.notes);
    }

    #[test]
    fn snapping_is_local() {
        assert!(snap_exceptional(0.57735026919, 0.81649658092, 0.57735026919).is_some());
        assert!(snap_exceptional(0.5773, 0.8165, 0.5773).is_none());
    }

    #[test]
    fn cardinality_draw_disk_matches_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = AlphaConfig::from_cos(0.6).unwrap();
        for _ in 0..50 {
            let d = random_cardinality_draw(&mut rng, &cfg).unwrap();
            let v = atheta_cardinality(&d.family, d.theta, d.c1, d.c2, d.c3, &cfg).unwrap();
            let (z, r) = d.disk();
            assert!((z.norm() - v.z_abs).abs() < 1e-12 && (r - v.r).abs() < 1e-12);
        }
    }
}
