//! Closed-form alpha-sets and double-alpha-sets of pairs and collinear
//! triples of lines.

mod cardinality;
mod descriptor;
mod witness;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, UnitVector};
use crate::projspace::{self, canonical_pair_form, Line, TripleCanonicalForm};
use crate::tol;

pub use cardinality::{atheta_cardinality, Cardinality, CardinalityVerdict};
pub use descriptor::{AlphaSetDescriptor, AthetaFamily, Component};
pub use witness::{counterexample_witness, Witness, WitnessChecks};

/// The fixed quantum angle `alpha` together with `a = cos alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaConfig {
    alpha: f64,
    a: f64,
}

impl AlphaConfig {
    /// Accepts any `0 < alpha < pi/2`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < FRAC_PI_2) {
            return Err(Error::Range(format!("alpha = {alpha} outside (0, pi/2)")));
        }
        Ok(AlphaConfig { alpha, a: alpha.cos() })
    }

    /// Builds the configuration from `a = cos alpha`, keeping `a` exact.
    pub fn from_cos(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Range(format!("a = {a} outside (0, 1)")));
        }
        Ok(AlphaConfig { alpha: a.acos(), a })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Classification results only hold for `pi/4 < alpha < pi/2`.
    pub fn ensure_classification_range(&self) -> Result<()> {
        if self.alpha > FRAC_PI_4 && self.alpha < FRAC_PI_2 && self.a < FRAC_1_SQRT_2 {
            Ok(())
        } else {
            Err(Error::Range(format!(
                "alpha = {} outside (pi/4, pi/2) required for classification",
                self.alpha
            )))
        }
    }
}

/// `theta0` and the radius function `rho` describing the pair alpha-set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeProfile {
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub theta0: f64,
}

impl ShapeProfile {
    pub fn rho(&self, theta: f64) -> Result<f64> {
        if theta.abs() > self.theta0 + 1e-12 {
            return Err(Error::Domain(format!(
                "theta = {theta} outside [-{0}, {0}]",
                self.theta0
            )));
        }
        Ok(self.rho_unchecked(theta))
    }

    pub(crate) fn rho_unchecked(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (p, q) = (self.a / self.c, self.a / self.d);
        (1.0 - p * p * c * c - q * q * s * s).max(0.0).sqrt()
    }
}

/// Computes `theta0` by bisection; `rho` is available on the returned profile.
pub fn theta0_and_rho(cfg: &AlphaConfig, c: f64, d: f64) -> Result<ShapeProfile> {
    let (c, d) = projspace::normalise_cd(c, d)?;
    let a = cfg.a();
    if !(c > a) {
        return Err(Error::Parameter(format!("need c > a, got c = {c}, a = {a}")));
    }
    let theta0 = if a <= d {
        FRAC_PI_2
    } else {
        let (p, q) = ((a / c).powi(2), (a / d).powi(2));
        // Increasing on [0, pi/2], negative at 0 and positive at pi/2.
        let f = |t: f64| p * t.cos().powi(2) + q * t.sin().powi(2) - 1.0;
        let (mut lo, mut hi) = (0.0_f64, FRAC_PI_2);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo < 1e-16 {
                break;
            }
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if f(lo).abs() < f(hi).abs() {
            lo
        } else {
            hi
        }
    };
    Ok(ShapeProfile { a, c, d, theta0 })
}

/// The alpha-set of two distinct lines: one `A_theta` family.
pub fn pair_alpha_set(v1: &Line, v2: &Line, cfg: &AlphaConfig) -> Result<AlphaSetDescriptor> {
    check_dim(v1.dim(), v2.dim())?;
    if v1.dim() < 3 {
        return Err(Error::Parameter(format!("ambient dimension {} < 3", v1.dim())));
    }
    let pair = canonical_pair_form(v1, v2)?;
    let profile = theta0_and_rho(cfg, pair.c, pair.d)?;
    let family = AthetaFamily {
        e1: pair.e1,
        e2: pair.e2,
        c: profile.c,
        d: profile.d,
        a: profile.a,
        theta0: profile.theta0,
        ambient_dim: v1.dim(),
    };
    Ok(AlphaSetDescriptor { ambient_dim: v1.dim(), components: vec![Component::Atheta(family)] })
}

fn check_triple(t: &TripleCanonicalForm, cfg: &AlphaConfig, ambient_dim: usize) -> Result<()> {
    check_dim(ambient_dim, t.dim())?;
    if ambient_dim < 3 {
        return Err(Error::Parameter(format!("ambient dimension {ambient_dim} < 3")));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if (t.lambdas[i] - t.lambdas[j]).norm() < tol::LINE_EQ {
            return Err(Error::DegenerateTriple(format!("lambda_{} = lambda_{}", i + 1, j + 1)));
        }
    }
    if !(t.c > cfg.a()) {
        return Err(Error::Parameter(format!("need c > a, got c = {}, a = {}", t.c, cfg.a())));
    }
    Ok(())
}

/// `{[coef axis + h] : |h| = radius, h orthogonal to e1, e2}`, collapsing to
/// a point when the radius vanishes.
fn slice(axis: &UnitVector, coefficient: f64, radius: f64, e1: &UnitVector, e2: &UnitVector) -> Component {
    if radius <= tol::GAUGE {
        Component::Point { line: Line::new(axis.as_slice().to_vec()).expect("unit vector") }
    } else {
        Component::Slice {
            axis: axis.clone(),
            coefficient,
            radius,
            orthogonal_to: vec![e1.clone(), e2.clone()],
        }
    }
}

/// The alpha-set of three pairwise different collinear lines.
pub fn collinear_triple_alpha_set(
    t: &TripleCanonicalForm,
    cfg: &AlphaConfig,
    ambient_dim: usize,
) -> Result<AlphaSetDescriptor> {
    check_triple(t, cfg, ambient_dim)?;
    let a = cfg.a();
    let mut components = vec![slice(&t.e1, a / t.c, (1.0 - (a / t.c).powi(2)).max(0.0).sqrt(), &t.e1, &t.e2)];
    if a <= t.d + tol::EXCEPTIONAL {
        let q = (a / t.d).min(1.0);
        components.push(slice(&t.e2, q, (1.0 - q * q).max(0.0).sqrt(), &t.e1, &t.e2));
    }
    Ok(AlphaSetDescriptor { ambient_dim, components })
}

/// Which branch of the three-dimensional double-alpha-set classification
/// applies to `(a, c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dim3Case {
    /// `c / sqrt(1 + c^2) >= a > d`: circle plus a second circle or point.
    Bounded,
    /// `(a, c, d) = (1/sqrt3, sqrt(2/3), 1/sqrt3)`: two circles.
    ExceptionalCircleCircle,
    /// `(a, c, d) = (1/sqrt3, 1/sqrt2, 1/sqrt2)`: circle plus `[e3]`.
    ExceptionalCirclePoint,
    /// Everything else: the double-alpha-set is the circle alone.
    CircleOnly,
}

impl Dim3Case {
    pub fn has_second_component(self) -> bool {
        self != Dim3Case::CircleOnly
    }
}

/// Signed distances of `(a, c, d)` to the boundaries of the case split.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseMargins {
    /// `a - d`; the bounded branch needs this positive.
    pub a_minus_d: f64,
    /// `c / sqrt(1 + c^2) - a`; the bounded branch needs this non-negative.
    pub boundary_minus_a: f64,
    /// Max-norm distance to the nearer exceptional triple.
    pub exceptional_distance: f64,
}

pub fn dim3_case(a: f64, c: f64, d: f64) -> (Dim3Case, CaseMargins) {
    let s3 = 1.0 / 3f64.sqrt();
    let dist = |x: (f64, f64, f64)| (a - x.0).abs().max((c - x.1).abs()).max((d - x.2).abs());
    let circle_circle = dist((s3, (2.0f64 / 3.0).sqrt(), s3));
    let circle_point = dist((s3, FRAC_1_SQRT_2, FRAC_1_SQRT_2));
    let margins = CaseMargins {
        a_minus_d: a - d,
        boundary_minus_a: c / (1.0 + c * c).sqrt() - a,
        exceptional_distance: circle_circle.min(circle_point),
    };
    let case = if circle_circle <= tol::EXCEPTIONAL {
        Dim3Case::ExceptionalCircleCircle
    } else if circle_point <= tol::EXCEPTIONAL {
        Dim3Case::ExceptionalCirclePoint
    } else if margins.boundary_minus_a >= -tol::CASE_MARGIN && margins.a_minus_d > tol::CASE_MARGIN {
        Dim3Case::Bounded
    } else {
        Dim3Case::CircleOnly
    };
    (case, margins)
}

/// Coefficients `(p, q)` of the second circle `{[p e2 + lambda q e3]}`,
/// or `None` when `a > c / sqrt(1 + c^2)` makes it empty.
pub fn second_circle_coefficients(a: f64, c: f64) -> Option<(f64, f64)> {
    let r2 = 1.0 - (a / c).powi(2);
    let p2 = 1.0 - a * a / r2;
    if p2 < -tol::CASE_MARGIN {
        return None;
    }
    let p = p2.max(0.0).sqrt();
    let q = (a / r2.sqrt()).min(1.0);
    Some((p, q))
}

/// The double-alpha-set of a collinear triple in canonical form.
pub fn double_alpha_set_classify(
    t: &TripleCanonicalForm,
    cfg: &AlphaConfig,
    ambient_dim: usize,
) -> Result<AlphaSetDescriptor> {
    cfg.ensure_classification_range()?;
    check_triple(t, cfg, ambient_dim)?;
    let circle = Component::Circle { e1: t.e1.clone(), e2: t.e2.clone(), c: t.c, d: t.d };
    let mut components = vec![circle];
    if ambient_dim == 3 {
        let (case, _) = dim3_case(cfg.a(), t.c, t.d);
        if case.has_second_component() {
            let (p, q) = second_circle_coefficients(cfg.a(), t.c)
                .expect("second circle exists in the bounded and exceptional cases");
            let e3 = linalg::orthonormal_complement(3, &[t.e1.as_slice(), t.e2.as_slice()]).remove(0);
            let e3 = UnitVector::new(e3)?;
            if p * p <= tol::GAUGE {
                components.push(Component::Point { line: Line::new(e3.into_inner())? });
            } else {
                components.push(Component::Circle { e1: t.e2.clone(), e2: e3, c: p, d: q });
            }
        }
    }
    Ok(AlphaSetDescriptor { ambient_dim, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::linalg::random_gaussian;
    use crate::projspace::{canonical_line, quantum_angle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn config_ranges() {
        assert!(AlphaConfig::new(0.0).is_err());
        assert!(AlphaConfig::new(FRAC_PI_2).is_err());
        assert!(AlphaConfig::new(0.3).unwrap().ensure_classification_range().is_err());
        assert!(AlphaConfig::new(1.0).unwrap().ensure_classification_range().is_ok());
        assert!(AlphaConfig::from_cos(1.0 / 3f64.sqrt()).unwrap().ensure_classification_range().is_ok());
    }

    #[test]
    fn rho_constant_when_c_equals_d() {
        let cfg = AlphaConfig::new(1.1).unwrap();
        let p = theta0_and_rho(&cfg, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        assert_eq!(p.theta0, FRAC_PI_2);
        let expected = (1.0 - 2.0 * cfg.a() * cfg.a()).sqrt();
        for k in 0..=100 {
            let th = -FRAC_PI_2 + std::f64::consts::PI * k as f64 / 100.0;
            assert!((p.rho(th).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn theta0_is_right_angle_when_a_at_most_d() {
        let cfg = AlphaConfig::from_cos(0.4).unwrap();
        let p = theta0_and_rho(&cfg, (1.0f64 - 0.25).sqrt(), 0.5).unwrap();
        assert_eq!(p.theta0, FRAC_PI_2);
    }

    #[test]
    fn theta0_matches_closed_form_in_sin_squared() {
        let cfg = AlphaConfig::from_cos(0.6).unwrap();
        let (c, d) = (0.75f64.sqrt(), 0.5);
        let p = theta0_and_rho(&cfg, c, d).unwrap();
        let (x, y) = ((0.6 / c).powi(2), (0.6 / d).powi(2));
        assert!((x * p.theta0.cos().powi(2) + y * p.theta0.sin().powi(2) - 1.0).abs() < 1e-12);
        // Independent route: the defining equation is linear in s = sin^2.
        let s = (1.0 - x) / (y - x);
        assert!((p.theta0 - s.sqrt().asin()).abs() < 1e-12);
        assert!(p.rho(p.theta0).unwrap() < 1e-7);
        assert!(matches!(p.rho(p.theta0 + 1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn theta0_rejects_bad_parameters() {
        let cfg = AlphaConfig::from_cos(0.6).unwrap();
        assert!(matches!(theta0_and_rho(&cfg, 0.5, 0.75f64.sqrt()), Err(Error::Parameter(_))));
        assert!(matches!(theta0_and_rho(&cfg, 0.9, 0.9), Err(Error::Parameter(_))));
        let steep = AlphaConfig::from_cos(0.95).unwrap();
        assert!(matches!(theta0_and_rho(&steep, 0.9, 0.19f64.sqrt()), Err(Error::Parameter(_))));
    }

    #[test]
    fn rho_is_unimodal() {
        let cfg = AlphaConfig::from_cos(0.55).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let d: f64 = rng.random_range(0.05..0.7);
            let p = theta0_and_rho(&cfg, (1.0 - d * d).sqrt(), d).unwrap();
            let vals: Vec<f64> = (0..1000)
                .map(|k| p.rho(-p.theta0 + 2.0 * p.theta0 * k as f64 / 999.0).unwrap())
                .collect();
            let peak = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
            assert!(vals[..=peak].windows(2).all(|w| w[1] >= w[0] - 1e-15));
            assert!(vals[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-15));
        }
    }

    fn std_triple(c: f64, d: f64) -> TripleCanonicalForm {
        TripleCanonicalForm::new(
            UnitVector::basis(3, 0),
            UnitVector::basis(3, 1),
            c,
            d,
            [C64::new(1.0, 0.0), linalg::I, C64::new(-1.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn triple_alpha_set_component_counts() {
        let cfg = AlphaConfig::from_cos(0.6).unwrap();
        let t = std_triple(0.8, 0.6);
        // a = d: second slice collapses to [e2].
        let desc = collinear_triple_alpha_set(&t, &cfg, 3).unwrap();
        assert_eq!(desc.components.len(), 2);
        match &desc.components[1] {
            Component::Point { line } => {
                assert!(quantum_angle(line, &Line::basis(3, 1)).unwrap().radians() < 1e-12)
            }
            other => panic!("expected point, got {other:?}"),
        }
        let cfg = AlphaConfig::from_cos(0.65).unwrap();
        assert_eq!(collinear_triple_alpha_set(&t, &cfg, 3).unwrap().components.len(), 1);
    }

    #[test]
    fn triple_alpha_set_rejects_repeated_lambda() {
        let cfg = AlphaConfig::from_cos(0.6).unwrap();
        let mut t = std_triple(0.8, 0.6);
        t.lambdas[2] = t.lambdas[0];
        assert!(matches!(collinear_triple_alpha_set(&t, &cfg, 3), Err(Error::DegenerateTriple(_))));
    }

    #[test]
    fn exceptional_circle_circle() {
        let s3 = 1.0 / 3f64.sqrt();
        let cfg = AlphaConfig::from_cos(s3).unwrap();
        let desc = double_alpha_set_classify(&std_triple((2.0f64 / 3.0).sqrt(), s3), &cfg, 3).unwrap();
        assert_eq!(desc.components.len(), 2);
        match &desc.components[1] {
            Component::Circle { c, d, .. } => {
                assert!((c - s3).abs() < 1e-12);
                assert!((d - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
            }
            other => panic!("expected circle, got {other:?}"),
        }
    }

    #[test]
    fn exceptional_circle_point() {
        let s3 = 1.0 / 3f64.sqrt();
        let cfg = AlphaConfig::from_cos(s3).unwrap();
        let desc = double_alpha_set_classify(&std_triple(FRAC_1_SQRT_2, FRAC_1_SQRT_2), &cfg, 3).unwrap();
        assert_eq!(desc.components.len(), 2);
        match &desc.components[1] {
            Component::Point { line } => {
                assert!(quantum_angle(line, &Line::basis(3, 2)).unwrap().radians() < 1e-12)
            }
            other => panic!("expected point, got {other:?}"),
        }
    }

    #[test]
    fn dim4_is_single_circle() {
        let cfg = AlphaConfig::from_cos(1.0 / 3f64.sqrt()).unwrap();
        let t = TripleCanonicalForm::new(
            UnitVector::basis(4, 0),
            UnitVector::basis(4, 1),
            (2.0f64 / 3.0).sqrt(),
            1.0 / 3f64.sqrt(),
            [C64::new(1.0, 0.0), linalg::I, C64::new(-1.0, 0.0)],
        )
        .unwrap();
        let desc = double_alpha_set_classify(&t, &cfg, 4).unwrap();
        assert_eq!(desc.components.len(), 1);
        for v in t.lines() {
            assert!(desc.distance(&v).unwrap() < 1e-12);
        }
    }

    #[test]
    fn classification_needs_obtuse_range() {
        let cfg = AlphaConfig::from_cos(0.8).unwrap();
        let t = std_triple(0.9, 0.19f64.sqrt());
        assert!(matches!(double_alpha_set_classify(&t, &cfg, 3), Err(Error::Range(_))));
    }

    #[test]
    fn case_split_boundaries() {
        // On the boundary c / sqrt(1 + c^2) = a with a > d: bounded branch, point.
        let a: f64 = 0.65;
        let c = (a * a / (1.0 - a * a)).sqrt();
        let d = (1.0 - c * c).sqrt();
        assert_eq!(dim3_case(a, c, d).0, Dim3Case::Bounded);
        let (p, _) = second_circle_coefficients(a, c).unwrap();
        assert!(p < 1e-6);
        assert_eq!(dim3_case(0.5, 0.75f64.sqrt(), 0.5).0, Dim3Case::CircleOnly);
        assert_eq!(dim3_case(0.5, 0.8, 0.6).0, Dim3Case::CircleOnly);
        assert_eq!(dim3_case(0.5, 0.9, 0.19f64.sqrt()).0, Dim3Case::Bounded);
    }

    #[test]
    fn pair_alpha_set_member_at_theta_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cfg = AlphaConfig::new(1.2).unwrap();
        let v1 = canonical_line(&random_gaussian(&mut rng, 4)).unwrap();
        let v2 = canonical_line(&random_gaussian(&mut rng, 4)).unwrap();
        let desc = pair_alpha_set(&v1, &v2, &cfg).unwrap();
        let Component::Atheta(fam) = &desc.components[0] else { panic!() };
        let h = linalg::random_unit_orthogonal(&mut rng, 4, &[fam.e1.as_slice(), fam.e2.as_slice()]).unwrap();
        let m = fam.member(0.0, &h).unwrap();
        for v in [&v1, &v2] {
            assert!((quantum_angle(&m, v).unwrap().radians() - cfg.alpha()).abs() < 1e-10);
        }
    }

    #[test]
    fn pair_alpha_set_endpoint_is_single_line() {
        let cfg = AlphaConfig::from_cos(0.6).unwrap();
        let e1 = UnitVector::basis(3, 0);
        let e2 = UnitVector::basis(3, 1);
        let (c, d) = (0.75f64.sqrt(), 0.5);
        let v1 = projspace::line_on_circle(&e1, &e2, c, d, linalg::I);
        let v2 = projspace::line_on_circle(&e1, &e2, c, d, -linalg::I);
        let desc = pair_alpha_set(&v1, &v2, &cfg).unwrap();
        let Component::Atheta(fam) = &desc.components[0] else { panic!() };
        let p = fam.profile();
        assert!(p.theta0 < FRAC_PI_2);
        assert!(p.rho(p.theta0).unwrap() < 1e-7);
    }
}
