use serde::{Deserialize, Serialize};

use super::{
    collinear_triple_alpha_set, dim3_case, double_alpha_set_classify, second_circle_coefficients, AlphaConfig,
};
use crate::error::{Error, Result};
use crate::linalg::{UnitVector, C64, I};
use crate::projspace::{normalise_cd, quantum_angle, Line, TripleCanonicalForm};

/// Residuals recomputed from scratch after building a witness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessChecks {
    /// Largest distance from `u1, u2, u3` to the double-alpha-set.
    pub max_membership_distance: f64,
    /// Largest `|angle(w, u_j) - alpha|`.
    pub max_angle_residual: f64,
    /// Distance from `w` to the alpha-set of the reference triple.
    pub separation: f64,
}

impl WitnessChecks {
    pub fn verified(&self) -> bool {
        self.max_membership_distance < 1e-9 && self.max_angle_residual < 1e-9 && self.separation > 1e-6
    }
}

/// Three members of a three-dimensional double-alpha-set together with a
/// line `w` at angle alpha from all three that is not in the alpha-set of
/// the reference triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub u1: Line,
    pub u2: Line,
    pub u3: Line,
    pub w: Line,
    pub lambda: C64,
    pub mu: C64,
    pub checks: WitnessChecks,
}

fn phase_from_cos(cos: f64) -> C64 {
    C64::from_polar(1.0, cos.clamp(-1.0, 1.0).acos())
}

/// Builds the witness in the standard basis of `C^3` for the circle with
/// parameters `(c, d)` and the free angle `t`.
pub fn counterexample_witness(cfg: &AlphaConfig, c: f64, d: f64, t: f64) -> Result<Witness> {
    cfg.ensure_classification_range()?;
    let (c, d) = normalise_cd(c, d)?;
    let a = cfg.a();
    let (case, _) = dim3_case(a, c, d);
    if !case.has_second_component() {
        return Err(Error::Case(format!("(a, c, d) = ({a}, {c}, {d}) has no second component")));
    }
    let (sin_t, cos_t) = t.sin_cos();
    let big_a = a * cos_t;
    let big_b = a * d / c * sin_t;
    if !(t > 0.0 && 0.0 < big_a - big_b && big_a - big_b < a && a < big_a + big_b) {
        return Err(Error::WitnessRange(format!(
            "t = {t}: need 0 < A - B < a < A + B with A = {big_a}, B = {big_b}"
        )));
    }
    let (p, q) = second_circle_coefficients(a, c).expect("second component exists");
    let r = (1.0 - (a / c).powi(2)).max(0.0).sqrt();

    let e = |k| UnitVector::basis(3, k);
    let (e1, e2, e3) = (e(0), e(1), e(2));
    let real = |x: f64| C64::new(x, 0.0);
    let w = Line::new(crate::linalg::combine(
        &[real(a / c * cos_t), real(a / c * sin_t), real(r)],
        &[e1.as_slice(), e2.as_slice(), e3.as_slice()],
    ))?;
    let lambda = phase_from_cos((a * a - big_a * big_a - big_b * big_b) / (2.0 * big_a * big_b));
    let on_circle = |l: C64| {
        Line::new(crate::linalg::combine(&[real(c), l * d], &[e1.as_slice(), e2.as_slice()])).expect("unit")
    };
    let u1 = on_circle(lambda);
    let u2 = on_circle(lambda.conj());
    let (u3, mu) = if p * p <= crate::tol::GAUGE {
        (Line::basis(3, 2), C64::new(1.0, 0.0))
    } else {
        let big_p = a / c * sin_t * p;
        let big_q = r * q;
        let mu = phase_from_cos((a * a - big_p * big_p - big_q * big_q) / (2.0 * big_p * big_q));
        (Line::new(crate::linalg::combine(&[real(p), mu * q], &[e2.as_slice(), e3.as_slice()]))?, mu)
    };

    let reference = TripleCanonicalForm::new(e1, e2, c, d, [real(1.0), I, real(-1.0)])?;
    let double = double_alpha_set_classify(&reference, cfg, 3)?;
    let alpha_set = collinear_triple_alpha_set(&reference, cfg, 3)?;
    let mut checks = WitnessChecks { max_membership_distance: 0.0, max_angle_residual: 0.0, separation: 0.0 };
    for u in [&u1, &u2, &u3] {
        checks.max_membership_distance = checks.max_membership_distance.max(double.distance(u)?);
        let ang = quantum_angle(&w, u)?.radians();
        checks.max_angle_residual = checks.max_angle_residual.max((ang - cfg.alpha()).abs());
    }
    checks.separation = alpha_set.distance(&w)?;
    Ok(Witness { u1, u2, u3, w, lambda, mu, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_for_bounded_case() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let (c, d) = (0.9, 0.19f64.sqrt());
        let w = counterexample_witness(&cfg, c, d, 0.3).unwrap();
        assert!(w.checks.verified(), "{:?}", w.checks);
    }

    #[test]
    fn witness_for_exceptional_cases() {
        let s3 = 1.0 / 3f64.sqrt();
        let cfg = AlphaConfig::from_cos(s3).unwrap();
        for (c, d) in [((2.0f64 / 3.0).sqrt(), s3), (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)] {
            let mut t = 0.6;
            let w = loop {
                match counterexample_witness(&cfg, c, d, t) {
                    Ok(w) => break w,
                    Err(Error::WitnessRange(_)) if t > 1e-3 => t *= 0.7,
                    Err(e) => panic!("{e}"),
                }
            };
            assert!(w.checks.verified(), "{:?}", w.checks);
        }
    }

    #[test]
    fn witness_errors() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        assert!(matches!(counterexample_witness(&cfg, 0.8, 0.6, 0.3), Err(Error::Case(_))));
        assert!(matches!(
            counterexample_witness(&cfg, 0.9, 0.19f64.sqrt(), 1.4),
            Err(Error::WitnessRange(_))
        ));
        let low = AlphaConfig::from_cos(0.8).unwrap();
        assert!(matches!(counterexample_witness(&low, 0.9, 0.19f64.sqrt(), 0.3), Err(Error::Range(_))));
    }
}
