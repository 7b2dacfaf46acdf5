use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::alphasets::AlphaConfig;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, inner, norm, project_out, unimodular, UnitVector, C64};
use crate::projspace::{canonical_line, Line};

/// The two circle parameters for which intersections are supported.
fn supported_c0(c0: f64) -> Result<()> {
    let seven_twelfths = (7.0f64 / 12.0).sqrt();
    if (c0 - FRAC_1_SQRT_2).abs() < 1e-12 || (c0 - seven_twelfths).abs() < 1e-12 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("c0 = {c0} must be 1/sqrt(2) or sqrt(7/12)")))
    }
}

/// Common lines of two circles in the same projective line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Intersection {
    Points { lines: Vec<Line> },
    /// The circles coincide.
    Identical,
}

impl Intersection {
    /// `None` for identical circles.
    pub fn count(&self) -> Option<usize> {
        match self {
            Intersection::Points { lines } => Some(lines.len()),
            Intersection::Identical => None,
        }
    }

    /// At least two common lines, counting identical circles.
    pub fn at_least_two(&self) -> bool {
        self.count().is_none_or(|n| n >= 2)
    }
}

/// `(a, b, mu)` with `[f1] = [a e1 + mu b e2]`, `a, b >= 0`.
fn relative_position(e1: &[C64], e2: &[C64], f1: &[C64]) -> (f64, f64, C64) {
    let alpha = inner(f1, e1);
    let beta = inner(f1, e2);
    let omega = unimodular(alpha);
    (alpha.norm(), beta.norm(), unimodular(omega.conj() * beta))
}

fn check_bases(e1: &UnitVector, e2: &UnitVector, f1: &UnitVector, f2: &UnitVector) -> Result<()> {
    for v in [e2, f1, f2] {
        check_dim(e1.dim(), v.dim())?;
    }
    linalg::check_orthonormal(&[e1.as_slice(), e2.as_slice()])?;
    linalg::check_orthonormal(&[f1.as_slice(), f2.as_slice()])?;
    let span = [e1.as_slice(), e2.as_slice()];
    let residual = norm(&project_out(f1.as_slice(), &span)).max(norm(&project_out(f2.as_slice(), &span)));
    if residual > 1e-9 {
        return Err(Error::Span { residual });
    }
    Ok(())
}

/// Lines on both `{[c0 e1 + lambda d0 e2]}` and `{[c0 f1 + lambda d0 f2]}`.
///
/// Writing `[f1] = [a e1 + mu b e2]`, a point of the second circle lies on
/// the first exactly when `|a + lambda (d0/c0) b| = 1`.
pub fn circle_intersection(
    e1: &UnitVector,
    e2: &UnitVector,
    f1: &UnitVector,
    f2: &UnitVector,
    c0: f64,
) -> Result<Intersection> {
    supported_c0(c0)?;
    check_bases(e1, e2, f1, f2)?;
    let d0 = (1.0 - c0 * c0).sqrt();
    let (a, b, mu) = relative_position(e1.as_slice(), e2.as_slice(), f1.as_slice());
    let same_pair = b < 1e-12 || (a < 1e-12 && (c0 - d0).abs() < 1e-12);
    if same_pair {
        return Ok(Intersection::Identical);
    }
    let big_a = a;
    let big_b = d0 / c0 * b;
    if big_a < 1e-15 {
        // |lambda B| = 1 has either every lambda or none as solutions.
        return Ok(if (big_b - 1.0).abs() < 1e-12 {
            Intersection::Identical
        } else {
            Intersection::Points { lines: vec![] }
        });
    }
    let cos_phi = (1.0 - big_a * big_a - big_b * big_b) / (2.0 * big_a * big_b);
    let phis: Vec<f64> = if (cos_phi.abs() - 1.0).abs() <= 1e-12 {
        vec![if cos_phi > 0.0 { 0.0 } else { std::f64::consts::PI }]
    } else if cos_phi.abs() < 1.0 {
        let phi = cos_phi.acos();
        vec![phi, -phi]
    } else {
        vec![]
    };
    let f1p = [C64::new(a, 0.0), mu * b];
    let f2p = [C64::new(b, 0.0), -mu * a];
    let lines = phis
        .into_iter()
        .map(|phi| {
            let lambda = C64::from_polar(1.0, phi);
            let c1 = f1p[0] * c0 + lambda * d0 * f2p[0];
            let c2 = f1p[1] * c0 + lambda * d0 * f2p[1];
            canonical_line(&linalg::combine(&[c1, c2], &[e1.as_slice(), e2.as_slice()]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Intersection::Points { lines })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BridgeBranch {
    /// `1/6 < |<e1, f1>|`: the first basis already works.
    Direct,
    /// `g = (e1 +- mu e2)/sqrt2`.
    Rotated,
}

/// An intermediate basis whose circle meets both given circles twice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bridge {
    pub g1: UnitVector,
    pub g2: UnitVector,
    pub branch: BridgeBranch,
    /// `|<g1, e1>|`.
    pub overlap_e: f64,
    /// `|<g1, f1>|`.
    pub overlap_f: f64,
}

pub fn bridge_basis(
    e1: &UnitVector,
    e2: &UnitVector,
    f1: &UnitVector,
    f2: &UnitVector,
    cfg: &AlphaConfig,
) -> Result<Bridge> {
    if (cfg.a() - 1.0 / 3f64.sqrt()).abs() > 1e-12 {
        return Err(Error::Parameter(format!("bridge needs a = 1/sqrt(3), got {}", cfg.a())));
    }
    check_bases(e1, e2, f1, f2)?;
    let (a, _, mu) = relative_position(e1.as_slice(), e2.as_slice(), f1.as_slice());
    let (g1, g2, branch) = if a > 1.0 / 6.0 {
        (e1.clone(), e2.clone(), BridgeBranch::Direct)
    } else {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let g1 = linalg::combine(&[s, s * mu], &[e1.as_slice(), e2.as_slice()]);
        let g2 = linalg::combine(&[s, -s * mu], &[e1.as_slice(), e2.as_slice()]);
        (UnitVector::new(g1)?, UnitVector::new(g2)?, BridgeBranch::Rotated)
    };
    let overlap_e = inner(g1.as_slice(), e1.as_slice()).norm();
    let overlap_f = inner(g1.as_slice(), f1.as_slice()).norm();
    if !(overlap_e > 1.0 / 6.0 - 1e-10 && overlap_f > 1.0 / 6.0 - 1e-10) {
        return Err(Error::Parameter(format!(
            "bridge post-check failed: overlaps {overlap_e}, {overlap_f}"
        )));
    }
    Ok(Bridge { g1, g2, branch, overlap_e, overlap_f })
}
