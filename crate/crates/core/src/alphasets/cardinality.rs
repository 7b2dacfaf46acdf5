use serde::{Deserialize, Serialize};

use super::{AlphaConfig, AthetaFamily};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cardinality {
    Zero,
    One,
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CardinalityVerdict {
    pub cardinality: Cardinality,
    /// Distance of `a` from the nearest decision boundary.
    pub margin: f64,
    /// Modulus of the fixed part `z` of the inner product.
    pub z_abs: f64,
    /// Radius `r` of the disk swept by the transverse part.
    pub r: f64,
}

/// Counts the members `v` of `A_theta` with `|<v, w>| = a`, where
/// `w = c1 e1 + c2 e2 + c3 h0` for a unit `h0` orthogonal to `e1, e2`.
///
/// In dimension at least 4 the inner products `<v, w>` fill the closed disk
/// of radius `r = c3 rho(theta)` around `z`, and every interior point is hit
/// by a whole sphere of members while each boundary point is hit once.
pub fn atheta_cardinality(
    fam: &AthetaFamily,
    theta: f64,
    c1: C64,
    c2: C64,
    c3: f64,
    cfg: &AlphaConfig,
) -> Result<CardinalityVerdict> {
    if fam.ambient_dim < 4 {
        return Err(Error::Parameter(format!("ambient dimension {} < 4", fam.ambient_dim)));
    }
    if (fam.a - cfg.a()).abs() > 1e-12 {
        return Err(Error::Parameter(format!("family built for a = {}, config has a = {}", fam.a, cfg.a())));
    }
    let total = c1.norm_sqr() + c2.norm_sqr() + c3 * c3;
    if (total - 1.0).abs() > tol::PARAM_NORM {
        return Err(Error::Parameter(format!("|c1|^2 + |c2|^2 + c3^2 = {total}, expected 1")));
    }
    let rho = fam.profile().rho(theta)?;
    let a = cfg.a();
    let (s, c) = theta.sin_cos();
    let z = (c1 * (a / fam.c * c) + c2 * (a / fam.d * s)).norm();
    let r = c3.abs() * rho;
    let tau = tol::CARDINALITY;

    let (cardinality, margin) = if z < tau {
        let m = (r - a).abs();
        (if m < tau || r > a { Cardinality::Infinite } else { Cardinality::Zero }, m)
    } else if r < tau && rho >= tau {
        // Every member gives the same inner product.
        let m = (z - a).abs();
        (if m < tau { Cardinality::Infinite } else { Cardinality::Zero }, m)
    } else {
        let outer = z + r;
        let inner = z - r;
        let m = (a - outer).abs().min((a - inner).abs());
        let card = if (a - outer).abs() < tau || (inner >= 0.0 && (a - inner).abs() < tau) {
            Cardinality::One
        } else if inner < a && a < outer {
            Cardinality::Infinite
        } else {
            Cardinality::Zero
        };
        (card, m)
    };
    Ok(CardinalityVerdict { cardinality, margin, z_abs: z, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphasets::theta0_and_rho;
    use crate::linalg::UnitVector;

    fn family(cfg: &AlphaConfig, c: f64, d: f64) -> AthetaFamily {
        let p = theta0_and_rho(cfg, c, d).unwrap();
        AthetaFamily {
            e1: UnitVector::basis(4, 0),
            e2: UnitVector::basis(4, 1),
            c: p.c,
            d: p.d,
            a: p.a,
            theta0: p.theta0,
            ambient_dim: 4,
        }
    }

    #[test]
    fn three_outcomes() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let fam = family(&cfg, 0.8, 0.6);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        // w = e3: the inner products fill the disk of radius rho(theta) at 0.
        let rho0 = fam.profile().rho(0.0).unwrap();
        assert!(rho0 > 0.5);
        let v = atheta_cardinality(&fam, 0.0, zero, zero, 1.0, &cfg).unwrap();
        assert_eq!(v.cardinality, Cardinality::Infinite);
        // w = e1 at theta = 0: the inner product is a/c for every member.
        let v = atheta_cardinality(&fam, 0.0, one, zero, 0.0, &cfg).unwrap();
        assert_eq!(v.cardinality, Cardinality::Zero);
        // Small |z| inside a large disk.
        let s = 0.1_f64;
        let c3 = (1.0 - s * s).sqrt();
        let z = s * 0.5 / 0.8;
        assert!(z + c3 * rho0 > 0.5);
        let v = atheta_cardinality(&fam, 0.0, C64::new(s, 0.0), zero, c3, &cfg).unwrap();
        assert_eq!(v.cardinality, Cardinality::Infinite);
    }

    #[test]
    fn tangent_is_one() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let fam = family(&cfg, 0.8, 0.6);
        let rho0 = fam.profile().rho(0.0).unwrap();
        // Solve |z| - r = a, i.e. s (a/c) - sqrt(1 - s^2) rho0 = a.
        let f = |s: f64| s * 0.5 / 0.8 - (1.0 - s * s).sqrt() * rho0 - 0.5;
        let (mut lo, mut hi) = (0.8_f64, 1.0_f64);
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let v = atheta_cardinality(&fam, 0.0, C64::new(lo, 0.0), C64::new(0.0, 0.0), (1.0 - lo * lo).sqrt(), &cfg)
            .unwrap();
        assert_eq!(v.cardinality, Cardinality::One);
    }

    #[test]
    fn validation() {
        let cfg = AlphaConfig::from_cos(0.5).unwrap();
        let fam = family(&cfg, 0.8, 0.6);
        let one = C64::new(1.0, 0.0);
        assert!(matches!(atheta_cardinality(&fam, 0.0, one, one, 0.0, &cfg), Err(Error::Parameter(_))));
        let other = AlphaConfig::from_cos(0.6).unwrap();
        assert!(matches!(
            atheta_cardinality(&fam, 0.0, one, C64::new(0.0, 0.0), 0.0, &other),
            Err(Error::Parameter(_))
        ));
        let fam = family(&AlphaConfig::from_cos(0.7).unwrap(), 0.8, 0.6);
        let cfg = AlphaConfig::from_cos(0.7).unwrap();
        assert!(matches!(
            atheta_cardinality(&fam, fam.theta0 + 0.01, one, C64::new(0.0, 0.0), 0.0, &cfg),
            Err(Error::Domain(_))
        ));
    }
}
