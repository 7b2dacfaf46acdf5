use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ShapeProfile;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, golden_min, inner, norm, project_out, unimodular, UnitVector, C64};
use crate::projspace::{vector_angle, Line};

/// `A_theta = {[(a/c) cos(theta) e1 + (a/d) sin(theta) e2 + h]}` with `h`
/// orthogonal to `e1, e2` and `|h| = rho(theta)`, for `|theta| <= theta0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AthetaFamily {
    pub e1: UnitVector,
    pub e2: UnitVector,
    pub c: f64,
    pub d: f64,
    pub a: f64,
    pub theta0: f64,
    pub ambient_dim: usize,
}

impl AthetaFamily {
    pub fn profile(&self) -> ShapeProfile {
        ShapeProfile { a: self.a, c: self.c, d: self.d, theta0: self.theta0 }
    }

    /// The part of every member of `A_theta` lying in `span(e1, e2)`.
    pub fn center(&self, theta: f64) -> Vec<C64> {
        let (s, c) = theta.sin_cos();
        linalg::combine(
            &[C64::new(self.a / self.c * c, 0.0), C64::new(self.a / self.d * s, 0.0)],
            &[self.e1.as_slice(), self.e2.as_slice()],
        )
    }

    /// The member of `A_theta` whose transverse part points along `h_dir`.
    pub fn member(&self, theta: f64, h_dir: &[C64]) -> Result<Line> {
        check_dim(self.ambient_dim, h_dir.len())?;
        let rho = self.profile().rho(theta)?;
        let mut v = self.center(theta);
        if rho > 0.0 {
            let h = project_out(h_dir, &[self.e1.as_slice(), self.e2.as_slice()]);
            let n = norm(&h);
            if n < 1e-12 {
                return Err(Error::Parameter("transverse direction lies in span(e1, e2)".into()));
            }
            linalg::axpy(&mut v, C64::new(rho / n, 0.0), &h);
        }
        Line::new(v)
    }

    /// Closest member of `A_theta` to the unit vector `x`, given the unit
    /// transverse direction `h_hat` of `x` and its length `h_len`.
    fn nearest_at(&self, theta: f64, x: &[C64], h_hat: &[C64], h_len: f64) -> Vec<C64> {
        let mut m = self.center(theta);
        let rho = self.profile().rho_unchecked(theta);
        if rho > 0.0 {
            let z = inner(x, &m);
            let omega = if h_len > 0.0 { unimodular(z).conj() } else { C64::new(1.0, 0.0) };
            linalg::axpy(&mut m, omega * rho, h_hat);
        }
        m
    }

    /// Returns `(theta, distance)` minimising the quantum angle from `x` to
    /// the family.
    pub fn nearest(&self, x: &Line) -> Result<(f64, f64)> {
        check_dim(self.ambient_dim, x.dim())?;
        let xs = x.amplitudes();
        let basis = [self.e1.as_slice(), self.e2.as_slice()];
        let hx = project_out(xs, &basis);
        let h_len = norm(&hx);
        let h_hat = if h_len > 1e-14 {
            linalg::scale(&hx, C64::new(1.0 / h_len, 0.0))
        } else {
            linalg::orthonormal_complement(self.ambient_dim, &basis).remove(0)
        };
        let dist = |t: f64| vector_angle(xs, &self.nearest_at(t, xs, &h_hat, h_len));
        let t0 = self.theta0;
        const GRID: usize = 400;
        let ts: Vec<f64> = (0..=GRID).map(|k| -t0 + 2.0 * t0 * k as f64 / GRID as f64).collect();
        let ds: Vec<f64> = ts.iter().map(|&t| dist(t)).collect();
        // Refine every local minimum of the grid; there are rarely more than two.
        let mut best = (ts[0], ds[0]);
        for k in 0..=GRID {
            let left = if k == 0 { f64::INFINITY } else { ds[k - 1] };
            let right = if k == GRID { f64::INFINITY } else { ds[k + 1] };
            if ds[k] <= left && ds[k] <= right {
                let lo = ts[k.saturating_sub(1)];
                let hi = ts[(k + 1).min(GRID)];
                let t = golden_min(&dist, lo, hi);
                let dt = dist(t);
                for cand in [(t, dt), (ts[k], ds[k])] {
                    if cand.1 < best.1 {
                        best = cand;
                    }
                }
            }
        }
        Ok(best)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Line {
        let theta = if self.theta0 >= FRAC_PI_2 {
            // A_{-pi/2} = A_{pi/2}; keep the half-open interval.
            rng.random_range(-self.theta0..self.theta0).max(-self.theta0 + 1e-15)
        } else {
            rng.random_range(-self.theta0..=self.theta0)
        };
        let h = linalg::random_unit_orthogonal(rng, self.ambient_dim, &[self.e1.as_slice(), self.e2.as_slice()])
            .expect("ambient dimension >= 3");
        self.member(theta, &h).expect("theta within domain")
    }
}

/// One piece of an alpha-set or double-alpha-set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Component {
    /// `{[c e1 + lambda d e2] : |lambda| = 1}`.
    Circle { e1: UnitVector, e2: UnitVector, c: f64, d: f64 },
    /// `{[coefficient axis + h] : |h| = radius, h orthogonal to orthogonal_to}`;
    /// `axis` lies in the span of `orthogonal_to`.
    Slice { axis: UnitVector, coefficient: f64, radius: f64, orthogonal_to: Vec<UnitVector> },
    /// A single line.
    Point { line: Line },
    /// The union of `A_theta` over `|theta| <= theta0`.
    Atheta(AthetaFamily),
}

impl Component {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Component::Circle { e1, .. } => e1.dim(),
            Component::Slice { axis, .. } => axis.dim(),
            Component::Point { line } => line.dim(),
            Component::Atheta(f) => f.ambient_dim,
        }
    }

    /// Quantum angle from `x` to the nearest member of the component.
    pub fn distance(&self, x: &Line) -> Result<f64> {
        check_dim(self.ambient_dim(), x.dim())?;
        let xs = x.amplitudes();
        Ok(match self {
            Component::Circle { e1, e2, c, d } => {
                let x1 = inner(xs, e1.as_slice());
                let x2 = inner(xs, e2.as_slice());
                let lambda = unimodular(x1).conj() * unimodular(x2);
                let m = linalg::combine(
                    &[C64::new(*c, 0.0), lambda * d],
                    &[e1.as_slice(), e2.as_slice()],
                );
                vector_angle(xs, &m)
            }
            Component::Slice { axis, coefficient, radius, orthogonal_to } => {
                let basis: Vec<&[C64]> = orthogonal_to.iter().map(|u| u.as_slice()).collect();
                let hx = project_out(xs, &basis);
                let h_len = norm(&hx);
                let mut m = linalg::scale(axis.as_slice(), C64::new(*coefficient, 0.0));
                if *radius > 0.0 {
                    let (h_hat, omega) = if h_len > 1e-14 {
                        let omega = unimodular(inner(xs, axis.as_slice())).conj();
                        (linalg::scale(&hx, C64::new(1.0 / h_len, 0.0)), omega)
                    } else {
                        let comp = linalg::orthonormal_complement(axis.dim(), &basis);
                        (comp.into_iter().next().unwrap_or_else(|| vec![C64::new(0.0, 0.0); axis.dim()]), C64::new(1.0, 0.0))
                    };
                    linalg::axpy(&mut m, omega * radius, &h_hat);
                }
                vector_angle(xs, &m)
            }
            Component::Point { line } => vector_angle(xs, line.amplitudes()),
            Component::Atheta(f) => f.nearest(x)?.1,
        })
    }

    /// A random member. Points always return themselves.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Line {
        match self {
            Component::Circle { e1, e2, c, d } => {
                let lambda = C64::from_polar(1.0, rng.random_range(0.0..TAU));
                Line::new(linalg::combine(&[C64::new(*c, 0.0), lambda * d], &[e1.as_slice(), e2.as_slice()]))
                    .expect("unit combination")
            }
            Component::Slice { axis, coefficient, radius, orthogonal_to } => {
                let basis: Vec<&[C64]> = orthogonal_to.iter().map(|u| u.as_slice()).collect();
                let mut m = linalg::scale(axis.as_slice(), C64::new(*coefficient, 0.0));
                if let Some(h) = linalg::random_unit_orthogonal(rng, axis.dim(), &basis) {
                    linalg::axpy(&mut m, C64::new(*radius, 0.0), &h);
                }
                Line::new(m).expect("unit combination")
            }
            Component::Point { line } => line.clone(),
            Component::Atheta(f) => f.sample(rng),
        }
    }

    /// Whether the component is a single line.
    pub fn is_point(&self) -> bool {
        matches!(self, Component::Point { .. })
    }
}

/// A union of components, all living in the same ambient dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSetDescriptor {
    pub ambient_dim: usize,
    pub components: Vec<Component>,
}

impl AlphaSetDescriptor {
    pub fn distance(&self, x: &Line) -> Result<f64> {
        check_dim(self.ambient_dim, x.dim())?;
        let mut best = f64::INFINITY;
        for c in &self.components {
            best = best.min(c.distance(x)?);
        }
        Ok(best)
    }

    pub fn contains(&self, x: &Line, tol: f64) -> Result<bool> {
        Ok(self.distance(x)? <= tol)
    }

    /// `n` random members from each component; points contribute once.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<Line> {
        let mut out = Vec::new();
        for c in &self.components {
            let k = if c.is_point() { 1 } else { n };
            out.extend((0..k).map(|_| c.sample(rng)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphasets::{pair_alpha_set, AlphaConfig};
    use crate::linalg::random_gaussian;
    use crate::projspace::{canonical_line, quantum_angle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_line(rng: &mut ChaCha8Rng, dim: usize) -> Line {
        canonical_line(&random_gaussian(rng, dim)).unwrap()
    }

    #[test]
    fn samples_have_zero_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = AlphaConfig::new(1.15).unwrap();
        for dim in [3, 4, 5] {
            let v1 = random_line(&mut rng, dim);
            let v2 = random_line(&mut rng, dim);
            let desc = pair_alpha_set(&v1, &v2, &cfg).unwrap();
            for m in desc.sample(&mut rng, 50) {
                assert!(desc.distance(&m).unwrap() < 1e-9);
                for v in [&v1, &v2] {
                    assert!((quantum_angle(&m, v).unwrap().radians() - cfg.alpha()).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn distance_is_bounded_by_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cfg = AlphaConfig::new(1.0).unwrap();
        let v1 = random_line(&mut rng, 3);
        let v2 = random_line(&mut rng, 3);
        let desc = pair_alpha_set(&v1, &v2, &cfg).unwrap();
        let members = desc.sample(&mut rng, 20000);
        for _ in 0..20 {
            let x = random_line(&mut rng, 3);
            let d = desc.distance(&x).unwrap();
            let brute = members.iter().map(|m| quantum_angle(&x, m).unwrap().radians()).fold(f64::INFINITY, f64::min);
            assert!(d <= brute + 1e-12, "{d} > {brute}");
            assert!(brute - d < 0.05, "sampled minimum {brute} far above {d}");
        }
    }

    #[test]
    fn circle_distance_and_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let comp = Component::Circle {
            e1: UnitVector::basis(3, 0),
            e2: UnitVector::basis(3, 1),
            c: 0.8,
            d: 0.6,
        };
        for _ in 0..20 {
            assert!(comp.distance(&comp.sample(&mut rng)).unwrap() < 1e-12);
        }
        let off = Line::basis(3, 2);
        assert!((comp.distance(&off).unwrap() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn descriptor_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cfg = AlphaConfig::new(1.1).unwrap();
        let desc = pair_alpha_set(&random_line(&mut rng, 4), &random_line(&mut rng, 4), &cfg).unwrap();
        let json = serde_json::to_string(&desc).unwrap();
        assert!(json.contains("\"kind\":\"atheta\""));
        let back: AlphaSetDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, desc);
    }

    #[test]
    fn golden_section_finds_minimum() {
        let t = golden_min(&|x: f64| (x - 0.3).abs(), -1.0, 1.0);
        assert!((t - 0.3).abs() < 1e-12);
    }
}
