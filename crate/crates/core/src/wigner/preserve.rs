use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::WignerSymmetry;
use crate::alphasets::AlphaConfig;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, random_gaussian, C64};
use crate::projspace::{canonical_line, quantum_angle, Line};

/// A map on the lines of `C^dim`, optionally with a way to pull lines back.
pub trait LineMap: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, v: &Line) -> Result<Line>;

    /// A line mapped onto `w`, when the map can produce one.
    fn preimage(&self, _w: &Line) -> Option<Line> {
        None
    }
}

impl LineMap for WignerSymmetry {
    fn dim(&self) -> usize {
        WignerSymmetry::dim(self)
    }

    fn apply(&self, v: &Line) -> Result<Line> {
        WignerSymmetry::apply(self, v)
    }

    fn preimage(&self, w: &Line) -> Option<Line> {
        self.inverse().apply(w).ok()
    }
}

/// Wraps a plain function as a forward-only [`LineMap`].
pub struct FnMap<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&Line) -> Result<Line> + Sync> LineMap for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &Line) -> Result<Line> {
        (self.f)(v)
    }
}

/// Counts of angle-preservation failures on constructed pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub forward_violations: u64,
    pub backward_violations: u64,
    pub max_deviation: f64,
    pub pairs_tested: u64,
    /// Backward pairs whose preimages were available.
    pub backward_tested: u64,
}

/// `[cos(alpha) u + sin(alpha) h]` for a random unit `h` orthogonal to `u`.
fn partner<R: rand::Rng + ?Sized>(rng: &mut R, u: &Line, alpha: f64) -> Line {
    let h = linalg::random_unit_orthogonal(rng, u.dim(), &[u.amplitudes()]).expect("dim >= 2");
    let v = linalg::combine(
        &[C64::new(alpha.cos(), 0.0), C64::new(alpha.sin(), 0.0)],
        &[u.amplitudes(), &h],
    );
    canonical_line(&v).expect("unit combination")
}

fn random_line<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> Line {
    canonical_line(&random_gaussian(rng, dim)).expect("gaussian vectors are nonzero")
}

/// Tests `angle(u, v) = alpha => angle(phi u, phi v) = alpha` on `n_pairs`
/// constructed pairs, and the converse on pullbacks of `n_pairs` more.
pub fn preservation_report(
    map: &dyn LineMap,
    cfg: &AlphaConfig,
    dim: usize,
    n_pairs: usize,
    seed: u64,
    tol: f64,
) -> Result<PreservationReport> {
    check_dim(map.dim(), dim)?;
    if dim < 2 {
        return Err(Error::Parameter(format!("dimension {dim} < 2")));
    }
    let alpha = cfg.alpha();
    let per_pair: Vec<Result<(bool, Option<bool>, f64)>> = (0..n_pairs)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let u = random_line(&mut rng, dim);
            let v = partner(&mut rng, &u, alpha);
            let fwd = (quantum_angle(&map.apply(&u)?, &map.apply(&v)?)?.radians() - alpha).abs();
            let mut dev = fwd;
            let x = random_line(&mut rng, dim);
            let y = partner(&mut rng, &x, alpha);
            let back = match (map.preimage(&x), map.preimage(&y)) {
                (Some(px), Some(py)) => {
                    let b = (quantum_angle(&px, &py)?.radians() - alpha).abs();
                    dev = dev.max(b);
                    Some(b > tol)
                }
                _ => None,
            };
            Ok((fwd > tol, back, dev))
        })
        .collect();
    let mut rep = PreservationReport { pairs_tested: n_pairs as u64, ..Default::default() };
    for r in per_pair {
        let (fwd, back, dev) = r?;
        rep.forward_violations += fwd as u64;
        if let Some(b) = back {
            rep.backward_tested += 1;
            rep.backward_violations += b as u64;
        }
        rep.max_deviation = rep.max_deviation.max(dev);
    }
    Ok(rep)
}

/// The unique line orthogonal to `v` in `C^2`: `(p, q) -> (-conj q, conj p)`.
pub fn orthogonal_line(v: &Line) -> Result<Line> {
    check_dim(2, v.dim())?;
    let [p, q] = [v.amplitudes()[0], v.amplitudes()[1]];
    canonical_line(&[-q.conj(), p.conj()])
}

/// Chooses, per line, between `psi(v)` (false) and `psi(v)^perp` (true).
/// Evaluated on the canonical gauge, so it is a function of the line.
#[derive(Clone)]
pub enum Selector {
    Constant(bool),
    /// `|v_1|^2 > threshold`.
    FirstAmplitudeSquaredAbove(f64),
    /// `||v_1|^2 - 1/2| < half_width`; invariant under `v -> v^perp`.
    MiddleBand(f64),
    Custom(Arc<dyn Fn(&Line) -> bool + Send + Sync>),
}

impl fmt::Debug for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Constant(b) => write!(f, "Constant({b})"),
            Selector::FirstAmplitudeSquaredAbove(t) => write!(f, "FirstAmplitudeSquaredAbove({t})"),
            Selector::MiddleBand(w) => write!(f, "MiddleBand({w})"),
            Selector::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Selector {
    pub fn select(&self, v: &Line) -> bool {
        let p = v.amplitudes()[0].norm_sqr();
        match self {
            Selector::Constant(b) => *b,
            Selector::FirstAmplitudeSquaredAbove(t) => p > *t,
            Selector::MiddleBand(w) => (p - 0.5).abs() < *w,
            Selector::Custom(f) => f(v),
        }
    }
}

/// `v -> psi(v)` or `v -> psi(v)^perp` on `P(C^2)`, as chosen by the selector.
#[derive(Clone, Debug)]
pub struct ExoticMap {
    psi: WignerSymmetry,
    selector: Selector,
}

pub fn exotic_pi4_map(psi: WignerSymmetry, selector: Selector) -> Result<ExoticMap> {
    check_dim(2, psi.dim())?;
    Ok(ExoticMap { psi, selector })
}

impl ExoticMap {
    pub fn psi(&self) -> &WignerSymmetry {
        &self.psi
    }

    pub fn selector(&self) -> &Selector {
        &self.selector
    }
}

impl LineMap for ExoticMap {
    fn dim(&self) -> usize {
        2
    }

    fn apply(&self, v: &Line) -> Result<Line> {
        let image = self.psi.apply(v)?;
        if self.selector.select(v) {
            orthogonal_line(&image)
        } else {
            Ok(image)
        }
    }

    /// The unique preimage when there is exactly one; `None` otherwise.
    fn preimage(&self, w: &Line) -> Option<Line> {
        let inv = self.psi.inverse();
        let direct = inv.apply(w).ok()?;
        let flipped = inv.apply(&orthogonal_line(w).ok()?).ok()?;
        match (!self.selector.select(&direct), self.selector.select(&flipped)) {
            (true, false) => Some(direct),
            (false, true) => Some(flipped),
            _ => None,
        }
    }
}

/// A constructed pair at angle `beta` whose images are at a different angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleViolation {
    pub u: Line,
    pub v: Line,
    pub beta: f64,
    pub image_angle: f64,
    pub deviation: f64,
}

/// Searches `n_pairs` pairs at angle `beta` for the largest deviation and
/// returns it when it exceeds `min_deviation`.
pub fn find_angle_violation(
    map: &dyn LineMap,
    beta: f64,
    n_pairs: usize,
    seed: u64,
    min_deviation: f64,
) -> Result<Option<AngleViolation>> {
    let dim = map.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<AngleViolation> = None;
    for _ in 0..n_pairs {
        let u = random_line(&mut rng, dim);
        let v = partner(&mut rng, &u, beta);
        let image_angle = quantum_angle(&map.apply(&u)?, &map.apply(&v)?)?.radians();
        let deviation = (image_angle - beta).abs();
        if best.as_ref().is_none_or(|b| deviation > b.deviation) {
            best = Some(AngleViolation { u, v, beta, image_angle, deviation });
        }
    }
    Ok(best.filter(|b| b.deviation > min_deviation))
}
