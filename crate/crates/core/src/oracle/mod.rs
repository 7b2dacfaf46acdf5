//! Brute-force numerical checks: sample clouds on projective space, numeric
//! alpha-sets with local refinement, and root counting on circles.

mod basic;
mod cloud;
mod refine;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphasets::{AlphaConfig, Cardinality};
use crate::error::{check_dim, Error, Result};
use crate::linalg::C64;
use crate::projspace::{vector_angle, Line};

pub use basic::verify_basic_relations;
pub use cloud::{sample_lines, SampleCloud};
pub use refine::{discover_and_refine, refine_from_starts, RefineOptions, RefinedMember};

/// Outcome of a numeric verification run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdict: bool,
    pub max_residual: f64,
    pub counts: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl OracleReport {
    pub fn new() -> Self {
        OracleReport { verdict: true, ..Default::default() }
    }

    pub fn count(&mut self, key: &str, n: u64) {
        *self.counts.entry(key.to_string()).or_insert(0) += n;
    }

    pub fn residual(&mut self, r: f64) {
        if r.is_nan() {
            self.max_residual = f64::NAN;
        } else if !(self.max_residual >= r) {
            self.max_residual = r;
        }
    }

    /// Records a named check; a failing check flips the verdict.
    pub fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.count(if ok { "checks_passed" } else { "checks_failed" }, 1);
        if !ok {
            self.verdict = false;
            self.notes.push(format!("{name}: {}", detail.into()));
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: OracleReport) {
        self.verdict &= other.verdict;
        self.residual(other.max_residual);
        for (k, v) in other.counts {
            self.count(&k, v);
        }
        self.notes.extend(other.notes);
    }
}

pub(crate) fn check_generators(s: &[Line], dim: usize) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Parameter("empty generating set".into()));
    }
    for g in s {
        check_dim(dim, g.dim())?;
    }
    Ok(())
}

/// Largest `|angle(x, g) - alpha|` over the generators.
pub fn alpha_residual(x: &[C64], s: &[Line], alpha: f64) -> f64 {
    s.iter().map(|g| (vector_angle(x, g.amplitudes()) - alpha).abs()).fold(0.0, f64::max)
}

/// Cloud members whose angle to every generator is within `tol` of alpha.
pub fn alpha_set_numeric(s: &[Line], cfg: &AlphaConfig, cloud: &SampleCloud, tol: f64) -> Result<Vec<Line>> {
    check_generators(s, cloud.dim())?;
    let alpha = cfg.alpha();
    Ok((0..cloud.len())
        .into_par_iter()
        .filter(|&i| alpha_residual(cloud.point(i), s, alpha) <= tol)
        .map(|i| cloud.line(i))
        .collect())
}

/// Number of solutions of `|z + r lambda| = a` on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootCount {
    Finite(u32),
    Infinite,
}

/// Counts the roots of `f(phi) = |z + r e^{i phi}| - a` on a uniform grid of
/// `grid` points (at least 1000). Sign changes are counted cyclically and
/// touching roots are resolved by a golden-section search on each local
/// minimum of `|f|`.
pub fn root_count_on_circle(z: C64, r: f64, a: f64, grid: usize) -> RootCount {
    let n = grid.max(1000);
    let f = |phi: f64| (z + C64::from_polar(r, phi)).norm() - a;
    let step = std::f64::consts::TAU / n as f64;
    let vals: Vec<f64> = (0..n).map(|k| f(k as f64 * step)).collect();
    let max_abs = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max_abs < 1e-12 {
        return RootCount::Infinite;
    }
    const ZERO: f64 = 1e-12;
    let sign = |v: f64| if v.abs() < ZERO { 0.0 } else { v.signum() };
    let nonzero: Vec<usize> = (0..n).filter(|&k| sign(vals[k]) != 0.0).collect();
    let mut count = 0u32;
    // Walk consecutive nonzero grid values; a sign change is one crossing and a
    // run of zeros between equal signs is one touching root.
    for w in 0..nonzero.len() {
        let (i, j) = (nonzero[w], nonzero[(w + 1) % nonzero.len()]);
        let gap = match (j + n - i) % n {
            0 => n,
            g => g,
        };
        if sign(vals[i]) != sign(vals[j]) || gap > 1 {
            count += 1;
        }
    }
    // Near-tangencies: strict local minima of |f| between same-signed neighbours.
    for k in 0..n {
        let (prev, next) = (vals[(k + n - 1) % n], vals[(k + 1) % n]);
        let v = vals[k];
        let s = sign(v);
        if s == 0.0 || sign(prev) != s || sign(next) != s {
            continue;
        }
        if !(v.abs() < prev.abs() && v.abs() < next.abs()) {
            continue;
        }
        let phi0 = k as f64 * step;
        let t = crate::linalg::golden_min(&|p: f64| s * f(p), phi0 - step, phi0 + step);
        let m = s * f(t);
        if m < -ZERO {
            count += 2;
        } else if m <= 1e-9 {
            count += 1;
        }
    }
    RootCount::Finite(count)
}

/// Default cloud size for discovery runs in dimension `dim`.
pub fn default_cloud_size(dim: usize) -> usize {
    if dim >= 4 {
        1_000_000
    } else {
        200_000
    }
}

/// Brute-force cardinality of `{h in the closed disk of radius r : |z + h| = a}`
/// read off the boundary root count and an interior scan: any point of the
/// circle `|w| = a` strictly inside the disk means infinitely many members.
pub fn oracle_cardinality(z: C64, r: f64, a: f64, grid: usize) -> Cardinality {
    let n = grid.max(1000);
    let roots = root_count_on_circle(z, r, a, n);
    let step = std::f64::consts::TAU / n as f64;
    let interior = (0..n).any(|k| (C64::from_polar(a, k as f64 * step) - z).norm() < r - 1e-12);
    match roots {
        RootCount::Infinite => Cardinality::Infinite,
        RootCount::Finite(k) if k >= 2 || interior => Cardinality::Infinite,
        RootCount::Finite(1) => Cardinality::One,
        RootCount::Finite(_) => Cardinality::Zero,
    }
}
