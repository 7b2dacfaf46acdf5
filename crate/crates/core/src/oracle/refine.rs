use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{alpha_residual, check_generators, SampleCloud};
use crate::alphasets::AlphaConfig;
use crate::error::{check_dim, Result};
use crate::linalg::{inner, norm, C64};
use crate::projspace::{canonical_line, Line};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Cloud members within this angular residual become starting points.
    pub discovery_tol: f64,
    /// The lowest-residual cloud members always added as starting points.
    pub top_k: usize,
    /// Hard cap on the number of starting points.
    pub max_starts: usize,
    /// Refined points below this angular residual are confirmed members.
    pub confirm_tol: f64,
    pub max_iter: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            discovery_tol: tol::DISCOVERY,
            top_k: 64,
            max_starts: 256,
            confirm_tol: tol::CONFIRM,
            max_iter: 200,
        }
    }
}

/// A refined line and its largest angular deviation from alpha.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinedMember {
    pub line: Line,
    pub residual: f64,
}

/// Homogeneous residuals `|<x, g>|^2 - a^2 |x|^2` and their Jacobian with
/// respect to `(Re x, Im x)`.
fn residuals(gens: &[&[C64]], a2: f64, x: &[C64], with_jac: bool) -> (DVector<f64>, Option<DMatrix<f64>>) {
    let n = x.len();
    let xx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let mut r = DVector::zeros(gens.len());
    let mut jac = with_jac.then(|| DMatrix::zeros(gens.len(), 2 * n));
    for (k, g) in gens.iter().enumerate() {
        let ip = inner(x, g);
        r[k] = ip.norm_sqr() - a2 * xx;
        if let Some(j) = jac.as_mut() {
            for i in 0..n {
                let y = g[i] * ip - x[i] * a2;
                j[(k, i)] = 2.0 * y.re;
                j[(k, n + i)] = 2.0 * y.im;
            }
        }
    }
    (r, jac)
}

fn normalised(x: Vec<C64>) -> Vec<C64> {
    let n = norm(&x);
    x.into_iter().map(|z| z / n).collect()
}

/// Levenberg-Marquardt on the homogeneous residuals, renormalising after
/// every accepted step.
fn levenberg_marquardt(gens: &[&[C64]], a: f64, x0: &[C64], max_iter: usize) -> Vec<C64> {
    let n = x0.len();
    let a2 = a * a;
    let mut x = normalised(x0.to_vec());
    let mut mu = 1e-3;
    let (mut r, mut jac) = residuals(gens, a2, &x, true);
    let mut cost = r.norm_squared();
    for _ in 0..max_iter {
        if cost < 1e-32 {
            break;
        }
        let j = jac.take().expect("jacobian computed");
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &r;
        let mut accepted = false;
        for _ in 0..30 {
            let mut lhs = jtj.clone();
            for i in 0..2 * n {
                lhs[(i, i)] += mu;
            }
            let Some(chol) = lhs.cholesky() else {
                mu *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&g));
            let cand: Vec<C64> = (0..n).map(|i| x[i] + C64::new(delta[i], delta[n + i])).collect();
            if !(norm(&cand) > 1e-12) {
                mu *= 10.0;
                continue;
            }
            let cand = normalised(cand);
            let (rc, _) = residuals(gens, a2, &cand, false);
            let cc = rc.norm_squared();
            if cc < cost {
                x = cand;
                mu = (mu / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
        let (rn, jn) = residuals(gens, a2, &x, true);
        r = rn;
        jac = jn;
        cost = r.norm_squared();
    }
    x
}

/// Refines every start and keeps the confirmed members, in start order.
pub fn refine_from_starts(
    s: &[Line],
    cfg: &AlphaConfig,
    starts: &[Vec<C64>],
    opts: &RefineOptions,
) -> Result<Vec<RefinedMember>> {
    let dim = s.first().map_or(0, |g| g.dim());
    check_generators(s, dim)?;
    for st in starts {
        check_dim(dim, st.len())?;
    }
    let gens: Vec<&[C64]> = s.iter().map(|g| g.amplitudes()).collect();
    let alpha = cfg.alpha();
    Ok(starts
        .par_iter()
        .filter_map(|x0| {
            if !(norm(x0) > tol::MIN_NORM) {
                return None;
            }
            let x = levenberg_marquardt(&gens, cfg.a(), x0, opts.max_iter);
            let line = canonical_line(&x).ok()?;
            let residual = alpha_residual(line.amplitudes(), s, alpha);
            (residual < opts.confirm_tol).then_some(RefinedMember { line, residual })
        })
        .collect())
}

/// Scans the cloud for near-members, refines them locally, and returns the
/// confirmed members of the alpha-set of `s`.
pub fn discover_and_refine(
    s: &[Line],
    cfg: &AlphaConfig,
    cloud: &SampleCloud,
    opts: &RefineOptions,
) -> Result<Vec<RefinedMember>> {
    check_generators(s, cloud.dim())?;
    let alpha = cfg.alpha();
    let a = cfg.a();
    // |acos t - acos a| >= |t - a|, so this screen never drops a point whose
    // angular residual is within the discovery tolerance.
    let gens: Vec<&[C64]> = s.iter().map(|g| g.amplitudes()).collect();
    let screen: Vec<f64> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let x = cloud.point(i);
            gens.iter().map(|g| (inner(x, g).norm() - a).abs()).fold(0.0, f64::max)
        })
        .collect();
    let mut order: Vec<usize> = (0..screen.len()).collect();
    let key = |&i: &usize| (screen[i], i);
    let k = opts.top_k.min(order.len());
    if k > 0 && k < order.len() {
        order.select_nth_unstable_by(k, |x, y| key(x).partial_cmp(&key(y)).expect("finite residuals"));
    }
    let mut top: Vec<usize> = order[..k].to_vec();
    top.sort_unstable();
    let exact = |i: usize| (alpha_residual(cloud.point(i), s, alpha), i);
    let mut cand: Vec<(f64, usize)> = top.iter().map(|&i| exact(i)).collect();
    cand.extend(
        (0..screen.len())
            .filter(|&i| screen[i] <= opts.discovery_tol && top.binary_search(&i).is_err())
            .map(exact)
            .filter(|&(r, _)| r <= opts.discovery_tol),
    );
    cand.sort_by(|x, y| x.partial_cmp(y).expect("finite residuals"));
    cand.truncate(opts.max_starts);
    let picked: Vec<usize> = cand.into_iter().map(|(_, i)| i).collect();
    let starts: Vec<Vec<C64>> = picked.iter().map(|&i| cloud.point(i).to_vec()).collect();
    refine_from_starts(s, cfg, &starts, opts)
}
