//! Lines in complex projective space, the quantum angle between them, and
//! canonical forms for pairs and collinear triples of lines.

use std::f64::consts::FRAC_PI_2;
use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, inner, norm, project_out, unimodular, UnitVector, VectorRepr, C64, I};
use crate::tol;

static MAX_DIM: AtomicUsize = AtomicUsize::new(16);

/// Largest ambient dimension accepted when constructing lines.
pub fn dimension_limit() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

pub fn set_dimension_limit(limit: usize) {
    MAX_DIM.store(limit.max(1), Ordering::Relaxed);
}

/// A point of P(C^n), stored as a unit vector in canonical gauge: the first
/// amplitude with modulus above 1e-12 is real and positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct Line(Vec<C64>);

impl Line {
    /// Equivalent to [`canonical_line`].
    pub fn new(v: Vec<C64>) -> Result<Line> {
        canonical_line(&v)
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Line> {
        check_dim(re.len(), im.len())?;
        canonical_line(&re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect::<Vec<_>>())
    }

    pub fn basis(dim: usize, k: usize) -> Line {
        Line(linalg::std_basis(dim, k))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }

    pub fn angle_to(&self, other: &Line) -> Result<Angle> {
        quantum_angle(self, other)
    }
}

impl AsRef<[C64]> for Line {
    fn as_ref(&self) -> &[C64] {
        &self.0
    }
}

impl TryFrom<VectorRepr> for Line {
    type Error = Error;
    fn try_from(r: VectorRepr) -> Result<Self> {
        let v = r.to_complex()?;
        // Already-canonical input is kept bit for bit so that JSON round trips.
        let pivot = v.iter().find(|z| z.norm() > tol::GAUGE);
        let gauged = pivot.is_some_and(|z| z.im == 0.0 && z.re > 0.0);
        if gauged && (norm(&v) - 1.0).abs() < 1e-14 && v.len() <= dimension_limit() {
            Ok(Line(v))
        } else {
            canonical_line(&v)
        }
    }
}

impl From<Line> for VectorRepr {
    fn from(l: Line) -> Self {
        VectorRepr::from_slice(&l.0)
    }
}

impl From<Line> for UnitVector {
    fn from(l: Line) -> Self {
        UnitVector::new(l.0).expect("lines are unit vectors")
    }
}

/// Quantum angle in radians, clamped to `[0, pi/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Angle {
        Angle(radians.clamp(0.0, FRAC_PI_2))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Normalises `v` and fixes its phase gauge.
pub fn canonical_line(v: &[C64]) -> Result<Line> {
    if v.is_empty() || v.len() > dimension_limit() {
        return Err(Error::Parameter(format!(
            "dimension {} outside 1..={}",
            v.len(),
            dimension_limit()
        )));
    }
    let n = norm(v);
    if !(n > tol::MIN_NORM) {
        return Err(Error::DegenerateVector { norm: n });
    }
    let mut out: Vec<C64> = v.iter().map(|z| z / n).collect();
    if let Some(pivot) = out.iter().find(|z| z.norm() > tol::GAUGE) {
        let phase = unimodular(*pivot).conj();
        for z in out.iter_mut() {
            *z *= phase;
        }
    }
    if let Some(pivot) = out.iter_mut().find(|z| z.norm() > tol::GAUGE) {
        *pivot = C64::new(pivot.norm(), 0.0);
    }
    Ok(Line(out))
}

/// `arccos |<u, v>|`, evaluated as `atan2(|u ^ v|, |<u, v>|)` so that small
/// angles keep full precision.
pub fn quantum_angle(u: &Line, v: &Line) -> Result<Angle> {
    check_dim(u.dim(), v.dim())?;
    Ok(Angle::new(vector_angle(&u.0, &v.0)))
}

/// Quantum angle between the lines spanned by two (not necessarily gauged)
/// unit vectors.
pub(crate) fn vector_angle(u: &[C64], v: &[C64]) -> f64 {
    let cos = inner(u, v).norm();
    let sin = linalg::wedge_norm(u, v);
    sin.atan2(cos).clamp(0.0, FRAC_PI_2)
}

pub fn lines_equal(u: &Line, v: &Line) -> Result<bool> {
    Ok(quantum_angle(u, v)?.radians() < tol::LINE_EQ)
}

/// `[v1] = [c e1 + i d e2]`, `[v2] = [c e1 - i d e2]` with `c >= d > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCanonicalForm {
    pub e1: UnitVector,
    pub e2: UnitVector,
    pub c: f64,
    pub d: f64,
}

impl PairCanonicalForm {
    /// The line `[c e1 + lambda d e2]`.
    pub fn line(&self, lambda: C64) -> Line {
        line_on_circle(&self.e1, &self.e2, self.c, self.d, lambda)
    }

    pub fn first(&self) -> Line {
        self.line(I)
    }

    pub fn second(&self) -> Line {
        self.line(-I)
    }

    pub fn dim(&self) -> usize {
        self.e1.dim()
    }
}

/// `[v_j] = [c e1 + lambda_j d e2]` for three collinear lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleCanonicalForm {
    pub e1: UnitVector,
    pub e2: UnitVector,
    pub c: f64,
    pub d: f64,
    pub lambdas: [C64; 3],
}

impl TripleCanonicalForm {
    /// Builds a triple form from explicit parameters, normalising `(c, d)`
    /// and the `lambdas`.
    pub fn new(e1: UnitVector, e2: UnitVector, c: f64, d: f64, lambdas: [C64; 3]) -> Result<Self> {
        check_dim(e1.dim(), e2.dim())?;
        linalg::check_orthonormal(&[e1.as_slice(), e2.as_slice()])?;
        let (c, d) = normalise_cd(c, d)?;
        Ok(TripleCanonicalForm { e1, e2, c, d, lambdas: lambdas.map(unimodular) })
    }

    pub fn line(&self, lambda: C64) -> Line {
        line_on_circle(&self.e1, &self.e2, self.c, self.d, lambda)
    }

    pub fn lines(&self) -> [Line; 3] {
        self.lambdas.map(|l| self.line(l))
    }

    pub fn dim(&self) -> usize {
        self.e1.dim()
    }
}

/// Validates `c >= d > 0` and `c^2 + d^2 = 1`, rescaling away rounding.
pub(crate) fn normalise_cd(c: f64, d: f64) -> Result<(f64, f64)> {
    if !(d > 0.0) || c < d - tol::PARAM_NORM {
        return Err(Error::Parameter(format!("need c >= d > 0, got c = {c}, d = {d}")));
    }
    let r = c.hypot(d);
    if (r * r - 1.0).abs() > tol::PARAM_NORM {
        return Err(Error::Parameter(format!("need c^2 + d^2 = 1, got {}", r * r)));
    }
    Ok((c / r, d / r))
}

pub(crate) fn line_on_circle(e1: &UnitVector, e2: &UnitVector, c: f64, d: f64, lambda: C64) -> Line {
    let v = linalg::combine(&[C64::new(c, 0.0), lambda * d], &[e1.as_slice(), e2.as_slice()]);
    canonical_line(&v).expect("circle points are unit vectors")
}

pub fn canonical_pair_form(v1: &Line, v2: &Line) -> Result<PairCanonicalForm> {
    check_dim(v1.dim(), v2.dim())?;
    if lines_equal(v1, v2)? {
        return Err(Error::DegeneratePair);
    }
    // Rotate v2 so that <v1, v2> >= 0; then v1 + v2 is orthogonal to v1 - v2.
    let mu = unimodular(inner(&v1.0, &v2.0));
    let v2r = linalg::scale(&v2.0, mu);
    let sum: Vec<C64> = v1.0.iter().zip(&v2r).map(|(a, b)| a + b).collect();
    let diff: Vec<C64> = v1.0.iter().zip(&v2r).map(|(a, b)| a - b).collect();
    let (ns, nd) = (norm(&sum), norm(&diff));
    let e1 = UnitVector::new(sum)?;
    let e2 = project_out(&linalg::scale(&diff, -I), &[e1.as_slice()]);
    let e2 = UnitVector::new(e2)?;
    let r = ns.hypot(nd);
    Ok(PairCanonicalForm { e1, e2, c: ns / r, d: nd / r })
}

/// Third singular value of the 3 x n matrix of representatives.
pub fn third_singular_value(v1: &Line, v2: &Line, v3: &Line) -> Result<f64> {
    check_dim(v1.dim(), v2.dim())?;
    check_dim(v1.dim(), v3.dim())?;
    let n = v1.dim();
    if n < 3 {
        return Ok(0.0);
    }
    let m = DMatrix::from_fn(3, n, |i, j| [v1, v2, v3][i].0[j]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv[2])
}

pub fn is_collinear(v1: &Line, v2: &Line, v3: &Line) -> Result<bool> {
    Ok(third_singular_value(v1, v2, v3)? < tol::COLLINEAR)
}

pub fn canonical_triple_form(v1: &Line, v2: &Line, v3: &Line) -> Result<TripleCanonicalForm> {
    let sigma3 = third_singular_value(v1, v2, v3)?;
    if sigma3 >= tol::COLLINEAR {
        return Err(Error::NotCollinear { sigma3 });
    }
    for (x, y, label) in [(v1, v2, "v1 = v2"), (v1, v3, "v1 = v3"), (v2, v3, "v2 = v3")] {
        if lines_equal(x, y)? {
            return Err(Error::DegenerateTriple(label.into()));
        }
    }
    let pair = canonical_pair_form(v1, v2)?;
    let (f1, f2) = (pair.e1.as_slice(), pair.e2.as_slice());
    let (c0, d0) = (pair.c, pair.d);
    let (p1, p2) = (inner(&v3.0, f1), inner(&v3.0, f2));

    // |<v3, e(t)>|^2 - |<v1, e(t)>|^2 with e(t) = cos t f1 + sin t f2.
    // g(pi/2) = -g(0), so a sign change always exists on [0, pi/2].
    let g = |t: f64| {
        let (s, c) = t.sin_cos();
        (p1 * c + p2 * s).norm_sqr() - (c0 * c0 * c * c + d0 * d0 * s * s)
    };
    let t = first_root(g, 0.0, FRAC_PI_2, 256);

    let (s, c) = t.sin_cos();
    let mut e1: Vec<C64> = linalg::combine(&[C64::new(c, 0.0), C64::new(s, 0.0)], &[f1, f2]);
    let mut e2: Vec<C64> = linalg::combine(&[C64::new(-s, 0.0), C64::new(c, 0.0)], &[f1, f2]);
    let lines = [v1, v2, v3];
    let mut alpha: Vec<C64> = lines.iter().map(|v| inner(&v.0, &e1)).collect();
    let mut beta: Vec<C64> = lines.iter().map(|v| inner(&v.0, &e2)).collect();
    if alpha[0].norm() < beta[0].norm() {
        std::mem::swap(&mut e1, &mut e2);
        std::mem::swap(&mut alpha, &mut beta);
    }
    let lambdas = [0, 1, 2].map(|j| unimodular(beta[j] * alpha[j].conj()));
    let (cc, dd) = (alpha[0].norm(), beta[0].norm());
    let r = cc.hypot(dd);
    Ok(TripleCanonicalForm {
        e1: UnitVector::new(e1)?,
        e2: UnitVector::new(e2)?,
        c: cc / r,
        d: dd / r,
        lambdas,
    })
}

/// Smallest root of `g` on `[lo, hi]` located by a coarse scan followed by
/// bisection; assumes `g(lo)` and `g(hi)` do not share a strict sign.
fn first_root(g: impl Fn(f64) -> f64, lo: f64, hi: f64, scan: usize) -> f64 {
    let mut a = lo;
    let mut ga = g(a);
    if ga == 0.0 {
        return a;
    }
    let step = (hi - lo) / scan as f64;
    let mut b = hi;
    for k in 1..=scan {
        let x = if k == scan { hi } else { lo + step * k as f64 };
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx.signum() != ga.signum() {
            b = x;
            break;
        }
        a = x;
        ga = gx;
    }
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
