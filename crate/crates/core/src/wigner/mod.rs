//! Wigner symmetries, their reconstruction from probe images, angle
//! preservation tests, exotic two-dimensional maps, and circle intersections
//! inside a projective line.

mod intersect;
mod preserve;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{inner, random_gaussian, unimodular, C64, I};
use crate::projspace::{canonical_line, vector_angle, Line};

pub use intersect::{bridge_basis, circle_intersection, Bridge, BridgeBranch, Intersection};
pub use preserve::{
    exotic_pi4_map, find_angle_violation, orthogonal_line, preservation_report, AngleViolation, ExoticMap, FnMap,
    LineMap, PreservationReport, Selector,
};

/// A unitary (`v -> U v`) or antiunitary (`v -> U conj(v)`) operator, acting
/// on lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WignerRepr", into = "WignerRepr")]
pub struct WignerSymmetry {
    matrix: DMatrix<C64>,
    antiunitary: bool,
}

/// `{"dim", "antiunitary", "re": rows, "im": rows}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WignerRepr {
    dim: usize,
    antiunitary: bool,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<WignerRepr> for WignerSymmetry {
    type Error = Error;
    fn try_from(r: WignerRepr) -> Result<Self> {
        check_dim(r.dim, r.re.len())?;
        check_dim(r.dim, r.im.len())?;
        for row in r.re.iter().chain(&r.im) {
            check_dim(r.dim, row.len())?;
        }
        let m = DMatrix::from_fn(r.dim, r.dim, |i, j| C64::new(r.re[i][j], r.im[i][j]));
        WignerSymmetry::new(m, r.antiunitary)
    }
}

impl From<WignerSymmetry> for WignerRepr {
    fn from(w: WignerSymmetry) -> Self {
        let n = w.dim();
        let rows = |f: fn(&C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(&w.matrix[(i, j)])).collect()).collect();
        WignerRepr { dim: n, antiunitary: w.antiunitary, re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

/// Largest entry of `|U^H U - I|`.
fn unitarity_defect(m: &DMatrix<C64>) -> f64 {
    let g = m.adjoint() * m;
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - C64::new(expected, 0.0)).norm());
        }
    }
    worst
}

impl WignerSymmetry {
    /// Validates unitarity within `1e-10`.
    pub fn new(matrix: DMatrix<C64>, antiunitary: bool) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.nrows() < 1 {
            return Err(Error::Parameter("empty matrix".into()));
        }
        let defect = unitarity_defect(&matrix);
        if !(defect < 1e-10) {
            return Err(Error::Parameter(format!("matrix is not unitary (defect {defect:e})")));
        }
        Ok(WignerSymmetry { matrix, antiunitary })
    }

    pub fn identity(dim: usize) -> Self {
        WignerSymmetry { matrix: DMatrix::identity(dim, dim), antiunitary: false }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_antiunitary(&self) -> bool {
        self.antiunitary
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &WignerSymmetry) -> Result<WignerSymmetry> {
        check_dim(self.dim(), other.dim())?;
        let right = if self.antiunitary { other.matrix.map(|z| z.conj()) } else { other.matrix.clone() };
        Ok(WignerSymmetry { matrix: &self.matrix * right, antiunitary: self.antiunitary ^ other.antiunitary })
    }

    pub fn inverse(&self) -> WignerSymmetry {
        let adj = self.matrix.adjoint();
        let matrix = if self.antiunitary { adj.map(|z| z.conj()) } else { adj };
        WignerSymmetry { matrix, antiunitary: self.antiunitary }
    }

    /// Multiplies the operator by a unimodular scalar.
    pub fn scaled(&self, lambda: C64) -> WignerSymmetry {
        WignerSymmetry { matrix: self.matrix.map(|z| z * lambda), antiunitary: self.antiunitary }
    }

    pub fn with_antiunitary(&self, antiunitary: bool) -> WignerSymmetry {
        WignerSymmetry { matrix: self.matrix.clone(), antiunitary }
    }

    pub(crate) fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.matrix[(i, j)] * if self.antiunitary { v[j].conj() } else { v[j] })
                    .sum()
            })
            .collect()
    }

    pub fn apply(&self, v: &Line) -> Result<Line> {
        check_dim(self.dim(), v.dim())?;
        canonical_line(&self.apply_vec(v.amplitudes()))
    }
}

/// Haar-random unitary from the QR factorisation of a seeded complex
/// Gaussian matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn random_wigner(dim: usize, seed: u64, antiunitary: bool) -> Result<WignerSymmetry> {
    if dim < 2 || dim > crate::projspace::dimension_limit() {
        return Err(Error::Parameter(format!("dimension {dim} outside 2..={}", crate::projspace::dimension_limit())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = random_gaussian(&mut rng, dim * dim);
    let g = DMatrix::from_row_slice(dim, dim, &entries);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let phase = unimodular(r[(j, j)]);
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(WignerSymmetry { matrix: q, antiunitary })
}

/// Whether the two operators induce the same map on lines.
pub fn same_induced_map(w1: &WignerSymmetry, w2: &WignerSymmetry) -> Result<bool> {
    check_dim(w1.dim(), w2.dim())?;
    if w1.antiunitary != w2.antiunitary {
        return Ok(false);
    }
    let m = &w2.matrix * w1.matrix.adjoint();
    let lambda = m[(0, 0)];
    if (lambda.norm() - 1.0).abs() > 1e-9 {
        return Ok(false);
    }
    let n = w1.dim();
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { lambda } else { C64::new(0.0, 0.0) };
            if (m[(i, j)] - expected).norm() > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `3 dim - 2` probe lines, in order: `e_1..e_n`, then
/// `(e_1 + e_j)/sqrt2` for `j >= 2`, then `(e_1 + i e_j)/sqrt2` for `j >= 2`.
pub fn probe_set(dim: usize) -> Vec<Line> {
    let mut out: Vec<Line> = (0..dim).map(|j| Line::basis(dim, j)).collect();
    for coeff in [C64::new(1.0, 0.0), I] {
        for j in 1..dim {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[0] = C64::new(1.0, 0.0);
            v[j] = coeff;
            out.push(canonical_line(&v).expect("nonzero"));
        }
    }
    out
}

/// Images of the probe set under `w`.
pub fn probe_images(w: &WignerSymmetry) -> Vec<Line> {
    probe_set(w.dim()).iter().map(|p| w.apply(p).expect("matching dimension")).collect()
}

/// Largest residual accepted on any probe after fitting.
pub const FIT_TOLERANCE: f64 = 1e-8;

/// Reconstructs a Wigner symmetry from the images of [`probe_set`].
pub fn fit_from_probes(dim: usize, images: &[Line]) -> Result<WignerSymmetry> {
    if dim < 2 {
        return Err(Error::Parameter(format!("dimension {dim} < 2")));
    }
    check_dim(3 * dim - 2, images.len())?;
    for im in images {
        check_dim(dim, im.dim())?;
    }
    let w: Vec<&[C64]> = images[..dim].iter().map(|l| l.amplitudes()).collect();
    let mut phases = vec![C64::new(1.0, 0.0); dim];
    let mut orientation = 0.0;
    for j in 1..dim {
        let p = images[dim + j - 1].amplitudes();
        phases[j] = unimodular(inner(p, w[j]) / inner(p, w[0]));
        let q = images[2 * dim - 2 + j].amplitudes();
        let s = inner(q, w[j]) / inner(q, w[0]) / phases[j];
        orientation += s.im;
    }
    let antiunitary = orientation < 0.0;
    let matrix = DMatrix::from_fn(dim, dim, |i, j| w[j][i] * phases[j]);
    let defect = unitarity_defect(&matrix);
    if !(defect < FIT_TOLERANCE) {
        let worst = (0..dim)
            .max_by(|&x, &y| {
                let col_defect = |k: usize| {
                    (0..dim).filter(|&l| l != k).map(|l| inner(w[k], w[l]).norm()).fold(0.0, f64::max)
                };
                col_defect(x).total_cmp(&col_defect(y))
            })
            .unwrap_or(0);
        return Err(Error::NotAWignerMap { probe: worst, residual: defect });
    }
    let fitted = WignerSymmetry { matrix, antiunitary };
    let probes = probe_set(dim);
    let mut worst = (0, 0.0_f64);
    for (k, (p, im)) in probes.iter().zip(images).enumerate() {
        let r = vector_angle(&fitted.apply_vec(p.amplitudes()), im.amplitudes());
        if r > worst.1 || r.is_nan() {
            worst = (k, r);
        }
    }
    if !(worst.1 <= FIT_TOLERANCE) {
        return Err(Error::NotAWignerMap { probe: worst.0, residual: worst.1 });
    }
    Ok(fitted)
}
