//! Small dense complex-vector helpers. Dimensions here never exceed a few
//! dozen, so everything is plain slices and `Vec`s.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

/// Inner product, linear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `sqrt(sum_{i<j} |u_i v_j - u_j v_i|^2)`, which equals `sin` of the
/// angle between unit vectors and is bitwise symmetric in its arguments.
pub fn wedge_norm(u: &[C64], v: &[C64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            acc += (u[i] * v[j] - u[j] * v[i]).norm_sqr();
        }
    }
    acc.sqrt()
}

pub fn scale(v: &[C64], s: C64) -> Vec<C64> {
    v.iter().map(|z| z * s).collect()
}

pub fn axpy(y: &mut [C64], s: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// `sum_k coeffs[k] * vectors[k]`.
pub fn combine(coeffs: &[C64], vectors: &[&[C64]]) -> Vec<C64> {
    let dim = vectors[0].len();
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for (c, v) in coeffs.iter().zip(vectors) {
        axpy(&mut out, *c, v);
    }
    out
}

/// Removes the components along the (orthonormal) `basis`, twice for stability.
pub fn project_out(v: &[C64], basis: &[&[C64]]) -> Vec<C64> {
    let mut out = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = inner(&out, b);
            axpy(&mut out, -c, b);
        }
    }
    out
}

pub fn unimodular(z: C64) -> C64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        C64::new(1.0, 0.0)
    }
}

pub fn std_basis(dim: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[k] = C64::new(1.0, 0.0);
    v
}

pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// A random unit vector orthogonal to the orthonormal `basis`.
pub fn random_unit_orthogonal<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    basis: &[&[C64]],
) -> Option<Vec<C64>> {
    if basis.len() >= dim {
        return None;
    }
    loop {
        let g = project_out(&random_gaussian(rng, dim), basis);
        let n = norm(&g);
        if n > 1e-6 {
            return Some(scale(&g, C64::new(1.0 / n, 0.0)));
        }
    }
}

/// Deterministic orthonormal basis of the orthogonal complement of the
/// orthonormal `basis`, built greedily from the standard basis.
pub fn orthonormal_complement(dim: usize, basis: &[&[C64]]) -> Vec<Vec<C64>> {
    let mut found: Vec<Vec<C64>> = Vec::new();
    let target = dim.saturating_sub(basis.len());
    while found.len() < target {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..dim {
            let mut all: Vec<&[C64]> = basis.to_vec();
            all.extend(found.iter().map(|v| v.as_slice()));
            let r = project_out(&std_basis(dim, k), &all);
            let n = norm(&r);
            if best.as_ref().is_none_or(|(bn, _)| n > *bn + 1e-12) {
                best = Some((n, r));
            }
        }
        let (n, r) = best.expect("dim > 0");
        found.push(scale(&r, C64::new(1.0 / n, 0.0)));
    }
    found
}

/// Minimises a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// A normalised vector with no phase gauge applied. Used for basis vectors
/// whose relative phases carry meaning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct UnitVector(Vec<C64>);

impl UnitVector {
    pub fn new(v: Vec<C64>) -> Result<Self> {
        let n = norm(&v);
        if !(n > tol::MIN_NORM) {
            return Err(Error::DegenerateVector { norm: n });
        }
        Ok(UnitVector(v.into_iter().map(|z| z / n).collect()))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        UnitVector(std_basis(dim, k))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    pub fn scaled(&self, s: C64) -> UnitVector {
        debug_assert!((s.norm() - 1.0).abs() < 1e-12);
        UnitVector(scale(&self.0, s))
    }
}

impl AsRef<[C64]> for UnitVector {
    fn as_ref(&self) -> &[C64] {
        &self.0
    }
}

/// Wire format shared by lines and unit vectors: `{"dim", "re", "im"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorRepr {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorRepr {
    pub fn from_slice(v: &[C64]) -> Self {
        VectorRepr {
            dim: v.len(),
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<Vec<C64>> {
        if self.re.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: self.re.len() });
        }
        if self.im.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: self.im.len() });
        }
        Ok(self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect())
    }
}

impl TryFrom<VectorRepr> for UnitVector {
    type Error = Error;
    fn try_from(r: VectorRepr) -> Result<Self> {
        let v = r.to_complex()?;
        if (norm(&v) - 1.0).abs() < 1e-14 {
            Ok(UnitVector(v))
        } else {
            UnitVector::new(v)
        }
    }
}

impl From<UnitVector> for VectorRepr {
    fn from(u: UnitVector) -> Self {
        VectorRepr::from_slice(&u.0)
    }
}

/// Checks that `vectors` are orthonormal within `tol::ORTHONORMAL`.
pub fn check_orthonormal(vectors: &[&[C64]]) -> Result<()> {
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate().skip(i) {
            let ip = inner(u, v);
            let expected = if i == j { 1.0 } else { 0.0 };
            if (ip - C64::new(expected, 0.0)).norm() > tol::ORTHONORMAL {
                return Err(Error::Parameter(format!(
                    "basis vectors {i} and {j} are not orthonormal (inner product {ip})"
                )));
            }
        }
    }
    Ok(())
}
