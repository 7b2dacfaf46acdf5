use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{random_gaussian, C64};
use crate::projspace::{canonical_line, Line};

/// Lines per independently seeded stream; fixed so that output does not
/// depend on the thread count.
const CHUNK: usize = 4096;

/// Canonical-gauged random lines stored as one flat amplitude buffer.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud {
    dim: usize,
    seed: u64,
    points: Vec<C64>,
}

/// `count` i.i.d. complex Gaussian lines in dimension `dim`.
pub fn sample_lines(dim: usize, count: usize, seed: u64) -> Result<SampleCloud> {
    if dim < 2 || dim > crate::projspace::dimension_limit() {
        return Err(Error::Parameter(format!("dimension {dim} outside 2..={}", crate::projspace::dimension_limit())));
    }
    if count == 0 {
        return Err(Error::Parameter("count must be positive".into()));
    }
    let chunks: Vec<Vec<C64>> = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let n = CHUNK.min(count - k * CHUNK);
            let mut out = Vec::with_capacity(n * dim);
            for _ in 0..n {
                loop {
                    if let Ok(l) = canonical_line(&random_gaussian(&mut rng, dim)) {
                        out.extend_from_slice(l.amplitudes());
                        break;
                    }
                }
            }
            out
        })
        .collect();
    Ok(SampleCloud { dim, seed, points: chunks.concat() })
}

impl SampleCloud {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[C64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn line(&self, i: usize) -> Line {
        Line::new(self.point(i).to_vec()).expect("cloud points are unit vectors")
    }

    pub fn iter(&self) -> impl Iterator<Item = &[C64]> {
        self.points.chunks_exact(self.dim)
    }

    /// Header `dim, count, seed` as little-endian `u64`, then re/im pairs as
    /// little-endian `f64`.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        for h in [self.dim as u64, self.len() as u64, self.seed] {
            w.write_all(&h.to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(self.points.len() * 16);
        for z in &self.points {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)
    }

    pub fn read_from(mut r: impl Read) -> Result<SampleCloud> {
        let io = |e: std::io::Error| Error::Parameter(format!("cloud file: {e}"));
        let mut word = [0u8; 8];
        let mut header = [0u64; 3];
        for h in header.iter_mut() {
            r.read_exact(&mut word).map_err(io)?;
            *h = u64::from_le_bytes(word);
        }
        let [dim, count, seed] = header;
        let dim = dim as usize;
        if dim < 2 || dim > crate::projspace::dimension_limit() {
            return Err(Error::Parameter(format!("cloud file: bad dimension {dim}")));
        }
        let total = (count as usize)
            .checked_mul(dim)
            .ok_or_else(|| Error::Parameter("cloud file: size overflow".into()))?;
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes).map_err(io)?;
        if bytes.len() != total * 16 {
            return Err(Error::Parameter(format!(
                "cloud file: expected {} payload bytes, found {}",
                total * 16,
                bytes.len()
            )));
        }
        let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
        let points = (0..total).map(|k| C64::new(f(2 * k), f(2 * k + 1))).collect();
        Ok(SampleCloud { dim, seed, points })
    }
}
