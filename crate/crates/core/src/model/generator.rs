//! Kronecker channels with exponential transmit correlation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Deterministic generator for channel draws.
///
/// Each `(seed, stream)` pair owns an independent ChaCha20 keystream, so
/// parallel trials can draw without coordination.
#[derive(Debug, Clone)]
pub struct ChannelRng(ChaCha20Rng);

impl ChannelRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed))
    }

    pub fn for_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    /// Standard circularly-symmetric complex Gaussian matrix, `E|h|² = 1`.
    ///
    /// Entries are drawn row by row, real part before imaginary part.
    pub fn gaussian(&mut self, rows: usize, cols: usize) -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let a: f64 = self.0.sample(StandardNormal);
                let b: f64 = self.0.sample(StandardNormal);
                out[(i, j)] = Complex64::new(s * a, s * b);
            }
        }
        out
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn inner(&mut self) -> &mut ChaCha20Rng {
        &mut self.0
    }
}

/// `[R]_{ij} = (r e^{jφ})^{|i−j|}`, Hermitian with `R_{ij} = conj(R_{ji})`.
pub fn exponential_correlation(n: usize, r: f64, phi: f64) -> Result<CMatrix> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("correlation magnitude {r} outside [0, 1]")));
    }
    let base = Complex64::from_polar(r, phi);
    let mut m = linalg::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = linalg::re(1.0);
        for j in (i + 1)..n {
            let v = base.powi((j - i) as i32);
            m[(i, j)] = v.conj();
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// `γ · H̃ · R^{1/2}` with `H̃` drawn from `rng`.
pub fn kronecker_channel_with(
    rng: &mut ChannelRng,
    n_rows: usize,
    n_t: usize,
    r: f64,
    phi: f64,
    gamma: f64,
) -> Result<CMatrix> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("path gain {gamma} must be positive")));
    }
    let root = linalg::psd_sqrt(&exponential_correlation(n_t, r, phi)?);
    Ok(rng.gaussian(n_rows, n_t) * root * linalg::re(gamma))
}

pub fn kronecker_channel(n_rows: usize, n_t: usize, r: f64, phi: f64, gamma: f64, seed: u64) -> Result<CMatrix> {
    kronecker_channel_with(&mut ChannelRng::new(seed), n_rows, n_t, r, phi, gamma)
}

/// `1 − tr(R_b R_e) / (‖R_b‖_F ‖R_e‖_F)`.
pub fn corr_distance(rb: &CMatrix, re: &CMatrix) -> Result<f64> {
    if rb.shape() != re.shape() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", rb.shape(), re.shape())));
    }
    let (nb, ne) = (linalg::frob(rb), linalg::frob(re));
    if nb == 0.0 || ne == 0.0 {
        return Err(Error::ZeroNorm("corr_distance"));
    }
    Ok(1.0 - linalg::trace_product(rb, re) / (nb * ne))
}
