use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Largest admissible eigenvalue of `K̄K̄ᴴ`; keeps `K` strictly positive definite.
pub const KBAR_EIG_CAP: f64 = 1.0 - 1e-12;

/// Off-diagonal block `K̄` of the composite noise covariance `K = [[I, K̄], [K̄ᴴ, I]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCorrelation(CMatrix);

impl NoiseCorrelation {
    pub fn new(kbar: CMatrix) -> Result<Self> {
        if !linalg::is_finite(&kbar) {
            return Err(Error::NonFinite);
        }
        let top = linalg::eigh(&(&kbar * kbar.adjoint())).max();
        if top > KBAR_EIG_CAP {
            return Err(Error::Singular(1.0 - top.sqrt()));
        }
        Ok(Self(kbar))
    }

    /// Skips the spectral check for matrices built to satisfy it.
    pub(crate) fn from_trusted(kbar: CMatrix) -> Self {
        Self(kbar)
    }

    /// Uncorrelated noise, `K = I`.
    pub fn zero(nr: usize, ne: usize) -> Self {
        Self(linalg::zeros(nr, ne))
    }

    pub fn kbar(&self) -> &CMatrix {
        &self.0
    }

    pub fn nr(&self) -> usize {
        self.0.nrows()
    }

    pub fn ne(&self) -> usize {
        self.0.ncols()
    }

    /// Full `(N_r + N_e)`-square covariance.
    pub fn full(&self) -> CMatrix {
        let (nr, ne) = self.0.shape();
        let mut k = linalg::identity(nr + ne);
        k.view_mut((0, nr), (nr, ne)).copy_from(&self.0);
        k.view_mut((nr, 0), (ne, nr)).copy_from(&self.0.adjoint());
        k
    }

    /// `λ_min(K) = 1 − σ_max(K̄)`.
    pub fn lambda_min(&self) -> f64 {
        let top = linalg::eigh(&(&self.0 * self.0.adjoint())).max().max(0.0);
        1.0 - top.sqrt()
    }

    /// `ln|K| = ln|I − K̄K̄ᴴ|`.
    pub fn logdet(&self) -> Result<f64> {
        let nr = self.nr();
        linalg::logdet_hpd(&(linalg::identity(nr) - &self.0 * self.0.adjoint()))
    }
}
