use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, PSD_TOL};

/// A transmit covariance matrix: Hermitian and PSD within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceCandidate(CMatrix);

impl CovarianceCandidate {
    pub fn new(x: CMatrix) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::DimensionMismatch(format!("covariance must be square, got {:?}", x.shape())));
        }
        linalg::ensure_hermitian(&x)?;
        let lmin = linalg::min_eigenvalue(&x);
        if lmin < -PSD_TOL * linalg::frob(&x).max(1.0) {
            return Err(Error::NotPsd(lmin));
        }
        Ok(Self(linalg::hermitian_part(&x)))
    }

    /// Wraps a matrix that is Hermitian PSD by construction (e.g. a projection output).
    pub(crate) fn from_trusted(x: CMatrix) -> Self {
        debug_assert!(linalg::hermitian_asymmetry(&x) <= 1e-8);
        Self(x)
    }

    pub fn zeros(n: usize) -> Self {
        Self(linalg::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        linalg::trace_re(&self.0)
    }
}

impl AsRef<CMatrix> for CovarianceCandidate {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}
