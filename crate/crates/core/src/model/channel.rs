use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, PSD_TOL};

/// Bob's channel, Eve's channel and any primary-receiver channels sharing one transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapChannel {
    hb: CMatrix,
    he: CMatrix,
    primaries: Vec<CMatrix>,
}

/// Result of the degradedness test, carrying `Δ = H_bᴴH_b − H_eᴴH_e` for reuse.
#[derive(Debug, Clone)]
pub struct Degradedness {
    pub degraded: bool,
    pub delta: CMatrix,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

impl WiretapChannel {
    pub fn new(hb: CMatrix, he: CMatrix) -> Result<Self> {
        Self::with_primaries(hb, he, Vec::new())
    }

    pub fn with_primaries(hb: CMatrix, he: CMatrix, primaries: Vec<CMatrix>) -> Result<Self> {
        let nt = hb.ncols();
        if nt == 0 || hb.nrows() == 0 || he.nrows() == 0 {
            return Err(Error::DimensionMismatch("channel matrices must be non-empty".into()));
        }
        if he.ncols() != nt {
            return Err(Error::DimensionMismatch(format!("Bob has {nt} transmit columns but Eve has {}", he.ncols())));
        }
        for (l, h) in primaries.iter().enumerate() {
            if h.ncols() != nt || h.nrows() == 0 {
                return Err(Error::DimensionMismatch(format!(
                    "primary receiver {l} has shape {:?}, expected (_, {nt})",
                    h.shape()
                )));
            }
        }
        if ![&hb, &he].into_iter().chain(primaries.iter()).all(linalg::is_finite) {
            return Err(Error::NonFinite);
        }
        Ok(Self { hb, he, primaries })
    }

    pub fn hb(&self) -> &CMatrix {
        &self.hb
    }

    pub fn he(&self) -> &CMatrix {
        &self.he
    }

    pub fn primaries(&self) -> &[CMatrix] {
        &self.primaries
    }

    /// Number of transmit antennas.
    pub fn nt(&self) -> usize {
        self.hb.ncols()
    }

    /// Number of antennas at Bob.
    pub fn nr(&self) -> usize {
        self.hb.nrows()
    }

    /// Number of antennas at Eve.
    pub fn ne(&self) -> usize {
        self.he.nrows()
    }

    /// Extended channel `[H_b; H_e]`.
    pub fn stacked(&self) -> CMatrix {
        linalg::vstack(&self.hb, &self.he)
    }

    /// `H_bᴴH_b − H_eᴴH_e`.
    pub fn delta(&self) -> CMatrix {
        self.hb.adjoint() * &self.hb - self.he.adjoint() * &self.he
    }

    pub fn degradedness(&self) -> Degradedness {
        let delta = self.delta();
        let eig = linalg::eigh(&delta);
        let scale = linalg::frob(&delta).max(1.0);
        Degradedness {
            degraded: eig.min() >= -PSD_TOL * scale,
            min_eigenvalue: eig.min(),
            max_eigenvalue: eig.max(),
            delta,
        }
    }

    /// True iff `Δ ⪰ 0` within tolerance.
    pub fn is_degraded(&self) -> bool {
        self.degradedness().degraded
    }

    /// True iff `Δ` has a strictly positive eigenvalue, i.e. the secrecy capacity is positive.
    pub fn has_positive_secrecy(&self) -> bool {
        self.degradedness().max_eigenvalue > PSD_TOL
    }

    pub(crate) fn check_covariance(&self, x: &CMatrix) -> Result<()> {
        if x.nrows() != self.nt() || x.ncols() != self.nt() {
            return Err(Error::DimensionMismatch(format!(
                "covariance is {:?} but the channel has {} transmit antennas",
                x.shape(),
                self.nt()
            )));
        }
        Ok(())
    }
}
