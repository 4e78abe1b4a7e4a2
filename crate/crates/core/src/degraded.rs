//! Degraded-channel identities behind the convex reformulation.
//!
//! For `Δ = H_bᴴH_b − H_eᴴH_e ⪰ 0` the secrecy rate equals `ln|F(X)|` with
//! `F(X) = I + Δ^{1/2}XΔ^{1/2} − Δ^{1/2}XH_eᴴ(I + H_eXH_eᴴ)⁻¹H_eXΔ^{1/2}`, and
//! `Y ⪯ F(X)` is a linear matrix inequality by a Schur complement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{ConstraintsRecord, MatrixRecord};
use crate::linalg::{self, CMatrix};
use crate::model::{secrecy_rate_unclamped, ConstraintSet, WiretapChannel};

fn delta_sqrt(ch: &WiretapChannel) -> Result<CMatrix> {
    let d = ch.degradedness();
    if !d.degraded {
        return Err(Error::NotDegraded(d.min_eigenvalue));
    }
    Ok(linalg::psd_sqrt(&d.delta))
}

pub fn matrix_f(ch: &WiretapChannel, x: &CMatrix) -> Result<CMatrix> {
    ch.check_covariance(x)?;
    linalg::ensure_hermitian(x)?;
    let ds = delta_sqrt(ch)?;
    let he = ch.he();
    let (_, inv) = linalg::logdet_inverse_hpd(&(linalg::identity(ch.ne()) + linalg::congruence(he, x)))?;
    let cross = &ds * x * he.adjoint();
    let f = linalg::identity(ch.nt()) + &ds * x * &ds - &cross * inv * cross.adjoint();
    Ok(linalg::hermitian_part(&f))
}

/// `[[I + Δ^{1/2}XΔ^{1/2} − Y, Δ^{1/2}XH_eᴴ], [H_eXΔ^{1/2}, I + H_eXH_eᴴ]]`.
#[derive(Debug, Clone)]
pub struct LmiBlock(CMatrix);

impl LmiBlock {
    pub fn new(ch: &WiretapChannel, x: &CMatrix, y: &CMatrix) -> Result<Self> {
        ch.check_covariance(x)?;
        let nt = ch.nt();
        if y.shape() != (nt, nt) {
            return Err(Error::DimensionMismatch(format!("Y is {:?}, expected {nt}x{nt}", y.shape())));
        }
        let ds = delta_sqrt(ch)?;
        let he = ch.he();
        let ne = ch.ne();
        let mut b = linalg::zeros(nt + ne, nt + ne);
        let top = linalg::identity(nt) + &ds * x * &ds - y;
        let off = &ds * x * he.adjoint();
        b.view_mut((0, 0), (nt, nt)).copy_from(&top);
        b.view_mut((0, nt), (nt, ne)).copy_from(&off);
        b.view_mut((nt, 0), (ne, nt)).copy_from(&off.adjoint());
        b.view_mut((nt, nt), (ne, ne)).copy_from(&(linalg::identity(ne) + linalg::congruence(he, x)));
        Ok(Self(linalg::hermitian_part(&b)))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.0)
    }
}

/// True iff the LMI block is PSD within the relative tolerance, i.e. `Y ⪯ F(X)`.
pub fn lmi_feasible(ch: &WiretapChannel, x: &CMatrix, y: &CMatrix) -> Result<bool> {
    Ok(linalg::is_psd(LmiBlock::new(ch, x, y)?.matrix()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReformulationReport {
    pub rate_direct: f64,
    pub rate_via_f: f64,
    pub gap: f64,
    pub pass: bool,
}

/// Compares `ln|F(X)|` with the unclamped secrecy rate.
pub fn verify_reformulation(ch: &WiretapChannel, x: &CMatrix) -> Result<ReformulationReport> {
    let rate_direct = secrecy_rate_unclamped(ch, x)?;
    let rate_via_f = linalg::logdet_hpd(&matrix_f(ch, x)?)?;
    let gap = (rate_via_f - rate_direct).abs();
    Ok(ReformulationReport { rate_direct, rate_via_f, gap, pass: gap <= 1e-8 * rate_direct.abs().max(1.0) })
}

/// Problem data for handing the log-det program to an external solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReformulationData {
    pub schema: u32,
    pub delta_sqrt: MatrixRecord,
    pub he: MatrixRecord,
    pub constraints: ConstraintsRecord,
}

pub fn export_reformulation(ch: &WiretapChannel, constraints: &ConstraintSet) -> Result<ReformulationData> {
    constraints.validate_for(ch.nt())?;
    Ok(ReformulationData {
        schema: 1,
        delta_sqrt: MatrixRecord::from_matrix(&delta_sqrt(ch)?),
        he: MatrixRecord::from_matrix(ch.he()),
        constraints: ConstraintsRecord::from_constraints(constraints),
    })
}
