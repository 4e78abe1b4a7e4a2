//! Secrecy rate, the minimax saddle objective and their gradients.
//!
//! With `f_b(X) = ln|I + H_b X H_bᴴ|` and `f_e(X) = ln|I + H_e X H_eᴴ|` the
//! secrecy rate is `[f_b − f_e]₊`; the saddle objective is
//! `ln|K + H X Hᴴ| − ln|K| − f_e(X)` with `H` the stacked channel.

use super::{NoiseCorrelation, WiretapChannel};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Eigenvalue floor for `K`; anything smaller is treated as a contract violation.
pub const K_EIG_FLOOR: f64 = 1e-12;

fn check_x(ch: &WiretapChannel, x: &CMatrix) -> Result<()> {
    ch.check_covariance(x)?;
    linalg::ensure_hermitian(x)
}

/// `ln|I + H X Hᴴ|` for a Hermitian PSD `x`.
pub fn log_det_gain(h: &CMatrix, x: &CMatrix) -> Result<f64> {
    let m = linalg::identity(h.nrows()) + linalg::congruence(h, x);
    linalg::logdet_hpd(&m)
}

/// `Hᴴ(I + H X Hᴴ)⁻¹H`, the gradient of `ln|I + H X Hᴴ|`.
pub fn log_det_gain_grad(h: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    let m = linalg::identity(h.nrows()) + linalg::congruence(h, x);
    let (_, inv) = linalg::logdet_inverse_hpd(&m)?;
    Ok(linalg::hermitian_part(&(h.adjoint() * inv * h)))
}

pub fn f_b(ch: &WiretapChannel, x: &CMatrix) -> Result<f64> {
    check_x(ch, x)?;
    log_det_gain(ch.hb(), x)
}

pub fn f_e(ch: &WiretapChannel, x: &CMatrix) -> Result<f64> {
    check_x(ch, x)?;
    log_det_gain(ch.he(), x)
}

/// `f_b(X) − f_e(X)` without clamping.
pub fn secrecy_rate_unclamped(ch: &WiretapChannel, x: &CMatrix) -> Result<f64> {
    check_x(ch, x)?;
    Ok(log_det_gain(ch.hb(), x)? - log_det_gain(ch.he(), x)?)
}

/// Achievable secrecy rate in nats, clamped at zero.
pub fn secrecy_rate(ch: &WiretapChannel, x: &CMatrix) -> Result<f64> {
    Ok(secrecy_rate_unclamped(ch, x)?.max(0.0))
}

pub fn grad_fb(ch: &WiretapChannel, x: &CMatrix) -> Result<CMatrix> {
    check_x(ch, x)?;
    log_det_gain_grad(ch.hb(), x)
}

/// `H_eᴴ(I + H_e X H_eᴴ)⁻¹H_e`.
pub fn grad_fe(ch: &WiretapChannel, x: &CMatrix) -> Result<CMatrix> {
    check_x(ch, x)?;
    log_det_gain_grad(ch.he(), x)
}

fn check_noise(ch: &WiretapChannel, kbar: &NoiseCorrelation) -> Result<CMatrix> {
    if kbar.nr() != ch.nr() || kbar.ne() != ch.ne() {
        return Err(Error::DimensionMismatch(format!(
            "noise correlation is {}x{} but the channel has {} Bob and {} Eve antennas",
            kbar.nr(),
            kbar.ne(),
            ch.nr(),
            ch.ne()
        )));
    }
    let k = kbar.full();
    let lmin = linalg::min_eigenvalue(&k);
    if lmin < K_EIG_FLOOR {
        return Err(Error::Singular(lmin));
    }
    Ok(k)
}

/// `f(K, X) = ln|K + H X Hᴴ| − ln|K| − ln|I + H_e X H_eᴴ|`.
pub fn saddle_objective(ch: &WiretapChannel, kbar: &NoiseCorrelation, x: &CMatrix) -> Result<f64> {
    check_x(ch, x)?;
    let k = check_noise(ch, kbar)?;
    let h = ch.stacked();
    let joint = linalg::logdet_hpd(&(&k + linalg::congruence(&h, x)))?;
    Ok(joint - linalg::logdet_hpd(&k)? - log_det_gain(ch.he(), x)?)
}

/// `Hᴴ(K + H X Hᴴ)⁻¹H − H_eᴴ(I + H_e X H_eᴴ)⁻¹H_e`.
pub fn grad_saddle_x(ch: &WiretapChannel, kbar: &NoiseCorrelation, x: &CMatrix) -> Result<CMatrix> {
    check_x(ch, x)?;
    let k = check_noise(ch, kbar)?;
    let h = ch.stacked();
    let (_, inv) = linalg::logdet_inverse_hpd(&(&k + linalg::congruence(&h, x)))?;
    let g = h.adjoint() * inv * &h - log_det_gain_grad(ch.he(), x)?;
    Ok(linalg::hermitian_part(&g))
}
