//! Euclidean projections onto the simplex `{t ≥ 0, Σt ≤ P₀}` and the
//! spectrahedron `{X ⪰ 0, tr X ≤ P₀}`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::CovarianceCandidate;

/// Eigenvalues this close to zero are snapped to zero before projecting.
pub const ZERO_EIG_TOL: f64 = 1e-12;

/// Threshold `τ` with `Σ max(vᵢ − τ, 0) = budget`, or `None` when the clamped
/// vector already fits the budget.
///
/// Sort-then-scan: after sorting descending, `τ` is the largest `(S_k − P₀)/k`
/// whose support condition `u_k ≥ τ` holds.
pub fn simplex_threshold(v: &[f64], budget: f64) -> Option<f64> {
    let mut u: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    if u.iter().sum::<f64>() <= budget {
        return None;
    }
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let t = (cum - budget) / (k + 1) as f64;
        if uk >= t {
            tau = t;
        } else {
            break;
        }
    }
    Some(tau)
}

pub fn project_simplex(v: &[f64], budget: f64) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::Empty("project_simplex"));
    }
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::InvalidParameter(format!("simplex budget {budget} must be >= 0")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(match simplex_threshold(v, budget) {
        None => v.iter().map(|x| x.max(0.0)).collect(),
        Some(tau) => v.iter().map(|x| (x.max(0.0) - tau).max(0.0)).collect(),
    })
}

pub fn project_spectrahedron(xbar: &CMatrix, budget: f64) -> Result<CovarianceCandidate> {
    if !xbar.is_square() {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {:?}", xbar.shape())));
    }
    if !linalg::is_finite(xbar) {
        return Err(Error::NonFinite);
    }
    linalg::ensure_hermitian(xbar)?;
    let eig = linalg::eigh(xbar);
    let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let snapped: Vec<f64> = eig.values.iter().map(|&v| if v.abs() <= ZERO_EIG_TOL * scale { 0.0 } else { v }).collect();
    if snapped.is_empty() {
        return Ok(CovarianceCandidate::zeros(0));
    }
    let sigma = project_simplex(&snapped, budget)?;
    Ok(CovarianceCandidate::from_trusted(linalg::reconstruct(&eig.vectors, &sigma)))
}
