//! Zero-forcing baseline: transmit only in the null space of Eve's channel.

use crate::comirror::{solve_subproblem, CoMirrorConfig, LinearizedObjective};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::{ConstraintSet, CovarianceCandidate, InterferenceConstraint, WiretapChannel};
use crate::trace::SolverTrace;

/// Relative singular-value threshold below which a direction counts as null.
pub const RANK_TOL: f64 = 1e-10;

/// Orthonormal basis of `{v : H_e v = 0}` as columns.
pub fn null_space_basis(he: &CMatrix) -> Result<CMatrix> {
    let (ne, nt) = he.shape();
    if nt == 0 {
        return Err(Error::Empty("null_space_basis"));
    }
    // Pad to at least square so the SVD returns a full right basis.
    let padded = if ne < nt {
        let mut p = linalg::zeros(nt, nt);
        p.view_mut((0, 0), (ne, nt)).copy_from(he);
        p
    } else {
        he.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::Format("SVD did not return right singular vectors".into()))?;
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..nt).filter(|&k| svd.singular_values[k] <= RANK_TOL * smax).collect();
    if cols.is_empty() {
        return Err(Error::NullSpaceEmpty);
    }
    let mut v = linalg::zeros(nt, cols.len());
    for (dst, &k) in cols.iter().enumerate() {
        v.set_column(dst, &v_t.row(k).adjoint());
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct ZfResult {
    /// Covariance in null-space coordinates.
    pub t: CovarianceCandidate,
    pub rate: f64,
    /// `V T Vᴴ`.
    pub x_full: CovarianceCandidate,
    pub basis: CMatrix,
    pub trace: SolverTrace,
}

/// Constraints on `T` equivalent to `V T Vᴴ ∈ 𝒳`.
///
/// Per-antenna limits become `tr(Vᴴe_ie_iᴴV T) ≤ P_i`, interference limits
/// `tr(VᴴW_lV T) ≤ P_l`, and the trace budget carries over since `V` is orthonormal.
pub fn reduced_constraints(constraints: &ConstraintSet, v: &CMatrix) -> Result<ConstraintSet> {
    let mut ipc = Vec::new();
    if let Some(ps) = constraints.papc() {
        for (i, p) in ps.iter().enumerate() {
            let row = v.row(i).into_owned();
            ipc.push(InterferenceConstraint::new(row.adjoint() * row, *p)?);
        }
    }
    for c in constraints.ipc() {
        ipc.push(InterferenceConstraint::new(v.adjoint() * &c.w * v, c.limit)?);
    }
    ConstraintSet::new(Some(constraints.trace_budget()), None, ipc)
}

pub fn zf_rate(ch: &WiretapChannel, constraints: &ConstraintSet, config: &CoMirrorConfig) -> Result<ZfResult> {
    constraints.validate_for(ch.nt())?;
    let v = null_space_basis(ch.he())?;
    let d = v.ncols();
    let reduced = reduced_constraints(constraints, &v)?;
    let objective = LinearizedObjective::adca(ch.hb() * &v, linalg::zeros(d, d))?;
    let cfg = config.clone().with_x0(CovarianceCandidate::zeros(d));
    let (t, trace) = solve_subproblem(&objective, &reduced, &cfg)?;
    let rate = objective.value(t.matrix())?.max(0.0);
    let x_full = CovarianceCandidate::from_trusted(linalg::hermitian_part(&(&v * t.matrix() * v.adjoint())));
    Ok(ZfResult { t, rate, x_full, basis: v, trace })
}
