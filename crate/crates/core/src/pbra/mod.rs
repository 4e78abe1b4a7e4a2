//! Partial best response on the minimax form of the secrecy capacity.
//!
//! Alternates an exact maximization over the transmit covariance `X` with a
//! closed-form minimization of a linearized upper bound over the noise
//! correlation `K̄`. The saddle value equals the secrecy capacity.

mod center;

use crate::comirror::{solve_subproblem, CoMirrorConfig, LinearizedObjective};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::objective::K_EIG_FLOOR;
use crate::model::{
    saddle_objective, secrecy_rate, ConstraintSet, CovarianceCandidate, NoiseCorrelation, WiretapChannel,
};
use crate::trace::{Sense, SolverTrace, Status, TraceRecord};

/// Eigenvalues of `Ψ₁₂Ψ₁₂ᴴ` below this are treated as zero.
pub const SIGMA_ZERO_TOL: f64 = 1e-14;

/// Blocks of `Ψ = (K + H X Hᴴ)⁻¹` split at Bob's antenna count.
#[derive(Debug, Clone)]
pub struct PsiPartition {
    pub psi11: CMatrix,
    pub psi12: CMatrix,
    pub psi22: CMatrix,
}

impl PsiPartition {
    pub fn compute(ch: &WiretapChannel, kbar: &NoiseCorrelation, x: &CMatrix) -> Result<Self> {
        let h = ch.stacked();
        let (_, psi) = linalg::logdet_inverse_hpd(&(kbar.full() + linalg::congruence(&h, x)))?;
        let (nr, ne) = (ch.nr(), ch.ne());
        Ok(Self {
            psi11: psi.view((0, 0), (nr, nr)).into_owned(),
            psi12: psi.view((0, nr), (nr, ne)).into_owned(),
            psi22: psi.view((nr, nr), (ne, ne)).into_owned(),
        })
    }

    pub fn assemble(&self) -> CMatrix {
        let (nr, ne) = self.psi12.shape();
        let mut m = linalg::zeros(nr + ne, nr + ne);
        m.view_mut((0, 0), (nr, nr)).copy_from(&self.psi11);
        m.view_mut((0, nr), (nr, ne)).copy_from(&self.psi12);
        m.view_mut((nr, 0), (ne, nr)).copy_from(&self.psi12.adjoint());
        m.view_mut((nr, nr), (ne, ne)).copy_from(&self.psi22);
        m
    }
}

/// Minimizer of `tr(ΨK) − ln|K|` over `K = [[I, K̄], [K̄ᴴ, I]] ≻ 0`.
///
/// With `Ψ₁₂Ψ₁₂ᴴ = U diag(σ) Uᴴ`, `K̄ = −U Ξ Uᴴ Ψ₁₂` and `Ξ = diag(2/(1 + √(1 + 4σ)))`.
pub fn k_update(psi12: &CMatrix) -> NoiseCorrelation {
    let eig = linalg::eigh(&(psi12 * psi12.adjoint()));
    let xi = eig.map(|s| {
        let s = if s < SIGMA_ZERO_TOL { 0.0 } else { s };
        2.0 / (1.0 + (1.0 + 4.0 * s).sqrt())
    });
    NoiseCorrelation::from_trusted(-(xi * psi12))
}

/// `‖Ψ₁₂ + (I − K̄K̄ᴴ)⁻¹K̄‖_F`, zero exactly at the optimal `K̄`.
pub fn kkt_residual(psi12: &CMatrix, kbar: &NoiseCorrelation) -> Result<f64> {
    let k = kbar.kbar();
    if k.shape() != psi12.shape() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", k.shape(), psi12.shape())));
    }
    let m = linalg::identity(k.nrows()) - k * k.adjoint();
    let (_, inv) = linalg::logdet_inverse_hpd(&m)?;
    Ok(linalg::frob(&(psi12 + inv * k)))
}

/// `tr(ΨK) − ln|K|`, the function minimized by [`k_update`].
pub fn k_objective(psi: &CMatrix, kbar: &NoiseCorrelation) -> Result<f64> {
    let k = kbar.full();
    Ok(linalg::trace_product(psi, &k) - linalg::logdet_hpd(&k)?)
}

/// Effective Bob channel `K^{−1/2}H` for the X best response.
fn effective_objective(ch: &WiretapChannel, kbar: &NoiseCorrelation) -> Result<LinearizedObjective> {
    let k_isqrt = linalg::inv_sqrt_pd(&kbar.full(), K_EIG_FLOOR)?;
    LinearizedObjective::pbra(k_isqrt * ch.stacked(), ch.he().clone())
}

/// Best response `argmax_X f(K, X)` over the feasible set.
pub fn x_update(
    ch: &WiretapChannel,
    kbar: &NoiseCorrelation,
    constraints: &ConstraintSet,
    config: &CoMirrorConfig,
) -> Result<(CovarianceCandidate, SolverTrace)> {
    check_kbar(ch, kbar)?;
    solve_subproblem(&effective_objective(ch, kbar)?, constraints, config)
}

fn check_kbar(ch: &WiretapChannel, kbar: &NoiseCorrelation) -> Result<()> {
    if kbar.nr() != ch.nr() || kbar.ne() != ch.ne() {
        return Err(Error::DimensionMismatch(format!(
            "noise correlation is {}x{}, channel needs {}x{}",
            kbar.nr(),
            kbar.ne(),
            ch.nr(),
            ch.ne()
        )));
    }
    Ok(())
}

/// Solver for the X best response inside the PBRA loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BestResponse {
    /// CoMirror on `f(K, ·)`; cheap but only accurate to the subgradient rate.
    Subgradient,
    /// Newton on the log-barrier path down to `center_mu`. Falls back to
    /// [`BestResponse::Subgradient`] when the feasible set has no interior.
    Barrier,
}

#[derive(Debug, Clone)]
pub struct PbraConfig {
    pub max_outer: usize,
    pub tol: f64,
    pub best_response: BestResponse,
    pub inner: CoMirrorConfig,
    /// Finish with best responses along the log-barrier path, which selects the
    /// centre of the optimal face when the best response is not unique.
    pub center: bool,
    /// Barrier weight of the finishing phase.
    pub center_mu: f64,
    pub polish_max: usize,
    pub polish_tol: f64,
}

impl Default for PbraConfig {
    fn default() -> Self {
        Self {
            max_outer: 300,
            tol: 1e-6,
            best_response: BestResponse::Barrier,
            inner: CoMirrorConfig::default(),
            center: true,
            center_mu: 1e-8,
            polish_max: 200,
            polish_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PbraResult {
    pub x: CovarianceCandidate,
    pub kbar: NoiseCorrelation,
    /// Saddle value `f(K, X)` at termination.
    pub value: f64,
    pub trace: SolverTrace,
    /// Whether the returned `X` came from the centering step.
    pub centered: bool,
}

impl PbraResult {
    /// The secrecy capacity estimate, i.e. the saddle value.
    pub fn capacity(&self) -> f64 {
        self.value
    }
}

pub fn pbra_run(ch: &WiretapChannel, constraints: &ConstraintSet, config: &PbraConfig) -> Result<PbraResult> {
    let nt = ch.nt();
    constraints.validate_for(nt)?;
    if config.max_outer == 0 {
        return Err(Error::InvalidParameter("max_outer must be positive".into()));
    }
    let mut kbar = NoiseCorrelation::zero(ch.nr(), ch.ne());
    let mut x = CovarianceCandidate::from_trusted(constraints.default_start(nt));
    let mut trace = SolverTrace::new("f_value", Sense::Minimize);
    let mut prev: Option<f64> = None;
    let mut value = 0.0;
    let mut status = Status::MaxIterations;

    let schedule = center::mu_schedule(config.center_mu);
    for n in 1..=config.max_outer {
        let (x_n, inner_iters) = best_response(ch, &kbar, constraints, config, x, &schedule)?;
        let psi = PsiPartition::compute(ch, &kbar, x_n.matrix())?;
        let k_n = k_update(&psi.psi12);
        let kkt = kkt_residual(&psi.psi12, &k_n)?;
        let lmin = k_n.lambda_min();
        if lmin <= 0.0 {
            return Err(Error::Singular(lmin));
        }
        value = saddle_objective(ch, &k_n, x_n.matrix())?;
        trace.push(
            TraceRecord {
                index: n,
                objective: value,
                feasibility_violation: constraints.violation(x_n.matrix()),
                extras: vec![("kkt_residual", kkt), ("inner_iters", inner_iters as f64), ("lambda_min_K", lmin)],
            },
            true,
        );
        x = x_n;
        kbar = k_n;
        if prev.is_some_and(|p| (value - p).abs() < config.tol) {
            status = Status::Converged;
            break;
        }
        prev = Some(value);
    }
    trace.status = status;

    let mut centered = false;
    if config.center {
        if let Some((xc, kc, vc)) = polish(ch, constraints, config, x.matrix(), &kbar)? {
            x = CovarianceCandidate::from_trusted(xc);
            kbar = kc;
            value = vc;
            centered = true;
        }
    }
    Ok(PbraResult { x, kbar, value, trace, centered })
}

/// X-update of one PBRA step; also returns the inner iteration count (0 for Newton).
fn best_response(
    ch: &WiretapChannel,
    kbar: &NoiseCorrelation,
    constraints: &ConstraintSet,
    config: &PbraConfig,
    x_prev: CovarianceCandidate,
    schedule: &[f64],
) -> Result<(CovarianceCandidate, usize)> {
    if config.best_response == BestResponse::Barrier {
        let objective = effective_objective(ch, kbar)?;
        if let Some(x) = center::barrier_path(&objective, constraints, x_prev.matrix(), schedule, false) {
            if constraints.violation(&x) <= constraints.feasibility_tol() && linalg::is_psd(&x) {
                return Ok((CovarianceCandidate::from_trusted(linalg::hermitian_part(&x)), 0));
            }
        }
    }
    let inner = config.inner.clone().with_x0(x_prev);
    let (x, t) = x_update(ch, kbar, constraints, &inner)?;
    Ok((x, t.elapsed_iterations))
}

/// Continues the alternation with barrier best responses at weight `center_mu`.
///
/// Returns `None` (keeping the subgradient result) when the feasible set has
/// no interior or the barrier path breaks down.
#[allow(clippy::type_complexity)]
fn polish(
    ch: &WiretapChannel,
    constraints: &ConstraintSet,
    config: &PbraConfig,
    x_start: &CMatrix,
    kbar_start: &NoiseCorrelation,
) -> Result<Option<(CMatrix, NoiseCorrelation, f64)>> {
    let eps = constraints.feasibility_tol();
    let schedule = center::mu_schedule(config.center_mu);
    let objective = effective_objective(ch, kbar_start)?;
    let Some(mut x) = center::barrier_path(&objective, constraints, x_start, &schedule, false) else {
        return Ok(None);
    };
    let mut kbar = kbar_start.clone();
    let mut value = saddle_objective(ch, &kbar, &x)?;
    for _ in 0..config.polish_max {
        let psi = PsiPartition::compute(ch, &kbar, &x)?;
        let k_next = k_update(&psi.psi12);
        if k_next.lambda_min() <= K_EIG_FLOOR {
            break;
        }
        let objective = effective_objective(ch, &k_next)?;
        let Some(x_next) = center::barrier_path(&objective, constraints, &x, &[config.center_mu], true) else {
            break;
        };
        let v = saddle_objective(ch, &k_next, &x_next)?;
        let delta = (v - value).abs();
        x = x_next;
        kbar = k_next;
        value = v;
        if delta < config.polish_tol {
            break;
        }
    }
    let ok = constraints.violation(&x) <= eps && linalg::is_psd(&x);
    Ok(ok.then_some((x, kbar, value)))
}

#[derive(Debug, Clone)]
pub struct RecoveryConfig {
    pub bisect_tol: f64,
    pub max_bisect: usize,
    pub grid_points: usize,
    pub pbra: PbraConfig,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self { bisect_tol: 1e-3, max_bisect: 40, grid_points: 64, pbra: PbraConfig::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Recovery {
    pub x: CovarianceCandidate,
    /// Sum-power budget at which `x` was found.
    pub power: f64,
    pub rate: f64,
    /// `|C_s(x) − target|`; above `bisect_tol` only when the search failed.
    pub gap: f64,
    pub evaluations: usize,
    pub used_grid: bool,
}

/// Finds a transmit covariance whose secrecy rate matches the saddle value.
///
/// The saddle-point `X` need not achieve the capacity when the SPC is slack
/// at the optimum. Shrinking the sum-power budget until it binds does, so the
/// budget is bisected on whether the saddle value still reaches the target.
pub fn recover_optimal_signaling(
    ch: &WiretapChannel,
    constraints: &ConstraintSet,
    cs_target: f64,
    config: &RecoveryConfig,
) -> Result<Recovery> {
    let p0 = constraints
        .spc()
        .ok_or_else(|| Error::InvalidParameter("signaling recovery needs a sum-power constraint".into()))?;
    let tol = config.bisect_tol;
    let mut evaluations = 0;
    let mut best: Option<Recovery> = None;
    let mut probes: Vec<(f64, bool)> = Vec::new();

    let mut eval = |p: f64, best: &mut Option<Recovery>| -> Result<(f64, f64, CovarianceCandidate)> {
        evaluations += 1;
        let cs = constraints.with_spc(p)?;
        let r = pbra_run(ch, &cs, &config.pbra)?;
        let rate = secrecy_rate(ch, r.x.matrix())?;
        let gap = (rate - cs_target).abs();
        if best.as_ref().is_none_or(|b| gap < b.gap) {
            *best = Some(Recovery { x: r.x.clone(), power: p, rate, gap, evaluations: 0, used_grid: false });
        }
        Ok((r.value, gap, r.x))
    };

    if cs_target <= tol {
        let x = CovarianceCandidate::zeros(ch.nt());
        let rate = secrecy_rate(ch, x.matrix())?;
        return Ok(Recovery { x, power: 0.0, rate, gap: (rate - cs_target).abs(), evaluations: 0, used_grid: false });
    }

    let finish = |mut r: Recovery, evaluations: usize, used_grid: bool| {
        r.evaluations = evaluations;
        r.used_grid = used_grid;
        r
    };

    let (_, gap, _) = eval(p0, &mut best)?;
    if gap <= tol {
        return Ok(finish(best.unwrap(), evaluations, false));
    }

    let mut lo = p0 / 1024.0;
    let mut hi = p0;
    let (v_lo, gap_lo, _) = eval(lo, &mut best)?;
    if gap_lo <= tol {
        return Ok(finish(best.unwrap(), evaluations, false));
    }
    probes.push((lo, v_lo >= cs_target - 0.5 * tol));
    probes.push((hi, true));
    if v_lo >= cs_target - 0.5 * tol {
        hi = lo;
        lo = 0.0;
    }

    let mut monotone = true;
    for _ in 0..config.max_bisect {
        let mid = 0.5 * (lo + hi);
        let (v, gap, _) = eval(mid, &mut best)?;
        if gap <= tol {
            return Ok(finish(best.unwrap(), evaluations, false));
        }
        // Aim inside the tolerance band so the bracket edge still passes.
        let reached = v >= cs_target - 0.5 * tol;
        probes.push((mid, reached));
        if !is_monotone(&probes) {
            monotone = false;
            break;
        }
        if reached {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * p0 {
            break;
        }
    }

    if !monotone {
        let n = config.grid_points.max(1);
        for i in 1..=n {
            let (_, gap, _) = eval(p0 * i as f64 / n as f64, &mut best)?;
            if gap <= tol {
                break;
            }
        }
        return Ok(finish(best.unwrap(), evaluations, true));
    }
    Ok(finish(best.unwrap(), evaluations, false))
}

/// True when no budget reaching the target lies below one that does not.
fn is_monotone(probes: &[(f64, bool)]) -> bool {
    let mut sorted = probes.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    sorted.windows(2).all(|w| !(w[0].1 && !w[1].1))
}
