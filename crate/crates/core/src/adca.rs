//! Accelerated difference-of-concave ascent for the secrecy rate.
//!
//! Each outer step linearizes the Eve term at an anchor `V`, maximizes the
//! resulting concave surrogate with [`solve_subproblem`], and then proposes a
//! Nesterov extrapolation `Z` that becomes the next anchor only if its rate
//! beats the worst of the last `q + 1` iterates.

use crate::comirror::{solve_subproblem, CoMirrorConfig, LinearizedObjective};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::{f_b, f_e, grad_fe, secrecy_rate_unclamped, ConstraintSet, CovarianceCandidate, WiretapChannel};
use crate::trace::{Sense, SolverTrace, Status, TraceRecord};

#[derive(Debug, Clone)]
pub struct AdcaConfig {
    /// Length of the non-monotone history; `0` disables extrapolation.
    pub q: usize,
    pub max_outer: usize,
    /// Outer iterations without improvement of the best rate before stopping.
    pub stall_window: usize,
    pub improve_tol: f64,
    pub x0: Option<CovarianceCandidate>,
    /// Inner solver settings; its `x0` is overwritten by the warm start.
    pub inner: CoMirrorConfig,
}

impl Default for AdcaConfig {
    fn default() -> Self {
        Self {
            q: 5,
            max_outer: 500,
            stall_window: 10,
            improve_tol: 1e-8,
            x0: None,
            // A warm-started subproblem rarely beats its start within the stall
            // window, which would freeze the outer loop; run the full budget.
            inner: CoMirrorConfig { stall_window: None, ..CoMirrorConfig::default() },
        }
    }
}

impl AdcaConfig {
    /// Plain alternating optimization: no extrapolation.
    pub fn plain() -> Self {
        Self { q: 0, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct AdcaResult {
    /// Iterate with the best secrecy rate seen.
    pub x: CovarianceCandidate,
    pub rate: f64,
    /// Row `n` holds `C_s(X_n)`, `γ_n`, whether `V_n = Z_n`, and inner iterations.
    pub trace: SolverTrace,
    /// `C_s(V_{n−1})` for every outer iteration `n ≥ 1` (unclamped).
    pub anchor_rates: Vec<f64>,
    /// Unclamped `C_s(X_n)` for `n ≥ 1`, aligned with `anchor_rates`.
    pub iterate_rates: Vec<f64>,
}

/// `(t − 1)/t_next` with `t_next = (1 + √(1 + 4t²))/2`.
pub fn momentum(t: f64) -> (f64, f64) {
    let next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
    ((t - 1.0) / next, next)
}

pub fn adca_run(ch: &WiretapChannel, constraints: &ConstraintSet, config: &AdcaConfig) -> Result<AdcaResult> {
    let nt = ch.nt();
    constraints.validate_for(nt)?;
    if config.max_outer == 0 || config.stall_window == 0 {
        return Err(Error::InvalidParameter("max_outer and stall_window must be positive".into()));
    }
    if !ch.has_positive_secrecy() {
        log::warn!("Bob's channel never beats Eve's; the secrecy capacity is zero");
    }
    let eps = constraints.feasibility_tol();
    let x0 = match &config.x0 {
        Some(x) => {
            if x.dim() != nt {
                return Err(Error::DimensionMismatch(format!("x0 is {0}x{0}, expected {nt}x{nt}", x.dim())));
            }
            x.clone()
        }
        None => CovarianceCandidate::from_trusted(constraints.default_start(nt)),
    };
    let v0 = constraints.violation(x0.matrix());
    if v0 > eps {
        return Err(Error::InfeasibleStart(format!("constraint violation {v0:.3e}")));
    }

    let mut trace = SolverTrace::new("Cs", Sense::Maximize);
    let rate0 = secrecy_rate_unclamped(ch, x0.matrix())?;
    let mut rates = vec![rate0.max(0.0)];
    trace.push(record(0, rate0.max(0.0), rate0.max(0.0), false, 0, v0), true);

    let mut best = (rate0, x0.matrix().clone());
    let mut x_prev = x0.matrix().clone();
    let mut anchor = x0.matrix().clone();
    let mut anchor_rate = rate0;
    let mut t = 0.5 * (1.0 + 5f64.sqrt());
    let mut stalled = 0;
    let mut anchor_rates = Vec::new();
    let mut iterate_rates = Vec::new();
    let mut status = Status::MaxIterations;

    for n in 1..=config.max_outer {
        let gamma_lin = grad_fe(ch, &anchor)?;
        let objective = LinearizedObjective::adca(ch.hb().clone(), gamma_lin)?;
        let inner = config.inner.clone().with_x0(CovarianceCandidate::from_trusted(anchor.clone()));
        let (x_new, inner_trace) = solve_subproblem(&objective, constraints, &inner)?;
        let mut x_n = x_new.into_matrix();
        let mut rate_n = secrecy_rate_unclamped(ch, &x_n)?;
        // The surrogate chain guarantees C_s(X_n) ≥ C_s(V_{n−1}); only round-off can break it.
        if rate_n < anchor_rate {
            x_n = anchor.clone();
            rate_n = anchor_rate;
        }
        anchor_rates.push(anchor_rate);
        iterate_rates.push(rate_n);
        rates.push(rate_n.max(0.0));

        let (beta, t_next) = momentum(t);
        t = t_next;
        let lo = rates.len().saturating_sub(config.q + 1);
        let gamma_n = rates[lo..].iter().copied().fold(f64::INFINITY, f64::min);

        let mut accepted = false;
        let mut next_anchor = (x_n.clone(), rate_n);
        if config.q > 0 {
            let z = extrapolate(&x_n, &x_prev, beta);
            // Only feasible extrapolations may serve as anchors.
            if constraints.violation(&z) <= eps {
                let rz = secrecy_rate_unclamped(ch, &z)?;
                if rz.max(0.0) >= gamma_n {
                    accepted = true;
                    next_anchor = (z, rz);
                }
            }
        }
        let violation = constraints.violation(&x_n);
        trace.push(
            record(n, rate_n.max(0.0), gamma_n, accepted, inner_trace.elapsed_iterations, violation),
            violation <= eps,
        );

        if rate_n > best.0 + config.improve_tol {
            best = (rate_n, x_n.clone());
            stalled = 0;
        } else {
            if rate_n > best.0 {
                best = (rate_n, x_n.clone());
            }
            stalled += 1;
        }
        x_prev = x_n;
        (anchor, anchor_rate) = next_anchor;
        if stalled >= config.stall_window {
            status = Status::Converged;
            break;
        }
    }
    trace.status = status;
    Ok(AdcaResult {
        x: CovarianceCandidate::from_trusted(best.1),
        rate: best.0.max(0.0),
        trace,
        anchor_rates,
        iterate_rates,
    })
}

fn record(n: usize, cs: f64, gamma: f64, accepted: bool, inner: usize, violation: f64) -> TraceRecord {
    TraceRecord {
        index: n,
        objective: cs,
        feasibility_violation: violation,
        extras: vec![
            ("gamma", gamma),
            ("accepted_extrapolation", if accepted { 1.0 } else { 0.0 }),
            ("inner_iters", inner as f64),
        ],
    }
}

/// `X_n + β (X_n − X_{n−1})`, clamped to the PSD cone if needed.
fn extrapolate(x_n: &CMatrix, x_prev: &CMatrix, beta: f64) -> CMatrix {
    let z = linalg::hermitian_part(&(x_n + (x_n - x_prev) * linalg::re(beta)));
    if linalg::min_eigenvalue(&z) < 0.0 {
        linalg::psd_part(&z)
    } else {
        z
    }
}

/// Surrogate lower bound on `C_s(X)` from linearizing the Eve term at `v0`.
///
/// Equals `f_b(X) − tr(ΓX) − f_e(V₀) + tr(ΓV₀)` with `Γ = ∇f_e(V₀)`; tight at `X = V₀`.
pub fn adca_lower_bound_unclamped(ch: &WiretapChannel, v0: &CMatrix, x: &CMatrix) -> Result<f64> {
    let g = grad_fe(ch, v0)?;
    Ok(f_b(ch, x)? - linalg::trace_product(&g, x) - f_e(ch, v0)? + linalg::trace_product(&g, v0))
}

/// [`adca_lower_bound_unclamped`] clamped at zero for reporting.
pub fn adca_lower_bound(ch: &WiretapChannel, v0: &CMatrix, x: &CMatrix) -> Result<f64> {
    Ok(adca_lower_bound_unclamped(ch, v0, x)?.max(0.0))
}
