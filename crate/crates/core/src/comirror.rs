//! Projected subgradient solver for concave log-det subproblems over the
//! spectrahedron with per-antenna and interference constraints.
//!
//! Feasible iterates step along the objective gradient; infeasible ones step
//! against the subgradient of the most violated constraint. Every step is
//! projected back onto `{X ⪰ 0, tr X ≤ P₀}` and the best feasible iterate wins.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::{ConstraintSet, CovarianceCandidate};
use crate::projections::project_spectrahedron;
use crate::trace::{Sense, SolverTrace, Status, TraceRecord};

/// The concave objective handed to the subgradient engine.
#[derive(Debug, Clone)]
pub enum LinearizedObjective {
    /// `ln|I + H X Hᴴ| − tr(Γ X)`.
    AdcaLinearized { hb_eff: CMatrix, gamma: CMatrix },
    /// `ln|I + H X Hᴴ| − ln|I + H_e X H_eᴴ|`.
    PbraExact { hb_eff: CMatrix, he: CMatrix },
}

impl LinearizedObjective {
    pub fn adca(hb_eff: CMatrix, gamma: CMatrix) -> Result<Self> {
        if !gamma.is_square() || gamma.nrows() != hb_eff.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "linear term is {:?} for {} transmit antennas",
                gamma.shape(),
                hb_eff.ncols()
            )));
        }
        linalg::ensure_hermitian(&gamma)?;
        let lmin = linalg::min_eigenvalue(&gamma);
        if lmin < -linalg::PSD_TOL * linalg::frob(&gamma).max(1.0) {
            return Err(Error::NotPsd(lmin));
        }
        Ok(Self::AdcaLinearized { hb_eff, gamma: linalg::hermitian_part(&gamma) })
    }

    pub fn pbra(hb_eff: CMatrix, he: CMatrix) -> Result<Self> {
        if he.ncols() != hb_eff.ncols() {
            return Err(Error::DimensionMismatch("effective channels disagree on N_t".into()));
        }
        Ok(Self::PbraExact { hb_eff, he })
    }

    pub fn nt(&self) -> usize {
        match self {
            Self::AdcaLinearized { hb_eff, .. } | Self::PbraExact { hb_eff, .. } => hb_eff.ncols(),
        }
    }

    pub fn value(&self, x: &CMatrix) -> Result<f64> {
        let (hb_eff, _) = self.parts();
        let gain = logdet_gain(hb_eff, x)?.0;
        Ok(match self {
            Self::AdcaLinearized { gamma, .. } => gain - linalg::trace_product(gamma, x),
            Self::PbraExact { he, .. } => gain - logdet_gain(he, x)?.0,
        })
    }

    pub fn value_and_gradient(&self, x: &CMatrix) -> Result<(f64, CMatrix)> {
        let (hb_eff, _) = self.parts();
        let (gain, inv) = logdet_gain(hb_eff, x)?;
        let g_b = hb_eff.adjoint() * inv * hb_eff;
        let (v, g) = match self {
            Self::AdcaLinearized { gamma, .. } => (gain - linalg::trace_product(gamma, x), g_b - gamma),
            Self::PbraExact { he, .. } => {
                let (loss, inv_e) = logdet_gain(he, x)?;
                (gain - loss, g_b - he.adjoint() * inv_e * he)
            }
        };
        Ok((v, linalg::hermitian_part(&g)))
    }

    /// `‖Γ‖_F + ‖H_effᴴH_eff‖_F`, an upper bound on the gradient norm over the PSD cone.
    pub fn gradient_bound(&self) -> f64 {
        let (hb_eff, _) = self.parts();
        let b = linalg::frob(&(hb_eff.adjoint() * hb_eff));
        match self {
            Self::AdcaLinearized { gamma, .. } => b + linalg::frob(gamma),
            Self::PbraExact { he, .. } => b + linalg::frob(&(he.adjoint() * he)),
        }
    }

    fn parts(&self) -> (&CMatrix, ()) {
        match self {
            Self::AdcaLinearized { hb_eff, .. } | Self::PbraExact { hb_eff, .. } => (hb_eff, ()),
        }
    }
}

fn logdet_gain(h: &CMatrix, x: &CMatrix) -> Result<(f64, CMatrix)> {
    linalg::logdet_inverse_hpd(&(linalg::identity(h.nrows()) + linalg::congruence(h, x)))
}

#[derive(Debug, Clone)]
pub struct CoMirrorConfig {
    pub max_iters: usize,
    /// Starting point; `None` uses the scaled identity from the constraint set.
    pub x0: Option<CovarianceCandidate>,
    pub omega_override: Option<f64>,
    /// Stop once the best value gains less than `stall_tol` over this many
    /// iterations. `None` always runs `max_iters`.
    pub stall_window: Option<usize>,
    pub stall_tol: f64,
}

impl Default for CoMirrorConfig {
    fn default() -> Self {
        Self { max_iters: 2000, x0: None, omega_override: None, stall_window: Some(200), stall_tol: 1e-8 }
    }
}

impl CoMirrorConfig {
    pub fn with_x0(mut self, x0: CovarianceCandidate) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn fixed_iterations(mut self, iters: usize) -> Self {
        self.max_iters = iters;
        self.stall_window = None;
        self
    }
}

/// `sqrt((P₀² + ‖X⁰‖_F²)/2)`, a bound on the distance-generating radius `Ω`.
pub fn omega_bound(x0: &CMatrix, budget: f64) -> f64 {
    let n = linalg::frob(x0);
    ((budget * budget + n * n) / 2.0).sqrt()
}

/// Step-size rule for the projected subgradient engine.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StepRule {
    /// `η_k = Ω / (‖E‖_F √k)`.
    Normalized { omega: f64 },
    /// `η_k = step`.
    Constant(f64),
}

impl StepRule {
    fn size(self, e_norm: f64, k: usize) -> f64 {
        match self {
            Self::Normalized { omega } => omega / (e_norm * (k as f64).sqrt()),
            Self::Constant(step) => step,
        }
    }
}

struct Direction {
    value: f64,
    violation: f64,
    e: CMatrix,
    objective_step: bool,
}

fn direction(objective: &LinearizedObjective, constraints: &ConstraintSet, x: &CMatrix) -> Result<Direction> {
    let nt = x.nrows();
    let (value, grad) = objective.value_and_gradient(x)?;
    debug_assert!(
        linalg::frob(&grad) <= objective.gradient_bound() * (1.0 + 1e-9) + 1e-12,
        "gradient norm {} exceeds bound {}",
        linalg::frob(&grad),
        objective.gradient_bound()
    );
    let (violation, e, objective_step) = match constraints.max_violation(x) {
        Some((g, idx)) if g > 0.0 => (g, -constraints.subgradient(idx, nt), false),
        Some((g, _)) => (g.max(0.0), grad, true),
        None => (0.0, grad, true),
    };
    Ok(Direction { value, violation, e, objective_step })
}

/// One step from `x_prev`, projected onto the spectrahedron.
///
/// Fails with [`Error::ZeroNorm`] when the step direction vanishes.
pub fn comirror_step(
    x_prev: &CMatrix,
    objective: &LinearizedObjective,
    constraints: &ConstraintSet,
    k: usize,
    omega: f64,
) -> Result<CovarianceCandidate> {
    if k == 0 {
        return Err(Error::InvalidParameter("iteration index starts at 1".into()));
    }
    let d = direction(objective, constraints, x_prev)?;
    let norm = linalg::frob(&d.e);
    if norm == 0.0 {
        return Err(Error::ZeroNorm("step direction"));
    }
    let eta = StepRule::Normalized { omega }.size(norm, k);
    project_spectrahedron(&(x_prev + d.e * linalg::re(eta)), constraints.trace_budget())
}

/// Maximizes `objective` over the feasible set and returns the best feasible iterate.
pub fn solve_subproblem(
    objective: &LinearizedObjective,
    constraints: &ConstraintSet,
    config: &CoMirrorConfig,
) -> Result<(CovarianceCandidate, SolverTrace)> {
    let nt = objective.nt();
    constraints.validate_for(nt)?;
    let x0 = match &config.x0 {
        Some(x) => x.clone(),
        None => CovarianceCandidate::from_trusted(constraints.default_start(nt)),
    };
    let budget = constraints.trace_budget();
    let omega = config.omega_override.unwrap_or_else(|| omega_bound(x0.matrix(), budget));
    run(objective, constraints, x0, config, StepRule::Normalized { omega })
}

pub(crate) fn run(
    objective: &LinearizedObjective,
    constraints: &ConstraintSet,
    x0: CovarianceCandidate,
    config: &CoMirrorConfig,
    rule: StepRule,
) -> Result<(CovarianceCandidate, SolverTrace)> {
    let nt = objective.nt();
    if x0.dim() != nt {
        return Err(Error::DimensionMismatch(format!("x0 is {0}x{0}, expected {nt}x{nt}", x0.dim())));
    }
    let budget = constraints.trace_budget();
    let eps = constraints.feasibility_tol();
    // Keep the start inside the projection domain.
    let mut x = if x0.trace() > budget || linalg::min_eigenvalue(x0.matrix()) < 0.0 {
        project_spectrahedron(x0.matrix(), budget)?.into_matrix()
    } else {
        x0.into_matrix()
    };

    let mut trace = SolverTrace::new("objective", Sense::Maximize);
    let mut best: Option<(f64, CMatrix)> = None;
    let mut history: Vec<f64> = Vec::with_capacity(config.max_iters + 1);
    let mut status = Status::MaxIterations;

    for k in 1..=config.max_iters {
        let d = direction(objective, constraints, &x)?;
        let feasible = d.violation <= eps;
        trace.push(
            TraceRecord { index: k, objective: d.value, feasibility_violation: d.violation, extras: Vec::new() },
            feasible,
        );
        if feasible && best.as_ref().is_none_or(|(b, _)| d.value > *b) {
            best = Some((d.value, x.clone()));
        }
        history.push(best.as_ref().map_or(f64::NEG_INFINITY, |(b, _)| *b));

        let norm = linalg::frob(&d.e);
        if norm == 0.0 && d.objective_step {
            status = Status::Converged;
            break;
        }
        if let Some(w) = config.stall_window {
            if k > w && best.is_some() && history[k - 1] - history[k - 1 - w] < config.stall_tol {
                status = Status::Converged;
                break;
            }
        }
        let eta = rule.size(norm, k);
        x = project_spectrahedron(&(&x + d.e * linalg::re(eta)), budget)?.into_matrix();
    }

    if status == Status::MaxIterations && config.max_iters > 0 {
        // The final projected point has not been scored yet.
        let violation = constraints.max_violation(&x).map_or(0.0, |(g, _)| g.max(0.0));
        if violation <= eps {
            let v = objective.value(&x)?;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, x.clone()));
            }
            trace.best_objective = trace.best_objective.max(v);
        }
    }
    if config.max_iters == 0 {
        let violation = constraints.max_violation(&x).map_or(0.0, |(g, _)| g.max(0.0));
        if violation <= eps {
            let v = objective.value(&x)?;
            trace.push(
                TraceRecord { index: 0, objective: v, feasibility_violation: violation, extras: Vec::new() },
                true,
            );
            best = Some((v, x.clone()));
        }
    }

    match best {
        Some((_, xb)) => {
            trace.status = status;
            Ok((CovarianceCandidate::from_trusted(xb), trace))
        }
        None => {
            trace.status = Status::Infeasible;
            Err(Error::Infeasible(trace.elapsed_iterations))
        }
    }
}
