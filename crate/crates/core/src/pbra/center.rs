//! Barrier-path centering of the X best response at a fixed noise correlation.
//!
//! The best response to a saddle-point noise covariance need not be unique:
//! `f(K*, ·)` can be flat along a face of the feasible set. Following the log
//! barrier path `max f(K, X) + μ φ(X)` as `μ → 0` picks the analytic centre of
//! that face, which is a canonical and reproducible choice.

use crate::comirror::LinearizedObjective;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::{ConstraintIndex, ConstraintSet};

const MU_START: f64 = 1e-1;
const MU_FACTOR: f64 = 0.1;
const MAX_NEWTON: usize = 60;
const DECREMENT_TOL: f64 = 1e-14;

/// One affine slack `s(X) = b − tr(A X)`.
struct Slack {
    a: CMatrix,
    b: f64,
}

fn slacks(constraints: &ConstraintSet, nt: usize) -> Vec<Slack> {
    let mut out = Vec::new();
    if let Some(p) = constraints.spc() {
        out.push(Slack { a: linalg::identity(nt), b: p });
    }
    if let Some(ps) = constraints.papc() {
        for (i, p) in ps.iter().enumerate() {
            out.push(Slack { a: constraints.subgradient(ConstraintIndex::PerAntenna(i), nt), b: *p });
        }
    }
    for (l, c) in constraints.ipc().iter().enumerate() {
        out.push(Slack { a: constraints.subgradient(ConstraintIndex::Interference(l), nt), b: c.limit });
    }
    out
}

struct Barrier<'a> {
    objective: &'a LinearizedObjective,
    slacks: Vec<Slack>,
    basis: Vec<CMatrix>,
}

impl Barrier<'_> {
    /// `f(X) + μ φ(X)`, or `None` outside the strict interior.
    fn value(&self, x: &CMatrix, mu: f64) -> Option<f64> {
        let logdet = linalg::logdet_hpd(x).ok()?;
        let mut phi = logdet;
        for s in &self.slacks {
            let v = s.b - linalg::trace_product(&s.a, x);
            if v <= 0.0 {
                return None;
            }
            phi += v.ln();
        }
        let f = self.objective.value(x).ok()?;
        Some(f + mu * phi)
    }

    /// Gradient and negated Hessian in basis coordinates.
    fn derivatives(&self, x: &CMatrix, mu: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let (m, nmat) = match self.objective {
            LinearizedObjective::PbraExact { hb_eff, he } => (gram_inverse(hb_eff, x)?, gram_inverse(he, x)?),
            LinearizedObjective::AdcaLinearized { .. } => {
                return Err(Error::InvalidParameter("centering needs the exact objective".into()))
            }
        };
        let (_, xinv) = linalg::logdet_inverse_hpd(x)?;
        let d = self.basis.len();
        let am: Vec<CMatrix> = self.basis.iter().map(|e| &m * e).collect();
        let an: Vec<CMatrix> = self.basis.iter().map(|e| &nmat * e).collect();
        let ax: Vec<CMatrix> = self.basis.iter().map(|e| &xinv * e).collect();
        let svals: Vec<f64> = self.slacks.iter().map(|s| s.b - linalg::trace_product(&s.a, x)).collect();
        let coef: Vec<Vec<f64>> =
            self.basis.iter().map(|e| self.slacks.iter().map(|s| linalg::trace_product(&s.a, e)).collect()).collect();

        let mut grad = vec![0.0; d];
        let mut hess = vec![vec![0.0; d]; d];
        for a in 0..d {
            let e = &self.basis[a];
            let mut g =
                linalg::trace_product(&m, e) - linalg::trace_product(&nmat, e) + mu * linalg::trace_product(&xinv, e);
            for (j, s) in svals.iter().enumerate() {
                g -= mu * coef[a][j] / s;
            }
            grad[a] = g;
            for b in a..d {
                let mut h = linalg::trace_product(&am[a], &am[b]) - linalg::trace_product(&an[a], &an[b])
                    + mu * linalg::trace_product(&ax[a], &ax[b]);
                for (j, s) in svals.iter().enumerate() {
                    h += mu * coef[a][j] * coef[b][j] / (s * s);
                }
                hess[a][b] = h;
                hess[b][a] = h;
            }
        }
        Ok((grad, hess))
    }
}

fn gram_inverse(h: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    let (_, inv) = linalg::logdet_inverse_hpd(&(linalg::identity(h.nrows()) + linalg::congruence(h, x)))?;
    Ok(h.adjoint() * inv * h)
}

/// Follows the barrier path `μ ∈ mu_path` from `x_start` and returns the last point.
///
/// Unless `warm` is set (`x_start` is itself a barrier point), the start is pulled
/// halfway towards a strict interior point: a nearly singular start makes the
/// barrier Hessian useless. Returns `None` when the feasible set has no interior
/// or Newton fails.
pub(crate) fn barrier_path(
    objective: &LinearizedObjective,
    constraints: &ConstraintSet,
    x_start: &CMatrix,
    mu_path: &[f64],
    warm: bool,
) -> Option<CMatrix> {
    let nt = objective.nt();
    let interior = constraints.strict_interior_point(nt)?;
    let barrier = Barrier { objective, slacks: slacks(constraints, nt), basis: linalg::hermitian_basis(nt) };
    let first = *mu_path.first()?;
    let mut x = x_start.clone();
    if !warm || barrier.value(&x, first).is_none() {
        x = (x_start + &interior) * linalg::re(0.5);
        barrier.value(&x, first)?;
    }
    for &mu in mu_path {
        x = newton(&barrier, x, mu)?;
    }
    linalg::is_finite(&x).then_some(x)
}

/// Geometric `μ` schedule from the default start down to `mu_end`.
pub(crate) fn mu_schedule(mu_end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut mu = MU_START;
    while mu > mu_end * (1.0 + 1e-9) {
        out.push(mu);
        mu *= MU_FACTOR;
    }
    out.push(mu_end);
    out
}

fn newton(barrier: &Barrier<'_>, mut x: CMatrix, mu: f64) -> Option<CMatrix> {
    let nt = x.nrows();
    for _ in 0..MAX_NEWTON {
        let (grad, hess) = barrier.derivatives(&x, mu).ok()?;
        let d = grad.len();
        let h = nalgebra::DMatrix::from_fn(d, d, |i, j| hess[i][j]);
        let g = nalgebra::DVector::from_vec(grad);
        let step = h.cholesky()?.solve(&g);
        let decrement = g.dot(&step);
        if decrement < DECREMENT_TOL {
            break;
        }
        let dir =
            barrier.basis.iter().zip(step.iter()).fold(linalg::zeros(nt, nt), |acc, (e, c)| acc + e * linalg::re(*c));
        let f0 = barrier.value(&x, mu)?;
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-12 {
            let cand = &x + &dir * linalg::re(t);
            if let Some(f1) = barrier.value(&cand, mu) {
                if f1 >= f0 + 0.25 * t * decrement {
                    x = linalg::hermitian_part(&cand);
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Some(x)
}
