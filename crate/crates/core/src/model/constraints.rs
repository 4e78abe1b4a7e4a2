use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, PSD_TOL};

/// Relative tolerance used when declaring an iterate feasible (scaled by the trace budget).
pub const FEASIBILITY_REL_TOL: f64 = 1e-6;

/// `tr(W X) ≤ P` for `W = H_lᴴH_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceConstraint {
    pub w: CMatrix,
    pub limit: f64,
}

impl InterferenceConstraint {
    pub fn new(w: CMatrix, limit: f64) -> Result<Self> {
        if !(limit >= 0.0 && limit.is_finite()) {
            return Err(Error::InvalidParameter(format!("interference limit {limit} must be >= 0")));
        }
        linalg::ensure_hermitian(&w)?;
        let eig = linalg::eigh(&w);
        if eig.min() < -PSD_TOL * linalg::frob(&w).max(1.0) {
            return Err(Error::NotPsd(eig.min()));
        }
        Ok(Self { w: linalg::hermitian_part(&w), limit })
    }

    /// Builds the constraint from a primary receiver's channel.
    pub fn from_channel(h: &CMatrix, limit: f64) -> Result<Self> {
        Self::new(h.adjoint() * h, limit)
    }
}

/// Identifies one functional constraint in the pointwise maximum `g(X)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintIndex {
    PerAntenna(usize),
    Interference(usize),
}

/// Transmit covariance constraints: sum power, per-antenna power and interference power.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    spc: Option<f64>,
    papc: Option<Vec<f64>>,
    ipc: Vec<InterferenceConstraint>,
}

impl ConstraintSet {
    pub fn new(spc: Option<f64>, papc: Option<Vec<f64>>, ipc: Vec<InterferenceConstraint>) -> Result<Self> {
        if spc.is_none() && papc.is_none() {
            return Err(Error::InvalidParameter(
                "at least one of the sum-power or per-antenna constraints is required".into(),
            ));
        }
        if let Some(p) = spc {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::InvalidParameter(format!("sum power {p} must be >= 0")));
            }
        }
        if let Some(ps) = &papc {
            if ps.is_empty() {
                return Err(Error::Empty("per-antenna limits"));
            }
            if let Some(bad) = ps.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
                return Err(Error::InvalidParameter(format!("per-antenna limit {bad} must be >= 0")));
            }
        }
        let n = papc.as_ref().map(Vec::len);
        for c in &ipc {
            if let Some(n) = n {
                if c.w.nrows() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "interference matrix is {0}x{0} but there are {n} per-antenna limits",
                        c.w.nrows()
                    )));
                }
            }
        }
        Ok(Self { spc, papc, ipc })
    }

    pub fn spc_only(p0: f64) -> Result<Self> {
        Self::new(Some(p0), None, Vec::new())
    }

    pub fn spc_papc(p0: f64, papc: Vec<f64>) -> Result<Self> {
        Self::new(Some(p0), Some(papc), Vec::new())
    }

    /// Joint SPC and uniform PAPC `P_i = factor · P₀ / N_t`.
    pub fn spc_uniform_papc(p0: f64, nt: usize, factor: f64) -> Result<Self> {
        Self::spc_papc(p0, vec![factor * p0 / nt as f64; nt])
    }

    pub fn with_interference(mut self, c: InterferenceConstraint) -> Result<Self> {
        self.ipc.push(c);
        Self::new(self.spc, self.papc, self.ipc)
    }

    pub fn spc(&self) -> Option<f64> {
        self.spc
    }

    pub fn papc(&self) -> Option<&[f64]> {
        self.papc.as_deref()
    }

    pub fn ipc(&self) -> &[InterferenceConstraint] {
        &self.ipc
    }

    /// Same constraints with the sum-power budget replaced.
    pub fn with_spc(&self, p0: f64) -> Result<Self> {
        Self::new(Some(p0), self.papc.clone(), self.ipc.clone())
    }

    /// Radius of the spectrahedron used as the projection domain.
    ///
    /// Without an explicit SPC the per-antenna limits imply `tr(X) ≤ Σ P_i`.
    pub fn trace_budget(&self) -> f64 {
        match (self.spc, &self.papc) {
            (Some(p), Some(ps)) => p.min(ps.iter().sum()),
            (Some(p), None) => p,
            (None, Some(ps)) => ps.iter().sum(),
            (None, None) => unreachable!("validated at construction"),
        }
    }

    /// `ε_feas = 1e-6 · P₀`.
    pub fn feasibility_tol(&self) -> f64 {
        FEASIBILITY_REL_TOL * self.trace_budget()
    }

    pub fn has_functional(&self) -> bool {
        self.papc.is_some() || !self.ipc.is_empty()
    }

    /// Checks that the constraint dimensions fit `nt` transmit antennas.
    pub fn validate_for(&self, nt: usize) -> Result<()> {
        if let Some(ps) = &self.papc {
            if ps.len() != nt {
                return Err(Error::DimensionMismatch(format!(
                    "{} per-antenna limits for {nt} transmit antennas",
                    ps.len()
                )));
            }
        }
        for c in &self.ipc {
            if c.w.nrows() != nt {
                return Err(Error::DimensionMismatch(format!(
                    "interference matrix is {0}x{0}, expected {nt}x{nt}",
                    c.w.nrows()
                )));
            }
        }
        Ok(())
    }

    /// Largest functional constraint value `g(X)` and the (first) index attaining it.
    ///
    /// Returns `None` when only the SPC is present.
    pub fn max_violation(&self, x: &CMatrix) -> Option<(f64, ConstraintIndex)> {
        let mut best: Option<(f64, ConstraintIndex)> = None;
        let mut consider = |v: f64, idx: ConstraintIndex| {
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, idx));
            }
        };
        if let Some(ps) = &self.papc {
            for (i, p) in ps.iter().enumerate() {
                consider(x[(i, i)].re - p, ConstraintIndex::PerAntenna(i));
            }
        }
        for (l, c) in self.ipc.iter().enumerate() {
            consider(linalg::trace_product(&c.w, x) - c.limit, ConstraintIndex::Interference(l));
        }
        best
    }

    /// Subgradient of the constraint `idx` (a constant matrix since the constraints are affine).
    pub fn subgradient(&self, idx: ConstraintIndex, nt: usize) -> CMatrix {
        match idx {
            ConstraintIndex::PerAntenna(i) => {
                let mut e = linalg::zeros(nt, nt);
                e[(i, i)] = linalg::re(1.0);
                e
            }
            ConstraintIndex::Interference(l) => self.ipc[l].w.clone(),
        }
    }

    /// Worst violation over every constraint including the SPC (0 when feasible).
    pub fn violation(&self, x: &CMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        if let Some(p) = self.spc {
            worst = worst.max(linalg::trace_re(x) - p);
        }
        if let Some((g, _)) = self.max_violation(x) {
            worst = worst.max(g);
        }
        worst
    }

    /// Hermitian PSD and every constraint satisfied within `tol`.
    pub fn is_feasible(&self, x: &CMatrix, tol: f64) -> bool {
        x.is_square()
            && linalg::hermitian_asymmetry(x) <= linalg::HERMITIAN_TOL
            && linalg::min_eigenvalue(x) >= -PSD_TOL * linalg::frob(x).max(1.0)
            && self.violation(x) <= tol
    }

    /// `(P₀/2)·I/N_t`, scaled down until every functional constraint holds.
    pub fn default_start(&self, nt: usize) -> CMatrix {
        let mut s = 0.5 * self.trace_budget() / nt as f64;
        if let Some(ps) = &self.papc {
            for p in ps {
                s = s.min(*p);
            }
        }
        for c in &self.ipc {
            let tr = linalg::trace_re(&c.w);
            if tr > 0.0 {
                s = s.min(c.limit / tr);
            }
        }
        linalg::identity(nt) * linalg::re(s)
    }

    /// A point with every inequality strictly slack, if the feasible set has an interior.
    pub fn strict_interior_point(&self, nt: usize) -> Option<CMatrix> {
        let mut s = 0.5 * self.trace_budget() / nt as f64;
        if let Some(ps) = &self.papc {
            for p in ps {
                s = s.min(0.5 * p);
            }
        }
        for c in &self.ipc {
            let tr = linalg::trace_re(&c.w);
            if tr > 0.0 {
                s = s.min(0.5 * c.limit / tr);
            }
        }
        (s > 0.0).then(|| linalg::identity(nt) * linalg::re(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, re, real_diag};

    #[test]
    fn needs_a_compact_constraint() {
        let w = InterferenceConstraint::new(identity(2), 1.0).unwrap();
        assert!(ConstraintSet::new(None, None, vec![w]).is_err());
    }

    #[test]
    fn max_violation_breaks_ties_by_first_index() {
        let c = ConstraintSet::spc_papc(10.0, vec![1.0, 1.0]).unwrap();
        let x = real_diag(&[2.0, 2.0]);
        assert_eq!(c.max_violation(&x), Some((1.0, ConstraintIndex::PerAntenna(0))));
    }

    #[test]
    fn interference_joins_the_pointwise_max() {
        let w = InterferenceConstraint::new(identity(2) * re(2.0), 1.0).unwrap();
        let c = ConstraintSet::spc_papc(10.0, vec![5.0, 5.0]).unwrap().with_interference(w).unwrap();
        let x = real_diag(&[1.0, 1.0]);
        let (g, idx) = c.max_violation(&x).unwrap();
        assert_eq!(idx, ConstraintIndex::Interference(0));
        assert!((g - 3.0).abs() < 1e-15);
        assert_eq!(c.subgradient(idx, 2), identity(2) * re(2.0));
    }

    #[test]
    fn default_start_is_feasible() {
        let c = ConstraintSet::spc_papc(10.0, vec![0.5, 6.0, 6.0]).unwrap();
        let x = c.default_start(3);
        assert!(c.is_feasible(&x, 0.0));
        assert!((x[(0, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_budget_without_spc_sums_antenna_limits() {
        let c = ConstraintSet::new(None, Some(vec![1.0, 2.0]), Vec::new()).unwrap();
        assert_eq!(c.trace_budget(), 3.0);
    }

    #[test]
    fn zero_budget_has_no_interior() {
        let c = ConstraintSet::spc_only(0.0).unwrap();
        assert!(c.strict_interior_point(2).is_none());
    }
}
