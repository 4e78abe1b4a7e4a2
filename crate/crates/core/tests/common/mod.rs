#![allow(dead_code)]

use secrecy_core::linalg::{self, re, CMatrix};
use secrecy_core::{ChannelRng, ConstraintSet, InterferenceConstraint, NoiseCorrelation, WiretapChannel};

pub fn rng(seed: u64) -> ChannelRng {
    ChannelRng::new(seed)
}

pub fn uniform(rng: &mut ChannelRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform()
}

pub fn random_hermitian(rng: &mut ChannelRng, n: usize) -> CMatrix {
    linalg::hermitian_part(&rng.gaussian(n, n))
}

/// Random PSD matrix with trace `tr`, rank `min(n, rank)`.
pub fn random_psd(rng: &mut ChannelRng, n: usize, rank: usize, tr: f64) -> CMatrix {
    let g = rng.gaussian(n, rank.max(1));
    let p = &g * g.adjoint();
    let t = linalg::trace_re(&p);
    linalg::hermitian_part(&(p * re(tr / t)))
}

/// Channel pair; degraded instances stack a scaled copy of Eve on top of Bob's extra rows.
pub fn random_channel(rng: &mut ChannelRng, nt: usize, nr: usize, ne: usize, degraded: bool) -> WiretapChannel {
    let he = rng.gaussian(ne, nt);
    let hb = if degraded {
        let scale = uniform(rng, 1.0, 2.0);
        let extra = rng.gaussian(nr.max(ne) - ne + 1, nt);
        linalg::vstack(&(&he * re(scale)), &extra)
    } else {
        rng.gaussian(nr, nt)
    };
    WiretapChannel::new(hb, he).unwrap()
}

/// SPC with uniform PAPC at 1.2·P₀/N_t, the experiment convention.
pub fn joint_constraints(p0: f64, nt: usize) -> ConstraintSet {
    ConstraintSet::spc_uniform_papc(p0, nt, 1.2).unwrap()
}

pub fn with_random_ipc(rng: &mut ChannelRng, c: ConstraintSet, nt: usize, limit: f64) -> ConstraintSet {
    let h = rng.gaussian(2, nt);
    c.with_interference(InterferenceConstraint::from_channel(&h, limit).unwrap()).unwrap()
}

/// Uniformly scaled random PSD point inside the feasible set.
pub fn random_feasible(rng: &mut ChannelRng, c: &ConstraintSet, nt: usize) -> CMatrix {
    let rank = 1 + (rng.uniform() * nt as f64) as usize;
    let d = random_psd(rng, nt, rank, 1.0);
    let mut s = c.trace_budget();
    if let Some(ps) = c.papc() {
        for (i, p) in ps.iter().enumerate() {
            if d[(i, i)].re > 0.0 {
                s = s.min(p / d[(i, i)].re);
            }
        }
    }
    for ipc in c.ipc() {
        let t = linalg::trace_product(&ipc.w, &d);
        if t > 0.0 {
            s = s.min(ipc.limit / t);
        }
    }
    d * re(s * uniform(rng, 0.05, 1.0))
}

/// Random `K̄` with spectral norm in `[0, 0.95)`.
pub fn random_kbar(rng: &mut ChannelRng, nr: usize, ne: usize) -> NoiseCorrelation {
    let g = rng.gaussian(nr, ne);
    let smax = linalg::eigh(&(&g * g.adjoint())).max().sqrt();
    NoiseCorrelation::new(g * re(uniform(rng, 0.0, 0.95) / smax)).unwrap()
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}

/// `τ` with `Σ max(vᵢ − τ, 0) = budget` by plain bisection; `None` if no shift is needed.
pub fn bisect_tau(v: &[f64], budget: f64) -> Option<f64> {
    let mass = |t: f64| v.iter().map(|x| (x - t).max(0.0)).sum::<f64>();
    if mass(0.0) <= budget {
        return None;
    }
    let (mut lo, mut hi) = (0.0, v.iter().copied().fold(0.0, f64::max));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Random point of `{t ≥ 0, Σt ≤ budget}`, sometimes on a face.
pub fn sample_simplex(rng: &mut ChannelRng, n: usize, budget: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| -rng.uniform().max(1e-300).ln()).collect();
    if rng.uniform() < 0.3 {
        w[(rng.uniform() * n as f64) as usize % n] = 0.0;
    }
    let s: f64 = w.iter().sum::<f64>().max(1e-300);
    let r = if rng.uniform() < 0.5 { 1.0 } else { rng.uniform() };
    w.iter().map(|x| x / s * budget * r).collect()
}

/// Random point of `{X ⪰ 0, tr X ≤ budget}`.
pub fn sample_spectrahedron(rng: &mut ChannelRng, n: usize, budget: f64) -> CMatrix {
    let rank = 1 + (rng.uniform() * n as f64) as usize % n;
    let r = if rng.uniform() < 0.5 { 1.0 } else { rng.uniform() };
    random_psd(rng, n, rank, budget * r)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Central-difference gradient of `f` at Hermitian `x`, expanded in the Hermitian basis.
pub fn fd_gradient<F: Fn(&CMatrix) -> f64>(f: F, x: &CMatrix, h: f64) -> CMatrix {
    let n = x.nrows();
    let mut g = linalg::zeros(n, n);
    for b in linalg::hermitian_basis(n) {
        let d = (f(&(x + &b * re(h))) - f(&(x - &b * re(h)))) / (2.0 * h);
        g += b * re(d);
    }
    g
}

/// `‖a − b‖_F / ‖b‖_F`.
pub fn rel_err(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::frob(&(a - b)) / linalg::frob(b).max(1e-300)
}

/// [`random_psd`] with a trace drawn uniformly from `[lo, hi)`.
pub fn random_psd_in(rng: &mut ChannelRng, n: usize, rank: usize, lo: f64, hi: f64) -> CMatrix {
    let tr = uniform(rng, lo, hi);
    random_psd(rng, n, rank, tr)
}
