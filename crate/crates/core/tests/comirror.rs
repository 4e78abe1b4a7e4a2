mod common;

use common::*;
use secrecy_core::linalg::{self, from_real_rows, zeros, CMatrix};
use secrecy_core::{solve_subproblem, CoMirrorConfig, ConstraintSet, LinearizedObjective};

/// Capacity `max ln|I + H X Hᴴ|` over `tr X ≤ P₀` by water-filling on the eigenvalues of `HᴴH`.
fn water_filling(h: &CMatrix, p0: f64) -> f64 {
    let gains: Vec<f64> = linalg::eigh(&(h.adjoint() * h)).values.into_iter().filter(|g| *g > 1e-12).collect();
    let used = |mu: f64| gains.iter().map(|g| (mu - 1.0 / g).max(0.0)).sum::<f64>();
    let (mut lo, mut hi) = (0.0, p0 + gains.iter().map(|g| 1.0 / g).fold(0.0, f64::max));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if used(mid) < p0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    gains.iter().map(|g| (1.0 + g * (lo - 1.0 / g).max(0.0)).ln()).sum()
}

#[test]
fn spc_only_matches_water_filling() {
    let mut r = rng(41);
    for case in 0..30 {
        let nt = 1 + case % 4;
        let h = r.gaussian(1 + case % 3, nt);
        let p0 = uniform(&mut r, 0.1, 20.0);
        let obj = LinearizedObjective::adca(h.clone(), zeros(nt, nt)).unwrap();
        let c = ConstraintSet::spc_only(p0).unwrap();
        let (x, _) = solve_subproblem(&obj, &c, &CoMirrorConfig::default()).unwrap();
        let v = obj.value(x.matrix()).unwrap();
        let oracle = water_filling(&h, p0);
        assert!((v - oracle).abs() <= 1e-3, "case {case}: {v} vs {oracle}");
    }
}

#[test]
fn siso_with_linear_penalty_uses_full_budget() {
    let obj = LinearizedObjective::adca(from_real_rows(1, 1, &[2.0]), from_real_rows(1, 1, &[0.2])).unwrap();
    let c = ConstraintSet::spc_only(1.0).unwrap();
    let (x, _) = solve_subproblem(&obj, &c, &CoMirrorConfig::default()).unwrap();
    // Grid oracle: ln(1 + 4x) − 0.2x is increasing on [0, 1].
    let grid = (0..=10_000).map(|i| i as f64 * 1e-4).max_by(|a, b| {
        let f = |x: f64| (1.0 + 4.0 * x).ln() - 0.2 * x;
        f(*a).total_cmp(&f(*b))
    });
    assert!((x.matrix()[(0, 0)].re - grid.unwrap()).abs() <= 1e-4);
}

#[test]
fn zero_antenna_limits_force_silence() {
    let mut r = rng(42);
    let obj = LinearizedObjective::adca(r.gaussian(2, 3), zeros(3, 3)).unwrap();
    let c = ConstraintSet::spc_papc(5.0, vec![0.0; 3]).unwrap();
    let (x, _) = solve_subproblem(&obj, &c, &CoMirrorConfig::default()).unwrap();
    assert!(linalg::frob(x.matrix()) <= c.feasibility_tol() * 3.0);
    assert!(obj.value(x.matrix()).unwrap().abs() <= 1e-5);
}

#[test]
fn returned_points_are_feasible_and_best_is_monotone() {
    let mut r = rng(43);
    for case in 0..20 {
        let nt = 2 + case % 3;
        let ch = random_channel(&mut r, nt, 2, 2, case % 2 == 0);
        let p0 = uniform(&mut r, 1.0, 20.0);
        let mut c = joint_constraints(p0, nt);
        if case % 3 == 0 {
            c = with_random_ipc(&mut r, c, nt, 0.3 * p0);
        }
        let anchor = c.default_start(nt);
        let obj = LinearizedObjective::adca(ch.hb().clone(), secrecy_core::grad_fe(&ch, &anchor).unwrap()).unwrap();
        let (x, trace) = solve_subproblem(&obj, &c, &CoMirrorConfig::default().fixed_iterations(400)).unwrap();
        assert!(x.trace() <= p0 * (1.0 + 1e-12));
        assert!(c.violation(x.matrix()) <= c.feasibility_tol());
        let best = secrecy_core::experiments::best_so_far(&trace, c.feasibility_tol());
        assert!(best.windows(2).all(|w| w[1] >= w[0]));
        assert!(obj.value(x.matrix()).unwrap() >= *best.last().unwrap() - 1e-12);
    }
}
