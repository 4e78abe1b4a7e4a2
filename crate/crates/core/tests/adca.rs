mod common;

use common::*;
use secrecy_core::adca::momentum;
use secrecy_core::linalg::re;
use secrecy_core::{adca_run, secrecy_rate_unclamped, AdcaConfig, AdcaResult, ConstraintSet, WiretapChannel};

/// `γ_{n+q} ≥ γ_{n−1}` for every `n` whose window fits in the trace.
fn monitor_holds(res: &AdcaResult, q: usize) -> bool {
    let g = res.trace.extra_series("gamma");
    (1..g.len()).all(|n| n + q >= g.len() || g[n + q] >= g[n - 1])
}

fn instance(seed: u64) -> (WiretapChannel, ConstraintSet) {
    let mut r = rng(seed);
    let nt = 2 + (seed % 3) as usize;
    let ch = random_channel(&mut r, nt, 2 + (seed % 2) as usize, 1 + (seed % 3) as usize, seed.is_multiple_of(2));
    let p0 = uniform(&mut r, 1.0, 30.0);
    let mut c = joint_constraints(p0, nt);
    if seed % 4 == 1 {
        c = with_random_ipc(&mut r, c, nt, 0.5 * p0);
    }
    (ch, c)
}

#[test]
fn monitor_and_surrogate_ascent_hold() {
    for seed in 0..8 {
        let (ch, c) = instance(seed);
        for q in [1, 5] {
            let res = adca_run(&ch, &c, &AdcaConfig { q, ..AdcaConfig::default() }).unwrap();
            assert!(monitor_holds(&res, q), "seed {seed}, q {q}");
            for (xn, vn) in res.iterate_rates.iter().zip(&res.anchor_rates) {
                assert!(*xn >= vn - 1e-6);
            }
        }
    }
}

#[test]
fn result_is_feasible_and_matches_trace() {
    for seed in 10..14 {
        let (ch, c) = instance(seed);
        let res = adca_run(&ch, &c, &AdcaConfig::default()).unwrap();
        assert!(c.violation(res.x.matrix()) <= c.feasibility_tol());
        assert!((secrecy_rate_unclamped(&ch, res.x.matrix()).unwrap().max(0.0) - res.rate).abs() < 1e-12);
        let best = res.trace.objectives().into_iter().fold(0.0, f64::max);
        assert!((best - res.rate).abs() < 1e-12);
    }
}

#[test]
fn converged_point_is_stationary() {
    for seed in 20..24 {
        let (ch, c) = instance(seed);
        let nt = ch.nt();
        let res = adca_run(&ch, &c, &AdcaConfig::default()).unwrap();
        let x = res.x.matrix();
        let base = secrecy_rate_unclamped(&ch, x).unwrap();
        let mut r = rng(1000 + seed);
        for _ in 0..50 {
            let y = random_feasible(&mut r, &c, nt);
            let z = x + (y - x) * re(1e-3);
            assert!(secrecy_rate_unclamped(&ch, &z).unwrap() <= base + 1e-4);
        }
    }
}

#[test]
fn momentum_stays_in_unit_interval() {
    let mut t = 0.5 * (1.0 + 5f64.sqrt());
    for _ in 0..10_000 {
        let (beta, next) = momentum(t);
        assert!((0.0..1.0).contains(&beta));
        t = next;
    }
}

#[test]
fn plain_variant_never_extrapolates() {
    let (ch, c) = instance(3);
    let res = adca_run(&ch, &c, &AdcaConfig::plain()).unwrap();
    assert!(res.trace.extra_series("accepted_extrapolation").iter().all(|a| *a == 0.0));
    assert!(res.iterate_rates.windows(2).all(|w| w[1] >= w[0] - 1e-6));
}
