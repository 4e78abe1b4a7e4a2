//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use secrecy_core::experiments::{db_to_linear, run_inner_comparison, PowerProfile};
use secrecy_core::linalg::{self, from_real_rows, re, CMatrix};
use secrecy_core::pbra::k_objective;
use secrecy_core::projections::simplex_threshold;
use secrecy_core::{
    adca_run, f_b, f_e, fixtures, grad_fb, grad_fe, grad_saddle_x, k_update, kkt_residual, lmi_feasible, matrix_f,
    pbra_run, project_simplex, project_spectrahedron, saddle_objective, secrecy_rate, secrecy_rate_unclamped,
    AdcaConfig, ConstraintSet, LinearizedObjective, NoiseCorrelation, PbraConfig, WiretapChannel,
};

/// Failure message for one criterion.
struct Fail(String);

impl From<secrecy_core::Error> for Fail {
    fn from(e: secrecy_core::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<String> for Fail {
    fn from(s: String) -> Self {
        Self(s)
    }
}

impl From<&str> for Fail {
    fn from(s: &str) -> Self {
        Self(s.to_string())
    }
}

type Outcome = Result<String, Fail>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), Fail> {
    if ok {
        Ok(())
    } else {
        Err(Fail(msg.into()))
    }
}

fn nondegraded_regression() -> Outcome {
    let ch = fixtures::nondegraded_2x2();
    let c = ConstraintSet::spc_papc(10.0, vec![6.0, 6.0])?;
    let start = Instant::now();
    let res = pbra_run(&ch, &c, &PbraConfig::default())?;
    let elapsed = start.elapsed().as_secs_f64();
    let expected = from_real_rows(2, 2, &[1.7305, 1.2198, 1.2198, 5.9985]);
    let x = res.x.matrix();
    let entry_err = x.iter().zip(expected.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let cs_x = secrecy_rate(&ch, x)?;
    let detail = format!("value {:.6}, max entry error {entry_err:.2e}, C_s(X) {cs_x:.6}, {elapsed:.3} s", res.value);
    check((res.value - 1.0420).abs() <= 1e-3, format!("saddle value off: {detail}"))?;
    check(entry_err <= 1e-2, format!("X off: {detail}"))?;
    check((cs_x - 0.3409).abs() <= 1e-3, format!("rate at X off: {detail}"))?;
    check(elapsed < 10.0, format!("too slow: {detail}"))?;
    Ok(detail)
}

fn cross_algorithm_agreement() -> Outcome {
    let ch = fixtures::complex_4x2_3x2();
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    for db in [5.0, 10.0] {
        let c = PowerProfile::default().constraints(&ch, db_to_linear(db))?;
        let a = adca_run(&ch, &c, &AdcaConfig::default())?;
        let p = pbra_run(&ch, &c, &PbraConfig::default())?;
        worst = worst.max((a.rate - p.value).abs());
        parts.push(format!("{db} dB: ADCA {:.6} PBRA {:.6}", a.rate, p.value));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let detail = format!("{}; {elapsed:.2} s", parts.join(", "));
    check(worst <= 5e-3, format!("gap {worst:.2e}: {detail}"))?;
    check(elapsed < 60.0, format!("too slow: {detail}"))?;
    Ok(detail)
}

/// Twenty seeded channels, alternating degraded and nondegraded, some with an interference limit.
fn random_instance(seed: u64) -> (WiretapChannel, ConstraintSet) {
    let mut r = rng(seed);
    let nt = 2 + (seed % 3) as usize;
    let ch = random_channel(&mut r, nt, 2 + (seed % 2) as usize, 1 + (seed % 3) as usize, seed.is_multiple_of(2));
    let p0 = uniform(&mut r, 1.0, 30.0);
    let mut c = joint_constraints(p0, nt);
    if seed % 5 == 4 {
        c = with_random_ipc(&mut r, c, nt, 0.5 * p0);
    }
    (ch, c)
}

fn monitor_property() -> Outcome {
    let q = AdcaConfig::default().q;
    let mut outer = 0;
    let mut worst_ascent: f64 = 0.0;
    for seed in 0..20 {
        let (ch, c) = random_instance(100 + seed);
        let res = adca_run(&ch, &c, &AdcaConfig::default())?;
        let g = res.trace.extra_series("gamma");
        for n in 1..g.len() {
            if n + q < g.len() {
                check(
                    g[n + q] >= g[n - 1],
                    format!("seed {seed}: γ_{} = {} < γ_{} = {}", n + q, g[n + q], n - 1, g[n - 1]),
                )?;
            }
        }
        for (xn, vn) in res.iterate_rates.iter().zip(&res.anchor_rates) {
            worst_ascent = worst_ascent.max(vn - xn);
            check(*xn >= vn - 1e-6, format!("seed {seed}: C_s(X_n) {xn} < C_s(V_n-1) {vn}"))?;
        }
        outer += g.len() - 1;
    }
    Ok(format!("20 channels, {outer} outer iterations, worst ascent shortfall {worst_ascent:.1e}"))
}

fn descent_and_saddle() -> Outcome {
    let mut instances: Vec<(String, WiretapChannel, ConstraintSet)> =
        vec![("nondegraded 2x2".into(), fixtures::nondegraded_2x2(), ConstraintSet::spc_papc(10.0, vec![6.0, 6.0])?)];
    let ch = fixtures::complex_4x2_3x2();
    for db in [5.0, 10.0] {
        let c = PowerProfile::default().constraints(&ch, db_to_linear(db))?;
        instances.push((format!("complex 4x2/3x2 at {db} dB"), ch.clone(), c));
    }
    for seed in 0..10 {
        let (ch, c) = random_instance(200 + seed);
        instances.push((format!("seed {seed}"), ch, c));
    }
    let mut worst_rise: f64 = 0.0;
    let mut worst_x: f64 = f64::NEG_INFINITY;
    let mut worst_k: f64 = f64::NEG_INFINITY;
    let mut r = rng(4242);
    for (name, ch, c) in &instances {
        let res = pbra_run(ch, c, &PbraConfig::default())?;
        let f = res.trace.objectives();
        for w in f.windows(2) {
            worst_rise = worst_rise.max(w[1] - w[0]);
        }
        check(worst_rise <= 1e-6, format!("{name}: trace rises by {worst_rise:.2e}"))?;
        check(f.iter().all(|v| *v >= 0.0), format!("{name}: negative value"))?;
        let lmin = res.trace.extra_series("lambda_min_K");
        check(lmin.iter().all(|l| *l > 0.0) && res.kbar.lambda_min() > 0.0, format!("{name}: K lost definiteness"))?;

        let (xs, ks) = (res.x.matrix(), &res.kbar);
        let v = saddle_objective(ch, ks, xs)?;
        for _ in 0..100 {
            let y = random_feasible(&mut r, c, ch.nt());
            let t = r.uniform();
            let x = xs * re(1.0 - t) + y * re(t);
            worst_x = worst_x.max(saddle_objective(ch, ks, &x)? - v);
        }
        for _ in 0..100 {
            let k = random_kbar(&mut r, ch.nr(), ch.ne());
            let t = r.uniform();
            let mix = NoiseCorrelation::new(ks.kbar() * re(1.0 - t) + k.kbar() * re(t))?;
            worst_k = worst_k.max(v - saddle_objective(ch, &mix, xs)?);
        }
        check(worst_x <= 1e-4, format!("{name}: a feasible X beats X* by {worst_x:.2e}"))?;
        check(worst_k <= 1e-4, format!("{name}: a valid K beats K* by {worst_k:.2e}"))?;
    }
    Ok(format!(
        "{} instances, worst trace rise {worst_rise:.1e}, worst X excess {worst_x:.1e}, worst K deficit {worst_k:.1e}",
        instances.len()
    ))
}

fn closed_form_noise_update() -> Outcome {
    let mut r = rng(5005);
    let mut worst_kkt: f64 = 0.0;
    let mut worst_gap = f64::INFINITY;
    for case in 0..1000 {
        let nr = 1 + (r.uniform() * 8.0) as usize;
        let ne = 1 + (r.uniform() * 8.0) as usize;
        let a = r.gaussian(nr + ne, nr + ne);
        let psi = &a * a.adjoint() + linalg::identity(nr + ne) * re(uniform(&mut r, 1e-3, 1.0));
        let psi12 = psi.view((0, nr), (nr, ne)).into_owned();
        let k = k_update(&psi12);
        let kkt = kkt_residual(&psi12, &k)?;
        worst_kkt = worst_kkt.max(kkt);
        check(kkt <= 1e-8, format!("case {case} ({nr}x{ne}): KKT residual {kkt:.2e}"))?;
        let best = k_objective(&psi, &k)?;
        for s in 0..1000 {
            let other = random_kbar(&mut r, nr, ne);
            // Half the samples sit close to the closed form to probe its neighbourhood.
            let cand = if s % 2 == 0 {
                other
            } else {
                let t = uniform(&mut r, 0.0, 0.05);
                NoiseCorrelation::new(k.kbar() * re(1.0 - t) + other.kbar() * re(t))?
            };
            let gap = k_objective(&psi, &cand)? - best;
            worst_gap = worst_gap.min(gap);
            check(gap >= 0.0, format!("case {case}: sample beats closed form by {:.2e}", -gap))?;
        }
    }
    Ok(format!("1000 instances, worst KKT residual {worst_kkt:.1e}, smallest sample excess {worst_gap:.1e}"))
}

fn degraded_identities() -> Outcome {
    let mut r = rng(6006);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let nt = 1 + (r.uniform() * 4.0) as usize;
        let ne = 1 + (r.uniform() * 3.0) as usize;
        let ch = random_channel(&mut r, nt, 2, ne, true);
        let c = joint_constraints(uniform(&mut r, 0.5, 30.0), nt);
        let x = random_feasible(&mut r, &c, nt);
        let f = matrix_f(&ch, &x)?;
        let lnf = linalg::logdet_hpd(&f)?;
        let cs = secrecy_rate_unclamped(&ch, &x)?;
        worst = worst.max((lnf - cs).abs());
        check((lnf - cs).abs() <= 1e-8, format!("case {case}: ln|F| {lnf} vs C_s {cs}"))?;
        check(lmi_feasible(&ch, &x, &f)?, format!("case {case}: LMI rejects Y = F(X)"))?;
        let bumped = &f + linalg::identity(nt) * re(0.1);
        check(!lmi_feasible(&ch, &x, &bumped)?, format!("case {case}: LMI accepts F(X) + 0.1I"))?;
    }
    Ok(format!("100 degraded instances, worst |ln|F(X)| - C_s(X)| {worst:.1e}"))
}

fn projection_oracles() -> Outcome {
    let mut r = rng(7007);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut worst_tau: f64 = 0.0;
    for case in 0..1000 {
        let n = 1 + (r.uniform() * 16.0) as usize;
        let p = uniform(&mut r, 0.0, 10.0);
        let v: Vec<f64> = (0..n).map(|_| uniform(&mut r, -5.0, 5.0)).collect();
        let clamped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
        match (simplex_threshold(&v, p), bisect_tau(&clamped, p)) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                worst_tau = worst_tau.max((a - b).abs());
                check((a - b).abs() <= 1e-9 * (1.0 + b), format!("case {case}: τ {a} vs bisection {b}"))?;
            }
            (a, b) => return Err(format!("case {case}: τ {a:?} vs bisection {b:?}").into()),
        }
        let t = project_simplex(&v, p)?;
        let d = dist(&v, &t);
        for s in 0..1000 {
            let mut q = sample_simplex(&mut r, n, p);
            if s % 2 == 1 {
                let w = uniform(&mut r, 0.0, 0.01);
                q = t.iter().zip(&q).map(|(a, b)| (1.0 - w) * a + w * b).collect();
            }
            worst = worst.max(d - dist(&v, &q));
        }
        check(worst <= 1e-10, format!("simplex case {case}: sampled point closer by {worst:.2e}"))?;
    }
    for case in 0..1000 {
        let n = 1 + (r.uniform() * 5.0) as usize;
        let p = uniform(&mut r, 0.0, 10.0);
        let xbar = random_hermitian(&mut r, n) * re(uniform(&mut r, 0.1, 4.0));
        let x = project_spectrahedron(&xbar, p)?;
        let eig = linalg::eigh(&xbar).values;
        let expected: Vec<f64> = match bisect_tau(&eig.iter().map(|e| e.max(0.0)).collect::<Vec<_>>(), p) {
            None => eig.iter().map(|e| e.max(0.0)).collect(),
            Some(tau) => eig.iter().map(|e| (e - tau).max(0.0)).collect(),
        };
        let mut got = linalg::eigh(x.matrix()).values;
        let mut want = expected.clone();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        let spec_err = dist(&got, &want);
        check(spec_err <= 1e-9 * p.max(1.0), format!("spectrahedron case {case}: eigenvalues off by {spec_err:.2e}"))?;
        let d = linalg::frob(&(&xbar - x.matrix()));
        for s in 0..1000 {
            let mut q = sample_spectrahedron(&mut r, n, p);
            if s % 2 == 1 {
                let w = uniform(&mut r, 0.0, 0.01);
                q = x.matrix() * re(1.0 - w) + q * re(w);
            }
            worst = worst.max(d - linalg::frob(&(&xbar - q)));
        }
        check(worst <= 1e-10, format!("spectrahedron case {case}: sampled point closer by {worst:.2e}"))?;
    }
    Ok(format!("2000 instances x 1000 samples, worst excess {worst:.1e}, worst τ error {worst_tau:.1e}"))
}

fn inner_solver_comparison() -> Outcome {
    let ch = fixtures::complex_4x2_3x2();
    let mut parts = Vec::new();
    let mut ok = true;
    for db in [5.0, 10.0] {
        let cmp = run_inner_comparison(&ch, &PowerProfile::default(), db, 500, None)?;
        let a = *cmp.comirror.last().ok_or("empty CoMirror trace")?;
        let b = *cmp.subgradient.last().ok_or("empty subgradient trace")?;
        ok &= a >= b;
        parts.push(format!("{db} dB: CoMirror {a:.6} vs subgradient {b:.6} (step {:.3e})", cmp.step));
    }
    let detail = parts.join(", ");
    check(ok, detail.clone())?;
    Ok(detail)
}

fn gradient_checks() -> Outcome {
    let mut r = rng(9009);
    let mut worst: f64 = 0.0;
    for case in 0..40 {
        let nt = 3 + case % 2;
        let nr = 1 + (r.uniform() * 4.0) as usize;
        let ne = 1 + (r.uniform() * 4.0) as usize;
        let ch = random_channel(&mut r, nt, nr, ne, case % 3 == 0);
        let x = random_psd_in(&mut r, nt, nt, 0.5, 5.0) + linalg::identity(nt) * re(0.05);
        let kbar = random_kbar(&mut r, ch.nr(), ch.ne());
        let anchor = random_psd_in(&mut r, nt, nt, 0.5, 5.0);
        let gamma = grad_fe(&ch, &anchor)?;
        let adca = LinearizedObjective::adca(ch.hb().clone(), gamma)?;
        let pbra = LinearizedObjective::pbra(ch.stacked(), ch.he().clone())?;
        let pairs: Vec<(&str, CMatrix, CMatrix)> = vec![
            ("f_b", grad_fb(&ch, &x).unwrap(), fd_gradient(|y| f_b(&ch, y).unwrap(), &x, 1e-5)),
            ("f_e", grad_fe(&ch, &x).unwrap(), fd_gradient(|y| f_e(&ch, y).unwrap(), &x, 1e-5)),
            (
                "saddle",
                grad_saddle_x(&ch, &kbar, &x).unwrap(),
                fd_gradient(|y| saddle_objective(&ch, &kbar, y).unwrap(), &x, 1e-5),
            ),
            ("surrogate", adca.value_and_gradient(&x).unwrap().1, fd_gradient(|y| adca.value(y).unwrap(), &x, 1e-5)),
            ("exact", pbra.value_and_gradient(&x).unwrap().1, fd_gradient(|y| pbra.value(y).unwrap(), &x, 1e-5)),
        ];
        for (name, analytic, fd) in pairs {
            let e = rel_err(&fd, &analytic);
            worst = worst.max(e);
            check(e <= 1e-5, format!("case {case} ({nt}x{nt}) {name}: relative error {e:.2e}"))?;
        }
    }
    Ok(format!("40 instances (3x3 and 4x4), 5 gradients each, worst relative error {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("nondegraded 2x2 regression", nondegraded_regression),
        ("cross-algorithm agreement", cross_algorithm_agreement),
        ("non-monotone monitor property", monitor_property),
        ("PBRA descent and saddle inequalities", descent_and_saddle),
        ("closed-form noise update", closed_form_noise_update),
        ("degraded reformulation identities", degraded_identities),
        ("projection oracles", projection_oracles),
        ("CoMirror vs constant-step subgradient", inner_solver_comparison),
        ("gradient checks", gradient_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(Fail(format!("panicked: {}", msg.unwrap_or_default())))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS [{secs:.2} s] {detail}", i + 1),
            Err(Fail(detail)) => {
                failed += 1;
                println!("criterion {} {name}: FAIL [{secs:.2} s] {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
