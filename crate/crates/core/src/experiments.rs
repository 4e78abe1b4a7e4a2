//! Reproduction harness: convergence traces, inner-solver comparison,
//! correlation and antenna sweeps, and a timing table.
//!
//! Everything random flows from an explicit seed; trial `i` of a sweep draws
//! from ChaCha stream `i`, so results do not depend on thread scheduling.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::adca::{adca_lower_bound_unclamped, adca_run, AdcaConfig};
use crate::comirror::{self, omega_bound, CoMirrorConfig, LinearizedObjective, StepRule};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::generator::kronecker_channel_with;
use crate::model::{
    corr_distance, exponential_correlation, grad_fe, ChannelRng, ConstraintSet, CovarianceCandidate,
    InterferenceConstraint, WiretapChannel,
};
use crate::pbra::{pbra_run, PbraConfig};
use crate::trace::SolverTrace;
use crate::zf::zf_rate;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Adca,
    /// ADCA without extrapolation (`q = 0`), i.e. plain alternating optimization.
    Ao,
    Pbra,
    Zf,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Adca => "adca",
            Self::Ao => "ao",
            Self::Pbra => "pbra",
            Self::Zf => "zf",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "adca" => Ok(Self::Adca),
            "ao" => Ok(Self::Ao),
            "pbra" => Ok(Self::Pbra),
            "zf" => Ok(Self::Zf),
            other => Err(Error::InvalidParameter(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// How the constraint set scales with the sum-power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerProfile {
    /// Per-antenna limits `factor · P₀ / N_t`, or none.
    pub papc_factor: Option<f64>,
    /// Interference limit applied to every primary receiver of the channel.
    pub ipc_limit: Option<f64>,
}

impl Default for PowerProfile {
    fn default() -> Self {
        Self { papc_factor: Some(1.2), ipc_limit: None }
    }
}

impl PowerProfile {
    pub fn constraints(&self, ch: &WiretapChannel, p0: f64) -> Result<ConstraintSet> {
        let nt = ch.nt();
        let mut c = match self.papc_factor {
            Some(f) => ConstraintSet::spc_uniform_papc(p0, nt, f)?,
            None => ConstraintSet::spc_only(p0)?,
        };
        if !ch.primaries().is_empty() {
            let limit = self.ipc_limit.ok_or_else(|| {
                Error::InvalidParameter("channel has primary receivers but no interference limit".into())
            })?;
            for h in ch.primaries() {
                c = c.with_interference(InterferenceConstraint::from_channel(h, limit)?)?;
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone)]
pub struct AlgoRun {
    pub algo: Algorithm,
    pub snr_db: f64,
    pub p0: f64,
    /// Per-iteration value: `C_s(X_n)` for the ascent methods, `f(K_n, X_n)` for PBRA.
    pub trace: SolverTrace,
    /// Best rate for the ascent methods, final saddle value for PBRA.
    pub terminal: f64,
    pub elapsed: Duration,
}

pub fn run_algorithm(ch: &WiretapChannel, constraints: &ConstraintSet, algo: Algorithm) -> Result<(f64, SolverTrace)> {
    match algo {
        Algorithm::Adca => adca_run(ch, constraints, &AdcaConfig::default()).map(|r| (r.rate, r.trace)),
        Algorithm::Ao => adca_run(ch, constraints, &AdcaConfig::plain()).map(|r| (r.rate, r.trace)),
        Algorithm::Pbra => pbra_run(ch, constraints, &PbraConfig::default()).map(|r| (r.value, r.trace)),
        Algorithm::Zf => zf_rate(ch, constraints, &CoMirrorConfig::default()).map(|r| (r.rate, r.trace)),
    }
}

/// Runs each algorithm at each SNR (in dB, `P₀ = 10^{SNR/10}`).
pub fn run_convergence_experiment(
    ch: &WiretapChannel,
    profile: &PowerProfile,
    snr_db: &[f64],
    algos: &[Algorithm],
) -> Result<Vec<AlgoRun>> {
    let mut out = Vec::new();
    for &snr in snr_db {
        let p0 = db_to_linear(snr);
        let constraints = profile.constraints(ch, p0)?;
        for &algo in algos {
            let start = Instant::now();
            let (terminal, trace) = run_algorithm(ch, &constraints, algo)?;
            out.push(AlgoRun { algo, snr_db: snr, p0, trace, terminal, elapsed: start.elapsed() });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub snr_db: f64,
    pub algo: Algorithm,
    pub iter: usize,
    pub value: f64,
}

pub fn convergence_rows(runs: &[AlgoRun]) -> Vec<ConvergenceRow> {
    runs.iter()
        .flat_map(|r| {
            r.trace.iterations.iter().map(move |rec| ConvergenceRow {
                snr_db: r.snr_db,
                algo: r.algo,
                iter: rec.index,
                value: rec.objective,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingRow {
    pub algo: Algorithm,
    pub snr_db: f64,
    pub iterations: usize,
    pub wall_ms: f64,
    pub value: f64,
}

pub fn timing_rows(runs: &[AlgoRun]) -> Vec<TimingRow> {
    runs.iter()
        .map(|r| TimingRow {
            algo: r.algo,
            snr_db: r.snr_db,
            iterations: r.trace.elapsed_iterations,
            wall_ms: r.elapsed.as_secs_f64() * 1e3,
            value: r.terminal,
        })
        .collect()
}

/// Projected subgradient ascent with a constant step on the same subproblem.
pub fn subgradient_baseline(
    objective: &LinearizedObjective,
    constraints: &ConstraintSet,
    x0: Option<CovarianceCandidate>,
    step: f64,
    iters: usize,
) -> Result<SolverTrace> {
    if !(step >= 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step {step} must be >= 0")));
    }
    let x0 = x0.unwrap_or_else(|| CovarianceCandidate::from_trusted(constraints.default_start(objective.nt())));
    let cfg = CoMirrorConfig::default().fixed_iterations(iters);
    comirror::run(objective, constraints, x0, &cfg, StepRule::Constant(step)).map(|(_, t)| t)
}

/// `0.1 · Ω / ‖E₀‖_F` for the first direction at `x0`.
pub fn default_subgradient_step(
    objective: &LinearizedObjective,
    constraints: &ConstraintSet,
    x0: &CMatrix,
) -> Result<f64> {
    let omega = omega_bound(x0, constraints.trace_budget());
    let (_, grad) = objective.value_and_gradient(x0)?;
    let e = match constraints.max_violation(x0) {
        Some((g, idx)) if g > 0.0 => constraints.subgradient(idx, x0.nrows()),
        _ => grad,
    };
    let n = linalg::frob(&e);
    if n == 0.0 {
        return Err(Error::ZeroNorm("initial step direction"));
    }
    Ok(0.1 * omega / n)
}

/// Running best of the recorded objective over feasible iterates.
pub fn best_so_far(trace: &SolverTrace, feasibility_tol: f64) -> Vec<f64> {
    let mut best = f64::NEG_INFINITY;
    trace
        .iterations
        .iter()
        .map(|r| {
            if r.feasibility_violation <= feasibility_tol {
                best = best.max(r.objective);
            }
            best
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct InnerComparison {
    pub snr_db: f64,
    pub step: f64,
    /// Best secrecy-rate lower bound after each iteration, clamped at zero.
    pub comirror: Vec<f64>,
    pub subgradient: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InnerComparisonRow {
    pub snr_db: f64,
    pub iter: usize,
    pub comirror: f64,
    pub subgradient: f64,
}

impl InnerComparison {
    pub fn rows(&self) -> Vec<InnerComparisonRow> {
        self.comirror
            .iter()
            .zip(&self.subgradient)
            .enumerate()
            .map(|(i, (c, s))| InnerComparisonRow { snr_db: self.snr_db, iter: i + 1, comirror: *c, subgradient: *s })
            .collect()
    }
}

/// First ADCA subproblem (linearized at the default start) solved by both inner methods.
pub fn run_inner_comparison(
    ch: &WiretapChannel,
    profile: &PowerProfile,
    snr_db: f64,
    iters: usize,
    step: Option<f64>,
) -> Result<InnerComparison> {
    let constraints = profile.constraints(ch, db_to_linear(snr_db))?;
    let v0 = constraints.default_start(ch.nt());
    let objective = LinearizedObjective::adca(ch.hb().clone(), grad_fe(ch, &v0)?)?;
    // Lower bound = surrogate value + a constant depending only on V₀.
    let offset = adca_lower_bound_unclamped(ch, &v0, &linalg::zeros(ch.nt(), ch.nt()))?
        - objective.value(&linalg::zeros(ch.nt(), ch.nt()))?;
    let eps = constraints.feasibility_tol();
    let x0 = CovarianceCandidate::from_trusted(v0.clone());

    let cfg = CoMirrorConfig::default().fixed_iterations(iters).with_x0(x0.clone());
    let (_, trace) = comirror::solve_subproblem(&objective, &constraints, &cfg)?;
    let step = match step {
        Some(s) => s,
        None => default_subgradient_step(&objective, &constraints, &v0)?,
    };
    let base = subgradient_baseline(&objective, &constraints, Some(x0), step, iters)?;
    let lift = |v: Vec<f64>| v.into_iter().map(|b| (b + offset).max(0.0)).collect();
    Ok(InnerComparison {
        snr_db,
        step,
        comirror: lift(best_so_far(&trace, eps)),
        subgradient: lift(best_so_far(&base, eps)),
    })
}

/// A primary receiver whose interference must stay below `limit_db`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpcScenario {
    pub np: usize,
    pub phi_p: f64,
    pub limit_db: f64,
}

impl Default for IpcScenario {
    fn default() -> Self {
        Self { np: 4, phi_p: std::f64::consts::FRAC_PI_4, limit_db: 5.0 }
    }
}

/// Channel ensemble shared by the sweeps.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub nr: usize,
    pub r: f64,
    pub phi_b: f64,
    pub phi_e: f64,
    /// Eve's (and the primary receiver's) gain relative to Bob.
    pub gamma: f64,
    pub seed: u64,
}

impl Ensemble {
    /// Draws trial `trial`: Bob, then Eve, then the primary receiver if any.
    pub fn draw(&self, trial: u64, nt: usize, ne: usize, ipc: Option<&IpcScenario>) -> Result<WiretapChannel> {
        let mut rng = ChannelRng::for_stream(self.seed, trial);
        let hb = kronecker_channel_with(&mut rng, self.nr, nt, self.r, self.phi_b, 1.0)?;
        let he = kronecker_channel_with(&mut rng, ne, nt, self.r, self.phi_e, self.gamma)?;
        let primaries = match ipc {
            Some(s) => vec![kronecker_channel_with(&mut rng, s.np, nt, self.r, s.phi_p, self.gamma)?],
            None => Vec::new(),
        };
        WiretapChannel::with_primaries(hb, he, primaries)
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub ensemble: Ensemble,
    pub nt_list: Vec<usize>,
    pub ne_list: Vec<usize>,
    pub snr_db: f64,
    pub trials: usize,
    /// Also solve every draw with this interference constraint added.
    pub ipc: Option<IpcScenario>,
    pub pbra: PbraConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub nt: usize,
    pub ne: usize,
    pub trials: usize,
    pub mean_cs: f64,
    pub std_cs: f64,
    pub mean_cs_ipc: Option<f64>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Mean PBRA capacity over random Kronecker channels for each `(N_t, N_e)`.
pub fn run_papc_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let p0 = db_to_linear(cfg.snr_db);
    let plain = PowerProfile::default();
    let mut rows = Vec::new();
    for &nt in &cfg.nt_list {
        for &ne in &cfg.ne_list {
            let results: Vec<(f64, Option<f64>)> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|trial| -> Result<(f64, Option<f64>)> {
                    let ch = cfg.ensemble.draw(trial, nt, ne, cfg.ipc.as_ref())?;
                    let bare = WiretapChannel::new(ch.hb().clone(), ch.he().clone())?;
                    let cs = pbra_run(&bare, &plain.constraints(&bare, p0)?, &cfg.pbra)?.value;
                    let with_ipc = match &cfg.ipc {
                        Some(s) => {
                            let profile = PowerProfile { ipc_limit: Some(db_to_linear(s.limit_db)), ..plain };
                            Some(pbra_run(&ch, &profile.constraints(&ch, p0)?, &cfg.pbra)?.value)
                        }
                        None => None,
                    };
                    Ok((cs, with_ipc))
                })
                .collect::<Result<_>>()?;
            let cs: Vec<f64> = results.iter().map(|r| r.0).collect();
            let (mean_cs, std_cs) = mean_std(&cs);
            let mean_cs_ipc = cfg.ipc.map(|_| mean_std(&results.iter().filter_map(|r| r.1).collect::<Vec<_>>()).0);
            rows.push(SweepRow { nt, ne, trials: cfg.trials, mean_cs, std_cs, mean_cs_ipc });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct CorrelationConfig {
    pub ensemble: Ensemble,
    pub ne: usize,
    pub nt_list: Vec<usize>,
    pub phi_e_list: Vec<f64>,
    pub snr_db: f64,
    pub trials: usize,
    pub pbra: PbraConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationRow {
    pub nt: usize,
    pub r: f64,
    pub phi_e: f64,
    pub d_corr: f64,
    pub mean_cs: f64,
    pub mean_zf: f64,
    /// Capacity to Bob with Eve absent.
    pub mean_no_eve: f64,
}

/// Capacity, ZF rate and eavesdropper-free capacity as Eve's correlation phase varies.
pub fn run_correlation_sweep(cfg: &CorrelationConfig) -> Result<Vec<CorrelationRow>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let p0 = db_to_linear(cfg.snr_db);
    let profile = PowerProfile::default();
    let e = &cfg.ensemble;
    let mut rows = Vec::new();
    for &nt in &cfg.nt_list {
        for &phi_e in &cfg.phi_e_list {
            let ens = Ensemble { phi_e, ..e.clone() };
            let d_corr =
                corr_distance(&exponential_correlation(nt, e.r, e.phi_b)?, &exponential_correlation(nt, e.r, phi_e)?)?;
            let results: Vec<[f64; 3]> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|trial| -> Result<[f64; 3]> {
                    let ch = ens.draw(trial, nt, cfg.ne, None)?;
                    let c = profile.constraints(&ch, p0)?;
                    let cs = pbra_run(&ch, &c, &cfg.pbra)?.value;
                    let zf = match zf_rate(&ch, &c, &CoMirrorConfig::default()) {
                        Ok(r) => r.rate,
                        Err(Error::NullSpaceEmpty) => 0.0,
                        Err(err) => return Err(err),
                    };
                    let obj = LinearizedObjective::adca(ch.hb().clone(), linalg::zeros(nt, nt))?;
                    let (_, t) = comirror::solve_subproblem(&obj, &c, &CoMirrorConfig::default())?;
                    Ok([cs, zf, t.best_objective])
                })
                .collect::<Result<_>>()?;
            let col = |k: usize| mean_std(&results.iter().map(|r| r[k]).collect::<Vec<_>>()).0;
            rows.push(CorrelationRow {
                nt,
                r: e.r,
                phi_e,
                d_corr,
                mean_cs: col(0),
                mean_zf: col(1),
                mean_no_eve: col(2),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}
