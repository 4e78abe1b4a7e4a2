use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, ValueEnum};
use secrecy_core::experiments::{
    convergence_rows, run_convergence_experiment, run_correlation_sweep, run_inner_comparison, run_papc_sweep,
    timing_rows, write_csv, Algorithm, CorrelationConfig, Ensemble, IpcScenario, PowerProfile, SweepConfig,
};
use secrecy_core::{fixtures, io, PbraConfig, WiretapChannel};
use serde::Serialize;

use crate::config::{self, EnsembleConfig, ExperimentConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Per-iteration values of each algorithm on one channel.
    Convergence,
    /// Best-so-far curves of CoMirror and the constant-step subgradient method.
    Inner,
    /// Capacity, ZF rate and eavesdropper-free rate against Eve's correlation phase.
    Correlation,
    /// Mean capacity against transmit and eavesdropper antenna counts.
    Antennas,
    /// Iterations and wall time per algorithm.
    Timing,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Self::Convergence => "convergence",
            Self::Inner => "inner",
            Self::Correlation => "correlation",
            Self::Antennas => "antennas",
            Self::Timing => "timing",
        }
    }
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// TOML or JSON config (`schema = 1`); flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for every random draw. Required so runs are reproducible.
    #[arg(long, required = true)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated SNR grid in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr_db: Option<Vec<f64>>,
    /// Channel JSON for the single-channel suites (default: the built-in 4x2/3x2 complex example).
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Constant subgradient step for the inner suite.
    #[arg(long)]
    pub step: Option<f64>,
    /// Worker threads for independent trials.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_csv(rows, BufWriter::new(file))?;
    Ok(())
}

fn single_channel(path: &Option<PathBuf>) -> CliResult<WiretapChannel> {
    match path {
        Some(p) => Ok(io::read_channel(p)?),
        None => Ok(fixtures::complex_4x2_3x2()),
    }
}

fn ensemble(cfg: Option<EnsembleConfig>, seed: u64, fallback: EnsembleConfig) -> Ensemble {
    let e = cfg.unwrap_or(fallback);
    Ensemble { nr: e.nr, r: e.r, phi_b: e.phi_b, phi_e: e.phi_e, gamma: e.gamma, seed }
}

fn single_snr(grid: &[f64]) -> CliResult<f64> {
    match grid {
        [s] => Ok(*s),
        _ => Err(CliError::config(format!("this suite takes exactly one SNR, got {}", grid.len()))),
    }
}

pub fn run(args: ExperimentArgs) -> CliResult<()> {
    let cfg: ExperimentConfig = match &args.config {
        Some(p) => config::load(p)?,
        None => ExperimentConfig { schema: config::SCHEMA_VERSION, ..Default::default() },
    };
    let suite = match (args.suite, &cfg.suite) {
        (Some(s), _) => s,
        (None, Some(name)) => Suite::from_str(name, true)
            .map_err(|_| CliError::config(format!("field `suite`: unknown suite '{name}'")))?,
        (None, None) => return Err(CliError::config("--suite is required (or `suite` in the config)")),
    };
    let trials = args.trials.or(cfg.trials).unwrap_or(100);
    if trials == 0 {
        return Err(CliError::config("trials must be at least 1"));
    }
    if let Some(n) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("--jobs {n}: {e}")))?;
    }
    let channel_path = args.channel.clone().or(cfg.channel.clone());
    let profile = PowerProfile { papc_factor: Some(cfg.papc_factor.unwrap_or(1.2)), ipc_limit: None };
    let snr = |default: &[f64]| args.snr_db.clone().or(cfg.snr_db.clone()).unwrap_or_else(|| default.to_vec());
    let algos = match &cfg.algos {
        Some(names) => names
            .iter()
            .enumerate()
            .map(|(i, n)| n.parse::<Algorithm>().map_err(|e| CliError::config(format!("field `algos[{i}]`: {e}"))))
            .collect::<CliResult<Vec<_>>>()?,
        None => vec![Algorithm::Adca, Algorithm::Ao, Algorithm::Pbra],
    };

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let path = crate::out_path(&args.out_dir, &format!("{}_{}_{}.csv", suite.name(), args.seed, timestamp()));

    match suite {
        Suite::Convergence | Suite::Timing => {
            let ch = single_channel(&channel_path)?;
            let runs = run_convergence_experiment(&ch, &profile, &snr(&[0.0, 5.0, 10.0, 15.0]), &algos)?;
            for r in &runs {
                println!(
                    "{:>6.1} dB  {:<5} {:.6}  ({} iterations)",
                    r.snr_db,
                    r.algo,
                    r.terminal,
                    r.trace.iterations.len()
                );
            }
            if suite == Suite::Convergence {
                write_rows(&path, &convergence_rows(&runs))?;
            } else {
                write_rows(&path, &timing_rows(&runs))?;
            }
        }
        Suite::Inner => {
            let ch = single_channel(&channel_path)?;
            let iters = cfg.iters.unwrap_or(500);
            let step = args.step.or(cfg.step);
            let mut rows = Vec::new();
            for s in snr(&[5.0, 10.0]) {
                let cmp = run_inner_comparison(&ch, &profile, s, iters, step)?;
                println!(
                    "{s:>6.1} dB  comirror {:.7}  subgradient {:.7}  (step {:.3e})",
                    cmp.comirror.last().copied().unwrap_or(0.0),
                    cmp.subgradient.last().copied().unwrap_or(0.0),
                    cmp.step
                );
                rows.extend(cmp.rows());
            }
            write_rows(&path, &rows)?;
        }
        Suite::Antennas => {
            let fallback = EnsembleConfig { nr: 4, r: 0.5, phi_b: 0.0, phi_e: PI / 2.0, gamma: 1.0 };
            let sweep = SweepConfig {
                ensemble: ensemble(cfg.ensemble.clone(), args.seed, fallback),
                nt_list: cfg.nt.clone().unwrap_or_else(|| vec![2, 3, 4, 5, 6]),
                ne_list: cfg.ne.clone().unwrap_or_else(|| vec![2, 4]),
                snr_db: single_snr(&snr(&[5.0]))?,
                trials,
                ipc: cfg.ipc.as_ref().map(|i| IpcScenario { np: i.np, phi_p: i.phi_p, limit_db: i.limit_db }),
                pbra: PbraConfig::default(),
            };
            let rows = run_papc_sweep(&sweep)?;
            for r in &rows {
                println!("N_t {:>2}  N_e {:>2}  mean C_s {:.6}", r.nt, r.ne, r.mean_cs);
            }
            write_rows(&path, &rows)?;
        }
        Suite::Correlation => {
            let fallback = EnsembleConfig { nr: 4, r: 0.9, phi_b: 0.0, phi_e: 0.0, gamma: 1.0 };
            let sweep = CorrelationConfig {
                ensemble: ensemble(cfg.ensemble.clone(), args.seed, fallback),
                ne: cfg.ne.as_ref().and_then(|v| v.first().copied()).unwrap_or(2),
                nt_list: cfg.nt.clone().unwrap_or_else(|| vec![6]),
                phi_e_list: cfg.phi_e.clone().unwrap_or_else(|| (0..=4).map(|i| PI * i as f64 / 4.0).collect()),
                snr_db: single_snr(&snr(&[5.0]))?,
                trials,
                pbra: PbraConfig::default(),
            };
            let rows = run_correlation_sweep(&sweep)?;
            for r in &rows {
                println!("N_t {:>2}  d_corr {:.4}  C_s {:.6}  ZF {:.6}", r.nt, r.d_corr, r.mean_cs, r.mean_zf);
            }
            write_rows(&path, &rows)?;
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}
