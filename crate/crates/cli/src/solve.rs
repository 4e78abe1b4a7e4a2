use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use secrecy_core::experiments::db_to_linear;
use secrecy_core::io::{self, ConstraintsRecord, MatrixRecord};
use secrecy_core::{
    adca_run, pbra_run, recover_optimal_signaling, secrecy_rate, zf_rate, AdcaConfig, CoMirrorConfig, ConstraintSet,
    InterferenceConstraint, PbraConfig, RecoveryConfig, SolverTrace, Status, WiretapChannel,
};
use serde::{Deserialize, Serialize};

use crate::config::SCHEMA_VERSION;
use crate::error::{CliError, CliResult};
use crate::generate::channel_from_spec;
use crate::{out_path, ChannelSpec, PowerArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoChoice {
    Adca,
    /// ADCA without extrapolation.
    Ao,
    Pbra,
    Zf,
    /// ADCA and PBRA.
    Both,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Channel JSON; otherwise the channel is drawn from the generator flags.
    #[arg(long, conflicts_with_all = ["nt", "nr", "ne"])]
    pub channel: Option<PathBuf>,
    #[command(flatten)]
    pub spec: ChannelSpec,
    #[command(flatten)]
    pub power: PowerArgs,
    #[arg(long, value_enum, default_value_t = AlgoChoice::Pbra)]
    pub algo: AlgoChoice,
    /// After PBRA, search for a covariance that achieves the saddle value.
    #[arg(long)]
    pub recover: bool,
    /// Directory for `<algo>_solution.json` and `<algo>_trace.csv`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Recovered {
    pub power: f64,
    pub rate: f64,
    pub x: MatrixRecord,
}

/// Solution file written by `solve` and read by `validate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub schema: u32,
    pub algo: String,
    pub status: String,
    /// Capacity estimate: best rate for ADCA/AO/ZF, saddle value for PBRA.
    pub c_s: f64,
    /// Secrecy rate of the returned `x`.
    pub rate_at_x: f64,
    pub saddle_value: Option<f64>,
    pub iterations: usize,
    pub x: MatrixRecord,
    pub kbar: Option<MatrixRecord>,
    pub constraints: ConstraintsRecord,
    pub recovered: Option<Recovered>,
}

pub fn load_channel(path: &Option<PathBuf>, spec: &ChannelSpec) -> CliResult<WiretapChannel> {
    match path {
        Some(p) => Ok(io::read_channel(p)?),
        None => channel_from_spec(spec),
    }
}

pub fn build_constraints(ch: &WiretapChannel, p: &PowerArgs) -> CliResult<ConstraintSet> {
    let nt = ch.nt();
    let spc = p.spc.or(p.snr_db.map(db_to_linear));
    let papc = match (&p.papc, p.papc_factor) {
        (Some(v), _) => Some(v.clone()),
        (None, Some(f)) => {
            let p0 = spc.ok_or_else(|| CliError::config("--papc-factor needs --spc or --snr-db"))?;
            Some(vec![f * p0 / nt as f64; nt])
        }
        (None, None) => None,
    };
    if spc.is_none() && papc.is_none() {
        return Err(CliError::config("give a sum-power limit (--spc or --snr-db) or --papc"));
    }
    let mut ipc = Vec::new();
    if !ch.primaries().is_empty() {
        let limit = p
            .ipc_limit
            .ok_or_else(|| CliError::config("the channel has primary receivers; --ipc-limit is required"))?;
        for h in ch.primaries() {
            ipc.push(InterferenceConstraint::from_channel(h, limit)?);
        }
    } else if p.ipc_limit.is_some() {
        return Err(CliError::config("--ipc-limit given but the channel has no primary receivers"));
    }
    let c = ConstraintSet::new(spc, papc, ipc)?;
    c.validate_for(nt)?;
    Ok(c)
}

fn solve_one(
    ch: &WiretapChannel,
    c: &ConstraintSet,
    algo: AlgoChoice,
    recover: bool,
) -> CliResult<(Solution, SolverTrace)> {
    let constraints = ConstraintsRecord::from_constraints(c);
    let (name, value, x, kbar, trace) = match algo {
        AlgoChoice::Adca | AlgoChoice::Ao => {
            let cfg = if algo == AlgoChoice::Adca { AdcaConfig::default() } else { AdcaConfig::plain() };
            let r = adca_run(ch, c, &cfg)?;
            let name = if algo == AlgoChoice::Adca { "adca" } else { "ao" };
            (name, r.rate, r.x.into_matrix(), None, r.trace)
        }
        AlgoChoice::Pbra => {
            let r = pbra_run(ch, c, &PbraConfig::default())?;
            ("pbra", r.value, r.x.into_matrix(), Some(r.kbar), r.trace)
        }
        AlgoChoice::Zf => {
            let r = zf_rate(ch, c, &CoMirrorConfig::default())?;
            ("zf", r.rate, r.x_full.into_matrix(), None, r.trace)
        }
        AlgoChoice::Both => unreachable!("expanded by the caller"),
    };
    if trace.status == Status::Infeasible {
        return Err(secrecy_core::Error::Infeasible(trace.elapsed_iterations).into());
    }
    let recovered = if recover && algo == AlgoChoice::Pbra {
        let r = recover_optimal_signaling(ch, c, value, &RecoveryConfig::default())?;
        Some(Recovered { power: r.power, rate: r.rate, x: MatrixRecord::from_matrix(r.x.matrix()) })
    } else {
        None
    };
    let solution = Solution {
        schema: SCHEMA_VERSION,
        algo: name.into(),
        status: format!("{:?}", trace.status),
        c_s: value,
        rate_at_x: secrecy_rate(ch, &x)?,
        saddle_value: kbar.as_ref().map(|_| value),
        iterations: trace.elapsed_iterations,
        x: MatrixRecord::from_matrix(&x),
        kbar: kbar.map(|k| MatrixRecord::from_matrix(k.kbar())),
        constraints,
        recovered,
    };
    Ok((solution, trace))
}

pub fn run(args: SolveArgs) -> CliResult<()> {
    let ch = load_channel(&args.channel, &args.spec)?;
    let c = build_constraints(&ch, &args.power)?;
    let algos = match args.algo {
        AlgoChoice::Both => vec![AlgoChoice::Adca, AlgoChoice::Pbra],
        a => vec![a],
    };
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    for algo in algos {
        let (solution, trace) = solve_one(&ch, &c, algo, args.recover)?;
        let json = out_path(&args.out_dir, &format!("{}_solution.json", solution.algo));
        io::write_json(&json, &solution)?;
        let csv = out_path(&args.out_dir, &format!("{}_trace.csv", solution.algo));
        fs::write(&csv, trace.to_csv_string()?).map_err(|e| CliError::io(&csv, e))?;
        println!(
            "{}: C_s = {:.6} nats, C_s(X) = {:.6}, {} after {} iterations -> {}",
            solution.algo,
            solution.c_s,
            solution.rate_at_x,
            solution.status,
            solution.iterations,
            json.display()
        );
        if let Some(r) = &solution.recovered {
            println!("{}: recovered C_s(X) = {:.6} at P0 = {:.6}", solution.algo, r.rate, r.power);
        }
    }
    Ok(())
}
