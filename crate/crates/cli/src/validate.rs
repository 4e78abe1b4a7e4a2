use std::path::PathBuf;

use clap::Args;
use secrecy_core::io;
use secrecy_core::pbra::{k_update, kkt_residual, PsiPartition};
use secrecy_core::{
    saddle_objective, secrecy_rate, secrecy_rate_unclamped, verify_reformulation, CMatrix, NoiseCorrelation,
    WiretapChannel,
};

use crate::error::{CliError, CliResult};
use crate::solve::Solution;

/// `‖Ψ₁₂ + (I − K̄K̄ᴴ)⁻¹K̄‖_F` must fall below this for the noise correlation to count as optimal.
const KKT_TOL: f64 = 1e-6;
const RATE_TOL: f64 = 1e-6;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// Solution JSON written by `solve`.
    #[arg(long)]
    pub solution: PathBuf,
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

/// Minimizes `f(·, X)` over the noise correlation by repeated closed-form updates.
fn optimal_kbar(
    ch: &WiretapChannel,
    x: &CMatrix,
    start: NoiseCorrelation,
) -> secrecy_core::Result<(NoiseCorrelation, f64)> {
    let mut k = start;
    let mut res = f64::INFINITY;
    for _ in 0..5000 {
        let psi = PsiPartition::compute(ch, &k, x)?;
        res = kkt_residual(&psi.psi12, &k)?;
        if res <= 1e-10 {
            break;
        }
        k = k_update(&psi.psi12);
    }
    Ok((k, res))
}

fn checks(ch: &WiretapChannel, sol: &Solution) -> secrecy_core::Result<Vec<Check>> {
    let x = sol.x.to_matrix()?;
    if x.shape() != (ch.nt(), ch.nt()) {
        return Err(secrecy_core::Error::DimensionMismatch(format!(
            "X is {:?} but the channel has {} transmit antennas",
            x.shape(),
            ch.nt()
        )));
    }
    let c = sol.constraints.to_constraints()?;
    c.validate_for(ch.nt())?;
    let mut out = Vec::new();

    let tol = c.feasibility_tol();
    out.push(Check {
        name: "feasibility",
        pass: c.is_feasible(&x, tol),
        detail: format!("violation {:.3e} (tol {tol:.1e})", c.violation(&x)),
    });

    let rate = secrecy_rate(ch, &x)?;
    out.push(Check {
        name: "reported rate",
        pass: (rate - sol.rate_at_x).abs() <= RATE_TOL,
        detail: format!("C_s(X) = {rate:.9} vs reported {:.9}", sol.rate_at_x),
    });

    if ch.is_degraded() {
        let r = verify_reformulation(ch, &x)?;
        out.push(Check {
            name: "degraded reformulation",
            pass: r.pass,
            detail: format!("ln|F(X)| = {:.12}, gap {:.2e}", r.rate_via_f, r.gap),
        });
    } else {
        out.push(Check { name: "degraded reformulation", pass: true, detail: "skipped, channel not degraded".into() });
    }

    let given = match &sol.kbar {
        Some(k) => Some(NoiseCorrelation::new(k.to_matrix()?)?),
        None => None,
    };
    let start = given.clone().unwrap_or_else(|| NoiseCorrelation::zero(ch.nr(), ch.ne()));
    let (kbar, res) = optimal_kbar(ch, &x, start)?;
    out.push(Check {
        name: "noise kkt",
        pass: res <= KKT_TOL,
        detail: format!("residual {res:.3e} (tol {KKT_TOL:.0e})"),
    });

    let bound = saddle_objective(ch, &kbar, &x)?;
    let unclamped = secrecy_rate_unclamped(ch, &x)?;
    out.push(Check {
        name: "upper bound",
        pass: bound >= unclamped - 1e-8,
        detail: format!("min_K f(K, X) = {bound:.9} >= C_s(X) = {unclamped:.9}"),
    });

    if let (Some(k), Some(v)) = (&given, sol.saddle_value) {
        let f = saddle_objective(ch, k, &x)?;
        out.push(Check {
            name: "saddle value",
            pass: (f - v).abs() <= RATE_TOL,
            detail: format!("f(K, X) = {f:.9} vs reported {v:.9}"),
        });
    }
    Ok(out)
}

pub fn run(args: ValidateArgs) -> CliResult<()> {
    let ch = io::read_channel(&args.channel)?;
    let sol: Solution = io::read_json(&args.solution)?;
    let report = checks(&ch, &sol)?;
    for c in &report {
        println!("{:<24}{}  {}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
    }
    let failed = report.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed, report.len()));
    }
    println!("all {} checks passed", report.len());
    Ok(())
}
