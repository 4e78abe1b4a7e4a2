use std::path::PathBuf;

use clap::Args;
use secrecy_core::experiments::{Ensemble, IpcScenario};
use secrecy_core::io::{self, ChannelFile};
use secrecy_core::WiretapChannel;

use crate::error::{CliError, CliResult};
use crate::ChannelSpec;

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub channel: ChannelSpec,
    /// Output file; the JSON goes to stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Draws the channel described by `spec`; the same seed always gives the same matrices.
pub fn channel_from_spec(spec: &ChannelSpec) -> CliResult<WiretapChannel> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::config(format!("--{flag} is required")));
    let (nt, nr, ne) = (need(spec.nt, "nt")?, need(spec.nr, "nr")?, need(spec.ne, "ne")?);
    let seed = spec.seed.ok_or_else(|| CliError::config("--seed is required to draw a channel"))?;
    let ensemble =
        Ensemble { nr, r: spec.r, phi_b: spec.phi, phi_e: spec.phi_e.unwrap_or(spec.phi), gamma: spec.gamma, seed };
    let ipc = (spec.np > 0).then(|| IpcScenario { np: spec.np, ..IpcScenario::default() });
    Ok(ensemble.draw(0, nt, ne, ipc.as_ref())?)
}

pub fn run(args: GenerateArgs) -> CliResult<()> {
    let ch = channel_from_spec(&args.channel)?;
    match &args.out {
        Some(path) => io::write_channel(path, &ch)?,
        None => {
            let text = serde_json::to_string_pretty(&ChannelFile::from_channel(&ch))
                .map_err(|e| CliError::config(e.to_string()))?;
            println!("{text}");
        }
    }
    Ok(())
}
