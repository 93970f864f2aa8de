use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use compflex::config::{parse_config, parse_schemes, ConfigError, Figure, Mode, Overrides, Preset};
use compflex::run::{run, RunError};

/// Monte Carlo and analytic success curves for CoMPflex and full duplex.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Flat TOML config file; omitted keys take reference defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Reproduce one figure: 3 (uplink), 4 (downlink), 5 (distance CDFs).
    #[arg(long)]
    figure: Option<i64>,

    /// 50 km window and 2000 drops.
    #[arg(long, conflicts_with = "paper")]
    desk: bool,

    /// 200 km window and 10^4 drops.
    #[arg(long)]
    paper: bool,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    drops: Option<usize>,

    /// mc, analytic or both.
    #[arg(long)]
    mode: Option<String>,

    /// compflex, fd or both.
    #[arg(long)]
    scheme: Option<String>,

    #[arg(long)]
    out: Option<PathBuf>,
}

fn overrides(args: &Args) -> Result<Overrides, ConfigError> {
    Ok(Overrides {
        preset: if args.desk {
            Some(Preset::Desk)
        } else if args.paper {
            Some(Preset::Paper)
        } else {
            None
        },
        figure: args.figure.map(Figure::from_number).transpose()?,
        seed: args.seed,
        drops: args.drops,
        mode: args.mode.as_deref().map(str::parse::<Mode>).transpose()?,
        schemes: args.scheme.as_deref().map(parse_schemes).transpose()?,
        out: args.out.clone(),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = overrides(&args)
        .and_then(|o| parse_config(args.config.as_deref(), &o))
        .map_err(RunError::from)
        .and_then(|cfg| run(&cfg).map(|_| cfg));
    match result {
        Ok(cfg) => {
            eprintln!("wrote results to {}", cfg.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
