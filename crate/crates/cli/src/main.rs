use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use polarlab_core::harness::{self, CommandOutput};

#[derive(Parser)]
#[command(name = "polarlab", version, about = "Polar-code lossy compression experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the Bhattacharyya profile of the synthetic channels.
    Profile(Common),
    /// Rate-distortion sweep over blocklengths and rates (CSV).
    RdSweep(Common),
    /// Block error rates against the union bound (CSV).
    BlerSweep(Common),
    /// Simulate a nested-code scheme (JSON).
    Scheme(Common),
    /// Run the property suites; exits nonzero if any fails.
    Validate(Common),
    /// Gap table m^(i), M^(i) of a profile (CSV).
    GapTable(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::Profile(c) => ("profile", c),
            Command::RdSweep(c) => ("rd-sweep", c),
            Command::BlerSweep(c) => ("bler-sweep", c),
            Command::Scheme(c) => ("scheme", c),
            Command::Validate(c) => ("validate", c),
            Command::GapTable(c) => ("gap-table", c),
        }
    }
}

fn execute(name: &str, args: &Common) -> Result<CommandOutput> {
    let path = args.config.as_path();
    let seed = args.seed;
    let out = harness::with_workers(args.workers, || -> polarlab_core::Result<CommandOutput> {
        match name {
            "profile" => harness::cmd_profile(&harness::load_config(path)?, seed),
            "rd-sweep" => harness::cmd_rd_sweep(&harness::load_config(path)?, seed),
            "bler-sweep" => harness::cmd_bler_sweep(&harness::load_config(path)?, seed),
            "scheme" => {
                let base = path.parent().unwrap_or(Path::new("."));
                harness::cmd_scheme(&harness::load_config(path)?, base, seed)
            }
            "validate" => harness::cmd_validate(&harness::load_config(path)?, seed),
            "gap-table" => harness::cmd_gap_table(&harness::load_config(path)?, seed),
            _ => unreachable!(),
        }
    })??;
    Ok(out)
}

fn run(cli: Cli) -> Result<bool> {
    let (name, args) = cli.command.parts();
    let output = execute(name, args).with_context(|| format!("{name} failed"))?;
    let mut body = output.body;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &args.out {
        Some(out) => {
            fs::write(out, &body).with_context(|| format!("writing {}", out.display()))?;
            harness::write_sidecar(out, name, args.workers)?;
        }
        None => print!("{body}"),
    }
    Ok(output.success)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
