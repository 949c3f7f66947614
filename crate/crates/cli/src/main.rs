//! `abm`: polynomial convergence studies, single neutron stars, the
//! maximum-mass sieve and order/tolerance sweeps.
//!
//! Exit codes: 0 success, 1 runtime or integration failure (partial output
//! is still written), 2 usage error.

mod args;
mod emit;
mod plan;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, Command, Format};
use emit::Manifest;
use plan::RunPlan;
use run::{Report, Status};

fn usage_error(e: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, e).exit()
}

fn resolve(command: Command) -> anyhow::Result<Option<(RunPlan, Format, Option<PathBuf>)>> {
    Ok(Some(match command {
        Command::Poly(a) => (plan::poly(&a), a.output.format, a.output.out),
        Command::Tov(a) => (plan::tov(&a)?, a.output.format, a.output.out),
        Command::Sieve(a) => (plan::sieve(&a)?, a.output.format, a.output.out),
        Command::Sweep(a) => (plan::sweep(&a)?, a.output.format, a.output.out),
        Command::Replay(a) => {
            let text = std::fs::read_to_string(&a.manifest)
                .with_context(|| format!("reading {}", a.manifest.display()))?;
            let m: Manifest = serde_json::from_str(&text)
                .with_context(|| format!("parsing manifest {}", a.manifest.display()))?;
            (m.run, m.format, a.out.or(m.output))
        }
        Command::Schema => {
            print!("{}", emit::SCHEMA);
            return Ok(None);
        }
    }))
}

/// Writes the data and, for file output, its manifest.
fn deliver(
    plan: &RunPlan,
    report: &Report,
    format: Format,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            emit::write_data(plan, report, format, BufWriter::new(file))
                .with_context(|| format!("writing {}", path.display()))?;
            let manifest_path = emit::manifest_path(path);
            let mut m = BufWriter::new(
                File::create(&manifest_path)
                    .with_context(|| format!("creating {}", manifest_path.display()))?,
            );
            serde_json::to_writer_pretty(&mut m, &Manifest::new(plan, report, format, Some(path)))?;
            writeln!(m)?;
            m.flush()?;
            if report.status == Status::Ok {
                println!("{}", report.text);
            }
        }
        None => {
            emit::write_data(plan, report, format, io::stdout().lock())?;
            if report.status == Status::Ok {
                eprintln!("{}", report.text);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (plan, format, out) = match resolve(cli.command) {
        Ok(Some(resolved)) => resolved,
        Ok(None) => return ExitCode::SUCCESS,
        Err(e) => usage_error(format!("{e:#}")),
    };
    if let Err(e) = plan.validate() {
        usage_error(format!("{e:#}"));
    }

    let report = run::execute(&plan);
    if let Err(e) = deliver(&plan, &report, format, out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match report.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Failed | Status::Horizon => {
            eprintln!(
                "error: {}",
                report.diagnostic.as_deref().unwrap_or("run failed")
            );
            ExitCode::from(1)
        }
    }
}
