use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

mod export;
mod report;

use export::{export, ExportFormat};
use report::{run_report, Options, Target};

#[derive(Parser)]
#[command(name = "zecap", version, about = "Zero-error capacity certificates for symplectic and root-system graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run certificate pipelines and print a report.
    Report {
        target: Target,
        /// Half-dimension of Sp(2m, F₂) for the `sp` target.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=4))]
        m: u32,
        /// Blahut–Arimoto gap tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Graph for the `protocol` and `capacity` targets.
        #[arg(long, value_enum, default_value_t = report::CodeGraph::Sp6)]
        graph: report::CodeGraph,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock runtimes (makes JSON non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Write a named graph, channel or table to a file.
    Export {
        /// sp2, sp4, sp6, sp8, e8-rays, e8-model, g2, c5, e7-table, sp6-channel
        name: String,
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Report {
            target,
            m,
            tol,
            graph,
            format,
            out,
            timings,
        } => {
            anyhow::ensure!(tol > 0.0, "--tol must be positive");
            let bundle = run_report(target, &Options { m, tol, graph, timings })?;
            let text = match format {
                OutputFormat::Json => serde_json::to_string_pretty(&bundle)? + "\n",
                OutputFormat::Text => bundle.to_text(),
            };
            emit(&text, out.as_ref())?;
            Ok(bundle.all_passed)
        }
        Command::Export { name, format, out } => {
            let text = export(&name, format)?;
            emit(&text, out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
