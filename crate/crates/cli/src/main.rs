use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zk_cli::config::ExperimentConfig;
use zk_cli::report::RunReport;
use zk_cli::{Command, Experiment};

#[derive(Parser)]
#[command(name = "zk", version, about = "Final-state scattering experiments for the 3D Zakharov-Kuznetsov equation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact check of the symbol identity, intermediates and coefficient table.
    VerifyAlgebra(Common),
    /// Decay of the (a, b)-weighted linear norm.
    LinearDecay(Common),
    /// Decay of the projected KPV-type norm.
    KpvDecay(Common),
    /// Decay of u2 and u1, product rules and the Duhamel residual.
    BilinearDecay(Common),
    /// Construct the solution with prescribed final state and validate it.
    Scatter(Common),
    /// Mass and energy along the forward flow.
    Conserve(Common),
    /// Every experiment in sequence.
    All(Common),
    /// Print the default configuration file.
    DefaultConfig,
}

#[derive(Args)]
struct Common {
    /// TOML configuration; missing keys take their defaults.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match cli.cmd {
        Cmd::VerifyAlgebra(c) => (Command::One(Experiment::VerifyAlgebra), c),
        Cmd::LinearDecay(c) => (Command::One(Experiment::LinearDecay), c),
        Cmd::KpvDecay(c) => (Command::One(Experiment::KpvDecay), c),
        Cmd::BilinearDecay(c) => (Command::One(Experiment::BilinearDecay), c),
        Cmd::Scatter(c) => (Command::One(Experiment::Scatter), c),
        Cmd::Conserve(c) => (Command::One(Experiment::Conserve), c),
        Cmd::All(c) => (Command::All, c),
        Cmd::DefaultConfig => {
            print!("{}", zk_cli::config::DEFAULTS_TOML);
            return ExitCode::SUCCESS;
        }
    };
    let mut cfg = match &common.config {
        Some(p) => match ExperimentConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    let out = common.out.unwrap_or_else(|| cfg.output_dir.clone());
    match zk_cli::run(cmd, &cfg, &out, common.quiet) {
        Ok(report) => {
            print_summary(&report);
            println!("report: {}", out.join("report.json").display());
            ExitCode::from(zk_cli::exit_code(&report) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn print_summary(r: &RunReport) {
    println!("{:<16} {:<28} {:>13} {:>13} {:>9}  result", "experiment", "check", "measured", "target", "tol");
    for c in &r.checks {
        let verdict = match (c.pass, c.mandatory) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "info",
        };
        println!(
            "{:<16} {:<28} {:>13.4e} {:>13.4e} {:>9.1e}  {verdict}",
            c.experiment, c.name, c.measured, c.target, c.tolerance
        );
    }
    for e in &r.errors {
        println!("aborted: {e}");
    }
    println!("overall: {}", if r.pass { "pass" } else { "fail" });
}
