use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graded_pbw_cli::commands::{self, Direction, OutputFormat, Report, Route, Suite, VerifyOptions};
use graded_pbw_cli::{chart_file, CliError};

#[derive(Parser)]
#[command(name = "gpbw", version, about = "Exact formal exponential maps and Fedosov connections on graded charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ChartArgs {
    /// Chart file (TOML).
    #[arg(long)]
    chart: PathBuf,
    /// Override the chart's truncation weight Q.
    #[arg(long = "max-weight", value_name = "Q")]
    max_weight: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply pbw to a symmetric tensor (fwd) or its inverse to an operator (inv).
    Pbw {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, value_enum, default_value = "fwd")]
        direction: Direction,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the Fedosov correction A and the residual of D².
    Fedosov {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, value_enum, default_value = "records")]
        output: OutputFormat,
    },
    /// Print the flat section tau(f) of a function.
    Tau {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, value_enum, default_value = "pbw")]
        route: Route,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run identity checks on random inputs.
    Verify {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Random inputs per identity.
        #[arg(long, default_value_t = VerifyOptions::default().cases)]
        cases: usize,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let load = |a: &ChartArgs| chart_file::load(&a.chart, a.max_weight);
    match cli.command {
        Command::Pbw { chart, direction, expr } => commands::pbw(&load(&chart)?, &expr, direction),
        Command::Fedosov { chart, output } => commands::fedosov(&load(&chart)?, output),
        Command::Tau { chart, route, expr } => commands::tau(&load(&chart)?, &expr, route),
        Command::Verify { chart, suite, cases, seed } => {
            commands::verify(&load(&chart)?, suite, VerifyOptions { cases, seed })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{}", report.text);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
