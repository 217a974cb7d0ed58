use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tfpdo_cli::{run_path, sweep, validate};

#[derive(Parser)]
#[command(name = "tfpdo", version, about = "Run time-frequency operator experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report.
    Run { config: PathBuf },
    /// Run every *.toml config in a directory and aggregate a CSV.
    Sweep {
        dir: PathBuf,
        /// Aggregated CSV path (default: <dir>/sweep.csv).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => run_path(&config).map(|outcome| {
            let r = &outcome.report;
            for a in r.assertions.iter().filter(|a| !a.passed) {
                let tag = if a.expected_negative { "expected" } else { "FAILED" };
                println!("{tag}: {} = {:e} (needs {} {:e})", a.name, a.value, a.comparison.symbol(), a.tolerance);
            }
            for notice in &r.notices {
                println!("notice: {notice}");
            }
            println!("{}: {}, {} assertions", r.name, serde_json::to_string(&r.status).unwrap_or_default(), r.assertions.len());
            outcome.exit_code
        }),
        Command::Sweep { dir, output } => {
            let output = output.unwrap_or_else(|| dir.join("sweep.csv"));
            sweep(&dir, &output).inspect(|_| println!("wrote {}", output.display()))
        }
        Command::Validate { config } => validate(&config).map(|summary| {
            println!("{summary}");
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
