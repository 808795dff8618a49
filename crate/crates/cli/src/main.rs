use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tauclock::{load_config, run_scenario, Kind};

#[derive(Parser)]
#[command(
    name = "tauclock",
    about = "Traversal-time amplitude distributions and Larmor clock simulations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Duration-amplitude distribution with moments and the complex time
    Taudist(RunArgs),
    /// Spin-1/2 Larmor clock readouts over a list of frequencies
    Clock(RunArgs),
    /// Two-arm interferometer sweep over the arm phase
    Interferometer(RunArgs),
    /// Exact lattice path-sum vs shift-phase equivalence report
    Oracle(RunArgs),
    /// Validate a config and echo its normalised form
    Validate(ValidateArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario config (JSON)
    #[arg(long)]
    config: String,
    /// Output file prefix (overrides the config's `output`)
    #[arg(long)]
    out: Option<String>,
}

#[derive(clap::Args)]
struct ValidateArgs {
    #[arg(long)]
    config: String,
}

fn configure_workers() {
    if let Ok(raw) = std::env::var("TAUCLOCK_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n >= 1 {
                // ignore the error if a pool already exists
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn read_config(path: &str) -> Result<tauclock::ScenarioConfig, ExitCode> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: kind=invalid-input detail=\"cannot read {path}: {e}\"");
            return Err(ExitCode::from(1));
        }
    };
    match load_config(&text) {
        Ok(config) => Ok(config),
        Err(issues) => {
            for issue in &issues {
                eprintln!("config error at {issue}");
            }
            eprintln!("error: kind=invalid-config count={}", issues.len());
            Err(ExitCode::from(1))
        }
    }
}

fn run(kind: Kind, args: &RunArgs) -> ExitCode {
    let config = match read_config(&args.config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if config.kind != kind {
        eprintln!(
            "config error at kind: config declares `{}` but the `{}` subcommand was invoked",
            config.kind.as_str(),
            kind.as_str()
        );
        eprintln!("error: kind=invalid-config count=1");
        return ExitCode::from(1);
    }
    match run_scenario(&config, args.out.as_deref()) {
        Ok(out) => {
            print!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: kind={} detail={:?}", e.kind(), e.to_string());
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    configure_workers();
    let cli = Cli::parse();
    match &cli.command {
        Command::Taudist(args) => run(Kind::Taudist, args),
        Command::Clock(args) => run(Kind::Clock, args),
        Command::Interferometer(args) => run(Kind::Interferometer, args),
        Command::Oracle(args) => run(Kind::Oracle, args),
        Command::Validate(args) => match read_config(&args.config) {
            Ok(config) => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&config).expect("config serialises")
                );
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
    }
}
