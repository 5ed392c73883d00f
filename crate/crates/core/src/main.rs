use bockstein::cli::{default_config, parse_config, run_config, summary, Config, Kind, Overrides};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bockstein", version, about = "Exact Ext, Bockstein and filtered-reduction verification runs")]
struct Cli {
    /// JSON case configuration; subcommands other than `run` keep only cases of their kind.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed applied to every randomized case.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Highest Ext degree for `ext` and `les` cases.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Instances per property battery.
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record per-case wall time in the reports (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ext groups with the periodic or bar oracle.
    Ext,
    /// Bockstein long exact sequences, exactness and the snake oracle.
    Les,
    /// Filtered reduction checks.
    Mfred,
    /// Seeded property batteries.
    Props,
    /// Every case in the configuration.
    Run,
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("input error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return input_error("--jobs must be at least 1");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let only = match cli.command {
        Command::Ext => Some(Kind::Ext),
        Command::Les => Some(Kind::Les),
        Command::Mfred => Some(Kind::Mfred),
        Command::Props => Some(Kind::Props),
        Command::Run => None,
    };
    let (cfg, path): (Config, String) = match &cli.config {
        Some(p) => {
            let name = p.display().to_string();
            let text = match std::fs::read_to_string(p) {
                Ok(t) => t,
                Err(e) => return input_error(format!("{name}: {e}")),
            };
            match parse_config(&text, &name) {
                Ok(c) => (c, name),
                Err(e) => return input_error(e),
            }
        }
        None => match only {
            Some(k) => (default_config(k), "<default>".into()),
            None => {
                let mut cfg = Config::default();
                for k in [Kind::Ext, Kind::Les, Kind::Mfred, Kind::Props] {
                    cfg.cases.extend(default_config(k).cases);
                }
                (cfg, "<default>".into())
            }
        },
    };
    let ov = Overrides { seed: cli.seed, max_degree: cli.max_degree, cases: cli.cases, timing: cli.timing };
    let report = match run_config(&cfg, only, &ov, &path) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    print!("{}", summary(&report));
    if let Some(out) = &cli.out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(out, text + "\n") {
            eprintln!("cannot write {}: {e}", out.display());
            return ExitCode::from(2);
        }
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
