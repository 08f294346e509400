use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rote::checks::{all_gating_pass, reports_to_json, CheckOptions, CheckReport, Session, CHECK_NAMES};
use rote::logic::Engine;
use rote::numeration::NumerationSystem;
use rote::search::{bound_rows, level_counts, rows_to_csv, SearchConfig};
use rote::word::ExactRational;
use rote::{Error, Result};

#[derive(Parser)]
#[command(name = "prover", version, about = "Checks for the 5/2 repetition threshold of Rote words")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct SystemArg {
    /// Built-in numeration system (dt_h, dt_q) or a system file.
    #[arg(long, default_value = "dt_q")]
    system: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one named check, or `all`.
    Check {
        name: String,
        #[command(flatten)]
        system: SystemArg,
        /// Oracle prefix length, overriding each check's default.
        #[arg(long)]
        prefix_len: Option<usize>,
        /// Write the reports as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every check.
    All {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        prefix_len: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the registered checks.
    List,
    /// Run a script of def, eval and linrep-eq commands.
    Script {
        file: PathBuf,
        #[command(flatten)]
        system: SystemArg,
    },
    /// Write an automaton in the text format: addressing, dfao, addition,
    /// or a predicate of the shared script.
    Export {
        automaton: String,
        file: PathBuf,
        #[command(flatten)]
        system: SystemArg,
    },
    /// Count valid words of each length and compare against 16n.
    Levels {
        #[arg(long, default_value_t = 150)]
        n_max: usize,
        #[arg(long, default_value_t = 58)]
        from: usize,
        /// Forbid exponent exactly 5/2 as well.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 1 << 24)]
        node_budget: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn load_system(arg: &SystemArg) -> Result<NumerationSystem> {
    let path = Path::new(&arg.system);
    if path.is_file() {
        NumerationSystem::from_text(&std::fs::read_to_string(path)?)
    } else {
        NumerationSystem::builtin(&arg.system)
    }
}

fn run_checks(names: &[&str], system: &SystemArg, prefix_len: Option<usize>, report: Option<&Path>) -> Result<bool> {
    let mut session = Session::new(CheckOptions {
        system: load_system(system)?,
        prefix_len,
    });
    let mut reports: Vec<CheckReport> = Vec::new();
    for name in names {
        let r = session.run(name)?;
        print!("{r}");
        reports.push(r);
    }
    if let Some(path) = report {
        std::fs::write(path, reports_to_json(&reports) + "\n")?;
    }
    println!();
    for r in &reports {
        println!("{:<16} {}", r.verdict.to_string(), r.name);
    }
    Ok(all_gating_pass(&reports))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Cmd::Check {
            name,
            system,
            prefix_len,
            report,
        } => {
            let names: Vec<&str> = if name == "all" { CHECK_NAMES.to_vec() } else { vec![name.as_str()] };
            run_checks(&names, &system, prefix_len, report.as_deref())
        }
        Cmd::All {
            system,
            prefix_len,
            report,
        } => run_checks(&CHECK_NAMES, &system, prefix_len, report.as_deref()),
        Cmd::List => {
            for n in CHECK_NAMES {
                println!("{n}");
            }
            Ok(true)
        }
        Cmd::Script { file, system } => {
            let text = std::fs::read_to_string(&file)?;
            let mut engine = Engine::new(load_system(&system)?)?;
            let outcomes = engine.run_script(&text)?;
            for o in &outcomes {
                println!("{o}");
            }
            Ok(outcomes.iter().all(|o| o.truth != Some(false)))
        }
        Cmd::Export { automaton, file, system } => {
            let mut session = Session::new(CheckOptions {
                system: load_system(&system)?,
                prefix_len: None,
            });
            std::fs::write(&file, session.export(&automaton)?)?;
            Ok(true)
        }
        Cmd::Levels {
            n_max,
            from,
            strict,
            node_budget,
            csv,
        } => {
            let cfg = SearchConfig::new(ExactRational::ratio(5, 2), strict)?;
            let lc = level_counts(&cfg, n_max, node_budget);
            if !lc.complete {
                return Err(Error::Resource(format!(
                    "node budget exhausted after length {}",
                    lc.counts.len() - 1
                )));
            }
            let rows = bound_rows(&lc.counts, 16, from, n_max);
            let text = rows_to_csv(&rows);
            match csv {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(rows.iter().all(|r| r.ok))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("prover: {e}");
            ExitCode::from(2)
        }
    }
}
