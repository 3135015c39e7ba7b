//! Command-line front end: run scenarios, list builtins, serve the table.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use depth_charge::rb::Backend;
use depth_charge::scenario::{self, Format, RunOptions, Scenario, BUILTINS};
use depth_charge::service::{EndpointConfig, Server};
use depth_charge::table::TableConfig;

/// Default directory for run summaries when `--out` is not given.
const OUT_DIR_ENV: &str = "DEPTH_CHARGE_OUT_DIR";

#[derive(Parser)]
#[command(name = "depth-charge", version, about = "Depth-priced hash table: scenario runner and service")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Ledger,
    Pow,
}

impl BackendArg {
    fn backend(self) -> Backend {
        match self {
            BackendArg::Ledger => Backend::Ledger,
            BackendArg::Pow => Backend::pow(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or builtin scenario; exits 1 if any check fails.
    Run {
        /// Path to a scenario TOML file, or the name of a builtin.
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the scenario's backend.
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        /// Write the per-request trace as CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Summary destination. Defaults to `$DEPTH_CHARGE_OUT_DIR/<name>-seed<N>.<ext>`
        /// when that variable is set, otherwise stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "structured")]
        format: FormatArg,
    },
    /// List builtin scenarios.
    List,
    /// Print a builtin scenario's TOML.
    Show { name: String },
    /// Serve a table over TCP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:7878")]
        bind: String,
        #[arg(long, default_value_t = 1024)]
        index_count: usize,
        #[arg(long, default_value_t = 0)]
        hash_seed: u64,
        #[arg(long, value_enum, default_value = "pow")]
        backend: BackendArg,
        /// Seconds a challenge stays valid.
        #[arg(long, default_value_t = 300)]
        expiry_secs: u64,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn write_to(path: &Path, text: &str) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    }
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn real_main() -> Result<ExitCode, String> {
    match Cli::parse().command {
        Command::Run {
            scenario,
            seed,
            backend,
            trace,
            out,
            format,
        } => {
            let sc = Scenario::load(&scenario).map_err(|e| e.to_string())?;
            let opts = RunOptions {
                seed,
                backend: backend.map(BackendArg::backend),
                trace: trace.is_some(),
            };
            let result = scenario::run(&sc, &opts).map_err(|e| e.to_string())?;
            let (format, ext) = match format {
                FormatArg::Csv => (Format::Csv, "csv"),
                FormatArg::Structured => (Format::Structured, "json"),
            };
            let text = scenario::report(&result.summary, format);
            let out = out.or_else(|| {
                std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{}-seed{seed}.{ext}", sc.name)))
            });
            match out {
                Some(path) => write_to(&path, &text)?,
                None => print!("{text}"),
            }
            if let (Some(path), Some(rows)) = (trace, result.trace) {
                let mut buf = Vec::new();
                scenario::write_trace(&rows, &mut buf).map_err(|e| e.to_string())?;
                write_to(&path, &String::from_utf8_lossy(&buf))?;
            }
            for c in result.summary.checks.iter().filter(|c| !c.satisfied) {
                eprintln!(
                    "check failed: {} (measured {} vs bound {})",
                    c.name.as_str(),
                    c.measured,
                    c.bound
                );
            }
            Ok(if result.summary.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::List => {
            for (name, text) in BUILTINS {
                let sc = Scenario::from_toml(text).map_err(|e| e.to_string())?;
                println!("{name:<20} {}", sc.description);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Show { name } => {
            let (_, text) = BUILTINS
                .iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| format!("no builtin scenario named `{name}`"))?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve {
            bind,
            index_count,
            hash_seed,
            backend,
            expiry_secs,
        } => {
            let cfg = EndpointConfig::from_env(bind, Duration::from_secs(expiry_secs));
            let server = Server::spawn(TableConfig::new(index_count, hash_seed), backend.backend(), cfg)
                .map_err(|e| e.to_string())?;
            eprintln!(
                "listening on {} (simulation mode {})",
                server.local_addr(),
                if server.simulation() { "on" } else { "off" }
            );
            server.join();
            Ok(ExitCode::SUCCESS)
        }
    }
}
