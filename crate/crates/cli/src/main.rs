use clap::{Parser, Subcommand};
use hypsteklov::mesh::export_mesh;
use hypsteklov_cli::{parse_plan, point_mesh, run_experiment, validate_config, Plan, RunOptions};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hypsteklov", version, about = "Steklov spectra of hyperbolic surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every sweep point of a config and write CSV reports.
    Run {
        config: PathBuf,
        /// Sweep points evaluated concurrently.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// Write the mesh of one sweep point in the text mesh format.
    ExportMesh {
        config: PathBuf,
        /// Point name (`p00`) or index.
        point: String,
        /// Refinement level; defaults to the finest configured level.
        #[arg(long)]
        level: Option<u32>,
        /// Destination file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Plan, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    parse_plan(&text).map_err(|diags| {
        for d in diags {
            eprintln!("{}: {d}", path.display());
        }
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, workers, out } => {
            let plan = match load(&config) {
                Ok(p) => p,
                Err(code) => return code,
            };
            match run_experiment(&plan, &RunOptions { workers, out }) {
                Ok(outcome) => {
                    for f in &outcome.failures {
                        eprintln!("assertion failed: {f}");
                    }
                    for e in &outcome.errors {
                        eprintln!("error: {e}");
                    }
                    println!("wrote {}", outcome.directory.display());
                    ExitCode::from(outcome.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(if matches!(e, hypsteklov_cli::RunError::Gate(_)) { 1 } else { 2 })
                }
            }
        }
        Command::Validate { config } => match validate_config(&config) {
            Ok(diags) if diags.is_empty() => {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            }
            Ok(diags) => {
                for d in diags {
                    println!("{}: {d}", config.display());
                }
                ExitCode::from(1)
            }
            Err(e) => {
                eprintln!("cannot read {}: {e}", config.display());
                ExitCode::from(2)
            }
        },
        Command::ExportMesh { config, point, level, out } => {
            let plan = match load(&config) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let found = plan
                .points
                .iter()
                .find(|p| p.name() == point || p.index.to_string() == point);
            let Some(p) = found else {
                eprintln!("config has no point {point}");
                return ExitCode::from(2);
            };
            let mesh = match point_mesh(&plan, p, level.unwrap_or(plan.refinements)) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let text = export_mesh(&mesh);
            match out {
                Some(path) => {
                    if let Err(e) = hypsteklov_cli::run::write_atomic(&path, text.as_bytes()) {
                        eprintln!("{e}");
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
    }
}
