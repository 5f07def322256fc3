use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use qpw_cli::commands::{self, render, CommandError, CommandResult};
use qpw_cli::server::{self, DEFAULT_PORT};
use qpw_cli::DEFAULT_JACOBIAN_TRUNCATION;
use qpw_core::field::FieldKind;
use qpw_core::json;
use qpw_core::witness::WitnessOptions;

#[derive(Parser)]
#[command(
    name = "qpw",
    version,
    about = "Quivers with potentials: mutation, Jacobian algebras, stability and witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a quiver at a vertex (1-based)
    Mutate {
        #[arg(short)]
        k: usize,
        quiver: PathBuf,
    },
    /// Classify the mutation class of a quiver
    Classify { quiver: PathBuf },
    /// Mutate a quiver with potential at a vertex (1-based)
    QpMutate {
        #[arg(short)]
        k: usize,
        qp: PathBuf,
    },
    /// Graded dimensions of the truncated Jacobian algebra
    Jacobian {
        qp: PathBuf,
        #[arg(long, default_value_t = DEFAULT_JACOBIAN_TRUNCATION)]
        trunc: usize,
    },
    /// King stability, brick and module checks for a representation
    Stable {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        theta: Vec<i64>,
        rep: PathBuf,
        qp: PathBuf,
    },
    /// Sampled E-invariants of 2-term presentations with a given g-vector
    Einv {
        qp: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        g: Vec<i64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_JACOBIAN_TRUNCATION)]
        trunc: usize,
    },
    /// Build and verify a stable-family witness certificate
    Witness {
        qp: PathBuf,
        #[arg(short, default_value_t = 5)]
        k: usize,
        /// Write the certificate here instead of stdout
        #[arg(short)]
        o: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        trunc: usize,
        #[arg(long, default_value_t = 3)]
        probe_depth: usize,
        #[arg(long, default_value_t = 4)]
        probe_trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Prime fields for evidence enumeration, e.g. F2,F3,F5
        #[arg(long, value_delimiter = ',')]
        fields: Option<Vec<FieldKind>>,
        #[arg(long)]
        evidence_cap: Option<usize>,
        /// Report pipeline stages on stderr
        #[arg(long)]
        progress: bool,
    },
    /// Re-check a witness certificate
    Verify { certificate: PathBuf },
    /// Run the HTTP service
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = "QPW_STATE_DIR")]
        state_dir: Option<PathBuf>,
    },
}

fn read(path: &Path) -> CommandResult<String> {
    fs::read_to_string(path).map_err(|e| CommandError::Io(format!("{}: {e}", path.display())))
}

fn read_value(path: &Path) -> CommandResult<Value> {
    Ok(json::parse_value(&read(path)?)?)
}

/// Returns the document to print and whether the run counts as a success.
fn run(command: Command) -> CommandResult<(Option<Value>, bool)> {
    let doc = match command {
        Command::Mutate { k, quiver } => commands::mutate(&commands::parse_quiver(&read(&quiver)?)?, k)?,
        Command::Classify { quiver } => commands::classify_doc(&commands::parse_quiver(&read(&quiver)?)?)?,
        Command::QpMutate { k, qp } => commands::qp_mutate(&commands::parse_qp(&read(&qp)?)?, k)?,
        Command::Jacobian { qp, trunc } => commands::jacobian(&commands::parse_qp(&read(&qp)?)?, trunc)?,
        Command::Stable { theta, rep, qp } => {
            commands::stable(&commands::parse_qp(&read(&qp)?)?, &read_value(&rep)?, &theta)?
        }
        Command::Einv { qp, g, samples, seed, trunc } => {
            commands::einv(&commands::parse_qp(&read(&qp)?)?, &g, samples, seed, trunc)?
        }
        Command::Witness { qp, k, o, trunc, probe_depth, probe_trials, seed, fields, evidence_cap, progress } => {
            let defaults = WitnessOptions::default();
            let opts = WitnessOptions {
                k,
                jacobian_truncation: trunc,
                probe_depth,
                probe_trials,
                probe_seed: seed,
                evidence_fields: fields.unwrap_or(defaults.evidence_fields),
                evidence_cap: evidence_cap.unwrap_or(defaults.evidence_cap),
            };
            let p = commands::parse_qp(&read(&qp)?)?;
            let mut report = |stage: &str| {
                if progress {
                    eprintln!("witness: {stage}");
                }
            };
            let cert = commands::witness(&p, &opts, &mut report)?;
            let ok = matches!(cert["status"].as_str(), Some("witness" | "dynkin-no-witness"));
            if let Some(path) = o {
                fs::write(&path, render(&cert)).map_err(|e| CommandError::Io(format!("{}: {e}", path.display())))?;
                let summary = serde_json::json!({
                    "status": cert["status"],
                    "digest": cert["digest"],
                    "output": path.display().to_string(),
                });
                return Ok((Some(summary), ok));
            }
            return Ok((Some(cert), ok));
        }
        Command::Verify { certificate } => {
            let report = commands::verify(&read_value(&certificate)?)?;
            let ok = report["ok"] == true;
            return Ok((Some(report), ok));
        }
        Command::Serve { port, host, state_dir } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| CommandError::Io(e.to_string()))?;
            rt.block_on(server::serve(&host, port, state_dir)).map_err(|e| CommandError::Io(e.to_string()))?;
            return Ok((None, true));
        }
    };
    Ok((Some(doc), true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((doc, ok)) => {
            if let Some(doc) = doc {
                print!("{}", render(&doc));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
