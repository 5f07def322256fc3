//! Command implementations. Every command returns a JSON document; the CLI
//! prints it and the HTTP service sends it, both through [`render`].

use serde_json::{json, Value};
use thiserror::Error;

use qpw_core::classify::{classify, ClassifyError};
use qpw_core::einv::{rigid_tame_probe, EinvError};
use qpw_core::jacobian::{JacobianError, TruncatedAlgebra};
use qpw_core::json::{self, JsonError};
use qpw_core::qp::{QpError, QuiverWithPotential};
use qpw_core::rep::{check_module, is_brick, RepError};
use qpw_core::stability::{is_semistable, is_stable, pairing};
use qpw_core::witness::{run_witness_with_progress, verify_certificate, WitnessError, WitnessOptions};
use qpw_core::{Quiver, QuiverError};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    /// Unparseable or schema-violating input document.
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("vertex {vertex} lies on a 2-cycle")]
    TwoCycle { vertex: usize },
    #[error("{message}")]
    Domain { reason: &'static str, message: String },
    #[error("{0}")]
    Io(String),
}

pub type CommandResult<T> = Result<T, CommandError>;

impl CommandError {
    fn domain(reason: &'static str, e: impl ToString) -> Self {
        CommandError::Domain { reason, message: e.to_string() }
    }

    /// Process exit status: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Machine-readable reason, used in HTTP error bodies.
    pub fn reason(&self) -> &'static str {
        match self {
            CommandError::Usage(_) => "usage",
            CommandError::Malformed(_) => "malformed-input",
            CommandError::TwoCycle { .. } => "two-cycle",
            CommandError::Domain { reason, .. } => reason,
            CommandError::Io(_) => "io",
        }
    }
}

impl From<JsonError> for CommandError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Syntax(_) | JsonError::Schema(_) => CommandError::Malformed(e.to_string()),
            other => CommandError::domain("invalid-input", other),
        }
    }
}

impl From<QuiverError> for CommandError {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::VertexOutOfRange(..) => CommandError::domain("vertex-out-of-range", e),
            _ => CommandError::domain("quiver", e),
        }
    }
}

impl From<QpError> for CommandError {
    fn from(e: QpError) -> Self {
        match e {
            QpError::TwoCycleAtVertex(k) => CommandError::TwoCycle { vertex: k + 1 },
            QpError::Quiver(q) => q.into(),
            other => CommandError::domain("potential", other),
        }
    }
}

impl From<ClassifyError> for CommandError {
    fn from(e: ClassifyError) -> Self {
        CommandError::domain("classify", e)
    }
}

impl From<JacobianError> for CommandError {
    fn from(e: JacobianError) -> Self {
        CommandError::domain("jacobian", e)
    }
}

impl From<RepError> for CommandError {
    fn from(e: RepError) -> Self {
        CommandError::domain("representation", e)
    }
}

impl From<EinvError> for CommandError {
    fn from(e: EinvError) -> Self {
        CommandError::domain("e-invariant", e)
    }
}

impl From<WitnessError> for CommandError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::Json(j) => j.into(),
            WitnessError::BadParameters(_) => CommandError::Usage(e.to_string()),
            other => CommandError::domain("witness", other),
        }
    }
}

/// The single serialization used for every output document.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse_quiver(text: &str) -> CommandResult<Quiver> {
    Ok(json::quiver_from_value(&json::parse_value(text)?)?)
}

pub fn parse_qp(text: &str) -> CommandResult<QuiverWithPotential> {
    Ok(json::qp_from_value(&json::parse_value(text)?)?)
}

/// 1-based vertex from the command line or a request body.
pub fn vertex(k: usize, n: usize) -> CommandResult<usize> {
    if k == 0 || k > n {
        return Err(CommandError::domain("vertex-out-of-range", format!("vertex {k} out of range 1..={n}")));
    }
    Ok(k - 1)
}

pub fn mutate(q: &Quiver, k: usize) -> CommandResult<Value> {
    let k = vertex(k, q.n())?;
    match q.mutate(k) {
        Ok(m) => Ok(json::quiver_to_value(&m)),
        Err(QuiverError::TwoCycle(..)) => Err(CommandError::TwoCycle { vertex: k + 1 }),
        Err(e) => Err(e.into()),
    }
}

pub fn classify_doc(q: &Quiver) -> CommandResult<Value> {
    let c = classify(q)?;
    let sequence = c.witness.as_ref().map(|(seq, _)| seq.iter().map(|k| k + 1).collect::<Vec<_>>());
    Ok(json!({
        "type": c.mutation_type.to_string(),
        "witnessSequence": sequence,
        "visited": c.visited,
    }))
}

pub fn qp_mutate(p: &QuiverWithPotential, k: usize) -> CommandResult<Value> {
    let k = vertex(k, p.quiver().n())?;
    Ok(json::qp_to_value(&qpw_core::reduce::qp_mutate(p, k)?))
}

pub fn jacobian(p: &QuiverWithPotential, truncation: usize) -> CommandResult<Value> {
    let alg = TruncatedAlgebra::new(p, truncation)?;
    let cert = alg.certificate();
    Ok(json!({
        "gradedDims": alg.graded_dims(),
        "status": cert.status.to_string(),
        "dim": cert.total_dim(),
        "vanishingDegree": cert.vanishing_degree,
    }))
}

pub fn stable(p: &QuiverWithPotential, rep: &Value, theta: &[i64]) -> CommandResult<Value> {
    let q = p.quiver();
    let m = json::rep_from_value(rep, q)?;
    if theta.len() != q.n() {
        return Err(CommandError::Usage(format!("θ needs {} entries, got {}", q.n(), theta.len())));
    }
    Ok(json!({
        "dims": m.dims(),
        "pairing": pairing(theta, m.dims())?,
        "module": check_module(p, &m)?,
        "semistable": is_semistable(q, &m, theta)?,
        "stable": is_stable(q, &m, theta)?,
        "brick": is_brick(q, &m)?,
    }))
}

pub fn einv(p: &QuiverWithPotential, g: &[i64], samples: usize, seed: u64, truncation: usize) -> CommandResult<Value> {
    if g.len() != p.quiver().n() {
        return Err(CommandError::Usage(format!("g needs {} entries, got {}", p.quiver().n(), g.len())));
    }
    let alg = TruncatedAlgebra::new(p, truncation)?;
    Ok(json::to_value(&rigid_tame_probe(&alg, g, samples, seed)?))
}

pub fn witness(p: &QuiverWithPotential, opts: &WitnessOptions, progress: &mut dyn FnMut(&str)) -> CommandResult<Value> {
    Ok(run_witness_with_progress(p, opts, progress)?)
}

pub fn verify(cert: &Value) -> CommandResult<Value> {
    Ok(json::to_value(&verify_certificate(cert)?))
}
