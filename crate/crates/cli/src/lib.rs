//! Library side of the `rmc` command-line prover: argument model, request
//! dispatch, certificate re-verification and the acceptance suites.
//!
//! Every command reads a JSON payload (stdin or `--in`) and produces a
//! [`Response`]; the process exit code distinguishes a computed negative
//! verdict (2) from guard overflows (3), invalid input (4) and internal
//! failures (1).

pub mod commands;
pub mod suites;
pub mod verify;
pub mod wire;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rankmetric::code::{Guard, Strategy, DEFAULT_MAX_STEPS};
use rankmetric::moore::Method;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] rankmetric::Error),
    #[error("malformed request: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        use rankmetric::Error as E;
        match self {
            CliError::Core(E::GuardExceeded { .. } | E::FieldTooLarge { .. }) => Status::GuardExceeded,
            CliError::Core(E::Internal(_)) => Status::Internal,
            _ => Status::Invalid,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Invalid,
    GuardExceeded,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Response {
    pub command: String,
    pub status: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const PROPERTY_FALSE: i32 = 2;
    pub const GUARD: i32 = 3;
    pub const INVALID: i32 = 4;
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub response: Response,
    pub exit_code: i32,
}

/// What a command handler computed.
#[derive(Clone, Debug, Default)]
pub struct Reply {
    pub result: Value,
    pub certificate: Option<Value>,
    /// A negative verdict backed by a (re-verified) certificate.
    pub property_false: bool,
}

impl Reply {
    pub fn ok(result: Value) -> Self {
        Reply { result, certificate: None, property_false: false }
    }
}

/// Settings shared by all commands.
#[derive(Clone, Debug)]
pub struct Settings {
    pub guard: Guard,
    pub seed: u64,
}

#[derive(Debug, Parser)]
#[command(name = "rmc", version, about = "Exact prover for rank-metric codes and Moore polynomial sets")]
pub struct Cli {
    /// Read the request from this file instead of stdin.
    #[arg(long = "in", global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Write the response to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Maximum number of enumeration steps per sweep.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Omit `timing_ms` so that responses are byte-reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    Auto,
    Codewords,
    Subspaces,
}

impl From<SweepArg> for Strategy {
    fn from(s: SweepArg) -> Self {
        match s {
            SweepArg::Auto => Strategy::Auto,
            SweepArg::Codewords => Strategy::Codewords,
            SweepArg::Subspaces => Strategy::Subspaces,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Oracle,
    Mrd,
    Variety,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Mrd => Method::Mrd,
            MethodArg::Variety => Method::Variety,
        }
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Describe a field tower: orders, moduli, generator.
    FieldInfo,
    /// Evaluate a linearized polynomial at points.
    Eval,
    /// Compose two linearized polynomials modulo x^(q^n) - x.
    Compose,
    /// Decide whether a code is MRD.
    IsMrd {
        #[arg(long, value_enum, default_value_t = SweepArg::Auto)]
        strategy: SweepArg,
    },
    /// Exact minimum rank distance.
    MinDistance,
    /// Delsarte dual.
    Dual,
    /// Left and right idealisers.
    Idealisers,
    /// Apply the equivalence g ∘ C^ρ ∘ h.
    Transform,
    /// Lift a code to GF(q^(nm)), m taken from the field spec.
    Lift,
    /// MRD verdicts of the lifts for m = 1..=m_max.
    ExceptionalProbe {
        #[arg(long, default_value_t = 3)]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = SweepArg::Auto)]
        strategy: SweepArg,
    },
    /// Moore matrix and determinant at given points.
    MooreDet,
    /// Decide whether a tuple is a Moore polynomial set.
    IsMoore {
        #[arg(long, value_enum, default_value_t = MethodArg::Mrd)]
        method: MethodArg,
    },
    /// Least t with x^(q^t) in the code.
    Index,
    /// Normalized basis and the conditions it meets.
    Normalize,
    /// Arithmetic-progression test on exponents.
    IsAp,
    /// Hypersurfaces and curves attached to a polynomial set.
    Variety {
        #[command(subcommand)]
        op: VarietyOp,
    },
    /// Construct a member of a known family.
    Family {
        /// G, T, Ps, LP or row3 ... row14.
        id: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        s: Option<i64>,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        /// Also decide the Moore/MRD property (and the dual relation for
        /// dual rows).
        #[arg(long)]
        check: bool,
    },
    /// Invariants for equivalence screening.
    Fingerprint,
    /// Run a named acceptance suite.
    Suite { name: String },
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum VarietyOp {
    /// F, V and W for a polynomial set.
    Build,
    /// Divide a polynomial by V.
    Divide,
    /// Points of W off V.
    Points,
    /// Points at infinity of a plane curve.
    Infinity,
    /// Affine singular points of a plane curve.
    Singular,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::FieldInfo => "field-info".into(),
            Command::Eval => "eval".into(),
            Command::Compose => "compose".into(),
            Command::IsMrd { .. } => "is-mrd".into(),
            Command::MinDistance => "min-distance".into(),
            Command::Dual => "dual".into(),
            Command::Idealisers => "idealisers".into(),
            Command::Transform => "transform".into(),
            Command::Lift => "lift".into(),
            Command::ExceptionalProbe { .. } => "exceptional-probe".into(),
            Command::MooreDet => "moore-det".into(),
            Command::IsMoore { .. } => "is-moore".into(),
            Command::Index => "index".into(),
            Command::Normalize => "normalize".into(),
            Command::IsAp => "is-ap".into(),
            Command::Variety { op } => format!("variety {}", format!("{op:?}").to_lowercase()),
            Command::Family { .. } => "family".into(),
            Command::Fingerprint => "fingerprint".into(),
            Command::Suite { .. } => "suite".into(),
        }
    }

    /// Whether the command reads a JSON payload.
    pub fn needs_input(&self) -> bool {
        !matches!(self, Command::Family { .. } | Command::Suite { .. })
    }
}

/// Runs one command on the given JSON payload; never panics on user input.
pub fn run(command: &Command, input: &str, settings: &Settings, timing: bool) -> Outcome {
    let start = Instant::now();
    let outcome = commands::dispatch(command, input, settings);
    let elapsed = timing.then(|| start.elapsed().as_millis() as u64);
    let name = command.name();
    match outcome {
        Ok(reply) => Outcome {
            exit_code: if reply.property_false { exit::PROPERTY_FALSE } else { exit::OK },
            response: Response {
                command: name,
                status: Status::Ok,
                result: reply.result,
                certificate: reply.certificate,
                error: None,
                timing_ms: elapsed,
            },
        },
        Err(e) => {
            let status = e.status();
            Outcome {
                exit_code: match status {
                    Status::Ok => exit::OK,
                    Status::GuardExceeded => exit::GUARD,
                    Status::Invalid => exit::INVALID,
                    Status::Internal => exit::INTERNAL,
                },
                response: Response {
                    command: name,
                    status,
                    result: Value::Null,
                    certificate: None,
                    error: Some(e.to_string()),
                    timing_ms: elapsed,
                },
            }
        }
    }
}
