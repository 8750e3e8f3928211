//! `wopkit`: command-line front end. Payloads are JSON objects given inline
//! (`--json`) or from a file (`--input`, `-` for stdin); results are JSON
//! with sorted keys, or a plain table with `--format table`.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "wopkit", version, about = "Exact computations for weighted orbital integrals on gl_n")]
struct Cli {
    #[command(flatten)]
    io: Io,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
pub struct Io {
    /// Inline JSON payload.
    #[arg(long, global = true, conflicts_with = "input")]
    json: Option<String>,
    /// Payload file, or `-` for stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Check {
    Limit,
    Homogeneity,
    Descent,
}

#[derive(Subcommand)]
enum Cmd {
    /// Induced class from a Levi: {"levi" | "sizes", "orbits"?, "p"?}
    Induce,
    /// Standard representative: {"orbit"}
    StandardRep,
    /// Generalized Richardson parabolics, Levis and epsilon tables: {"orbit"}
    Richardson,
    /// (Ad w_Q^{-1}) Q for Q containing M_R: {"orbit", "q", "m_r"?}
    LsMap,
    /// The twist w_Q: {"orbit", "q", "m_r"?}
    Wp,
    /// H_P(g): {"g", "parabolic", "p"}
    Hp,
    /// R_P(g) = H_P(w_P g): {"orbit", "parabolic", "g", "m_r"?}
    Rp,
    /// v_{L,X}^Q(g) and the family -R_P(g): {"orbit", "g", "levi"?, "q"?, "m_r"?}
    Weight,
    /// n_box(A, Y, V): {"a", "y", "v", "pbox"}
    Nsquare,
    /// rho(alpha, Y) by the slope probe: {"levi", "p", "y"?, "alpha"?, "depth"?}
    Rho,
    /// Both sides of the weight comparison: {"orbit", "pbox", "v", "k"?, "depth"?}
    CompareWeights,
    /// GL_2 orbital integrals of the characteristic function of gl_2(Z_p)
    EvalGl2(EvalArgs),
    /// Run the invariant suites
    Selftest(SelftestArgs),
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// `diag:a,b`, `nil:a` (a plus a regular nilpotent) or orbit JSON.
    #[arg(long, default_value = "nil:0")]
    pub orbit: String,
    /// Defaults to $WOPKIT_DEPTH, then 12.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Weight by v_T^G (otherwise unweighted).
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, value_enum)]
    pub check: Option<Check>,
    /// Scaling parameter of the homogeneity check.
    #[arg(long, default_value = "1")]
    pub t: String,
}

#[derive(Args)]
pub struct SelftestArgs {
    #[arg(long, default_value = "quick", value_parser = ["quick", "full"])]
    pub level: String,
    /// Run a single suite.
    #[arg(long)]
    pub suite: Option<String>,
    /// Include wall-clock times (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

/// A failure reported as `{"error": {"kind", "message"}}`.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl ToString) -> Self {
        CliError { kind, message: message.to_string() }
    }
}

/// Result value plus whether the command's own verdict was positive.
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    use commands::*;
    let io = &cli.io;
    match &cli.cmd {
        Cmd::Induce => induce(&payload(io)?),
        Cmd::StandardRep => standard_rep(&payload(io)?),
        Cmd::Richardson => richardson(&payload(io)?),
        Cmd::LsMap => ls_map(&payload(io)?, true),
        Cmd::Wp => ls_map(&payload(io)?, false),
        Cmd::Hp => hp(&payload(io)?),
        Cmd::Rp => rp(&payload(io)?),
        Cmd::Weight => weight(&payload(io)?),
        Cmd::Nsquare => nsquare(&payload(io)?),
        Cmd::Rho => rho(&payload(io)?),
        Cmd::CompareWeights => compare(&payload(io)?),
        Cmd::EvalGl2(a) => eval_gl2(a),
        Cmd::Selftest(a) => selftest(a),
    }
}

fn payload(io: &Io) -> Result<Value, CliError> {
    let text = match (&io.json, &io.input) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) if path == "-" => {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::new("io", e))?;
            s
        }
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{path}: {e}")))?,
        (None, None) => return Err(CliError::new("schema", "a payload is required (--json or --input)")),
    };
    serde_json::from_str(&text).map_err(|e| CliError::new("schema", e))
}

fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).unwrap()),
        Format::Table => print!("{}", render::table(v)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            emit(&out.value, cli.io.format);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&json!({ "error": { "kind": e.kind, "message": e.message } }), cli.io.format);
            ExitCode::from(1)
        }
    }
}
