//! `nilk`: batch front end for the certificate generators and checkers.
//!
//! Exit status: 0 when the check passes or the certificate is produced, 1
//! when a check fails, 2 on unreadable input or bad usage.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use input::{parse_ring_flag, CliError};

#[derive(Parser, Debug)]
#[command(name = "nilk", version, about = "Exact certificates for Nil categories and binary multicomplexes")]
struct Cli {
    /// Coefficient ring: Z, Q or F<p> such as F5. Overrides nothing; input
    /// files that name a ring must agree with it.
    #[arg(long, global = true, value_parser = parse_ring_flag)]
    ring: Option<nilk::ring_core::RingDescriptor>,

    /// Print the full report as a single JSON document.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form of {"matrix": ...}.
    Snf { input: PathBuf },
    /// Acyclicity witness for {"complex": ...}.
    CheckComplex { input: PathBuf },
    /// Validate and check every line of {"multicomplex": ...}.
    CheckBinary {
        input: PathBuf,
        /// Require the support to fit in [0,2]^n.
        #[arg(long = "window-02")]
        window_02: bool,
    },
    /// Vanishing certificate for {"object": {"rank", "nu"}}.
    NilVanish {
        input: PathBuf,
        /// Write the self-contained certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file written by nil-vanish.
    NilVerify { input: PathBuf },
    /// Register {"object": ...} in a ledger file, creating it if needed.
    LedgerAdd {
        ledger: PathBuf,
        object: PathBuf,
        /// Dimension of a new ledger; defaults to the object's.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Verify and record {"side", "witness"}.
    LedgerRelate { ledger: PathBuf, witness: PathBuf },
    /// Decide {"side", "lhs", "rhs"} modulo the recorded relations.
    LedgerEqual {
        ledger: PathBuf,
        query: PathBuf,
        #[arg(long = "mod-diagonal")]
        mod_diagonal: bool,
    },
    /// Normalize {"x", "witness"} in the Nil ledger.
    Normalize {
        ledger: PathBuf,
        query: PathBuf,
        #[arg(long = "window-02")]
        window_02: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Snf { .. } => "snf",
            Command::CheckComplex { .. } => "check-complex",
            Command::CheckBinary { .. } => "check-binary",
            Command::NilVanish { .. } => "nil-vanish",
            Command::NilVerify { .. } => "nil-verify",
            Command::LedgerAdd { .. } => "ledger-add",
            Command::LedgerRelate { .. } => "ledger-relate",
            Command::LedgerEqual { .. } => "ledger-equal",
            Command::Normalize { .. } => "normalize",
        }
    }
}

/// Outcome of a command that ran to completion.
pub struct Report {
    pub pass: bool,
    pub body: serde_json::Map<String, Value>,
    pub summary: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match commands::run(&cli) {
        Ok(report) => {
            let status = if report.pass { "pass" } else { "fail" };
            if cli.json {
                let mut doc = serde_json::Map::new();
                doc.insert("command".into(), json!(name));
                doc.insert("status".into(), json!(status));
                doc.extend(report.body);
                println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable"));
            } else {
                println!("{name}: {status}");
                for line in &report.summary {
                    println!("  {line}");
                }
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(CliError(msg)) => {
            if cli.json {
                let doc = json!({"command": name, "status": "error", "error": msg});
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            eprintln!("nilk {name}: {msg}");
            ExitCode::from(2)
        }
    }
}
