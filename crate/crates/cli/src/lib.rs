//! The `fieldunits` command line: argument definitions and dispatch.
//!
//! Every command produces a [`Report`]; `run` renders it as text or as a
//! single JSON document and maps failures to exit codes (1 for domain
//! errors and failed checks, 2 for malformed input).

mod commands;
pub mod selftest;

use clap::{Parser, Subcommand};
use fieldunits::gf::FieldSpec;
use fieldunits::Error;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "fieldunits", version, about = "Exact arithmetic for unit groups of fields")]
pub struct Cli {
    /// Coefficient field, `GF(p)` or `GF(p^n)`.
    #[arg(long, global = true, default_value = "GF(2)")]
    pub field: String,

    /// Seed for every randomized subroutine.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Upper bound for `classify-scan`.
    #[arg(long, global = true)]
    pub bound: Option<u64>,

    /// Number of terms for Hahn series inverses.
    #[arg(long, global = true, default_value_t = 8)]
    pub terms: usize,

    /// Extension descriptor, e.g. `GF(2)(t)[y]/(y^2+y+t)`.
    #[arg(long, global = true)]
    pub ext: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the unit group of GF(q) is indecomposable.
    Classify { q: u64 },
    /// List every q up to --bound (default 10^6) with indecomposable GF(q)^×.
    ClassifyScan {
        /// Check every prime power instead of only the 2^k and 2^k+1 candidates.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Factor a polynomial in x over --field.
    Factor {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Decompose a rational function in x into constant times irreducible powers.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Rank of the multiplicative group generated by rational functions.
    Rank {
        #[arg(allow_hyphen_values = true, required = true)]
        elems: Vec<String>,
    },
    /// The p-adic valuation of a rational number.
    Padic {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Valuation, unit split and inverse of a Hahn series (and sum/product with a second one).
    Hahn {
        /// Value group: Z, Z^k or Z[1/2].
        #[arg(long, default_value = "Z")]
        group: String,
        #[arg(allow_hyphen_values = true)]
        series: String,
        #[arg(allow_hyphen_values = true)]
        other: Option<String>,
    },
    /// Level, Frobenius images and decomposition of an element of the perfect closure of GF(2)(t).
    Pc {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Norm of an element of the extension given by --ext.
    Norm {
        #[arg(allow_hyphen_values = true)]
        elem: String,
    },
    /// Sample-check the valuation axioms for a probe:
    /// padic:P, poly:F (F irreducible over --field), degree, hahn:G.
    Axioms {
        probe: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Run the oracle cross-checks.
    Selftest {
        /// Scale factor for the sample counts.
        #[arg(long, default_value_t = 1)]
        scale: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::ClassifyScan { .. } => "classify-scan",
            Command::Factor { .. } => "factor",
            Command::Decompose { .. } => "decompose",
            Command::Rank { .. } => "rank",
            Command::Padic { .. } => "padic",
            Command::Hahn { .. } => "hahn",
            Command::Pc { .. } => "pc",
            Command::Norm { .. } => "norm",
            Command::Axioms { .. } => "axioms",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// The result of one command: structured data plus its text rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub json: Value,
    pub text: String,
    /// False when a check ran to completion but did not pass.
    pub ok: bool,
}

impl Report {
    fn new(command: &'static str, json: Value, text: impl Into<String>) -> Self {
        Self { command, json, text: text.into(), ok: true }
    }
}

/// What `main` should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

pub(crate) fn field_of(cli: &Cli) -> fieldunits::Result<FieldSpec> {
    cli.field.parse()
}

pub fn execute(cli: &Cli) -> fieldunits::Result<Report> {
    commands::dispatch(cli)
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(report) => {
            let code = if report.ok { EXIT_OK } else { EXIT_DOMAIN };
            let stdout = if cli.json { report.json.to_string() } else { report.text };
            Outcome { stdout, stderr: None, code }
        }
        Err(e) => {
            let (kind, code) = if e.is_parse() { ("parse", EXIT_USAGE) } else { ("domain", EXIT_DOMAIN) };
            if cli.json {
                let doc = json!({"error": {"kind": kind, "message": e.to_string()}});
                Outcome { stdout: doc.to_string(), stderr: None, code }
            } else {
                Outcome { stdout: String::new(), stderr: Some(format!("error: {e}")), code }
            }
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}
