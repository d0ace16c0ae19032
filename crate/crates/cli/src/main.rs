//! `ppkit`: build fields, verify and construct permutation polynomials, run
//! counting censuses and reproduce the worked example families.
//!
//! Exit codes: 0 when the command's verdict holds, 1 when it does not (or a
//! falsification was found), 2 on usage, parse or precondition errors.

mod commands;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ppkit::{Error, Field, Result};
use serde_json::Value;

const DEFAULT_SEED: u64 = 0x5eed_0f5e_ed00;

#[derive(Parser, Debug)]
#[command(name = "ppkit", version, about = "Permutation polynomials over F_{q^n}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Characteristic of the field.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Degree of F_q over F_p (default 1).
    #[arg(long, global = true)]
    pub e: Option<u32>,
    /// Degree of F_{q^n} over F_q.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// JSON input file, or - for stdin.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Enumerate everything instead of sampling.
    #[arg(long, global = true)]
    pub exhaustive: bool,
    /// Indented output with element names in tables.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe the field F_{q^n} given by --p, --e, --n.
    Field,
    /// Structural checks on a table or polynomial (--input).
    Verify {
        /// Make "is k-to-1" the primary assertion.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Build a map from a parameter file (--input, optional).
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Random extensions tried by the sampled open-problem search.
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Compositional inverse of a table or polynomial (--input).
    Inverse,
    /// Compare counting formulas with exhaustive counts (q^n <= 16).
    Census {
        #[arg(long, value_enum, default_value_t = Claim::All)]
        claim: Claim,
    },
    /// Evaluate one of the catalogued example families.
    Reproduce {
        #[arg(long)]
        example: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Theorem12,
    Extend,
    OpenProblem,
    Linear,
    Monomial,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Linear,
    Theorem12,
    Extension,
    Shape,
    All,
}

/// What a command produced: the JSON body, whether its verdict holds, and
/// the field used (for element names).
pub struct Outcome {
    pub body: Value,
    pub ok: bool,
    pub field: Option<Field>,
}

impl Cli {
    /// The field from --p/--e/--n, if --p is given.
    pub fn field(&self) -> Result<Option<Field>> {
        match (self.p, self.n) {
            (None, None) if self.e.is_none() => Ok(None),
            (Some(p), Some(n)) => Field::new(p, self.e.unwrap_or(1), n).map(Some),
            _ => Err(Error::Precondition("--p and --n must be given together".into())),
        }
    }

    pub fn input(&self) -> Result<Option<Value>> {
        let Some(path) = &self.input else { return Ok(None) };
        let mut text = String::new();
        if path.as_os_str() == "-" {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(e.to_string()))?;
        } else {
            text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        }
        ppkit::serial::from_json(&text).map(Some)
    }
}

fn render(out: &Outcome, pretty: bool) -> String {
    if !pretty {
        return serde_json::to_string(&out.body).expect("JSON values serialize");
    }
    let mut body = out.body.clone();
    if let Some(field) = &out.field {
        name_tables(field, &mut body);
    }
    serde_json::to_string_pretty(&body).expect("JSON values serialize")
}

/// Replaces every {"codomain", "table"} array by element names.
fn name_tables(field: &Field, v: &mut Value) {
    match v {
        Value::Object(map) => {
            if map.contains_key("codomain") {
                if let Some(Value::Array(t)) = map.get_mut("table") {
                    for x in t.iter_mut() {
                        if let Some(i) = x.as_u64().filter(|&i| i < field.size() as u64) {
                            *x = Value::String(field.name(ppkit::Elem(i as u32)));
                        }
                    }
                }
            }
            for (_, child) in map.iter_mut() {
                name_tables(field, child);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|c| name_tables(field, c)),
        _ => {}
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let mut text = render(&out, cli.pretty);
            text.push('\n');
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text),
                None => match std::io::stdout().lock().write_all(text.as_bytes()) {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                    r => r,
                },
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
