//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 conversion failure,
//! 3 I/O failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::convert::Converter;
use crate::error::{Error, Result};
use crate::io::{load_model_with_tol, read_model, render_document, write_atomic, ModelDocument};
use crate::kinematics::ForwardKinematics;
use crate::model::{Model, Representation, Validate};
use crate::se3::{Transform, VALIDITY_TOL};
use crate::urdf::export_urdf;

#[derive(Parser, Debug)]
#[command(
    name = "kinconv",
    version,
    about = "Convert robot kinematic models between representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Dh,
    Poe,
    Rpyxyz,
    Gjd,
    Urdf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a model document to another representation
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = VALIDITY_TOL)]
        tol: f64,
        /// Model name for the output (defaults to the input name)
        #[arg(long)]
        name: Option<String>,
    },
    /// Print the end-effector pose for a joint vector
    Fk {
        input: PathBuf,
        /// Comma-separated joint values, e.g. `--q 0.1,-0.2,0.3`
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        q: String,
        #[arg(long, default_value_t = VALIDITY_TOL)]
        tol: f64,
    },
    /// Check a model document and list every problem found
    Validate {
        input: PathBuf,
        #[arg(long, default_value_t = VALIDITY_TOL)]
        tol: f64,
    },
    /// Write a URDF file for a model
    ExportUrdf {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => 3,
        Error::NotIntersecting | Error::NoUniqueNormal(_) | Error::Conversion(_) => 2,
        Error::InvalidScrew(_) | Error::JointCountMismatch { .. } | Error::Invalid(_) | Error::Parse(_) => 1,
    }
}

/// Formats like C's `%.{digits}g`.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_matrix(t: &Transform) -> String {
    let m = t.to_row_major();
    let mut out = String::new();
    for row in m.chunks(4) {
        let cells: Vec<String> = row.iter().map(|&v| format_significant(v, 9)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn parse_q(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("--q: `{}` is not a number", part.trim())))
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn urdf_text(model: &Model, name: &str, tol: f64) -> Result<String> {
    let rpy = match Converter::new(tol).convert(model, Representation::RpyXyz)? {
        Model::RpyXyz(m) => m,
        _ => unreachable!("conversion returns the requested representation"),
    };
    Ok(export_urdf(&rpy, name)?.xml)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Convert {
            input,
            to,
            out,
            tol,
            name,
        } => {
            let doc = load_model_with_tol(&input, tol)?;
            let name = name.unwrap_or(doc.name);
            let text = match to {
                Target::Urdf => urdf_text(&doc.model, &name, tol)?,
                other => {
                    let target = match other {
                        Target::Dh => Representation::Dh,
                        Target::Poe => Representation::Poe,
                        Target::Rpyxyz => Representation::RpyXyz,
                        _ => Representation::Gjd,
                    };
                    let model = Converter::new(tol).convert(&doc.model, target)?;
                    render_document(&ModelDocument { name, model })
                }
            };
            emit(out.as_deref(), &text)
        }
        Command::Fk { input, q, tol } => {
            let doc = load_model_with_tol(&input, tol)?;
            let q = parse_q(&q)?;
            let t = doc.model.forward(&q)?;
            print!("{}", format_matrix(&t));
            Ok(())
        }
        Command::Validate { input, tol } => {
            let doc = read_model(&input)?;
            let diagnostics = doc.model.validate(tol);
            if diagnostics.is_empty() {
                println!(
                    "ok: {} model with {} joints",
                    doc.model.representation(),
                    doc.model.joint_count()
                );
                Ok(())
            } else {
                Err(Error::Invalid(diagnostics))
            }
        }
        Command::ExportUrdf { input, out, name } => {
            let doc = load_model_with_tol(&input, VALIDITY_TOL)?;
            let name = name.unwrap_or(doc.name);
            let text = urdf_text(&doc.model, &name, VALIDITY_TOL)?;
            emit(out.as_deref(), &text)
        }
    }
}

/// Runs the tool and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Error::Invalid(diagnostics)) => {
            for d in &diagnostics {
                eprintln!("error: {d}");
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
