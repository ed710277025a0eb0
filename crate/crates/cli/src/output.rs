use opuc_core::io::{format_f64, to_json_string};
use opuc_core::Error;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use crate::{Format, OutputArgs};

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// A failed invocation: exit code plus the error object written to stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure {
            code: EXIT_INVALID,
            kind: "Usage".into(),
            message,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Failure {
            code: EXIT_INVALID,
            kind: "Io".into(),
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn report(&self) -> ExitCode {
        let body = json!({"error": {"kind": self.kind, "message": self.message, "exit_code": self.code}});
        eprintln!("{}", to_json_string(&body));
        ExitCode::from(self.code)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID },
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

/// Rows of floats and integers, serialized with a fixed header.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
}

pub enum Cell {
    Int(usize),
    Float(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            text: format!("{}\n", header.join(",")),
        }
    }

    pub fn row<const N: usize>(&mut self, cells: [Cell; N]) {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            match cell {
                Cell::Int(v) => write!(self.text, "{v}").unwrap(),
                Cell::Float(v) if v.is_finite() => self.text.push_str(&format_f64(*v)),
                Cell::Float(_) => self.text.push_str("nan"),
            }
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// `{"command", "result", "metadata"}`; the payload is everything but
/// `metadata`, which alone carries the tool version.
pub fn envelope(command: &str, result: Value) -> Value {
    json!({
        "command": command,
        "result": result,
        "metadata": {"tool": "opuc", "version": env!("CARGO_PKG_VERSION")},
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))
}

/// Emit the JSON report and/or CSV table according to `--format`/`--out`.
pub fn emit(command: &str, args: &OutputArgs, result: Value, csv: Option<Csv>) -> Result<(), Failure> {
    let text = to_json_string(&envelope(command, result)) + "\n";
    let want_json = args.format != Format::Csv;
    let want_csv = args.format != Format::Json;
    if want_csv && csv.is_none() {
        return Err(Failure::usage(format!("{command} has no CSV output")));
    }
    match &args.out {
        Some(dir) => {
            ensure_dir(dir)?;
            if want_json {
                write_file(&dir.join(format!("{command}.json")), &text)?;
            }
            if let (true, Some(csv)) = (want_csv, &csv) {
                write_file(&dir.join(format!("{command}.csv")), csv.as_str())?;
            }
        }
        None if args.format == Format::Both => {
            return Err(Failure::usage("--format both needs --out".into()));
        }
        None if want_json => print!("{text}"),
        None => print!("{}", csv.expect("checked above").as_str()),
    }
    Ok(())
}

/// Create `dir` and return the path of `name` inside it.
pub fn in_dir(dir: &Path, name: &str) -> Result<PathBuf, Failure> {
    ensure_dir(dir)?;
    Ok(dir.join(name))
}
