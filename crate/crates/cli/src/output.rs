use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ipsforge_core::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Everything that determines a run. Embedded in every emitted artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub budget: ipsforge_core::lowerbounds::Budget,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
}

impl RunConfig {
    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.set(key, value);
        self
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, message: String },
    Usage(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "io_error",
            CliError::Usage(_) => "usage",
            CliError::Internal(_) => "internal",
        }
    }

    /// 1 usage or parse, 2 mathematically expected failure, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_mathematical() => 2,
            CliError::Core(Error::Internal(_) | Error::ZeroInverse | Error::ZeroPolynomial) => 3,
            CliError::Internal(_) => 3,
            _ => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io { path, message } => format!("{}: {message}", path.display()),
            CliError::Usage(m) | CliError::Internal(m) => m.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::json!({
            "error": self.code(),
            "message": self.message(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Core(Error::Parse { line, column, .. }) = self {
            v["line"] = Value::from(*line);
            v["column"] = Value::from(*column);
        }
        v
    }
}

/// A finished command: its report and the exit code it asks for.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome { report, exit_code: 0 }
    }
}

/// Pretty JSON, an indented text listing, or with `canonical` compact JSON.
pub fn render(value: &Value, format: Format, canonical: bool) -> String {
    if canonical {
        return format!("{value}\n");
    }
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            text(value, 0, &mut s);
            s
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) && a.len() <= 8 => Some(
            a.iter()
                .map(|x| scalar(x).unwrap_or_default())
                .collect::<Vec<_>>()
                .join(", "),
        ),
        _ => None,
    }
}

fn text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text(v, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                match scalar(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}[{i}] {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}[{i}]");
                        text(v, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

pub fn write_output(rendered: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    message: e.to_string(),
                })
        }
    }
}

/// Reads a JSON file, reporting syntax errors with their line and column.
pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Core(Error::Parse {
            line: e.line(),
            column: e.column(),
            message: format!("{}: {e}", path.display()),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_kind() {
        assert_eq!(CliError::from(Error::SatisfiableInstance).exit_code(), 2);
        assert_eq!(CliError::from(Error::FieldMismatch("x".into())).exit_code(), 1);
        assert_eq!(CliError::from(Error::Internal("x".into())).exit_code(), 3);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let v = CliError::from(Error::NoCertificateAtDegree { bound: "2".into() }).to_json();
        assert_eq!(v["error"], "no_certificate_at_degree");
    }

    #[test]
    fn text_rendering_nests() {
        let v = serde_json::json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": true}]});
        let s = render(&v, Format::Text, false);
        assert_eq!(s, "a: 1\nb:\n  c: 1, 2\nd:\n  [0]\n    e: true\n");
        assert_eq!(render(&v, Format::Json, true).lines().count(), 1);
    }
}
