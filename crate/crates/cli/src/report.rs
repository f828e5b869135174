//! Output assembly. Every report starts with the tool version, the full flag
//! set and the input digest; nothing time- or host-dependent is written, so
//! reruns are byte-identical.

use std::fmt::Write as _;
use std::io::Write as _;

use serde_json::{json, Value};

use crate::args::{Command, Format};
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Context<'a> {
    pub command: &'a Command,
    pub format: Format,
    pub input_sha256: Option<String>,
    pub input_echo: Option<Value>,
}

impl Context<'_> {
    fn flags_json(&self) -> Value {
        serde_json::to_value(self.command.flags()).expect("flags serialize")
    }

    pub fn csv_header(&self) -> String {
        format!(
            "# betamix {VERSION}\n# command: {}\n# flags: {}\n# input-sha256: {}\n",
            self.command.name(),
            self.flags_json(),
            self.input_sha256.as_deref().unwrap_or("none"),
        )
    }

    /// `result` wrapped with the provenance fields.
    pub fn json_document(&self, result: Value) -> String {
        let doc = json!({
            "tool": "betamix",
            "version": VERSION,
            "command": self.command.name(),
            "flags": self.flags_json(),
            "input": self.input_echo.clone().unwrap_or(Value::Null),
            "input_sha256": self.input_sha256,
            "result": result,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
        s.push('\n');
        s
    }
}

/// Round-trip formatting: 17 significant digits.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

/// JSON number, with non-finite values as `null`.
pub fn jnum(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

pub struct Table {
    text: String,
}

impl Table {
    pub fn new(ctx: &Context<'_>, columns: &[&str]) -> Self {
        let mut text = ctx.csv_header();
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn emit(out: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
        }
    }
}
