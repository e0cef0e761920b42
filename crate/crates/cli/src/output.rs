use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::failure::{CliError, CliResult};
use crate::OutputArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Output {
    pub format: Format,
    path: Option<PathBuf>,
}

impl From<&OutputArgs> for Output {
    fn from(args: &OutputArgs) -> Self {
        Output { format: args.format, path: args.out.clone() }
    }
}

impl Output {
    pub fn write_text(&self, text: &str) -> CliResult<()> {
        match &self.path {
            Some(path) => write_file(path, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::io("stdout", e))
            }
        }
    }

    pub fn write_json<T: Serialize>(&self, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Io(format!("cannot serialize output: {e}")))?;
        text.push('\n');
        self.write_text(&text)
    }

    /// One object: pretty JSON, or a header line plus one CSV row.
    pub fn write_record<T: Serialize>(&self, value: &T) -> CliResult<()> {
        match self.format {
            Format::Json => self.write_json(value),
            Format::Csv => self.write_text(&csv_rows(std::slice::from_ref(value))?),
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Flatten each serialized row (nested fields as `outer.inner`) into CSV.
pub fn csv_rows<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut text = String::new();
    for (i, row) in rows.iter().enumerate() {
        let value = serde_json::to_value(row)
            .map_err(|e| CliError::Io(format!("cannot serialize output: {e}")))?;
        let mut cells = Vec::new();
        flatten("", &value, &mut cells);
        if i == 0 {
            let header: Vec<String> = cells.iter().map(|(k, _)| csv_field(k)).collect();
            text.push_str(&header.join(","));
            text.push('\n');
        }
        let line: Vec<String> = cells.iter().map(|(_, v)| csv_field(v)).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    Ok(text)
}
