//! Tables and reports on disk. Every file carries a metadata block; CSV
//! files put it in leading `# key: value` lines. Writes go to a temporary
//! file in the target directory which is then renamed into place.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub const TOOL: &str = concat!("dualent ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone)]
pub struct Meta {
    pub command_line: String,
    pub seed: u64,
    pub norm: String,
    extra: Vec<(String, String)>,
}

impl Meta {
    pub fn new(seed: u64, norm: impl Into<String>) -> Self {
        Meta { command_line: command_line(), seed, norm: norm.into(), extra: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.set(key, value);
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.extra.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.extra.push((key.to_string(), value)),
        }
    }

    fn pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("command_line".to_string(), self.command_line.clone()),
            ("seed".to_string(), self.seed.to_string()),
            ("norm".to_string(), self.norm.clone()),
            ("tool_version".to_string(), TOOL.to_string()),
        ];
        out.extend(self.extra.iter().cloned());
        out
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in self.pairs() {
            let v = if k == "seed" { json!(self.seed) } else { Value::String(v) };
            m.insert(k, v);
        }
        Value::Object(m)
    }
}

fn command_line() -> String {
    std::env::args()
        .map(|a| {
            if a.is_empty() || a.contains(|c: char| c.is_whitespace() || c == '"' || c == '\'') {
                format!("'{}'", a.replace('\'', "'\\''"))
            } else {
                a
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Null,
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            // Rust float formatting is locale independent and round-trips
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Null => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn from_scan(scan: &dualent_core::monogamy::ScanResult) -> Self {
        let mut cols: Vec<String> = scan.axis_names.iter().chain(&scan.value_names).cloned().collect();
        let with_errors = scan.errors() > 0;
        if with_errors {
            cols.push("error".into());
        }
        let mut t = Table::new(&cols);
        for p in &scan.points {
            let mut row: Vec<Cell> = p.coords.iter().map(|&x| Cell::Num(x)).collect();
            if p.values.len() == scan.value_names.len() {
                row.extend(p.values.iter().map(|&x| Cell::Num(x)));
            } else {
                row.extend(scan.value_names.iter().map(|_| Cell::Null));
            }
            if with_errors {
                row.push(Cell::Text(p.error.clone().unwrap_or_default()));
            }
            t.push(row);
        }
        t
    }

    pub fn render(&self, meta: &Meta, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect();
                        Value::Object(m)
                    })
                    .collect();
                let doc = json!({ "metadata": meta.to_json(), "columns": self.columns, "rows": rows });
                Ok(pretty(&doc)?)
            }
            Format::Csv => {
                let mut buf = Vec::new();
                for (k, v) in meta.pairs() {
                    writeln!(buf, "# {k}: {}", v.replace('\n', " ")).expect("write to memory");
                }
                let mut w = csv::Writer::from_writer(buf);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::to_csv))?;
                }
                w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))
            }
        }
    }
}

pub fn pretty(doc: &Value) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(doc)?;
    out.push(b'\n');
    Ok(out)
}

/// JSON report with the metadata block spliced in as its first key.
pub fn report(meta: &Meta, body: Value) -> CliResult<Vec<u8>> {
    let mut m = Map::new();
    m.insert("metadata".into(), meta.to_json());
    match body {
        Value::Object(b) => m.extend(b),
        other => {
            m.insert("result".into(), other);
        }
    }
    pretty(&Value::Object(m))
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
