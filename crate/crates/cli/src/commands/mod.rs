use std::path::{Path, PathBuf};

use clap::Args;

use crate::error::{CliError, CliResult};
use crate::output::{write_atomic, Format, Meta, Table};
use crate::statefile::{self, LoadedState};
use crate::Global;

pub mod entropy;
pub mod network;
pub mod reproduce;
pub mod roof;
pub mod scan;

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct StateSource {
    /// JSON state file: {"dims": [..], "re": [..], "im": [..]}.
    #[arg(long)]
    pub state: Option<PathBuf>,

    /// bell, ghz, maximally-mixed, werner, example3 or example4.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PresetParams {
    /// Dimension for the maximally-mixed preset.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Singlet weight for werner, theta for example3.
    #[arg(long)]
    pub param: Option<f64>,
}

impl StateSource {
    pub fn load(&self, p: &PresetParams) -> CliResult<(LoadedState, String)> {
        match (&self.state, &self.preset) {
            (Some(path), _) => Ok((statefile::load(path)?, path.display().to_string())),
            (None, Some(name)) => {
                let param = p.dim.map(|d| d as f64).or(p.param);
                let label = match param {
                    Some(v) if !name.contains(':') => format!("preset {name}:{v}"),
                    _ => format!("preset {name}"),
                };
                Ok((statefile::preset(name, param)?, label))
            }
            (None, None) => Err(CliError::InvalidState("no state given".into())),
        }
    }
}

pub fn parse_list_range(s: &str) -> CliResult<std::ops::RangeInclusive<usize>> {
    let bad = || CliError::Domain(format!("expected N or A..=B, got {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..=").or_else(|| s.split_once("..")).or_else(|| s.split_once('-')) {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        Ok(a..=b)
    } else {
        let a = num(s)?;
        Ok(a..=a)
    }
}

/// Writes `table` to `--out` when given. Returns the path written.
pub fn emit_table(table: &Table, meta: &Meta, g: &Global, default: Format) -> CliResult<Option<PathBuf>> {
    let Some(path) = &g.out else { return Ok(None) };
    let format = g.format.unwrap_or_else(|| infer_format(path).unwrap_or(default));
    write_atomic(path, &table.render(meta, format)?)?;
    Ok(Some(path.clone()))
}

pub fn infer_format(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "csv" => Some(Format::Csv),
        "json" => Some(Format::Json),
        _ => None,
    }
}

pub fn report_written(path: Option<PathBuf>) {
    match path {
        Some(p) => println!("wrote {}", p.display()),
        None => println!("(pass --out FILE to save the table)"),
    }
}
