use std::f64::consts::FRAC_PI_2;

use clap::{Args, ValueEnum};
use dualent_core::monogamy::{linspace, scan_example3, scan_example6, Example3Measure, ScanResult, DEFAULT_GAMMAS};

use super::{emit_table, report_written};
use crate::error::{CliError, CliResult};
use crate::output::{Format, Meta, Table};
use crate::Global;

pub const DEFAULT_QS: [f64; 11] = [0.1, 0.25, 0.5, 0.75, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// (alpha|000> + beta|110> + alpha|201> + beta|311>)/sqrt 2, alpha = cos theta.
    Example3,
    /// Same family under the Tsallis-total measure over (theta, q).
    Example6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanMeasure {
    Eof,
    #[value(alias = "e_t")]
    Et,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(value_enum)]
    family: Family,

    /// Measure for example3 (example6 always uses the Tsallis-total family).
    #[arg(value_enum)]
    measure: Option<ScanMeasure>,

    /// Number of theta points on [0, pi/2].
    #[arg(long, default_value_t = 101)]
    grid: usize,

    /// Exponents gamma in the residual tangle (example3).
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,

    /// Tsallis parameters (example6).
    #[arg(short = 'q', long = "q", value_delimiter = ',', allow_negative_numbers = true)]
    q: Vec<f64>,
}

pub fn run(a: &ScanArgs, g: &Global) -> CliResult<()> {
    if a.grid < 2 {
        return Err(CliError::Domain(format!("--grid needs at least 2 points, got {}", a.grid)));
    }
    let thetas = linspace(0.0, FRAC_PI_2, a.grid);
    let (scan, param, label) = match a.family {
        Family::Example3 => {
            let gammas = if a.gamma.is_empty() { DEFAULT_GAMMAS.to_vec() } else { a.gamma.clone() };
            if let Some(bad) = gammas.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                return Err(CliError::Domain(format!("gamma must be positive, got {bad}")));
            }
            let (m, name) = match a.measure.unwrap_or(ScanMeasure::Et) {
                ScanMeasure::Eof => (Example3Measure::Formation, "eof"),
                ScanMeasure::Et => (Example3Measure::EntropyEntanglement, "et"),
            };
            (scan_example3(m, &thetas, &gammas), "gamma", format!("example3 {name}"))
        }
        Family::Example6 => {
            if a.measure.is_some() {
                return Err(CliError::Domain("example6 takes no measure argument".into()));
            }
            let qs = if a.q.is_empty() { DEFAULT_QS.to_vec() } else { a.q.clone() };
            for &q in &qs {
                dualent_core::entropy::QParam::new(q)?;
            }
            (scan_example6(&thetas, &qs), "q", "example6 t_q".to_string())
        }
    };
    if scan.errors() > 0 {
        let first = scan.points.iter().find_map(|p| p.error.clone()).unwrap_or_default();
        eprintln!("warning: {} scan points failed, first: {first}", scan.errors());
    }
    summarize(&scan, param);

    let meta = scan_meta(&scan, g, &label);
    report_written(emit_table(&Table::from_scan(&scan), &meta, g, Format::Csv)?);
    Ok(())
}

pub fn scan_meta(scan: &ScanResult, g: &Global, label: &str) -> Meta {
    let norm = scan.metadata.iter().find(|(k, _)| k == "norm").map(|(_, v)| v.clone()).unwrap_or("none".into());
    let mut meta = Meta::new(g.seed, norm).with("scan", label);
    for (k, v) in &scan.metadata {
        if k != "norm" {
            meta.set(k, v.clone());
        }
    }
    meta
}

pub struct TauStats {
    pub param: f64,
    pub min: f64,
    pub max: f64,
    pub max_abs: f64,
    pub points: usize,
}

pub fn tau_stats(scan: &ScanResult, param: &str) -> Vec<TauStats> {
    let pi = scan.axis_names.iter().position(|n| n == param).expect("parameter axis");
    let ti = scan.column("tau").expect("tau column");
    let mut out: Vec<TauStats> = Vec::new();
    for p in scan.points.iter().filter(|p| p.error.is_none()) {
        let (v, tau) = (p.coords[pi], p.values[ti]);
        let slot = match out.iter_mut().position(|s| s.param == v) {
            Some(k) => &mut out[k],
            None => {
                out.push(TauStats { param: v, min: f64::INFINITY, max: f64::NEG_INFINITY, max_abs: 0.0, points: 0 });
                out.last_mut().unwrap()
            }
        };
        slot.min = slot.min.min(tau);
        slot.max = slot.max.max(tau);
        slot.max_abs = slot.max_abs.max(tau.abs());
        slot.points += 1;
    }
    out
}

fn summarize(scan: &ScanResult, param: &str) {
    for s in tau_stats(scan, param) {
        println!(
            "{param}={}: {} points, min tau={:.6e}, max tau={:.6e}, max |tau|={:.3e}",
            s.param, s.points, s.min, s.max, s.max_abs
        );
    }
}
