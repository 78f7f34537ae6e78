use clap::{Args, ValueEnum};
use dualent_core::entropy::{s_total, t_total_q, tsallis, von_neumann, ProbDist, QParam};

use super::{emit_table, report_written, PresetParams, StateSource};
use crate::error::CliResult;
use crate::output::{Cell, Format, Meta, Table};
use crate::statefile::LoadedState;
use crate::Global;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntropyName {
    #[value(alias = "von_neumann", alias = "s")]
    VonNeumann,
    #[value(alias = "s_total", alias = "st")]
    STotal,
    #[value(alias = "t")]
    Tsallis,
    #[value(alias = "t_total", alias = "tt")]
    TTotal,
    All,
}

impl EntropyName {
    fn label(self) -> &'static str {
        match self {
            EntropyName::VonNeumann => "von_neumann",
            EntropyName::STotal => "s_total",
            EntropyName::Tsallis => "tsallis",
            EntropyName::TTotal => "t_total",
            EntropyName::All => "all",
        }
    }

    fn needs_q(self) -> bool {
        matches!(self, EntropyName::Tsallis | EntropyName::TTotal)
    }
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    source: StateSource,

    #[command(flatten)]
    preset: PresetParams,

    /// Which entropies to report.
    #[arg(long = "entropy", short = 'e', value_enum, value_delimiter = ',', default_value = "all")]
    entropies: Vec<EntropyName>,

    /// Tsallis parameters (q > 0, q != 1).
    #[arg(short = 'q', long = "q", value_delimiter = ',', default_value = "2", allow_negative_numbers = true)]
    q: Vec<f64>,

    /// Subsystems to keep before evaluating. Pure multipartite states
    /// default to subsystem 0; density matrices to the whole state.
    #[arg(long, value_delimiter = ',')]
    keep: Option<Vec<usize>>,
}

pub fn run(a: &EntropyArgs, g: &Global) -> CliResult<()> {
    let (state, label) = a.source.load(&a.preset)?;
    let keep = match (&a.keep, &state) {
        (Some(k), _) => Some(k.clone()),
        (None, LoadedState::Pure(p)) if p.dims().len() > 1 => Some(vec![0]),
        _ => None,
    };
    let rho = match (&keep, &state) {
        (Some(k), LoadedState::Pure(p)) => p.reduced(k)?,
        (Some(k), LoadedState::Mixed(r)) => r.partial_trace(k)?,
        (None, s) => s.density(),
    };

    let mut names: Vec<EntropyName> = Vec::new();
    for &n in &a.entropies {
        let expand: &[EntropyName] = if n == EntropyName::All {
            &[EntropyName::VonNeumann, EntropyName::STotal, EntropyName::Tsallis, EntropyName::TTotal]
        } else {
            std::slice::from_ref(&n)
        };
        for &e in expand {
            if !names.contains(&e) {
                names.push(e);
            }
        }
    }

    let spectrum = rho.spectrum()?;
    let p = ProbDist::from(&spectrum);
    let mut table = Table::new(&["entropy", "q", "value"]);
    for name in names {
        if name.needs_q() {
            for &q in &a.q {
                let qp = QParam::new(q)?;
                let v = match name {
                    EntropyName::Tsallis => tsallis(&p, qp),
                    _ => t_total_q(&rho, qp)?,
                };
                println!("{}(q={q}) = {v:.6}", name.label());
                table.push(vec![name.label().into(), q.into(), v.into()]);
            }
        } else {
            let v = match name {
                EntropyName::VonNeumann => von_neumann(&rho)?,
                _ => s_total(&rho)?,
            };
            println!("{} = {v:.6}", name.label());
            table.push(vec![name.label().into(), Cell::Null, v.into()]);
        }
    }

    let kept = keep.map(|k| format!("{k:?}")).unwrap_or_else(|| "all".into());
    let meta = Meta::new(g.seed, "not applicable")
        .with("state", label)
        .with("state_kind", state.kind())
        .with("dims", format!("{:?}", state.dims()))
        .with("kept_subsystems", kept);
    report_written(emit_table(&table, &meta, g, Format::Csv)?);
    Ok(())
}
