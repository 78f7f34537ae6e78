use clap::{Args, ValueEnum};
use dualent_core::entropy::QParam;
use dualent_core::measures::{Bipartition, PureMeasure};
use dualent_core::roof::{convex_roof, RoofConfig, RoofResult};
use serde_json::{json, Value};

use super::{infer_format, report_written, PresetParams, StateSource};
use crate::error::{CliError, CliResult};
use crate::output::{report, write_atomic, Format, Meta, Table};
use crate::statefile::StateJson;
use crate::Global;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoofMeasure {
    /// S^t(rho_A)/r(d), d from --norm.
    #[value(alias = "e_t")]
    Et,
    Eof,
    /// Tsallis-total entanglement, needs -q.
    #[value(alias = "t_q")]
    Tq,
    Concurrence,
}

#[derive(Debug, Args)]
pub struct RoofArgs {
    #[command(flatten)]
    source: StateSource,

    #[command(flatten)]
    preset: PresetParams,

    /// Subsystems forming side A of the cut.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    cut: Vec<usize>,

    #[arg(long, value_enum, default_value = "et")]
    measure: RoofMeasure,

    #[arg(short = 'q', long = "q", allow_negative_numbers = true)]
    q: Option<f64>,

    #[arg(long, default_value_t = 8)]
    restarts: usize,

    #[arg(long, default_value_t = 2000)]
    iters: usize,

    /// Ensemble size m >= rank; defaults to min(rank^2, 16).
    #[arg(long)]
    ensemble_size: Option<usize>,

    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

pub fn result_json(r: &RoofResult) -> Value {
    let states: Vec<StateJson> = r.best_ensemble.states.iter().map(StateJson::from_pure).collect();
    json!({
        "value": r.value,
        "converged": r.converged,
        "iterations_used": r.iterations_used,
        "restart_values": r.restart_values,
        "ensemble_size": r.ensemble_size,
        "rank": r.rank,
        "best_ensemble": {
            "weights": r.best_ensemble.weights.values(),
            "states": serde_json::to_value(states).expect("plain data"),
        },
    })
}

pub fn run(a: &RoofArgs, g: &Global) -> CliResult<()> {
    let (state, label) = a.source.load(&a.preset)?;
    let rho = state.density();
    let cut = Bipartition::new(rho.dims(), &a.cut)?;
    let measure = match a.measure {
        RoofMeasure::Et => PureMeasure::EntropyEntanglement(g.norm),
        RoofMeasure::Eof => PureMeasure::Formation,
        RoofMeasure::Tq => {
            let q = a.q.ok_or_else(|| CliError::Domain("the t_q measure needs -q".into()))?;
            PureMeasure::TsallisTotal(QParam::new(q)?)
        }
        RoofMeasure::Concurrence => PureMeasure::Concurrence,
    };
    let cfg = RoofConfig {
        ensemble_size: a.ensemble_size,
        restarts: a.restarts,
        max_iters: a.iters,
        tol: a.tol,
        seed: g.seed,
    };
    let r = convex_roof(&rho, &cut, &measure, &cfg)?;
    let err = r.best_ensemble.reconstruction_error(&rho);

    // closed form only on two qubits cut 1|1
    let analytic = if rho.dims() == [2, 2] { measure.two_qubit(&rho).ok() } else { None };
    match analytic {
        Some(x) => println!(
            "roof {} = {:.9}  analytic = {x:.9}  difference = {:+.3e}",
            measure.name(),
            r.value,
            r.value - x
        ),
        None => println!("roof {} = {:.9}  (no closed form for this state)", measure.name(), r.value),
    }
    println!(
        "rank {} ensemble size {} restarts {} converged {} reconstruction error {err:.2e}",
        r.rank,
        r.ensemble_size,
        r.restart_values.len(),
        r.converged
    );

    let meta = Meta::new(g.seed, if a.measure == RoofMeasure::Et { g.norm.to_string() } else { "not applicable".into() })
        .with("state", label)
        .with("measure", measure.name())
        .with("cut", format!("{:?}", a.cut));
    let Some(path) = &g.out else {
        report_written(None);
        return Ok(());
    };
    let bytes = match g.format.unwrap_or_else(|| infer_format(path).unwrap_or(Format::Json)) {
        Format::Json => {
            let mut body = result_json(&r);
            body["analytic"] = json!(analytic);
            body["difference"] = json!(analytic.map(|x| r.value - x));
            body["reconstruction_error"] = json!(err);
            body["measure"] = json!(measure.name());
            body["state"] = serde_json::to_value(StateJson::from_density(&rho))?;
            report(&meta, json!({ "roof": body }))?
        }
        Format::Csv => {
            let mut t = Table::new(&["restart", "value", "analytic"]);
            let an = analytic.map(crate::output::Cell::Num).unwrap_or(crate::output::Cell::Null);
            for (k, v) in r.restart_values.iter().enumerate() {
                t.push(vec![k.into(), (*v).into(), an.clone()]);
            }
            t.render(&meta.with("roof_value", format!("{:?}", r.value)), Format::Csv)?
        }
    };
    write_atomic(path, &bytes)?;
    report_written(Some(path.clone()));
    Ok(())
}
