use std::path::PathBuf;

use clap::Args;
use dualent_core::network::{polygon_check, random_network, Edge, NetworkTopology, PolygonReport};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{infer_format, parse_list_range, report_written};
use crate::error::{CliError, CliResult};
use crate::output::{report, write_atomic, Format, Meta, Table};
use crate::statefile::{LoadedState, StateJson};
use crate::Global;

#[derive(Debug, Args)]
pub struct NetworkArgs {
    /// Topology file; a random network is drawn when absent.
    #[arg(long)]
    topology: Option<PathBuf>,

    /// Number of parties of the random network.
    #[arg(long, short = 'n', default_value_t = 3)]
    parties: usize,

    /// Probability that a pair of parties shares states.
    #[arg(long, default_value_t = 1.0)]
    edge_prob: f64,

    /// Local dimensions of each half of an edge state, N or A..=B.
    #[arg(long, default_value = "2..=3")]
    dims: String,

    /// Number of states per linked pair, N or A..=B.
    #[arg(long, default_value = "1..=2")]
    states: String,

    /// Divide each party's entropy by r(d) chosen by --norm.
    #[arg(long)]
    normalized: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub i: usize,
    pub j: usize,
    pub states: Vec<StateJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TopologyJson {
    pub n_parties: usize,
    pub edges: Vec<EdgeJson>,
}

impl TopologyJson {
    pub fn from_network(net: &NetworkTopology) -> Self {
        TopologyJson {
            n_parties: net.n_parties(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeJson { i: e.i, j: e.j, states: e.states.iter().map(StateJson::from_pure).collect() })
                .collect(),
        }
    }

    pub fn into_network(self) -> CliResult<NetworkTopology> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in self.edges {
            let mut states = Vec::with_capacity(e.states.len());
            for s in e.states {
                match s.into_state()? {
                    LoadedState::Pure(p) => states.push(p),
                    LoadedState::Mixed(_) => {
                        return Err(CliError::InvalidState(format!("edge ({}, {}) carries a mixed state", e.i, e.j)))
                    }
                }
            }
            edges.push(Edge { i: e.i, j: e.j, states });
        }
        NetworkTopology::new(self.n_parties, edges).map_err(|e| CliError::InvalidState(e.to_string()))
    }
}

fn load_topology(path: &PathBuf) -> CliResult<NetworkTopology> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::InvalidState(format!("cannot read {}: {e}", path.display())))?;
    let mut doc: Value =
        serde_json::from_str(&text).map_err(|e| CliError::InvalidState(format!("{}: {e}", path.display())))?;
    // accept a previous `network` report as input
    if let Some(t) = doc.get_mut("topology") {
        doc = t.take();
    }
    let topo: TopologyJson =
        serde_json::from_value(doc).map_err(|e| CliError::InvalidState(format!("{}: {e}", path.display())))?;
    topo.into_network()
}

pub fn report_json(rep: &PolygonReport) -> Value {
    json!({
        "values": rep.values,
        "taus": rep.taus,
        "max_tau": rep.max_tau(),
        "normalized": rep.normalized,
        "norm": rep.norm.to_string(),
    })
}

pub fn run(a: &NetworkArgs, g: &Global) -> CliResult<()> {
    let (net, source) = match &a.topology {
        Some(p) => (load_topology(p)?, p.display().to_string()),
        None => {
            let dims = parse_list_range(&a.dims)?;
            let states = parse_list_range(&a.states)?;
            let net = random_network(a.parties, a.edge_prob, dims, states, g.seed)?;
            (net, format!("random n={} p={} dims={} states={}", a.parties, a.edge_prob, a.dims, a.states))
        }
    };
    let rep = polygon_check(&net, a.normalized, g.norm)?;
    for (p, (v, t)) in rep.values.iter().zip(&rep.taus).enumerate() {
        println!("party {p}: dim={} E={v:.6} tau={t:.6}", net.party_dim(p));
    }
    let max = rep.max_tau();
    println!("max tau = {max:.6e}; all tau <= 0: {}", if max <= 1e-9 { "yes" } else { "no" });

    let meta = Meta::new(g.seed, if a.normalized { g.norm.to_string() } else { "none (unnormalized)".into() })
        .with("network", source)
        .with("edges", net.edges().len().to_string());
    let Some(path) = &g.out else {
        report_written(None);
        return Ok(());
    };
    let bytes = match g.format.unwrap_or_else(|| infer_format(path).unwrap_or(Format::Json)) {
        Format::Json => report(
            &meta,
            json!({
                "topology": serde_json::to_value(TopologyJson::from_network(&net))?,
                "party_dims": (0..net.n_parties()).map(|p| net.party_dim(p)).collect::<Vec<_>>(),
                "report": report_json(&rep),
            }),
        )?,
        Format::Csv => {
            let mut t = Table::new(&["party", "dim", "value", "tau"]);
            for p in 0..net.n_parties() {
                t.push(vec![p.into(), net.party_dim(p).into(), rep.values[p].into(), rep.taus[p].into()]);
            }
            t.render(&meta, Format::Csv)?
        }
    };
    write_atomic(path, &bytes)?;
    report_written(Some(path.clone()));
    Ok(())
}
