//! Networks of bipartite pure states and their one-to-group entanglement.
//!
//! Party `i` holds one half of every edge state it takes part in, so its
//! marginal is a tensor product of edge marginals. The spectrum of that
//! product is the product distribution of the per-edge Schmidt spectra, which
//! is what [`one_to_group`] uses. [`one_to_group_dense`] builds the global
//! state instead and serves as the check.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;
use rand::Rng;

use crate::entropy;
use crate::error::{Error, Result};
use crate::measures::{norm_factor, Bipartition, NormPolicy};
use crate::monogamy::ScanResult;
use crate::random::{random_pure_with, rng_from_seed};
use crate::state::{PureState, Spectrum};

/// Pure states shared between parties `i < j`; each state has dims [d_i, d_j].
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub states: Vec<PureState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    n_parties: usize,
    edges: Vec<Edge>,
}

impl NetworkTopology {
    pub fn new(n_parties: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            if e.i >= e.j {
                return Err(Error::BadNetwork(format!("edge ({}, {}) must have i < j", e.i, e.j)));
            }
            if e.j >= n_parties {
                return Err(Error::IndexOutOfRange { index: e.j, count: n_parties });
            }
            if e.states.is_empty() {
                return Err(Error::BadNetwork(format!("edge ({}, {}) carries no state", e.i, e.j)));
            }
            if let Some(s) = e.states.iter().find(|s| s.dims().len() != 2) {
                return Err(Error::BadNetwork(format!(
                    "edge ({}, {}) state has dims {:?}; expected two halves",
                    e.i,
                    e.j,
                    s.dims()
                )));
            }
        }
        Ok(Self { n_parties, edges })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge states held by `party`, with the side it holds (0 or 1).
    fn holdings(&self, party: usize) -> impl Iterator<Item = (&PureState, usize)> {
        self.edges.iter().flat_map(move |e| {
            let side = if e.i == party { Some(0) } else if e.j == party { Some(1) } else { None };
            e.states.iter().filter_map(move |s| side.map(|k| (s, k)))
        })
    }

    /// Dimension of `party`'s system: product of its edge halves (1 when isolated).
    pub fn party_dim(&self, party: usize) -> usize {
        self.holdings(party).map(|(s, k)| s.dims()[k]).product()
    }

    pub fn global_dim(&self) -> usize {
        self.edges.iter().flat_map(|e| e.states.iter()).map(PureState::dim).product()
    }

    /// Global pure state, one subsystem per edge half in edge order.
    pub fn global_state(&self) -> Result<PureState> {
        let mut states = self.edges.iter().flat_map(|e| e.states.iter());
        let first = states
            .next()
            .ok_or_else(|| Error::BadNetwork("network has no edges".into()))?;
        Ok(states.fold(first.clone(), |acc, s| acc.tensor(s)))
    }

    /// Subsystem indices of `party` inside [`Self::global_state`].
    pub fn party_subsystems(&self, party: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = 0;
        for e in &self.edges {
            for _ in &e.states {
                if e.i == party {
                    out.push(k);
                }
                if e.j == party {
                    out.push(k + 1);
                }
                k += 2;
            }
        }
        out
    }

    fn check_party(&self, party: usize) -> Result<()> {
        if party >= self.n_parties {
            return Err(Error::IndexOutOfRange { index: party, count: self.n_parties });
        }
        Ok(())
    }
}

/// Spectrum of `party`'s marginal as a product of per-edge marginal spectra.
pub fn party_spectrum(net: &NetworkTopology, party: usize) -> Result<Spectrum> {
    net.check_party(party)?;
    let mut spec = Spectrum::trivial();
    for (s, side) in net.holdings(party) {
        spec = spec.product(&s.marginal_spectrum(&[side])?);
    }
    Ok(spec)
}

fn normalize(net: &NetworkTopology, party: usize, raw: f64, norm: NormPolicy) -> Result<f64> {
    let d = net.party_dim(party);
    if d <= 1 {
        return Ok(0.0);
    }
    let rest = net.global_dim() / d;
    let cut = Bipartition::new(&[d, rest], &[0])?;
    Ok(raw / norm_factor(norm.resolve(&cut)?)?)
}

/// S^t of `party`'s marginal, optionally divided by r(d) under `norm`.
/// An isolated party gives 0.
pub fn one_to_group(net: &NetworkTopology, party: usize, normalized: bool, norm: NormPolicy) -> Result<f64> {
    let raw = entropy::total_values(party_spectrum(net, party)?.values());
    if normalized { normalize(net, party, raw, norm) } else { Ok(raw) }
}

/// Same value through the dense global state and a partial trace.
pub fn one_to_group_dense(net: &NetworkTopology, party: usize, normalized: bool, norm: NormPolicy) -> Result<f64> {
    net.check_party(party)?;
    let keep = net.party_subsystems(party);
    if keep.is_empty() {
        return Ok(0.0);
    }
    let psi = net.global_state()?;
    let rho = psi.reduced(&keep)?;
    let raw = entropy::total_values(rho.spectrum()?.values());
    if normalized { normalize(net, party, raw, norm) } else { Ok(raw) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonReport {
    pub values: Vec<f64>,
    /// tau_i = E_i - sum_{j != i} E_j
    pub taus: Vec<f64>,
    pub normalized: bool,
    pub norm: NormPolicy,
}

impl PolygonReport {
    pub fn max_tau(&self) -> f64 {
        self.taus.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn polygon_from_values(values: Vec<f64>, normalized: bool, norm: NormPolicy) -> PolygonReport {
    let total: f64 = values.iter().sum();
    let taus = values.iter().map(|&v| v - (total - v)).collect();
    PolygonReport { values, taus, normalized, norm }
}

pub fn polygon_check(net: &NetworkTopology, normalized: bool, norm: NormPolicy) -> Result<PolygonReport> {
    if net.n_parties() < 3 {
        return Err(Error::BadNetwork(format!("polygon check needs at least 3 parties, got {}", net.n_parties())));
    }
    let values = (0..net.n_parties())
        .map(|p| one_to_group(net, p, normalized, norm))
        .collect::<Result<Vec<_>>>()?;
    Ok(polygon_from_values(values, normalized, norm))
}

/// Random topology: each pair is linked with probability `edge_prob` and
/// carries a number of Haar-random states drawn from `states_per_edge`, each
/// half with a dimension drawn from `dims`.
pub fn random_network(
    n: usize,
    edge_prob: f64,
    dims: RangeInclusive<usize>,
    states_per_edge: RangeInclusive<usize>,
    seed: u64,
) -> Result<NetworkTopology> {
    if n < 2 {
        return Err(Error::BadNetwork(format!("need at least 2 parties, got {n}")));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::Domain { function: "random_network edge probability", value: edge_prob });
    }
    if *dims.start() < 2 || dims.is_empty() || *states_per_edge.start() < 1 || states_per_edge.is_empty() {
        return Err(Error::BadNetwork("dimensions must be >= 2 and states per edge >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() >= edge_prob {
                continue;
            }
            let k = rng.random_range(states_per_edge.clone());
            let states = (0..k)
                .map(|_| {
                    let di = rng.random_range(dims.clone());
                    let dj = rng.random_range(dims.clone());
                    random_pure_with(&[di, dj], &mut rng)
                })
                .collect();
            edges.push(Edge { i, j, states });
        }
    }
    NetworkTopology::new(n, edges)
}

/// Bell pair (|00> + |11>)/sqrt 2.
pub fn bell() -> PureState {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    PureState::from_real(&[s, 0.0, 0.0, s], vec![2, 2]).expect("normalized")
}

/// The three-party chain B - A - C: alpha|00> + beta|11> between A and B,
/// a Bell pair between A and C.
pub fn chain_network(alpha: f64, beta: f64) -> Result<NetworkTopology> {
    let ab = PureState::from_real(&[alpha, 0.0, 0.0, beta], vec![2, 2])?;
    NetworkTopology::new(
        3,
        vec![Edge { i: 0, j: 1, states: vec![ab] }, Edge { i: 0, j: 2, states: vec![bell()] }],
    )
}

/// Marginal entanglements of the chain over theta, normalized per party with
/// the smaller cut dimension (r(4), r(2), r(2)), with tau for party A and the
/// closed forms for comparison.
pub fn example5_report(thetas: &[f64]) -> ScanResult {
    let l3 = libm::log2(3.0);
    let mut out = ScanResult::new(
        &["theta"],
        &["e_a", "e_b", "e_c", "tau_a", "closed_e_a", "closed_e_b", "closed_e_c", "closed_tau_a"],
    );
    for &t in thetas {
        let point = (|| {
            let (al, be) = (libm::cos(t), libm::sin(t));
            let net = chain_network(al, be)?;
            let rep = polygon_check(&net, true, NormPolicy::MinDim)?;
            let xlx = |x: f64| if x > 0.0 { x * libm::log2(x) } else { 0.0 };
            let part = |x: f64| -xlx(x) - (2.0 - x) * libm::log2(2.0 - x);
            let ca = (part(al * al) + part(be * be) + 4.0) / (8.0 - 3.0 * l3);
            let cb = -xlx(al * al) - xlx(be * be);
            let cc = 1.0;
            Ok(vec![
                rep.values[0],
                rep.values[1],
                rep.values[2],
                rep.taus[0],
                ca,
                cb,
                cc,
                ca - cb - cc,
            ])
        })();
        out.push(vec![t], point);
    }
    out.with_meta("norm", "min").with_meta("normalized", "true")
}
