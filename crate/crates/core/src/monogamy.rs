//! Residual tangles, power crossovers and the parameter scans behind them.
//!
//! A residual tangle compares one party's entanglement with the rest,
//! raised to a power gamma, against the sum of its pairwise entanglements:
//! `tau = E(A|rest)^gamma - sum_j E(rho_Aj)^gamma`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::entropy::{self, QParam};
use crate::error::{Error, Result};
use crate::linalg::{c, CVector};
use crate::measures::{Bipartition, NormPolicy, PureMeasure};
use crate::roof::{convex_roof, hjw_ensemble, RoofConfig};
use crate::state::{DensityMatrix, PureState};

const S2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// (alpha|000> + beta|110> + alpha|201> + beta|311>) / sqrt 2 on 4 x 2 x 2.
pub fn example3_state(alpha: f64, beta: f64) -> Result<PureState> {
    let n2 = alpha * alpha + beta * beta;
    if !((n2 - 1.0).abs() <= 1e-10) {
        return Err(Error::NotNormalized(n2));
    }
    let mut v = CVector::zeros(16);
    v[0] = c(alpha * S2, 0.0);
    v[6] = c(beta * S2, 0.0);
    v[9] = c(alpha * S2, 0.0);
    v[15] = c(beta * S2, 0.0);
    PureState::new(v, vec![4, 2, 2])
}

/// alpha = cos theta, beta = sin theta.
pub fn example3_at(theta: f64) -> Result<PureState> {
    example3_state(libm::cos(theta), libm::sin(theta))
}

/// The 6 x 3 x 3 state whose one-party marginal is I/6 and whose pairwise
/// marginals are flat over all their decompositions.
pub fn example4_state() -> PureState {
    let a = 1.0 / (2.0 * libm::sqrt(3.0));
    let b = 1.0 / libm::sqrt(6.0);
    let idx = |x: usize, y: usize, z: usize| 9 * x + 3 * y + z;
    let mut v = CVector::zeros(54);
    for (x, y, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0), (1, 0, 2), (2, 1, 0), (2, 0, 1)] {
        v[idx(x, y, z)] = c(a, 0.0);
    }
    for (x, y, z) in [(3, 0, 0), (4, 1, 1), (5, 2, 2)] {
        v[idx(x, y, z)] = c(b, 0.0);
    }
    PureState::new(v, vec![6, 3, 3]).expect("fixed state is normalized")
}

/// How pairwise (mixed) terms are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum PairwiseEvaluator {
    /// Closed form through the Wootters concurrence; two-qubit marginals only.
    TwoQubit,
    /// Average over the eigen-ensemble. Exact when every decomposition gives
    /// the same value, an upper bound otherwise.
    EigenEnsemble,
    /// Numerical convex roof.
    ConvexRoof(RoofConfig),
}

impl PairwiseEvaluator {
    pub fn name(&self) -> &'static str {
        match self {
            PairwiseEvaluator::TwoQubit => "two-qubit",
            PairwiseEvaluator::EigenEnsemble => "eigen-ensemble",
            PairwiseEvaluator::ConvexRoof(_) => "convex-roof",
        }
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, PairwiseEvaluator::ConvexRoof(_))
    }

    /// Value of `measure` on `rho` across `cut`.
    pub fn evaluate(&self, rho: &DensityMatrix, cut: &Bipartition, measure: &PureMeasure) -> Result<f64> {
        match self {
            PairwiseEvaluator::TwoQubit => {
                if rho.dims() != [2, 2] {
                    return Err(Error::Inapplicable(format!(
                        "two-qubit evaluator on a marginal with dims {:?}",
                        rho.dims()
                    )));
                }
                measure.two_qubit(rho)
            }
            PairwiseEvaluator::EigenEnsemble => {
                let (vals, _) = rho.eigen()?;
                let rank = vals.iter().filter(|&&v| v > crate::roof::RANK_THRESHOLD).count().max(1);
                let ens = hjw_ensemble(rho, &crate::linalg::CMatrix::identity(rank, rank))?;
                ens.average(cut, measure)
            }
            PairwiseEvaluator::ConvexRoof(cfg) => Ok(convex_roof(rho, cut, measure, cfg)?.value),
        }
    }
}

/// What to measure: the one-to-group term, the pairwise terms (which may
/// carry a different normalization) and how to evaluate the latter.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSpec {
    pub group: PureMeasure,
    pub pairwise: PureMeasure,
    pub evaluator: PairwiseEvaluator,
    /// Also evaluate every pairwise term with a convex roof.
    pub cross_check: Option<RoofConfig>,
}

impl ResidualSpec {
    pub fn new(group: PureMeasure, pairwise: PureMeasure, evaluator: PairwiseEvaluator) -> Self {
        Self { group, pairwise, evaluator, cross_check: None }
    }

    /// The same measure on both sides.
    pub fn uniform(measure: PureMeasure, evaluator: PairwiseEvaluator) -> Self {
        Self::new(measure, measure, evaluator)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub focus: usize,
    pub gamma: f64,
    pub one_to_group: f64,
    /// (party, value)
    pub pairwise: Vec<(usize, f64)>,
    pub tau: f64,
    pub evaluator: &'static str,
    pub numerical: bool,
    /// Convex-roof values of the pairwise terms, when requested.
    pub pairwise_roof: Option<Vec<(usize, f64)>>,
}

impl ResidualReport {
    pub fn is_monogamous(&self) -> bool {
        self.tau >= 0.0
    }
}

/// tau = x^gamma - sum y_i^gamma
pub fn tau_from(one: f64, pairwise: impl IntoIterator<Item = f64>, gamma: f64) -> f64 {
    libm::pow(one, gamma) - pairwise.into_iter().map(|v| libm::pow(v, gamma)).sum::<f64>()
}

/// Reduced state of `focus` and `other` with the cut isolating `focus`.
pub fn pair_marginal(psi: &PureState, focus: usize, other: usize) -> Result<(DensityMatrix, Bipartition)> {
    let rho = psi.reduced(&[focus, other])?;
    let side = if focus < other { 0 } else { 1 };
    let cut = Bipartition::new(rho.dims(), &[side])?;
    Ok((rho, cut))
}

/// Residual tangle of party `focus` in a multipartite pure state, each
/// subsystem being one party.
pub fn residual_tangle(psi: &PureState, focus: usize, spec: &ResidualSpec, gamma: f64) -> Result<ResidualReport> {
    let n = psi.dims().len();
    if n < 3 {
        return Err(Error::BadSelection(format!("residual tangle needs at least 3 parties, got {n}")));
    }
    if focus >= n {
        return Err(Error::IndexOutOfRange { index: focus, count: n });
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain { function: "residual_tangle gamma", value: gamma });
    }
    let cut = Bipartition::new(psi.dims(), &[focus])?;
    let one = spec.group.evaluate(psi, &cut)?;
    let mut pairwise = Vec::with_capacity(n - 1);
    let mut roof = spec.cross_check.as_ref().map(|_| Vec::with_capacity(n - 1));
    for j in (0..n).filter(|&j| j != focus) {
        let (rho, pcut) = pair_marginal(psi, focus, j)?;
        pairwise.push((j, spec.evaluator.evaluate(&rho, &pcut, &spec.pairwise)?));
        if let (Some(cfg), Some(out)) = (&spec.cross_check, roof.as_mut()) {
            out.push((j, convex_roof(&rho, &pcut, &spec.pairwise, cfg)?.value));
        }
    }
    let tau = tau_from(one, pairwise.iter().map(|p| p.1), gamma);
    Ok(ResidualReport {
        focus,
        gamma,
        one_to_group: one,
        pairwise,
        tau,
        evaluator: spec.evaluator.name(),
        numerical: spec.evaluator.is_numerical(),
        pairwise_roof: roof,
    })
}

/// Binary Shannon entropy of (x, 1 - x).
fn h2(x: f64) -> f64 {
    entropy::shannon_values(&[x, 1.0 - x])
}

/// Closed forms for Example 3 with r(4) normalization:
/// E_t(rho_AB) = (-2 a^2 log a^2 - 2 b^2 log b^2) / (8 - 3 log2 3),
/// E_t(rho_AC) = 2 / (8 - 3 log2 3).
pub fn pairwise_e_t_example3(alpha: f64, beta: f64) -> (f64, f64) {
    let r4 = 8.0 - 3.0 * libm::log2(3.0);
    let (a2, b2) = (alpha * alpha, beta * beta);
    let xlx = |x: f64| if x > 0.0 { x * libm::log2(x) } else { 0.0 };
    ((-2.0 * xlx(a2) - 2.0 * xlx(b2)) / r4, 2.0 / r4)
}

/// E_t(A|BC) = (a + b + 4) / (8 - 3 log2 3) for Example 3.
pub fn one_to_group_e_t_example3(alpha: f64, beta: f64) -> f64 {
    let r4 = 8.0 - 3.0 * libm::log2(3.0);
    let part = |x: f64| {
        let y = 2.0 - x;
        let xl = if x > 0.0 { x * libm::log2(x) } else { 0.0 };
        -xl - y * libm::log2(y)
    };
    (part(alpha * alpha) + part(beta * beta) + 4.0) / r4
}

/// E_f values for Example 3: (A|BC, AB, AC).
pub fn eof_example3(alpha: f64) -> (f64, f64, f64) {
    let s = h2(alpha * alpha);
    (s + 1.0, s, 1.0)
}

/// Both pairwise values in Example 4, normalized by r(3):
/// (5 - 1.5 log2 3) / (3 log2 3 - 2).
pub fn pairwise_e_t_example4() -> (f64, f64) {
    let l3 = libm::log2(3.0);
    let v = (5.0 - 1.5 * l3) / (3.0 * l3 - 2.0);
    (v, v)
}

/// Example 3 at its printed normalizations: r(4) everywhere.
pub fn example3_e_t_spec(evaluator: PairwiseEvaluator) -> ResidualSpec {
    let m = PureMeasure::EntropyEntanglement(NormPolicy::Explicit(4));
    ResidualSpec::uniform(m, evaluator)
}

/// Example 4 normalizations: r(6) for A|BC, r(3) for the pairs.
pub fn example4_e_t_spec(evaluator: PairwiseEvaluator) -> ResidualSpec {
    ResidualSpec::new(
        PureMeasure::EntropyEntanglement(NormPolicy::MinDim),
        PureMeasure::EntropyEntanglement(NormPolicy::Explicit(3)),
        evaluator,
    )
}

/// Smallest integer exponent in `range` with a^k > sum_i b_i^k, if any.
pub fn power_crossover(a: f64, b: &[f64], range: core::ops::RangeInclusive<u32>) -> Result<Option<u32>> {
    let in_unit = |x: f64| x > 0.0 && x <= 1.0;
    if !in_unit(a) {
        return Err(Error::Domain { function: "power_crossover", value: a });
    }
    if let Some(&bad) = b.iter().find(|&&x| !in_unit(x)) {
        return Err(Error::Domain { function: "power_crossover", value: bad });
    }
    for k in range {
        let lhs = libm::pow(a, k as f64);
        let rhs: f64 = b.iter().map(|&x| libm::pow(x, k as f64)).sum();
        if lhs > rhs {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// One grid point of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub coords: Vec<f64>,
    /// Empty when `error` is set.
    pub values: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub axis_names: Vec<String>,
    pub value_names: Vec<String>,
    pub points: Vec<ScanPoint>,
    pub metadata: Vec<(String, String)>,
}

impl ScanResult {
    pub fn new(axes: &[&str], values: &[&str]) -> Self {
        Self {
            axis_names: axes.iter().map(|s| s.to_string()).collect(),
            value_names: values.iter().map(|s| s.to_string()).collect(),
            points: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push(&mut self, coords: Vec<f64>, values: Result<Vec<f64>>) {
        match values {
            Ok(values) => self.points.push(ScanPoint { coords, values, error: None }),
            Err(e) => self.points.push(ScanPoint { coords, values: Vec::new(), error: Some(e.to_string()) }),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.push((key.to_string(), value.into()));
        self
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.value_names.iter().position(|n| n == name)
    }

    /// Successful values of one column.
    pub fn values_of(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(k) => self.points.iter().filter(|p| p.error.is_none()).map(|p| p.values[k]).collect(),
            None => Vec::new(),
        }
    }

    pub fn errors(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }
}

/// `n` evenly spaced points on [lo, hi], endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

pub const DEFAULT_GAMMAS: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 5.0];

/// Residual tangle over a one-parameter state family and a grid of
/// (spec, gamma) settings labelled by `params`. Failing points are recorded
/// and the scan continues.
pub fn scan<F, G>(
    family: F,
    focus: usize,
    thetas: &[f64],
    param_name: &str,
    params: &[f64],
    setting: G,
) -> ScanResult
where
    F: Fn(f64) -> Result<PureState>,
    G: Fn(f64) -> Result<(ResidualSpec, f64)>,
{
    let mut out = ScanResult::new(&["theta", param_name], &["one_to_group", "pairwise_1", "pairwise_2", "tau"]);
    for &p in params {
        for &t in thetas {
            let point = (|| {
                let (spec, gamma) = setting(p)?;
                let psi = family(t)?;
                let r = residual_tangle(&psi, focus, &spec, gamma)?;
                let mut v = vec![r.one_to_group];
                v.extend(r.pairwise.iter().map(|x| x.1));
                v.push(r.tau);
                Ok(v)
            })();
            out.push(vec![t, p], point);
        }
    }
    out
}

/// Which measure an Example 3 scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example3Measure {
    Formation,
    EntropyEntanglement,
}

/// Residual tangle of Example 3 over theta in `thetas` and each gamma,
/// pairwise terms from the eigen-ensemble.
pub fn scan_example3(measure: Example3Measure, thetas: &[f64], gammas: &[f64]) -> ScanResult {
    let spec = match measure {
        Example3Measure::Formation => {
            ResidualSpec::uniform(PureMeasure::Formation, PairwiseEvaluator::EigenEnsemble)
        }
        Example3Measure::EntropyEntanglement => example3_e_t_spec(PairwiseEvaluator::EigenEnsemble),
    };
    let name = spec.group.name();
    let r = scan(example3_at, 0, thetas, "gamma", gammas, |g| Ok((spec.clone(), g)));
    r.with_meta("measure", name)
        .with_meta("pairwise_evaluator", "eigen-ensemble")
        .with_meta("norm", match measure {
            Example3Measure::Formation => "none",
            Example3Measure::EntropyEntanglement => "explicit:4",
        })
}

/// Example 3 closed forms as printed for the Tsallis-total family, kept
/// for comparison with the spectrum computation. (A|BC, AB, AC, tau)
pub fn example6_printed(alpha: f64, beta: f64, q: f64) -> [f64; 4] {
    let (a2, b2) = (alpha * alpha, beta * beta);
    let cc = libm::pow(alpha, 2.0 * q - 2.0) + libm::pow(beta, 2.0 * q - 2.0);
    let d = libm::pow(2.0 - a2, q - 1.0) + libm::pow(2.0 - b2, q - 1.0);
    let group = (libm::pow(2.0, q + 1.0) - cc - d) / (libm::pow(2.0, q - 1.0) * (q - 1.0));
    let ab = 2.0 * (1.0 - libm::pow(alpha, 2.0 * q) - libm::pow(beta, 2.0 * q));
    let ac = 2.0 * (1.0 - 1.0 / libm::pow(2.0, q - 1.0));
    [group, ab, ac, group - ab - ac]
}

/// Tsallis-total residual tangle of Example 3 over (theta, q), from spectra,
/// alongside the printed closed forms.
pub fn scan_example6(thetas: &[f64], qs: &[f64]) -> ScanResult {
    let mut out = ScanResult::new(
        &["theta", "q"],
        &[
            "one_to_group",
            "pairwise_1",
            "pairwise_2",
            "tau",
            "printed_one_to_group",
            "printed_pairwise_1",
            "printed_pairwise_2",
            "printed_tau",
        ],
    );
    for &q in qs {
        for &t in thetas {
            let point = (|| {
                let qp = QParam::new(q)?;
                let spec = ResidualSpec::uniform(PureMeasure::TsallisTotal(qp), PairwiseEvaluator::EigenEnsemble);
                let r = residual_tangle(&example3_at(t)?, 0, &spec, 1.0)?;
                let printed = example6_printed(libm::cos(t), libm::sin(t), q);
                let mut v = vec![r.one_to_group, r.pairwise[0].1, r.pairwise[1].1, r.tau];
                v.extend_from_slice(&printed);
                Ok(v)
            })();
            out.push(vec![t, q], point);
        }
    }
    out.with_meta("measure", "t_q (spectrum)").with_meta("gamma", "1").with_meta(
        "printed_columns",
        "closed forms as printed; not asserted",
    )
}
