//! Numerical convex roofs over pure-state ensembles.
//!
//! Every ensemble realizing `rho` is `|psi~_i> = sum_j u_ij sqrt(lambda_j) |phi_j>`
//! for an isometry `U` (m x rank), with `lambda_j, phi_j` the nonzero
//! eigenpairs of `rho`. The optimizer walks over isometries, so every value it
//! reports belongs to a genuine decomposition and is an upper bound on the roof.

use alloc::vec;
use alloc::vec::Vec;

use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::linalg::{self, c, isometry_deviation, CMatrix, CVector, C64};
use crate::measures::{Bipartition, PureMeasure};
use crate::random::{gaussian_matrix, haar_unitary, rng_stream, StateRng};
use crate::state::{DensityMatrix, PureState};

/// Eigenvalues at or below this count as zero when fixing the rank.
pub const RANK_THRESHOLD: f64 = 1e-12;
/// Columns this far from orthonormal are rejected.
pub const ISOMETRY_TOL: f64 = 1e-10;
/// States with a smaller weight are dropped from an ensemble.
const WEIGHT_FLOOR: f64 = 1e-15;
const STEP_START: f64 = 0.5;
const STEP_MAX: f64 = 1.0;
/// The refinement step never shrinks below this.
pub const STEP_FLOOR: f64 = 1e-6;

/// A weighted list of pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleDecomposition {
    pub weights: ProbDist,
    pub states: Vec<PureState>,
}

impl EnsembleDecomposition {
    /// sum_i w_i |psi_i><psi_i|
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.states.first().map_or(0, PureState::dim);
        let mut m = CMatrix::zeros(d, d);
        for (w, s) in self.weights.values().iter().zip(&self.states) {
            let a = s.amplitudes();
            m += (a * a.adjoint()) * c(*w, 0.0);
        }
        m
    }

    /// Frobenius distance between the reconstruction and `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        linalg::frobenius_distance(&self.reconstruct(), rho.matrix())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// sum_i w_i measure(psi_i)
    pub fn average(&self, cut: &Bipartition, measure: &PureMeasure) -> Result<f64> {
        let mut acc = 0.0;
        for (w, s) in self.weights.values().iter().zip(&self.states) {
            acc += w * measure.evaluate(s, cut)?;
        }
        Ok(acc)
    }
}

/// Nonzero part of the eigendecomposition: columns `sqrt(lambda_j) |phi_j>`.
struct EigenFrame {
    scaled: CMatrix,
    dims: Vec<usize>,
}

impl EigenFrame {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let (vals, vecs) = rho.eigen()?;
        let rank = vals.iter().filter(|&&v| v > RANK_THRESHOLD).count().max(1);
        let mut scaled = vecs.columns(0, rank).into_owned();
        for k in 0..rank {
            let s = libm::sqrt(vals[k].max(0.0));
            let mut col = scaled.column_mut(k);
            col *= c(s, 0.0);
        }
        Ok(Self { scaled, dims: rho.dims().to_vec() })
    }

    fn rank(&self) -> usize {
        self.scaled.ncols()
    }

    /// Unnormalized ensemble members as columns (d x m).
    fn members(&self, u: &CMatrix) -> CMatrix {
        &self.scaled * u.transpose()
    }

    fn ensemble(&self, u: &CMatrix) -> Result<EnsembleDecomposition> {
        let members = self.members(u);
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for col in members.column_iter() {
            let w = col.norm_squared();
            if w > WEIGHT_FLOOR {
                weights.push(w);
                states.push(PureState::from_parts_unchecked(
                    col.unscale(libm::sqrt(w)).into_owned(),
                    self.dims.clone(),
                ));
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(EnsembleDecomposition { weights: ProbDist::new(weights)?, states })
    }

    /// Ensemble average of `measure`, without materializing the ensemble.
    fn objective(&self, u: &CMatrix, cut: &Bipartition, measure: &PureMeasure) -> Result<f64> {
        let terms = self.terms(u, cut, measure)?;
        let (total, acc) = terms.iter().fold((0.0, 0.0), |(t, a), &(w, v)| (t + w, a + v));
        Ok(acc / total)
    }

    /// (weight, weight * measure) for the member built from one isometry row.
    fn term(&self, row: &[C64], cut: &Bipartition, measure: &PureMeasure) -> Result<(f64, f64)> {
        let col = CVector::from_fn(self.scaled.nrows(), |i, _| {
            row.iter().enumerate().map(|(j, r)| self.scaled[(i, j)] * r).sum()
        });
        let w = col.norm_squared();
        if w <= WEIGHT_FLOOR {
            return Ok((0.0, 0.0));
        }
        let psi = PureState::from_parts_unchecked(col.unscale(libm::sqrt(w)), self.dims.clone());
        Ok((w, w * measure.evaluate(&psi, cut)?))
    }

    fn terms(&self, u: &CMatrix, cut: &Bipartition, measure: &PureMeasure) -> Result<Vec<(f64, f64)>> {
        (0..u.nrows()).map(|i| self.term(&row_of(u, i), cut, measure)).collect()
    }
}

fn row_of(u: &CMatrix, i: usize) -> Vec<C64> {
    u.row(i).iter().copied().collect()
}

fn check_isometry(u: &CMatrix, rank: usize) -> Result<()> {
    if u.ncols() != rank || u.nrows() < rank {
        return Err(Error::WrongShape {
            expected: "m x rank isometry with m >= rank",
            found: vec![u.nrows(), u.ncols()],
        });
    }
    let dev = isometry_deviation(u);
    if !(dev <= ISOMETRY_TOL) {
        return Err(Error::NotIsometry(dev));
    }
    Ok(())
}

/// Ensemble of `rho` induced by the isometry `u` (m x rank(rho)).
/// Members of zero weight are dropped.
pub fn hjw_ensemble(rho: &DensityMatrix, u: &CMatrix) -> Result<EnsembleDecomposition> {
    let frame = EigenFrame::new(rho)?;
    check_isometry(u, frame.rank())?;
    frame.ensemble(u)
}

/// Optimizer settings. `ensemble_size = None` picks min(rank^2, 16), never
/// below the rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RoofConfig {
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop a restart once a full window of iterations gains less than this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self { ensemble_size: None, restarts: 8, max_iters: 2000, tol: 1e-10, seed: 0 }
    }
}

impl RoofConfig {
    pub fn ensemble_size_for(&self, rank: usize) -> Result<usize> {
        let m = match self.ensemble_size {
            Some(m) => m,
            None => (rank * rank).min(16).max(rank),
        };
        if m < rank {
            return Err(Error::BadConfig(alloc::format!(
                "ensemble size {m} is below the rank {rank}"
            )));
        }
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::BadConfig("restarts must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::BadConfig("tol must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Outcome of a single refinement run.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub value: f64,
    pub isometry: CMatrix,
    /// Best value after each iteration.
    pub history: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofResult {
    pub value: f64,
    pub best_ensemble: EnsembleDecomposition,
    pub converged: bool,
    /// Iterations summed over all restarts.
    pub iterations_used: usize,
    pub restart_values: Vec<f64>,
    pub ensemble_size: usize,
    pub rank: usize,
}

fn random_hermitian(m: usize, rng: &mut StateRng) -> CMatrix {
    let g = gaussian_matrix(m, m, rng);
    let h = linalg::hermitize(&g);
    let n = h.norm();
    if n > 0.0 { h.unscale(n) } else { h }
}

/// Hermitian basis of m x m matrices: diagonal units, then symmetric and
/// antisymmetric off-diagonal pairs. Each comes with the rows it touches.
fn hermitian_basis(m: usize) -> Vec<(CMatrix, Vec<usize>)> {
    let mut out = Vec::with_capacity(m * m);
    for j in 0..m {
        let mut g = CMatrix::zeros(m, m);
        g[(j, j)] = c(1.0, 0.0);
        out.push((g, vec![j]));
    }
    for j in 0..m {
        for k in (j + 1)..m {
            let mut s = CMatrix::zeros(m, m);
            s[(j, k)] = c(1.0, 0.0);
            s[(k, j)] = c(1.0, 0.0);
            out.push((s, vec![j, k]));
            let mut a = CMatrix::zeros(m, m);
            a[(j, k)] = c(0.0, -1.0);
            a[(k, j)] = c(0.0, 1.0);
            out.push((a, vec![j, k]));
        }
    }
    out
}

/// Basis generator, exp(i FD_EPS generator), and the rows that exponential mixes.
struct Probe {
    generator: CMatrix,
    unitary: CMatrix,
    rows: Vec<usize>,
}

const FD_EPS: f64 = 1e-7;

/// Steepest-descent generator from forward differences along each basis
/// direction, scaled to unit Frobenius norm. `None` at a flat point.
///
/// A probe only mixes one or two rows of `u`, so only those members are
/// re-evaluated.
fn descent_generator(
    frame: &EigenFrame,
    cut: &Bipartition,
    measure: &PureMeasure,
    u: &CMatrix,
    probes: &[Probe],
) -> Result<Option<CMatrix>> {
    let m = u.nrows();
    let base = frame.terms(u, cut, measure)?;
    let (total, acc) = base.iter().fold((0.0, 0.0), |(t, a), &(w, v)| (t + w, a + v));
    let value = acc / total;
    let mut h = CMatrix::zeros(m, m);
    for p in probes {
        let (mut t, mut a) = (total, acc);
        for &j in &p.rows {
            let row: Vec<C64> = (0..u.ncols())
                .map(|col| p.rows.iter().map(|&l| p.unitary[(j, l)] * u[(l, col)]).sum())
                .collect();
            let (w, v) = frame.term(&row, cut, measure)?;
            t += w - base[j].0;
            a += v - base[j].1;
        }
        let slope = (a / t - value) / FD_EPS;
        h -= &p.generator * c(slope, 0.0);
    }
    let n = h.norm();
    Ok(if n > 0.0 && n.is_finite() { Some(h.unscale(n)) } else { None })
}

fn refine_frame(
    frame: &EigenFrame,
    cut: &Bipartition,
    measure: &PureMeasure,
    start: CMatrix,
    max_iters: usize,
    tol: f64,
    rng: &mut StateRng,
) -> Result<Refinement> {
    const WINDOW: usize = 50;
    let m = start.nrows();
    let mut probes = Vec::with_capacity(m * m);
    for (generator, rows) in hermitian_basis(m) {
        let unitary = linalg::unitary_exp(&(&generator * c(FD_EPS, 0.0)))?;
        probes.push(Probe { generator, unitary, rows });
    }
    let mut u = start;
    let mut value = frame.objective(&u, cut, measure)?;
    let mut history = Vec::with_capacity(max_iters);
    let mut step = STEP_START;
    let mut checkpoint = value;
    let mut converged = false;
    // Gradient direction at the current point; None once it has failed down
    // to the step floor, after which proposals are random.
    let mut gradient = descent_generator(frame, cut, measure, &u, &probes)?;
    let mut random_mode = gradient.is_none();
    for it in 1..=max_iters {
        let dir = match (&gradient, random_mode) {
            (Some(g), false) => g.clone(),
            _ => random_hermitian(m, rng),
        };
        let candidate =
            linalg::orthonormalize_columns(&(linalg::unitary_exp(&(dir * c(step, 0.0)))? * &u));
        let v = frame.objective(&candidate, cut, measure)?;
        if v < value {
            value = v;
            u = candidate;
            step = (step * 1.5).min(STEP_MAX);
            gradient = descent_generator(frame, cut, measure, &u, &probes)?;
            random_mode = gradient.is_none();
        } else if step > STEP_FLOOR {
            step = (step * 0.5).max(STEP_FLOOR);
        } else if !random_mode {
            random_mode = true;
            step = STEP_START;
        } else {
            history.push(value);
            converged = true;
            break;
        }
        history.push(value);
        if it % WINDOW == 0 {
            if checkpoint - value <= tol {
                converged = true;
                break;
            }
            checkpoint = value;
        }
    }
    Ok(Refinement { value, isometry: u, history, converged })
}

fn check_cut(rho: &DensityMatrix, cut: &Bipartition) -> Result<()> {
    let count = rho.dims().len();
    if cut.side_a.len() + cut.side_b.len() != count
        || cut.side_a.iter().chain(&cut.side_b).any(|&k| k >= count)
    {
        return Err(Error::BadSelection("bipartition does not match the state".into()));
    }
    Ok(())
}

/// Local refinement of `measure`'s ensemble average from a given isometry.
/// The recorded history is non-increasing.
pub fn refine(
    rho: &DensityMatrix,
    cut: &Bipartition,
    measure: &PureMeasure,
    start: &CMatrix,
    max_iters: usize,
    tol: f64,
    rng: &mut StateRng,
) -> Result<Refinement> {
    check_cut(rho, cut)?;
    let frame = EigenFrame::new(rho)?;
    check_isometry(start, frame.rank())?;
    refine_frame(&frame, cut, measure, start.clone(), max_iters, tol, rng)
}

/// Upper estimate of the convex roof of `measure` at `rho`.
///
/// Restart 0 starts from the eigen-ensemble, the others from Haar-random
/// isometries. Each restart draws from its own stream of `cfg.seed`, so the
/// result does not depend on the order restarts run in.
pub fn convex_roof(
    rho: &DensityMatrix,
    cut: &Bipartition,
    measure: &PureMeasure,
    cfg: &RoofConfig,
) -> Result<RoofResult> {
    cfg.validate()?;
    check_cut(rho, cut)?;
    let frame = EigenFrame::new(rho)?;
    let rank = frame.rank();
    let m = cfg.ensemble_size_for(rank)?;

    if rank == 1 {
        let u = CMatrix::from_fn(1, 1, |_, _| c(1.0, 0.0));
        let ens = frame.ensemble(&u)?;
        let value = ens.average(cut, measure)?;
        return Ok(RoofResult {
            value,
            best_ensemble: ens,
            converged: true,
            iterations_used: 0,
            restart_values: vec![value; cfg.restarts],
            ensemble_size: m,
            rank,
        });
    }

    let mut best: Option<(f64, CMatrix, bool)> = None;
    let mut restart_values = Vec::with_capacity(cfg.restarts);
    let mut iterations = 0;
    for r in 0..cfg.restarts {
        let mut rng = rng_stream(cfg.seed, r as u64);
        let start = if r == 0 {
            CMatrix::identity(m, rank)
        } else {
            haar_unitary(m, &mut rng).columns(0, rank).into_owned()
        };
        let out = refine_frame(&frame, cut, measure, start, cfg.max_iters, cfg.tol, &mut rng)?;
        iterations += out.history.len();
        restart_values.push(out.value);
        if best.as_ref().is_none_or(|(v, _, _)| out.value < *v) {
            best = Some((out.value, out.isometry, out.converged));
        }
    }
    let (value, u, converged) = best.expect("at least one restart");
    Ok(RoofResult {
        value: value.max(0.0),
        best_ensemble: frame.ensemble(&u)?,
        converged,
        iterations_used: iterations,
        restart_values,
        ensemble_size: m,
        rank,
    })
}
