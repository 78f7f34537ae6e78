//! Classical and quantum entropy functionals.
//!
//! The Shannon/total family is measured in bits. The Tsallis family uses the
//! q-logarithm and carries no base. Every sum treats `0 * log 0` as 0.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, Spectrum};

/// Probability vector: entries in [0, 1] summing to 1 within 1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist(Vec<f64>);

impl ProbDist {
    pub const SUM_TOL: f64 = 1e-10;

    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::BadDistribution("empty".into()));
        }
        if let Some(&bad) = p.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::BadDistribution(format!("entry {bad} outside [0, 1]")));
        }
        let s: f64 = p.iter().sum();
        if !((s - 1.0).abs() <= Self::SUM_TOL) {
            return Err(Error::BadDistribution(format!("sums to {s}")));
        }
        Ok(Self(p))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDistribution("empty".into()));
        }
        Ok(Self(alloc::vec![1.0 / n as f64; n]))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&Spectrum> for ProbDist {
    fn from(s: &Spectrum) -> Self {
        ProbDist(s.values().to_vec())
    }
}

/// Tsallis index: q > 0 and q != 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0) || q == 1.0 || !q.is_finite() {
            return Err(Error::BadQ(q));
        }
        Ok(Self(q))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[inline]
fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * libm::log2(x)
    }
}

#[inline]
fn binary_total(x: f64) -> f64 {
    neg_xlog2x(x) + neg_xlog2x(1.0 - x)
}

/// H(p) = -sum p_i log2 p_i.
pub fn shannon(p: &ProbDist) -> f64 {
    p.values().iter().map(|&x| neg_xlog2x(x)).sum()
}

/// Extropy: -sum (1 - p_i) log2 (1 - p_i).
pub fn extropy(p: &ProbDist) -> f64 {
    p.values().iter().map(|&x| neg_xlog2x(1.0 - x)).sum()
}

/// H^t = H + extropy.
pub fn total_classical(p: &ProbDist) -> f64 {
    p.values().iter().map(|&x| binary_total(x)).sum()
}

/// Binary entropy g(x) = -x log2 x - (1-x) log2 (1-x) on [0, 1].
pub fn g(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { function: "g", value: x });
    }
    Ok(binary_total(x))
}

/// Upper bound of S^t on a d-dimensional space: d log2 d - (d-1) log2 (d-1).
pub fn total_entropy_bound(d: usize) -> f64 {
    let d = d as f64;
    -neg_xlog2x(d) + neg_xlog2x(d - 1.0)
}

pub(crate) fn shannon_values(values: &[f64]) -> f64 {
    values.iter().map(|&x| neg_xlog2x(x)).sum()
}

pub(crate) fn total_values(values: &[f64]) -> f64 {
    values.iter().map(|&x| binary_total(x)).sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_values(rho.spectrum()?.values()))
}

/// Total entropy S^t(rho) = sum_i g(lambda_i).
pub fn s_total(rho: &DensityMatrix) -> Result<f64> {
    Ok(total_values(rho.spectrum()?.values()))
}

/// q-logarithm ln_q(x) = (1 - x^(1-q)) / (q - 1).
pub fn q_log(x: f64, q: QParam) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain { function: "q_log", value: x });
    }
    let q = q.get();
    Ok((1.0 - libm::pow(x, 1.0 - q)) / (q - 1.0))
}

/// Single Tsallis term `(x - x^q) / (q - 1) = -x^q ln_q x`.
#[inline]
fn tsallis_term(x: f64, q: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x - libm::pow(x, q)) / (q - 1.0)
    }
}

/// Kernel of the Tsallis total entropy:
/// f(p) = [(p - p^q) + (1 - p) - (1 - p)^q] / (q - 1).
pub fn tsallis_total_kernel(p: f64, q: QParam) -> f64 {
    tsallis_term(p, q.get()) + tsallis_term(1.0 - p, q.get())
}

/// Tsallis entropy T_q(p) = sum_i (p_i - p_i^q) / (q - 1).
pub fn tsallis(p: &ProbDist, q: QParam) -> f64 {
    p.values().iter().map(|&x| tsallis_term(x, q.get())).sum()
}

/// Complementary dual sum_i ((1 - p_i) - (1 - p_i)^q) / (q - 1).
pub fn tsallis_dual(p: &ProbDist, q: QParam) -> f64 {
    p.values().iter().map(|&x| tsallis_term(1.0 - x, q.get())).sum()
}

/// T^t_q = T_q + dual = sum_i (1 - p_i^q - (1 - p_i)^q) / (q - 1).
pub fn tsallis_total(p: &ProbDist, q: QParam) -> f64 {
    tsallis_total_values(p.values(), q)
}

pub(crate) fn tsallis_total_values(values: &[f64], q: QParam) -> f64 {
    values.iter().map(|&x| tsallis_total_kernel(x, q)).sum()
}

/// Total Tsallis entropy of a quantum state, evaluated on its spectrum.
pub fn t_total_q(rho: &DensityMatrix, q: QParam) -> Result<f64> {
    Ok(tsallis_total_values(rho.spectrum()?.values(), q))
}

/// S_f(rho) = sum_i f(lambda_i) for a kernel with f(0) = f(1) = 0.
pub fn generic_entropy<F: Fn(f64) -> f64>(rho: &DensityMatrix, f: F) -> Result<f64> {
    const ENDPOINT_TOL: f64 = 1e-12;
    let (f0, f1) = (f(0.0), f(1.0));
    if !(f0.abs() <= ENDPOINT_TOL && f1.abs() <= ENDPOINT_TOL) {
        return Err(Error::EndpointCondition { f0, f1 });
    }
    Ok(rho.spectrum()?.values().iter().map(|&x| f(x)).sum())
}

/// `-x log2 x` with the 0 log 0 = 0 convention, usable with [`generic_entropy`].
pub fn von_neumann_kernel(x: f64) -> f64 {
    neg_xlog2x(x)
}

/// `g` without the domain check, for [`generic_entropy`].
pub fn total_kernel(x: f64) -> f64 {
    binary_total(x)
}

/// One row of the three-outcome simplex table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint {
    pub p1: f64,
    pub p2: f64,
    pub shannon: f64,
    pub total: f64,
}

/// Shannon and total entropy over the simplex p1 + p2 + p3 = 1, sampled on a
/// grid with `steps` subdivisions per axis.
pub fn simplex_grid(steps: usize) -> Vec<SimplexPoint> {
    let n = steps.max(1);
    let mut out = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let p1 = i as f64 / n as f64;
            let p2 = j as f64 / n as f64;
            let p3 = ((n - i - j) as f64 / n as f64).max(0.0);
            let v = [p1, p2, p3];
            out.push(SimplexPoint { p1, p2, shannon: shannon_values(&v), total: total_values(&v) });
        }
    }
    out
}
