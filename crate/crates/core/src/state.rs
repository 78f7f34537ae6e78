//! Pure states, density matrices and the partial-trace / Schmidt machinery.
//!
//! Subsystems are laid out row-major: subsystem 0 is the leftmost tensor
//! factor and therefore the most significant digit of a basis index.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, c, hermitian_eigen, hermitian_eigenvalues, CMatrix, CVector, C64};

/// Thresholds used when validating states and spectra.
pub mod tol {
    /// Squared-norm slack for pure states.
    pub const NORM: f64 = 1e-10;
    /// Elementwise Hermiticity slack.
    pub const HERMITIAN: f64 = 1e-10;
    /// Trace slack.
    pub const TRACE: f64 = 1e-10;
    /// Eigenvalues in `[-PSD, 0)` and `(1, 1 + PSD]` are clamped; beyond is an error.
    pub const PSD: f64 = 1e-10;
    /// A spectrum whose sum is within this of 1 is renormalized.
    pub const SPECTRUM_SUM: f64 = 1e-8;
    /// Eigenvalues below this are eigensolver noise on a rank-deficient state.
    pub const ZERO_SNAP: f64 = 1e-13;
}

fn total_dim(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(Error::BadDims(dims.to_vec()));
    }
    Ok(dims.iter().product())
}

/// Row-major strides of each subsystem.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Offsets into the full index space for every composite index of `subset`.
fn subset_offsets(dims: &[usize], strides: &[usize], subset: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &k in subset {
        let mut next = Vec::with_capacity(offsets.len() * dims[k]);
        for &o in &offsets {
            for digit in 0..dims[k] {
                next.push(o + digit * strides[k]);
            }
        }
        offsets = next;
    }
    offsets
}

/// The kept and traced index offsets of a split of `dims`.
pub(crate) struct Split {
    pub kept: Vec<usize>,
    pub kept_offsets: Vec<usize>,
    pub traced_offsets: Vec<usize>,
}

impl Split {
    pub(crate) fn new(dims: &[usize], keep: &[usize], allow_full: bool) -> Result<Self> {
        let count = dims.len();
        if keep.is_empty() {
            return Err(Error::BadSelection("kept subsystem set is empty".into()));
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        for w in kept.windows(2) {
            if w[0] == w[1] {
                return Err(Error::BadSelection(format!("subsystem {} listed twice", w[0])));
            }
        }
        if let Some(&index) = kept.iter().find(|&&k| k >= count) {
            return Err(Error::IndexOutOfRange { index, count });
        }
        if !allow_full && kept.len() == count {
            return Err(Error::BadSelection("bipartition must leave a nonempty complement".into()));
        }
        let traced: Vec<usize> = (0..count).filter(|k| !kept.contains(k)).collect();
        let st = strides(dims);
        Ok(Self {
            kept_offsets: subset_offsets(dims, &st, &kept),
            traced_offsets: subset_offsets(dims, &st, &traced),
            kept,
        })
    }

    pub(crate) fn kept_dims(&self, dims: &[usize]) -> Vec<usize> {
        self.kept.iter().map(|&k| dims[k]).collect()
    }
}

/// Normalized state vector with a subsystem-dimension signature.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        let expected = total_dim(&dims)?;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { dims, expected, found: amplitudes.len() });
        }
        let n2 = amplitudes.norm_squared();
        if !((n2 - 1.0).abs() <= tol::NORM) {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Scales `amplitudes` to unit norm before validating.
    pub fn normalized(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        let n = amplitudes.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Self::new(amplitudes.unscale(n), dims)
    }

    pub fn from_real(amplitudes: &[f64], dims: Vec<usize>) -> Result<Self> {
        let v = CVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|&x| c(x, 0.0)));
        Self::new(v, dims)
    }

    /// Computational basis state `|index>`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let d = total_dim(&dims)?;
        if index >= d {
            return Err(Error::IndexOutOfRange { index, count: d });
        }
        let mut v = CVector::zeros(d);
        v[index] = c(1.0, 0.0);
        Ok(Self { amplitudes: v, dims })
    }

    pub(crate) fn from_parts_unchecked(amplitudes: CVector, dims: Vec<usize>) -> Self {
        Self { amplitudes, dims }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState { amplitudes, dims }
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix { matrix: m, dims: self.dims.clone() }
    }

    /// Applies a unitary acting on the whole space.
    pub fn apply(&self, u: &CMatrix) -> Result<PureState> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                dims: self.dims.clone(),
                expected: self.dim() * self.dim(),
                found: u.nrows() * u.ncols(),
            });
        }
        PureState::new(u * &self.amplitudes, self.dims.clone())
    }

    /// Amplitudes reshaped into a (kept x traced) matrix.
    fn split_matrix(&self, split: &Split) -> CMatrix {
        let rows = split.kept_offsets.len();
        let cols = split.traced_offsets.len();
        CMatrix::from_fn(rows, cols, |a, t| {
            self.amplitudes[split.kept_offsets[a] + split.traced_offsets[t]]
        })
    }

    /// Reduced density matrix on the subsystems in `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = Split::new(&self.dims, keep, true)?;
        let m = self.split_matrix(&split);
        let rho = linalg::hermitize(&(&m * m.adjoint()));
        Ok(DensityMatrix { matrix: rho, dims: split.kept_dims(&self.dims) })
    }

    /// Spectrum of the reduced state on `keep`, padded with zeros to the kept
    /// dimension. Diagonalizes whichever Gram matrix is smaller.
    pub fn marginal_spectrum(&self, keep: &[usize]) -> Result<Spectrum> {
        let split = Split::new(&self.dims, keep, true)?;
        let m = self.split_matrix(&split);
        let gram = if m.nrows() <= m.ncols() { &m * m.adjoint() } else { m.adjoint() * &m };
        let mut values = hermitian_eigenvalues(&linalg::hermitize(&gram))?;
        values.resize(m.nrows().max(values.len()), 0.0);
        values.truncate(m.nrows());
        Spectrum::from_eigenvalues(values)
    }

    /// Schmidt decomposition across `side_a` versus the complement.
    pub fn schmidt(&self, side_a: &[usize]) -> Result<SchmidtDecomposition> {
        let split = Split::new(&self.dims, side_a, false)?;
        let m = self.split_matrix(&split);
        let svd = m.svd(true, true);
        let u = svd.u.expect("left singular vectors requested");
        let vt = svd.v_t.expect("right singular vectors requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let coefficients = order.iter().map(|&k| svd.singular_values[k]).collect();
        let left_basis = order.iter().map(|&k| u.column(k).into_owned()).collect();
        let right_basis = order.iter().map(|&k| vt.row(k).transpose()).collect();
        Ok(SchmidtDecomposition { coefficients, left_basis, right_basis })
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix with a subsystem signature.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let d = total_dim(&dims)?;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                dims,
                expected: d * d,
                found: matrix.nrows() * matrix.ncols(),
            });
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if !(dev <= tol::HERMITIAN) {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace(&matrix);
        if !((tr.re - 1.0).abs() <= tol::TRACE && tr.im.abs() <= tol::TRACE) {
            return Err(Error::BadTrace(tr.re));
        }
        let matrix = linalg::hermitize(&matrix);
        let values = hermitian_eigenvalues(&matrix)?;
        let min = values.last().copied().unwrap_or(0.0);
        if min < -tol::PSD {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix, dims })
    }


    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d = total_dim(&dims)?;
        let m = CMatrix::identity(d, d).unscale(d as f64);
        Ok(Self { matrix: m, dims })
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        let d = total_dim(&dims)?;
        if probs.len() != d {
            return Err(Error::DimensionMismatch { dims, expected: d, found: probs.len() });
        }
        let diag = CVector::from_iterator(d, probs.iter().map(|&p| c(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&diag), dims)
    }

    /// Convex combination `sum_i w_i rho_i`.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::BadSelection("mixture of zero states".into()))?;
        if weights.len() != states.len() {
            return Err(Error::BadDistribution(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        crate::entropy::ProbDist::new(weights.to_vec())?;
        let mut acc = CMatrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.dims != first.dims {
                return Err(Error::BadSelection("mixture components differ in dims".into()));
            }
            acc += s.matrix.scale(*w);
        }
        Self::new(acc, first.dims.clone())
    }

    /// `sum_i w_i |psi_i><psi_i|`.
    pub fn from_ensemble(weights: &[f64], states: &[PureState]) -> Result<Self> {
        let ds: Vec<DensityMatrix> = states.iter().map(PureState::density).collect();
        Self::mixture(weights, &ds)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix { matrix: linalg::kron(&self.matrix, &other.matrix), dims }
    }

    /// Reduced state on `keep`; the kept subsystems retain their relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = Split::new(&self.dims, keep, true)?;
        let n = split.kept_offsets.len();
        let mut out = CMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let (ra, rb) = (split.kept_offsets[a], split.kept_offsets[b]);
                out[(a, b)] = split
                    .traced_offsets
                    .iter()
                    .map(|&t| self.matrix[(ra + t, rb + t)])
                    .sum();
            }
        }
        Ok(DensityMatrix { matrix: linalg::hermitize(&out), dims: split.kept_dims(&self.dims) })
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::from_eigenvalues(hermitian_eigenvalues(&self.matrix)?)
    }

    /// Eigenvalues (descending, unclamped) and eigenvectors as columns.
    pub fn eigen(&self) -> Result<(Vec<f64>, CMatrix)> {
        hermitian_eigen(&self.matrix)
    }

    /// Tr rho^2.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                dims: self.dims.clone(),
                expected: self.dim() * self.dim(),
                found: u.nrows() * u.ncols(),
            });
        }
        let m = u * &self.matrix * u.adjoint();
        Ok(DensityMatrix { matrix: linalg::hermitize(&m), dims: self.dims.clone() })
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> Result<usize> {
        Ok(hermitian_eigenvalues(&self.matrix)?.iter().filter(|&&v| v > threshold).count())
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.density()
    }
}

/// Eigenvalues of a density matrix, clamped to [0, 1] and sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn from_eigenvalues(mut values: Vec<f64>) -> Result<Self> {
        for v in values.iter_mut() {
            if !v.is_finite() || *v < -tol::PSD || *v > 1.0 + tol::PSD {
                return Err(Error::SpectrumOutOfRange(*v));
            }
            if *v < tol::ZERO_SNAP {
                *v = 0.0;
            } else if *v > 1.0 {
                *v = 1.0;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let sum: f64 = values.iter().sum();
        if !((sum - 1.0).abs() <= tol::SPECTRUM_SUM) {
            return Err(Error::BadDistribution(format!("spectrum sums to {sum}")));
        }
        for v in values.iter_mut() {
            *v /= sum;
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Product distribution of two independent spectra (spectrum of a tensor product).
    pub fn product(&self, other: &Spectrum) -> Spectrum {
        let mut values = Vec::with_capacity(self.len() * other.len());
        for &a in &self.values {
            for &b in &other.values {
                values.push(a * b);
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum { values }
    }

    /// Point mass: the spectrum of a one-dimensional system.
    pub fn trivial() -> Spectrum {
        Spectrum { values: vec![1.0] }
    }
}

/// `psi = sum_k coefficients[k] * left_basis[k] (x) right_basis[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVector>,
    pub right_basis: Vec<CVector>,
}

impl SchmidtDecomposition {
    /// Squared coefficients: the shared spectrum of both marginals.
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|x| x * x).collect()
    }

    /// Number of nonzero coefficients above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.coefficients.iter().filter(|&&x| x > threshold).count()
    }
}
