use alloc::string::String;
use alloc::vec::Vec;

/// Failures raised by state construction and the numerical routines built on it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: dims {dims:?} imply {expected} entries, found {found}")]
    DimensionMismatch {
        dims: Vec<usize>,
        expected: usize,
        found: usize,
    },

    #[error("subsystem dimensions must be positive, got {0:?}")]
    BadDims(Vec<usize>),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    BadTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("eigenvalue {0:e} lies outside [0, 1] beyond tolerance")]
    SpectrumOutOfRange(f64),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid subsystem selection: {0}")]
    BadSelection(String),

    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("probability distribution invalid: {0}")]
    BadDistribution(String),

    #[error("q = {0} is not admissible (need q > 0 and q != 1)")]
    BadQ(f64),

    #[error("normalization dimension {0} is below 2")]
    NormDimension(usize),

    #[error("entropy function violates f(0) = f(1) = 0 (f(0) = {f0}, f(1) = {f1})")]
    EndpointCondition { f0: f64, f1: f64 },

    #[error("expected {expected} matrix, found dims {found:?}")]
    WrongShape {
        expected: &'static str,
        found: Vec<usize>,
    },

    #[error("matrix columns are not orthonormal (max deviation {0:e})")]
    NotIsometry(f64),

    #[error("invalid Hamiltonian: {0}")]
    BadHamiltonian(String),

    #[error("invalid network: {0}")]
    BadNetwork(String),

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("eigensolver did not converge on a {0}x{0} matrix")]
    Eigensolver(usize),

    #[error("evaluator not applicable: {0}")]
    Inapplicable(String),
}

pub type Result<T> = core::result::Result<T, Error>;
