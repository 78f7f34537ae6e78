//! State files: `{"dims": [..], "re": [..], "im": [..]}`. A vector of
//! length `prod(dims)` is a pure state; `prod(dims)^2` entries are a density
//! matrix in row-major order. `im` may be omitted for real states.

use std::path::Path;

use dualent_core::{CMatrix, CVector, DensityMatrix, PureState, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl LoadedState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(p) => p.density(),
            LoadedState::Mixed(r) => r.clone(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            LoadedState::Pure(p) => p.dims(),
            LoadedState::Mixed(r) => r.dims(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LoadedState::Pure(_) => "pure",
            LoadedState::Mixed(_) => "density",
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::InvalidState(e.to_string())
}

impl StateJson {
    pub fn into_state(self) -> CliResult<LoadedState> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(invalid(format!("dims must be a non-empty list of positive sizes, got {:?}", self.dims)));
        }
        let d: usize = self.dims.iter().product();
        let n = self.re.len();
        if !self.im.is_empty() && self.im.len() != n {
            return Err(invalid(format!("re has {n} entries but im has {}", self.im.len())));
        }
        if self.re.iter().chain(&self.im).any(|x| !x.is_finite()) {
            return Err(invalid("entries must be finite"));
        }
        let im = |k: usize| self.im.get(k).copied().unwrap_or(0.0);
        if n == d {
            let v = CVector::from_iterator(d, (0..d).map(|k| C64::new(self.re[k], im(k))));
            PureState::new(v, self.dims).map(LoadedState::Pure).map_err(invalid)
        } else if n == d * d {
            let m = CMatrix::from_row_iterator(d, d, (0..n).map(|k| C64::new(self.re[k], im(k))));
            DensityMatrix::new(m, self.dims).map(LoadedState::Mixed).map_err(invalid)
        } else {
            Err(invalid(format!(
                "dims {:?} need {d} (pure) or {} (density) entries, found {n}",
                self.dims,
                d * d
            )))
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        StateJson {
            dims: psi.dims().to_vec(),
            re: a.iter().map(|z| z.re).collect(),
            im: a.iter().map(|z| z.im).collect(),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let d = m.nrows();
        let cells: Vec<C64> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect();
        StateJson {
            dims: rho.dims().to_vec(),
            re: cells.iter().map(|z| z.re).collect(),
            im: cells.iter().map(|z| z.im).collect(),
        }
    }
}

pub fn load(path: &Path) -> CliResult<LoadedState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::InvalidState(format!("cannot read {}: {e}", path.display())))?;
    let parsed: StateJson = serde_json::from_str(&text)
        .map_err(|e| CliError::InvalidState(format!("{}: {e}", path.display())))?;
    parsed.into_state()
}

pub const PRESETS: &[&str] = &["bell", "ghz", "maximally-mixed", "werner", "example3", "example4"];

/// Named states. `param` is the dimension for `maximally-mixed`, the
/// singlet weight for `werner` and theta for `example3`.
pub fn preset(name: &str, param: Option<f64>) -> CliResult<LoadedState> {
    let (name, inline) = match name.split_once(':') {
        Some((n, p)) => {
            let v = p.parse::<f64>().map_err(|_| CliError::Domain(format!("bad preset parameter {p:?}")))?;
            (n, Some(v))
        }
        None => (name, None),
    };
    let param = inline.or(param);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let state = match name {
        "bell" => LoadedState::Pure(dualent_core::network::bell()),
        "ghz" => {
            let mut v = vec![0.0; 8];
            v[0] = s;
            v[7] = s;
            LoadedState::Pure(PureState::from_real(&v, vec![2, 2, 2])?)
        }
        "maximally-mixed" => {
            let d = param.ok_or_else(|| CliError::Domain("maximally-mixed needs a dimension (--dim)".into()))?;
            if !(d >= 1.0 && d.fract() == 0.0) {
                return Err(CliError::Domain(format!("dimension must be a positive integer, got {d}")));
            }
            LoadedState::Mixed(DensityMatrix::maximally_mixed(vec![d as usize])?)
        }
        "werner" => {
            let p = param.ok_or_else(|| CliError::Domain("werner needs the singlet weight (--param)".into()))?;
            LoadedState::Mixed(werner(p)?)
        }
        "example3" => {
            let t = param.unwrap_or(std::f64::consts::FRAC_PI_4);
            LoadedState::Pure(dualent_core::monogamy::example3_at(t)?)
        }
        "example4" => LoadedState::Pure(dualent_core::monogamy::example4_state()),
        other => {
            return Err(CliError::Domain(format!("unknown preset {other:?}; known: {}", PRESETS.join(", "))))
        }
    };
    Ok(state)
}

/// p |psi-><psi-| + (1 - p) I/4.
pub fn werner(p: f64) -> CliResult<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Domain(format!("werner weight must lie in [0, 1], got {p}")));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = PureState::from_real(&[0.0, s, -s, 0.0], vec![2, 2])?.density();
    let mixed = DensityMatrix::maximally_mixed(vec![2, 2])?;
    Ok(DensityMatrix::mixture(&[p, 1.0 - p], &[singlet, mixed])?)
}
