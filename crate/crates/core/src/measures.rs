//! Bipartite entanglement measures: concurrence, the total-entropy
//! entanglement `E_t`, entanglement of formation and the Tsallis-total family,
//! with their closed forms on two qubits.

use alloc::format;
use alloc::vec::Vec;

use crate::entropy::{self, QParam};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, CMatrix};
use crate::state::{DensityMatrix, PureState, Spectrum};

/// A split of the subsystems into `side_a` and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub dim_a: usize,
    pub dim_b: usize,
}

impl Bipartition {
    pub fn new(dims: &[usize], side_a: &[usize]) -> Result<Self> {
        let count = dims.len();
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != side_a.len() {
            return Err(Error::BadSelection("repeated subsystem in bipartition".into()));
        }
        if let Some(&index) = a.iter().find(|&&k| k >= count) {
            return Err(Error::IndexOutOfRange { index, count });
        }
        if a.is_empty() || a.len() == count {
            return Err(Error::BadSelection(format!(
                "side {side_a:?} is not a proper nonempty subset of {count} subsystems"
            )));
        }
        let b: Vec<usize> = (0..count).filter(|k| !a.contains(k)).collect();
        let dim_a = a.iter().map(|&k| dims[k]).product();
        let dim_b = b.iter().map(|&k| dims[k]).product();
        Ok(Self { side_a: a, side_b: b, dim_a, dim_b })
    }

    /// Subsystems `0..k` against the rest.
    pub fn leading(dims: &[usize], k: usize) -> Result<Self> {
        let a: Vec<usize> = (0..k).collect();
        Self::new(dims, &a)
    }

    pub fn min_dim(&self) -> usize {
        self.dim_a.min(self.dim_b)
    }
}

/// Which dimension enters the normalization factor `r(d)` of `E_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormPolicy {
    #[default]
    MinDim,
    DimA,
    DimB,
    Explicit(usize),
}

impl NormPolicy {
    pub fn resolve(self, cut: &Bipartition) -> Result<usize> {
        let d = match self {
            NormPolicy::MinDim => cut.min_dim(),
            NormPolicy::DimA => cut.dim_a,
            NormPolicy::DimB => cut.dim_b,
            NormPolicy::Explicit(d) => d,
        };
        if d < 2 {
            return Err(Error::NormDimension(d));
        }
        Ok(d)
    }
}

impl core::fmt::Display for NormPolicy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NormPolicy::MinDim => f.write_str("min"),
            NormPolicy::DimA => f.write_str("a"),
            NormPolicy::DimB => f.write_str("b"),
            NormPolicy::Explicit(d) => write!(f, "explicit:{d}"),
        }
    }
}

impl core::str::FromStr for NormPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "min_dim" => Ok(NormPolicy::MinDim),
            "a" | "dim_a" => Ok(NormPolicy::DimA),
            "b" | "dim_b" => Ok(NormPolicy::DimB),
            other => {
                let d = other
                    .strip_prefix("explicit:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| Error::BadConfig(format!("unknown norm policy {other:?}")))?;
                Ok(NormPolicy::Explicit(d))
            }
        }
    }
}

/// r(d) = d log2 d - (d-1) log2 (d-1), the maximum of S^t in dimension d.
pub fn norm_factor(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::NormDimension(d));
    }
    Ok(entropy::total_entropy_bound(d))
}

fn concurrence_from_purity(purity: f64) -> f64 {
    libm::sqrt((2.0 * (1.0 - purity)).max(0.0))
}

/// C(psi) = sqrt(2 (1 - Tr rho_A^2)).
pub fn concurrence_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    let rho_a = psi.reduced(&cut.side_a)?;
    Ok(concurrence_from_purity(rho_a.purity()))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    let ok = rho.dims() == [2, 2] || (rho.dims() == [4] && rho.dim() == 4);
    if !ok {
        return Err(Error::WrongShape { expected: "two-qubit (dims [2, 2])", found: rho.dims().to_vec() });
    }
    Ok(())
}

/// sigma_y (x) sigma_y.
pub fn spin_flip() -> CMatrix {
    let mut y = CMatrix::zeros(4, 4);
    y[(0, 3)] = c(-1.0, 0.0);
    y[(1, 2)] = c(1.0, 0.0);
    y[(2, 1)] = c(1.0, 0.0);
    y[(3, 0)] = c(-1.0, 0.0);
    y
}

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}.
///
/// The `l_i` are the singular values of `W^T (sigma_y (x) sigma_y) W` for any
/// factorization `rho = W W^dagger`; these coincide with the square roots of
/// the eigenvalues of `rho rho~` but avoid square roots of eigenvalues that
/// are pure rounding noise.
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let (vals, vecs) = hermitian_eigen(rho.matrix())?;
    let mut w = vecs;
    for (k, &v) in vals.iter().enumerate() {
        let mut col = w.column_mut(k);
        col *= c(libm::sqrt(v.max(0.0)), 0.0);
    }
    let tau = w.transpose() * spin_flip() * &w;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// h(x) = g((1 + sqrt(1 - x^2)) / 2), the two-qubit link between C and E_t.
pub fn h(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { function: "h", value: x });
    }
    let s = libm::sqrt((1.0 - x * x).max(0.0));
    entropy::g((1.0 + s) / 2.0)
}

/// f_q(x) = 2 [1 - ((1+s)/2)^q - ((1-s)/2)^q] / (q - 1), s = sqrt(1 - x^2).
pub fn f_q(x: f64, q: QParam) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { function: "f_q", value: x });
    }
    let s = libm::sqrt((1.0 - x * x).max(0.0));
    let qv = q.get();
    let a = (1.0 + s) / 2.0;
    let b = (1.0 - s) / 2.0;
    // b^q for b = 0 is 0 since q > 0
    Ok(2.0 * (1.0 - libm::pow(a, qv) - libm::pow(b, qv)) / (qv - 1.0))
}

/// E_t(psi) = S^t(rho_A) / r(d), d chosen by `norm`.
pub fn e_t_pure(psi: &PureState, cut: &Bipartition, norm: NormPolicy) -> Result<f64> {
    PureMeasure::EntropyEntanglement(norm).evaluate(psi, cut)
}

/// E_t of a two-qubit state: h(C(rho)).
pub fn e_t_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    h(concurrence_two_qubit(rho)?.min(1.0))
}

/// EOF of a pure state: S(rho_A).
pub fn eof_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    PureMeasure::Formation.evaluate(psi, cut)
}

pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    e_t_two_qubit(rho)
}

/// T^t_q(rho_A), unnormalized.
pub fn t_q_pure(psi: &PureState, cut: &Bipartition, q: QParam) -> Result<f64> {
    PureMeasure::TsallisTotal(q).evaluate(psi, cut)
}

/// T^t_q(rho_A) divided by its value on the maximally mixed state of the
/// normalization dimension.
pub fn t_q_pure_normalized(psi: &PureState, cut: &Bipartition, q: QParam, norm: NormPolicy) -> Result<f64> {
    let d = norm.resolve(cut)?;
    let max = entropy::tsallis_total(&entropy::ProbDist::uniform(d)?, q);
    Ok(t_q_pure(psi, cut, q)? / max)
}

pub fn t_q_two_qubit(rho: &DensityMatrix, q: QParam) -> Result<f64> {
    f_q(concurrence_two_qubit(rho)?.min(1.0), q)
}

/// The pure-state measures that admit a convex-roof extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PureMeasure {
    /// S^t(rho_A) / r(d).
    EntropyEntanglement(NormPolicy),
    /// S(rho_A).
    Formation,
    /// T^t_q(rho_A).
    TsallisTotal(QParam),
    /// sqrt(2 (1 - Tr rho_A^2)).
    Concurrence,
}

impl PureMeasure {
    /// Value from the marginal spectrum on `cut.side_a`.
    pub fn on_spectrum(&self, marginal: &Spectrum, cut: &Bipartition) -> Result<f64> {
        let v = marginal.values();
        Ok(match *self {
            PureMeasure::EntropyEntanglement(norm) => {
                entropy::total_values(v) / norm_factor(norm.resolve(cut)?)?
            }
            PureMeasure::Formation => entropy::shannon_values(v),
            PureMeasure::TsallisTotal(q) => entropy::tsallis_total_values(v, q),
            PureMeasure::Concurrence => concurrence_from_purity(v.iter().map(|x| x * x).sum()),
        })
    }

    pub fn evaluate(&self, psi: &PureState, cut: &Bipartition) -> Result<f64> {
        if psi.dims().len() != cut.side_a.len() + cut.side_b.len() {
            return Err(Error::BadSelection("bipartition does not match the state".into()));
        }
        let spec = psi.marginal_spectrum(&cut.side_a)?;
        self.on_spectrum(&spec, cut)
    }

    /// Closed-form value on a two-qubit mixed state, when one exists.
    pub fn two_qubit(&self, rho: &DensityMatrix) -> Result<f64> {
        let conc = concurrence_two_qubit(rho)?.min(1.0);
        match *self {
            PureMeasure::EntropyEntanglement(norm) => {
                let cut = Bipartition::new(&[2, 2], &[0])?;
                if norm.resolve(&cut)? != 2 {
                    return Err(Error::Inapplicable(format!(
                        "two-qubit closed form assumes r(2); policy {norm} gives another factor"
                    )));
                }
                h(conc)
            }
            PureMeasure::Formation => h(conc),
            PureMeasure::TsallisTotal(q) => f_q(conc, q),
            PureMeasure::Concurrence => Ok(conc),
        }
    }

    pub fn name(&self) -> alloc::string::String {
        match self {
            PureMeasure::EntropyEntanglement(n) => format!("e_t[{n}]"),
            PureMeasure::Formation => "eof".into(),
            PureMeasure::TsallisTotal(q) => format!("t_q[q={}]", q.get()),
            PureMeasure::Concurrence => "concurrence".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, CVector};
    use crate::random::{haar_unitary, random_pure, rng_from_seed};
    use alloc::string::ToString;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> PureState {
        PureState::from_real(&[S, 0.0, 0.0, S], vec![2, 2]).unwrap()
    }

    fn qubit_cut() -> Bipartition {
        Bipartition::new(&[2, 2], &[0]).unwrap()
    }

    fn werner(p: f64) -> DensityMatrix {
        let b = bell().density();
        let m = b.matrix().scale(p) + CMatrix::identity(4, 4).scale((1.0 - p) / 4.0);
        DensityMatrix::new(m, vec![2, 2]).unwrap()
    }

    /// Square roots of the eigenvalues of rho rho~ through the Hermitian
    /// product sqrt(rho) rho~ sqrt(rho).
    fn wootters_oracle(rho: &DensityMatrix) -> f64 {
        let (vals, vecs) = hermitian_eigen(rho.matrix()).unwrap();
        let diag = CVector::from_iterator(4, vals.iter().map(|&v| c(libm::sqrt(v.max(0.0)), 0.0)));
        let sqrt_rho = &vecs * CMatrix::from_diagonal(&diag) * vecs.adjoint();
        let y = spin_flip();
        let tilde = &y * rho.matrix().map(|z| z.conj()) * &y;
        let m = &sqrt_rho * tilde * &sqrt_rho;
        let m = crate::linalg::hermitize(&m);
        let ev = hermitian_eigenvalues(&m).unwrap();
        let l: Vec<f64> = ev.iter().map(|v| libm::sqrt(v.max(0.0))).collect();
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    /// The eigenvalues of the non-Hermitian product rho rho~ via Schur.
    fn schur_oracle(rho: &DensityMatrix) -> f64 {
        let y = spin_flip();
        let tilde = &y * rho.matrix().map(|z| z.conj()) * &y;
        let prod = rho.matrix() * tilde;
        let t = nalgebra::linalg::Schur::new(prod).unpack().1;
        let mut l: Vec<f64> = (0..4).map(|k| libm::sqrt(t[(k, k)].re.max(0.0))).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn norm_factor_examples() {
        assert_abs_diff_eq!(norm_factor(2).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(norm_factor(4).unwrap(), 8.0 - 3.0 * libm::log2(3.0), epsilon = 1e-14);
        assert_abs_diff_eq!(norm_factor(4).unwrap(), 3.245112, epsilon = 1e-6);
        assert_abs_diff_eq!(norm_factor(3).unwrap(), 3.0 * libm::log2(3.0) - 2.0, epsilon = 1e-14);
        assert!(matches!(norm_factor(1), Err(Error::NormDimension(1))));
    }

    #[test]
    fn norm_policy_resolution_and_parsing() {
        let cut = Bipartition::new(&[4, 2, 2], &[1]).unwrap();
        assert_eq!(NormPolicy::MinDim.resolve(&cut).unwrap(), 2);
        assert_eq!(NormPolicy::DimB.resolve(&cut).unwrap(), 8);
        assert_eq!(NormPolicy::Explicit(4).resolve(&cut).unwrap(), 4);
        assert!(NormPolicy::Explicit(1).resolve(&cut).is_err());
        assert_eq!("explicit:3".parse::<NormPolicy>().unwrap(), NormPolicy::Explicit(3));
        assert_eq!("min".parse::<NormPolicy>().unwrap(), NormPolicy::MinDim);
        assert!("max".parse::<NormPolicy>().is_err());
        assert_eq!(NormPolicy::Explicit(6).to_string(), "explicit:6");
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(&[2, 2], &[]).is_err());
        assert!(Bipartition::new(&[2, 2], &[0, 1]).is_err());
        assert!(Bipartition::new(&[2, 2], &[2]).is_err());
        let b = Bipartition::new(&[3, 2, 5], &[2, 0]).unwrap();
        assert_eq!(b.side_a, vec![0, 2]);
        assert_eq!(b.side_b, vec![1]);
        assert_eq!((b.dim_a, b.dim_b), (15, 2));
    }

    #[test]
    fn concurrence_pure_examples() {
        let cut = qubit_cut();
        let prod = PureState::basis(vec![2, 2], 1).unwrap();
        assert_abs_diff_eq!(concurrence_pure(&prod, &cut).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(concurrence_pure(&bell(), &cut).unwrap(), 1.0, epsilon = 1e-14);
        // sqrt(l0)|0>|phi0> + sqrt(l1)|1>|phi1> with phi_i orthonormal in C^3
        let (l0, l1) = (0.8, 0.2);
        let amps = [libm::sqrt(l0), 0.0, 0.0, 0.0, 0.0, libm::sqrt(l1)];
        let psi = PureState::from_real(&amps, vec![2, 3]).unwrap();
        let cut23 = Bipartition::new(&[2, 3], &[0]).unwrap();
        assert_abs_diff_eq!(concurrence_pure(&psi, &cut23).unwrap(), 2.0 * libm::sqrt(l0 * l1), epsilon = 1e-14);
    }

    #[test]
    fn concurrence_two_qubit_examples() {
        assert_abs_diff_eq!(concurrence_two_qubit(&bell().density()).unwrap(), 1.0, epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert_abs_diff_eq!(concurrence_two_qubit(&mixed).unwrap(), 0.0, epsilon = 1e-14);
        // Werner at p = 2/3: oracle value frozen from the Hermitian-product route.
        let w = werner(2.0 / 3.0);
        let oracle = wootters_oracle(&w);
        assert_abs_diff_eq!(oracle, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_two_qubit(&w).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(schur_oracle(&w), 0.5, epsilon = 1e-8);
        assert!(concurrence_two_qubit(&DensityMatrix::maximally_mixed(vec![2, 3]).unwrap()).is_err());
    }

    #[test]
    fn concurrence_two_qubit_agrees_with_oracles_on_random_states() {
        for seed in 0..40 {
            let rho = crate::random::random_density(&[2, 2], 1 + (seed as usize % 4), seed).unwrap();
            let fast = concurrence_two_qubit(&rho).unwrap();
            assert_abs_diff_eq!(fast, wootters_oracle(&rho), epsilon = 1e-7);
            assert_abs_diff_eq!(fast, schur_oracle(&rho), epsilon = 1e-6);
        }
    }

    #[test]
    fn concurrence_two_qubit_matches_pure_formula() {
        let cut = qubit_cut();
        for seed in 0..200 {
            let psi = random_pure(&[2, 2], seed);
            let a = concurrence_two_qubit(&psi.density()).unwrap();
            let b = concurrence_pure(&psi, &cut).unwrap();
            assert!((a - b).abs() < 1e-10, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn h_examples() {
        assert_eq!(h(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(h(1.0).unwrap(), 1.0, epsilon = 1e-15);
        let x = 2.0 * libm::sqrt(0.75 * 0.25);
        let expected = -0.75 * libm::log2(0.75) - 0.25 * libm::log2(0.25);
        assert_abs_diff_eq!(h(x).unwrap(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, 0.811278, epsilon = 1e-6);
        assert!(h(1.01).is_err());
        assert!(h(-0.01).is_err());
    }

    #[test]
    fn h_is_increasing_and_convex_on_grid() {
        let step = 1e-4;
        for k in 1..=99 {
            let x = k as f64 / 100.0;
            let d1 = h(x + step).unwrap() - h(x).unwrap();
            let d2 = h(x + step).unwrap() - 2.0 * h(x).unwrap() + h(x - step).unwrap();
            assert!(d1 > 0.0, "x={x}");
            assert!(d2 > 0.0, "x={x}: {d2}");
        }
    }

    #[test]
    fn e_t_pure_examples() {
        let prod = random_pure(&[3], 1).tensor(&random_pure(&[2], 2));
        let cut = Bipartition::new(&[3, 2], &[0]).unwrap();
        assert_abs_diff_eq!(e_t_pure(&prod, &cut, NormPolicy::MinDim).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e_t_pure(&bell(), &qubit_cut(), NormPolicy::MinDim).unwrap(), 1.0, epsilon = 1e-13);
        let psi = PureState::from_real(&[S, 0.0, 0.0, S], vec![2, 2]).unwrap();
        let cut = qubit_cut();
        assert!(e_t_pure(&psi, &cut, NormPolicy::Explicit(1)).is_err());
    }

    #[test]
    fn e_t_equals_h_of_concurrence_for_qubit_qudit() {
        for d in 2..=5 {
            let cut = Bipartition::new(&[2, d], &[0]).unwrap();
            for seed in 0..30 {
                let psi = random_pure(&[2, d], 1000 * d as u64 + seed);
                let et = e_t_pure(&psi, &cut, NormPolicy::MinDim).unwrap();
                let hc = h(concurrence_pure(&psi, &cut).unwrap().min(1.0)).unwrap();
                assert!((et - hc).abs() < 1e-10, "d={d}: {et} vs {hc}");
            }
        }
    }

    #[test]
    fn two_qubit_measures_on_standard_states() {
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert_abs_diff_eq!(e_t_two_qubit(&mixed).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e_t_two_qubit(&bell().density()).unwrap(), 1.0, epsilon = 1e-10);
        // h(1/2) by direct evaluation: a = (1 + sqrt(3)/2)/2
        let a = (1.0 + libm::sqrt(3.0) / 2.0) / 2.0;
        let expected = -a * libm::log2(a) - (1.0 - a) * libm::log2(1.0 - a);
        assert_abs_diff_eq!(expected, 0.354579, epsilon = 1e-6);
        assert_abs_diff_eq!(e_t_two_qubit(&werner(2.0 / 3.0)).unwrap(), expected, epsilon = 1e-11);
        assert_abs_diff_eq!(eof_two_qubit(&bell().density()).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(eof_pure(&bell(), &qubit_cut()).unwrap(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn f_q_examples() {
        for q in [0.5, 2.0, 3.5] {
            assert_abs_diff_eq!(f_q(0.0, QParam::new(q).unwrap()).unwrap(), 0.0, epsilon = 1e-15);
        }
        let q2 = QParam::new(2.0).unwrap();
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            assert!((f_q(x, q2).unwrap() - x * x).abs() < 1e-12);
        }
        assert_abs_diff_eq!(f_q(1.0, q2).unwrap(), 1.0, epsilon = 1e-15);
        assert!(f_q(1.5, q2).is_err());
    }

    #[test]
    fn t_q_examples() {
        let q2 = QParam::new(2.0).unwrap();
        let prod = PureState::basis(vec![2, 2], 2).unwrap();
        for q in [0.4, 2.0, 3.0] {
            assert_abs_diff_eq!(t_q_pure(&prod, &qubit_cut(), QParam::new(q).unwrap()).unwrap(), 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(t_q_pure(&bell(), &qubit_cut(), q2).unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t_q_two_qubit(&bell().density(), q2).unwrap(), 1.0, epsilon = 1e-10);
        let cut = Bipartition::new(&[2, 3], &[0]).unwrap();
        for seed in 0..20 {
            let psi = random_pure(&[2, 3], seed);
            for q in [0.5, 2.0, 3.0] {
                let q = QParam::new(q).unwrap();
                let lhs = t_q_pure(&psi, &cut, q).unwrap();
                let rhs = f_q(concurrence_pure(&psi, &cut).unwrap(), q).unwrap();
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
        let norm = t_q_pure_normalized(&bell(), &qubit_cut(), q2, NormPolicy::MinDim).unwrap();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn local_unitary_invariance() {
        let cut = Bipartition::new(&[2, 3], &[0]).unwrap();
        let mut rng = rng_from_seed(5);
        for seed in 0..10 {
            let psi = random_pure(&[2, 3], seed);
            let u = haar_unitary(2, &mut rng).kronecker(&haar_unitary(3, &mut rng));
            let phi = psi.apply(&u).unwrap();
            let a = e_t_pure(&psi, &cut, NormPolicy::MinDim).unwrap();
            let b = e_t_pure(&phi, &cut, NormPolicy::MinDim).unwrap();
            assert!((a - b).abs() < 1e-8);
        }
        for seed in 0..10 {
            let rho = crate::random::random_density(&[2, 2], 3, seed).unwrap();
            let u = haar_unitary(2, &mut rng).kronecker(&haar_unitary(2, &mut rng));
            let sigma = rho.conjugate(&u).unwrap();
            let q = QParam::new(2.5).unwrap();
            assert!((e_t_two_qubit(&rho).unwrap() - e_t_two_qubit(&sigma).unwrap()).abs() < 1e-8);
            assert!((t_q_two_qubit(&rho, q).unwrap() - t_q_two_qubit(&sigma, q).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn separable_mixtures_have_zero_concurrence() {
        let mut rng = rng_from_seed(77);
        for _ in 0..20 {
            let n = 4;
            let weights = crate::random::random_weights(n, &mut rng);
            let states: Vec<PureState> = (0..n)
                .map(|_| {
                    crate::random::random_pure_with(&[2], &mut rng)
                        .tensor(&crate::random::random_pure_with(&[2], &mut rng))
                })
                .collect();
            let rho = DensityMatrix::from_ensemble(&weights, &states).unwrap();
            assert!(concurrence_two_qubit(&rho).unwrap() < 1e-9);
            assert!(e_t_two_qubit(&rho).unwrap() < 1e-9);
        }
    }

    #[test]
    fn two_qubit_e_t_is_convex_on_mixtures() {
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let w = crate::random::random_weights(3, &mut rng);
            let parts: Vec<DensityMatrix> = (0..3)
                .map(|_| crate::random::random_density_with(&[2, 2], 2, &mut rng).unwrap())
                .collect();
            let mix = DensityMatrix::mixture(&w, &parts).unwrap();
            let lhs = e_t_two_qubit(&mix).unwrap();
            let rhs: f64 = w.iter().zip(&parts).map(|(p, r)| p * e_t_two_qubit(r).unwrap()).sum();
            assert!(lhs <= rhs + 1e-9);
        }
    }

    #[test]
    fn pure_measure_two_qubit_rejects_mismatched_norm() {
        let m = PureMeasure::EntropyEntanglement(NormPolicy::Explicit(4));
        assert!(matches!(m.two_qubit(&bell().density()), Err(Error::Inapplicable(_))));
        let q = QParam::new(2.0).unwrap();
        assert_abs_diff_eq!(PureMeasure::TsallisTotal(q).two_qubit(&bell().density()).unwrap(), 1.0, epsilon = 1e-10);
    }
}
