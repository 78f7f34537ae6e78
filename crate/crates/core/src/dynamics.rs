//! Heisenberg spin chains in a z-field and their exact time evolution.
//!
//! Qubit 0 is the most significant bit of the basis index.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

use crate::entropy;
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, CMatrix, CVector};
use crate::measures::Bipartition;
use crate::random::rng_from_seed;
use crate::state::PureState;

pub const MAX_QUBITS: usize = 12;

/// sum J_ij sigma_i . sigma_j + sum h_j sigma^z_j
#[derive(Debug, Clone, PartialEq)]
pub struct SpinHamiltonian {
    n: usize,
    couplings: Vec<(usize, usize, f64)>,
    fields: Vec<f64>,
}

impl SpinHamiltonian {
    /// `fields` must have one entry per qubit, each in [-1, 1].
    pub fn new(n: usize, couplings: Vec<(usize, usize, f64)>, fields: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::BadHamiltonian(format!("{n} qubits; supported range is 1..={MAX_QUBITS}")));
        }
        for &(i, j, strength) in &couplings {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), count: n });
            }
            if i == j {
                return Err(Error::BadHamiltonian(format!("self-coupling on qubit {i}")));
            }
            if !strength.is_finite() {
                return Err(Error::BadHamiltonian(format!("coupling ({i}, {j}) is {strength}")));
            }
        }
        if fields.len() != n {
            return Err(Error::BadHamiltonian(format!("{} fields for {n} qubits", fields.len())));
        }
        if let Some(h) = fields.iter().find(|h| !(-1.0..=1.0).contains(*h)) {
            return Err(Error::BadHamiltonian(format!("field {h} outside [-1, 1]")));
        }
        Ok(Self { n, couplings, fields })
    }

    /// Five qubits: 0.5 s0.s3 + 0.4 s1.s2 + 0.3 s2.s3 - 0.5 s3.s4.
    pub fn h5(fields: Vec<f64>) -> Result<Self> {
        Self::new(5, vec![(0, 3, 0.5), (1, 2, 0.4), (2, 3, 0.3), (3, 4, -0.5)], fields)
    }

    /// Six qubits: 0.4 s0.s2 + 0.5 s1.s4 - 0.3 s2.s3 + 0.2 s2.s5 + 0.6 s4.s5.
    pub fn h6(fields: Vec<f64>) -> Result<Self> {
        Self::new(
            6,
            vec![(0, 2, 0.4), (1, 4, 0.5), (2, 3, -0.3), (2, 5, 0.2), (4, 5, 0.6)],
            fields,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &[(usize, usize, f64)] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Dense 2^n x 2^n matrix.
    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        let bit = |q: usize| 1usize << (self.n - 1 - q);
        let mut m = CMatrix::zeros(d, d);
        for s in 0..d {
            let mut diag = 0.0;
            for (q, &h) in self.fields.iter().enumerate() {
                diag += if s & bit(q) == 0 { h } else { -h };
            }
            for &(i, j, jij) in &self.couplings {
                let (bi, bj) = (s & bit(i) != 0, s & bit(j) != 0);
                if bi == bj {
                    diag += jij;
                } else {
                    diag -= jij;
                    // (xx + yy) swaps antiparallel spins with amplitude 2
                    let t = s ^ bit(i) ^ bit(j);
                    m[(t, s)] += c(2.0 * jij, 0.0);
                }
            }
            m[(s, s)] += c(diag, 0.0);
        }
        m
    }
}

/// n fields uniform on [-1, 1], deterministic in `seed`.
pub fn random_fields(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// |+>^n
pub fn plus_state(n: usize) -> Result<PureState> {
    let d = 1usize << n;
    let a = 1.0 / libm::sqrt(d as f64);
    PureState::new(CVector::from_element(d, c(a, 0.0)), vec![2; n])
}

/// e^{-iHt} from one eigendecomposition of H.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: CMatrix,
    hamiltonian: CMatrix,
    n: usize,
}

impl Propagator {
    pub fn new(h: &SpinHamiltonian) -> Result<Self> {
        let m = h.matrix();
        let (energies, vectors) = hermitian_eigen(&m)?;
        Ok(Self { energies, vectors, hamiltonian: m, n: h.n })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    fn check(&self, psi: &PureState) -> Result<()> {
        if psi.dims() != vec![2; self.n].as_slice() {
            return Err(Error::DimensionMismatch {
                dims: psi.dims().to_vec(),
                expected: 1 << self.n,
                found: psi.dim(),
            });
        }
        Ok(())
    }

    pub fn evolve(&self, psi0: &PureState, t: f64) -> Result<PureState> {
        self.check(psi0)?;
        let mut coeffs = self.vectors.adjoint() * psi0.amplitudes();
        for (k, &e) in self.energies.iter().enumerate() {
            coeffs[k] *= c(libm::cos(e * t), -libm::sin(e * t));
        }
        let out = &self.vectors * coeffs;
        // one renormalization absorbs eigenvector round-off
        PureState::normalized(out, psi0.dims().to_vec())
    }

    /// <psi|H|psi>
    pub fn energy(&self, psi: &PureState) -> Result<f64> {
        self.check(psi)?;
        let a = psi.amplitudes();
        Ok(a.dotc(&(&self.hamiltonian * a)).re)
    }
}

pub fn evolve(psi0: &PureState, h: &SpinHamiltonian, t: f64) -> Result<PureState> {
    Propagator::new(h)?.evolve(psi0, t)
}

/// Every single-qubit cut, then the first floor(n/2) qubits against the rest.
pub fn default_cuts(n: usize) -> Result<Vec<(String, Bipartition)>> {
    let dims = vec![2; n];
    let mut out = Vec::with_capacity(n + 1);
    for q in 0..n {
        out.push((format!("q{q}"), Bipartition::new(&dims, &[q])?));
    }
    if n >= 2 {
        out.push((format!("half{}", n / 2), Bipartition::leading(&dims, n / 2)?));
    }
    Ok(out)
}

/// (S, S^t) of a reduced state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair {
    pub von_neumann: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub cut_labels: Vec<String>,
    /// records[t][k] for time t and cut k.
    pub records: Vec<Vec<EntropyPair>>,
    pub norms: Vec<f64>,
    pub energies: Vec<f64>,
}

pub fn entropy_trajectory(
    psi0: &PureState,
    h: &SpinHamiltonian,
    times: &[f64],
    cuts: &[(String, Bipartition)],
) -> Result<Trajectory> {
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::BadConfig("times must be strictly increasing".into()));
    }
    let prop = Propagator::new(h)?;
    let mut records = Vec::with_capacity(times.len());
    let mut norms = Vec::with_capacity(times.len());
    let mut energies = Vec::with_capacity(times.len());
    for &t in times {
        let psi = prop.evolve(psi0, t)?;
        norms.push(psi.amplitudes().norm());
        energies.push(prop.energy(&psi)?);
        let mut row = Vec::with_capacity(cuts.len());
        for (_, cut) in cuts {
            let spec = psi.marginal_spectrum(&cut.side_a)?;
            row.push(EntropyPair {
                von_neumann: entropy::shannon_values(spec.values()),
                total: entropy::total_values(spec.values()),
            });
        }
        records.push(row);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        cut_labels: cuts.iter().map(|(l, _)| l.clone()).collect(),
        records,
        norms,
        energies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_deviation, hermitian_eigenvalues, trace};
    use crate::monogamy::linspace;
    use approx::assert_abs_diff_eq;

    #[test]
    fn singlet_ground_energy() {
        let h = SpinHamiltonian::new(2, vec![(0, 1, 1.0)], vec![0.0, 0.0]).unwrap();
        let ev = hermitian_eigenvalues(&h.matrix()).unwrap();
        assert_abs_diff_eq!(*ev.last().unwrap(), -3.0, epsilon = 1e-12);
        // triplet at +1
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_coupling_is_diagonal_field() {
        let f = vec![0.3, -0.7, 0.1];
        let h = SpinHamiltonian::new(3, vec![], f.clone()).unwrap();
        let m = h.matrix();
        for s in 0..8 {
            let mut e = 0.0;
            for q in 0..3 {
                e += if s & (1 << (2 - q)) == 0 { f[q] } else { -f[q] };
            }
            assert_abs_diff_eq!(m[(s, s)].re, e, epsilon = 1e-15);
            for t in 0..8 {
                if t != s {
                    assert_eq!(m[(s, t)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn presets_hermitian_traceless() {
        for h in [SpinHamiltonian::h5(vec![0.0; 5]).unwrap(), SpinHamiltonian::h6(vec![0.0; 6]).unwrap()] {
            let m = h.matrix();
            assert!(hermitian_deviation(&m) < 1e-12);
            assert_abs_diff_eq!(trace(&m).re, 0.0, epsilon = 1e-12);
        }
        let h = SpinHamiltonian::h5(random_fields(5, 3)).unwrap();
        assert!(hermitian_deviation(&h.matrix()) < 1e-12);
    }

    #[test]
    fn pauli_kron_oracle() {
        // dense oracle: build sigma.sigma from Kronecker products
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let y = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let z = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let id = CMatrix::identity(2, 2);
        let op = |q: usize, p: &CMatrix| {
            let mut m = CMatrix::identity(1, 1);
            for k in 0..3 {
                m = crate::linalg::kron(&m, if k == q { p } else { &id });
            }
            m
        };
        let fields = vec![0.2, -0.4, 0.9];
        let h = SpinHamiltonian::new(3, vec![(0, 2, 0.7), (1, 2, -0.3)], fields.clone()).unwrap();
        let mut dense = CMatrix::zeros(8, 8);
        for &(i, j, s) in h.couplings() {
            for p in [&x, &y, &z] {
                dense += op(i, p) * op(j, p) * c(s, 0.0);
            }
        }
        for (q, &f) in fields.iter().enumerate() {
            dense += op(q, &z) * c(f, 0.0);
        }
        assert!(crate::linalg::frobenius_distance(&dense, &h.matrix()) < 1e-13);
    }

    #[test]
    fn validation() {
        assert!(SpinHamiltonian::new(2, vec![(0, 0, 1.0)], vec![0.0; 2]).is_err());
        assert!(SpinHamiltonian::new(2, vec![(0, 2, 1.0)], vec![0.0; 2]).is_err());
        assert!(SpinHamiltonian::new(2, vec![], vec![0.0]).is_err());
        assert!(SpinHamiltonian::new(2, vec![], vec![0.0, 1.5]).is_err());
        assert!(SpinHamiltonian::new(13, vec![], vec![0.0; 13]).is_err());
    }

    #[test]
    fn evolution_basics() {
        let h = SpinHamiltonian::h5(random_fields(5, 1)).unwrap();
        let p = Propagator::new(&h).unwrap();
        let psi = plus_state(5).unwrap();
        let same = p.evolve(&psi, 0.0).unwrap();
        assert!((same.amplitudes() - psi.amplitudes()).norm() < 1e-12);
        let e0 = p.energy(&psi).unwrap();
        for t in [0.5, 7.0, 100.0] {
            let s = p.evolve(&psi, t).unwrap();
            assert_abs_diff_eq!(p.energy(&s).unwrap(), e0, epsilon = 1e-9);
        }
        assert!(p.evolve(&plus_state(4).unwrap(), 1.0).is_err());
    }

    #[test]
    fn diagonal_hamiltonian_keeps_basis_state_product() {
        let h = SpinHamiltonian::new(4, vec![], random_fields(4, 9)).unwrap();
        let psi = PureState::basis(vec![2; 4], 5).unwrap();
        let cuts = default_cuts(4).unwrap();
        let tr = entropy_trajectory(&psi, &h, &linspace(0.0, 10.0, 5), &cuts).unwrap();
        for row in &tr.records {
            for r in row {
                assert!(r.von_neumann.abs() < 1e-12 && r.total.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn no_coupling_no_entanglement() {
        let h = SpinHamiltonian::new(5, vec![], random_fields(5, 2)).unwrap();
        let tr = entropy_trajectory(&plus_state(5).unwrap(), &h, &linspace(0.0, 100.0, 20), &default_cuts(5).unwrap())
            .unwrap();
        assert!(tr.records.iter().flatten().all(|r| r.von_neumann < 1e-10));
    }

    #[test]
    fn trajectory_inequality_and_start() {
        let h = SpinHamiltonian::h6(random_fields(6, 4)).unwrap();
        let cuts = default_cuts(6).unwrap();
        assert_eq!(cuts.len(), 7);
        let tr = entropy_trajectory(&plus_state(6).unwrap(), &h, &linspace(0.0, 100.0, 40), &cuts).unwrap();
        for r in &tr.records[0] {
            assert!(r.von_neumann.abs() < 1e-12 && r.total.abs() < 1e-12);
        }
        for r in tr.records.iter().flatten() {
            assert!(r.von_neumann <= r.total + 1e-12);
            assert!(r.total <= 2.0 * r.von_neumann + 1e-9);
        }
        assert!(tr.norms.iter().all(|n| (n - 1.0).abs() < 1e-10));
    }

    #[test]
    fn times_must_increase() {
        let h = SpinHamiltonian::h5(vec![0.0; 5]).unwrap();
        let r = entropy_trajectory(&plus_state(5).unwrap(), &h, &[0.0, 1.0, 1.0], &default_cuts(5).unwrap());
        assert!(matches!(r, Err(Error::BadConfig(_))));
    }
}
