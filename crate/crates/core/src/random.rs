//! Seeded random states and Haar unitaries.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{c, cabs, CMatrix, CVector, C64};
use crate::state::{DensityMatrix, PureState};

pub type StateRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> StateRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian with E|z|^2 = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// diag(R) divided out.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = gaussian_matrix(d, d, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let z = r[(k, k)];
        let n = cabs(z);
        if n > 0.0 {
            let phase = z / c(n, 0.0);
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    q
}

pub fn random_pure_with<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> PureState {
    let d: usize = dims.iter().product();
    let v = CVector::from_fn(d, |_, _| complex_gaussian(rng));
    PureState::normalized(v, dims.to_vec()).expect("Gaussian vector is nonzero")
}

/// Haar-random pure state, deterministic in `seed`.
pub fn random_pure(dims: &[usize], seed: u64) -> PureState {
    random_pure_with(dims, &mut rng_from_seed(seed))
}

/// Marginal of a random purification with an ancilla of dimension `rank`.
pub fn random_density_with<R: Rng + ?Sized>(
    dims: &[usize],
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    if rank == 0 || rank > d {
        return Err(Error::BadConfig(alloc::format!("rank {rank} not in 1..={d}")));
    }
    let mut full = dims.to_vec();
    full.push(rank);
    let psi = random_pure_with(&full, rng);
    let keep: Vec<usize> = (0..dims.len()).collect();
    psi.reduced(&keep)
}

pub fn random_density(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dims, rank, &mut rng_from_seed(seed))
}

/// Random probability vector of length `n` (normalized exponentials).
pub fn random_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -libm::log(1.0 - rng.random::<f64>())).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::isometry_deviation;

    #[test]
    fn seeds_are_deterministic() {
        assert_eq!(random_pure(&[2, 3], 42), random_pure(&[2, 3], 42));
        assert_ne!(random_pure(&[2, 3], 42), random_pure(&[2, 3], 43));
        assert_eq!(random_density(&[4], 2, 1).unwrap(), random_density(&[4], 2, 1).unwrap());
    }

    #[test]
    fn rank_one_density_is_pure() {
        let rho = random_density(&[2, 2], 1, 7).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spectrum_mean_is_inverse_dimension() {
        for seed in 0..5 {
            let rho = random_density(&[5], 3, seed).unwrap();
            let s = rho.spectrum().unwrap();
            let mean: f64 = s.values().iter().sum::<f64>() / s.len() as f64;
            assert!((mean - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_is_respected() {
        let rho = random_density(&[6], 2, 3).unwrap();
        assert_eq!(rho.rank(1e-12).unwrap(), 2);
        assert!(random_density(&[2], 3, 0).is_err());
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = haar_unitary(5, &mut rng_from_seed(0));
        assert!(isometry_deviation(&u) < 1e-12);
    }

    #[test]
    fn streams_differ() {
        let a: u64 = rng_stream(1, 0).random();
        let b: u64 = rng_stream(1, 1).random();
        assert_ne!(a, b);
    }
}
