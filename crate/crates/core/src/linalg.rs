//! Dense complex linear algebra shared by every module.

use alloc::vec::Vec;
use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    Complex { re, im }
}

/// |z|.
pub fn cabs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order
/// with eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or(Error::Eigensolver(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or(Error::Eigensolver(n))?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Largest elementwise deviation of `m` from its conjugate transpose.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
            worst = worst.max(d);
        }
    }
    libm::sqrt(worst)
}

/// (M + M^dagger) / 2.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().copied().sum()
}

/// Kronecker product with the left operand as the more significant factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest deviation of `U^dagger U` from the identity.
pub fn isometry_deviation(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u;
    let n = g.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max(cabs(g[(i, j)] - c(target, 0.0)));
        }
    }
    worst
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Orthonormalize the columns of `m` (thin QR with the diagonal of R made
/// real positive so the result is continuous in `m`).
pub fn orthonormalize_columns(m: &CMatrix) -> CMatrix {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..q.ncols().min(r.nrows()) {
        let d = r[(k, k)];
        let n = cabs(d);
        if n > 0.0 {
            let phase = d / c(n, 0.0);
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    q
}

/// exp(i * H) for Hermitian `h`.
pub fn unitary_exp(h: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(h)?;
    let mut scaled = vecs.clone();
    for (k, &lambda) in vals.iter().enumerate() {
        let phase = c(libm::cos(lambda), libm::sin(lambda));
        let mut col = scaled.column_mut(k);
        col *= phase;
    }
    Ok(scaled * vecs.adjoint())
}
