//! Dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::scalar::{CMatrix, CVector, Real, C};

/// Kronecker product with the row-major tensor index `(i, j) -> i * d2 + j`.
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

pub fn kron_vec<T: Real>(a: &CVector<T>, b: &CVector<T>) -> CVector<T> {
    let d2 = b.len();
    DVector::from_fn(a.len() * d2, |k, _| a[k / d2] * b[k % d2])
}

pub fn frobenius<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt()
}

/// Largest entry of `|M - M^*|`.
pub fn hermitian_defect<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..=i {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm_sqr().sqrt();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `(M + M^*) / 2`
pub fn symmetrize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = crate::scalar::lit::<T>(0.5);
    (m + m.adjoint()).map(|c| c * half)
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> C<T> {
    m.diagonal().iter().fold(C::new(T::zero(), T::zero()), |a, &c| a + c)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut ev: Vec<T> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Eigen-decomposition of a Hermitian matrix, ascending eigenvalues with
/// matching eigenvector columns.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Rebuilds `V diag(values) V^*`.
pub fn from_eigen<T: Real>(values: &[T], vectors: &CMatrix<T>) -> CMatrix<T> {
    let n = vectors.nrows();
    let mut out = CMatrix::<T>::zeros(n, n);
    for (k, &lam) in values.iter().enumerate() {
        if lam == T::zero() {
            continue;
        }
        let col = vectors.column(k);
        for i in 0..n {
            let ci = col[i] * lam;
            for j in 0..n {
                out[(i, j)] += ci * col[j].conj();
            }
        }
    }
    out
}

/// `|v><v|`
pub fn projector<T: Real>(v: &CVector<T>) -> CMatrix<T> {
    v * v.adjoint()
}

/// Positive semidefinite square root via eigen-decomposition; negative
/// eigenvalues are treated as zero.
pub fn psd_sqrt<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let (values, vectors) = hermitian_eigen(m);
    let roots: Vec<T> = values
        .iter()
        .map(|&v| if v > T::zero() { v.sqrt() } else { T::zero() })
        .collect();
    from_eigen(&roots, &vectors)
}
