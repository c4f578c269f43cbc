//! Restriction states `rho_N = P_N^* P_N / tr(P_N^* P_N)` and the tensor
//! bookkeeping around them.
//!
//! The operator `P_N^* P_N` is never built from the restriction map itself.
//! Its matrix in the orthonormal product basis `e_i (x) f_j` is the Gram
//! matrix of the restricted sections,
//!
//! ```text
//! G[(i,j),(l,r)] = int_Lambda conj(e_i f_j) e_l f_r h^N d mu,
//! ```
//!
//! which is also `sum_k w_k mu_k |Theta_k><Theta_k|` over the quadrature
//! nodes, a convex mixture of product coherent projectors.
//!
//! Tensor indices are row-major: `(i, j) -> i * d2 + j`.

use rayon::prelude::*;

use crate::coherent::{coherent_state, product_coherent_state, CoherentState};
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, from_eigen, hermitian_defect, hermitian_eigen, hermitian_eigenvalues, kron, projector, symmetrize, trace,
};
use crate::projective::{fs_weight, SectionBasis};
use crate::quadrature::{FactorSubmanifold, QuadratureRule, Submanifold};
use crate::scalar::{is_finite, real, to_f64, CMatrix, CVector, Real, C};
use crate::tolerance::Tolerances;

/// Reduction order for quadrature sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// One accumulator, nodes in rule order.
    #[default]
    Sequential,
    /// Fixed-size node blocks summed in parallel, partial sums combined in
    /// block order. Reproducible across thread counts, but rounds
    /// differently from `Sequential`.
    Parallel,
}

const BLOCK: usize = 2048;
const RUN: usize = 64;

/// Hermitian, positive semidefinite, trace one, with factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: CMatrix<T>,
    dims: (usize, usize),
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `matrix` against the default tolerances.
    pub fn new(matrix: CMatrix<T>, dims: (usize, usize)) -> Result<Self> {
        Self::with_tolerances(matrix, dims, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: CMatrix<T>, dims: (usize, usize), tol: &Tolerances) -> Result<Self> {
        check_state(&matrix, dims.0 * dims.1, tol)?;
        Ok(Self { matrix, dims })
    }

    /// `|v><v|` for a unit vector.
    pub fn pure(v: &CVector<T>, dims: (usize, usize)) -> Result<Self> {
        if v.len() != dims.0 * dims.1 {
            return Err(Error::Shape {
                expected: dims.0 * dims.1,
                got: v.len(),
            });
        }
        let norm = v.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt();
        if (norm - T::one()).abs() > T::tolerance(1e-12) {
            return Err(Error::NonUnit(to_f64(norm)));
        }
        Ok(Self {
            matrix: projector(v),
            dims,
        })
    }

    /// Maximally mixed state `I / (d1 d2)`.
    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let d = dims.0 * dims.1;
        let scale = T::one() / crate::scalar::lit::<T>(d as f64);
        Self {
            matrix: CMatrix::identity(d, d).map(|c| c.scale(scale)),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    /// `tr rho^2`
    pub fn purity(&self) -> T {
        self.matrix.iter().fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `(U (x) V) rho (U (x) V)^*`
    pub fn conjugate_local(&self, u: &CMatrix<T>, v: &CMatrix<T>) -> Result<Self> {
        if u.nrows() != self.dims.0 || v.nrows() != self.dims.1 {
            return Err(Error::Shape {
                expected: self.size(),
                got: u.nrows() * v.nrows(),
            });
        }
        let w = kron(u, v);
        let m = &w * &self.matrix * w.adjoint();
        Ok(Self {
            matrix: symmetrize(&m),
            dims: self.dims,
        })
    }
}

fn check_state<T: Real>(m: &CMatrix<T>, d: usize, tol: &Tolerances) -> Result<()> {
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::Shape {
            expected: d,
            got: m.nrows().max(m.ncols()),
        });
    }
    let defect = hermitian_defect(m);
    if defect > T::tolerance(tol.hermitian) {
        return Err(Error::NotHermitian(to_f64(defect)));
    }
    let tr = trace(m).re;
    if (tr - T::one()).abs() > T::tolerance(tol.trace) {
        return Err(Error::InvalidTrace(to_f64(tr)));
    }
    let min = hermitian_eigenvalues(&symmetrize(m))
        .first()
        .copied()
        .unwrap_or(T::zero());
    if min < -T::tolerance(tol.psd) {
        return Err(Error::NotPsd(to_f64(min)));
    }
    Ok(())
}

/// Un-normalized `P_N^* P_N` in the product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GramOperator<T: Real> {
    matrix: CMatrix<T>,
    trace: T,
    dims: (usize, usize),
}

impl<T: Real> GramOperator<T> {
    /// Wraps a Hermitian matrix; `(G + G^*)/2` is stored.
    pub fn new(matrix: CMatrix<T>, dims: (usize, usize)) -> Result<Self> {
        let d = dims.0 * dims.1;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Shape {
                expected: d,
                got: matrix.nrows(),
            });
        }
        let matrix = symmetrize(&matrix);
        let trace = trace(&matrix).re;
        Ok(Self { matrix, trace, dims })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        self.trace
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// `c G`
    pub fn scaled(&self, c: T) -> Self {
        Self {
            matrix: self.matrix.map(|x| x.scale(c)),
            trace: self.trace * c,
            dims: self.dims,
        }
    }

    pub fn min_eigenvalue(&self) -> T {
        hermitian_eigenvalues(&self.matrix)
            .first()
            .copied()
            .unwrap_or(T::zero())
    }
}

fn check_powers<T: Real>(first: &SectionBasis<T>, second: &SectionBasis<T>) -> Result<()> {
    if first.power() != second.power() {
        return Err(Error::PowerMismatch(first.power(), second.power()));
    }
    Ok(())
}

/// `sqrt(h^N) e_k(z)` for every basis section.
fn weighted_values<T: Real>(basis: &SectionBasis<T>, z: &[C<T>]) -> Result<Vec<C<T>>> {
    let scale = fs_weight(z, basis.power()).sqrt();
    Ok(basis.values(z)?.into_iter().map(|v| v.scale(scale)).collect())
}

fn non_finite<T: Real>(node: &[T]) -> Error {
    Error::NonFinite {
        node: node.iter().map(|&x| to_f64(x)).collect(),
    }
}

/// Accumulates `sum_k w_k conj(v_k) v_k^T` over the rule, where `sample`
/// returns `(w_k, v_k)` for node `k`.
fn accumulate<T, F>(rule: &QuadratureRule<T>, d: usize, exec: Execution, sample: F) -> Result<Vec<C<T>>>
where
    T: Real,
    F: Fn(&[T], T) -> Result<(T, Vec<C<T>>)> + Sync,
{
    let run = |range: std::ops::Range<usize>| -> Result<Vec<C<T>>> {
        // two-level sum: short runs of nodes, then the run totals
        let zero = C::new(T::zero(), T::zero());
        let mut acc = vec![zero; d * d];
        let mut run_acc = vec![zero; d * d];
        for (count, k) in range.enumerate() {
            let node = rule.node(k);
            let (w, v) = sample(node, rule.weight(k))?;
            if !is_finite(w) || v.iter().any(|c| !(is_finite(c.re) && is_finite(c.im))) {
                return Err(non_finite(node));
            }
            for (a, va) in v.iter().enumerate() {
                let ua = va.conj().scale(w);
                let row = &mut run_acc[a * d..(a + 1) * d];
                for (slot, vb) in row.iter_mut().zip(&v) {
                    *slot += ua * vb;
                }
            }
            if (count + 1) % RUN == 0 {
                for (t, x) in acc.iter_mut().zip(run_acc.iter_mut()) {
                    *t += *x;
                    *x = zero;
                }
            }
        }
        for (t, x) in acc.iter_mut().zip(run_acc) {
            *t += x;
        }
        Ok(acc)
    };
    match exec {
        Execution::Sequential => run(0..rule.len()),
        Execution::Parallel => {
            let blocks: Vec<_> = (0..rule.len().div_ceil(BLOCK))
                .map(|b| b * BLOCK..((b + 1) * BLOCK).min(rule.len()))
                .collect();
            let partials = blocks.into_par_iter().map(run).collect::<Result<Vec<_>>>()?;
            let mut total = vec![C::new(T::zero(), T::zero()); d * d];
            for p in partials {
                for (t, x) in total.iter_mut().zip(p) {
                    *t += x;
                }
            }
            Ok(total)
        }
    }
}

/// Matrix of `P_N^* P_N` for the restriction to `sub`, sequential reduction.
pub fn restriction_gram<T: Real>(
    first: &SectionBasis<T>,
    second: &SectionBasis<T>,
    sub: &Submanifold<T>,
    rule: &QuadratureRule<T>,
) -> Result<GramOperator<T>> {
    restriction_gram_with(first, second, sub, rule, Execution::Sequential)
}

pub fn restriction_gram_with<T: Real>(
    first: &SectionBasis<T>,
    second: &SectionBasis<T>,
    sub: &Submanifold<T>,
    rule: &QuadratureRule<T>,
    exec: Execution,
) -> Result<GramOperator<T>> {
    check_powers(first, second)?;
    if sub.dims() != (first.n(), second.n()) {
        return Err(Error::Spec(format!(
            "submanifold lives in P^{} x P^{}, bases in P^{} x P^{}",
            sub.dims().0,
            sub.dims().1,
            first.n(),
            second.n()
        )));
    }
    let (d1, d2) = (first.len(), second.len());
    let d = d1 * d2;
    let acc = accumulate(rule, d, exec, |node, w| {
        let p = sub.point(node)?;
        let mu = sub.induced_density(node)?;
        let a = weighted_values(first, &p.first)?;
        let b = weighted_values(second, &p.second)?;
        let v = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Ok((w * mu, v))
    })?;
    // acc[(a, b)] = sum conj(v_a) v_b, which is the operator matrix entry (a, b)
    let g = GramOperator::new(CMatrix::from_row_slice(d, d, &acc), (d1, d2))?;
    if !(g.trace > T::zero()) {
        return Err(Error::DegenerateState(
            "every section vanishes on the submanifold (zero Gram trace)".into(),
        ));
    }
    Ok(g)
}

/// Gram matrix of the restriction to a submanifold of one factor
/// (`A_N` or `B_N`).
pub fn factor_gram<T: Real>(
    basis: &SectionBasis<T>,
    factor: &FactorSubmanifold<T>,
    rule: &QuadratureRule<T>,
) -> Result<CMatrix<T>> {
    let n = basis.n();
    let d = basis.len();
    let acc = accumulate(rule, d, Execution::Sequential, |node, w| {
        let z = factor.point(n, node);
        let mu = factor.density(n, node)?;
        Ok((w * mu, weighted_values(basis, &z)?))
    })?;
    Ok(symmetrize(&CMatrix::from_row_slice(d, d, &acc)))
}

/// `G / tr G`, with eigenvalues in `[-psd, 0)` clipped to zero.
pub fn rho_from_gram<T: Real>(gram: &GramOperator<T>) -> Result<DensityMatrix<T>> {
    rho_from_gram_with(gram, &Tolerances::default())
}

pub fn rho_from_gram_with<T: Real>(gram: &GramOperator<T>, tol: &Tolerances) -> Result<DensityMatrix<T>> {
    if !(gram.trace > T::zero()) || !is_finite(gram.trace) {
        return Err(Error::DegenerateState(format!("Gram trace {}", to_f64(gram.trace))));
    }
    let inv = T::one() / gram.trace;
    let rho = symmetrize(&gram.matrix).map(|c| c.scale(inv));
    let (values, vectors) = hermitian_eigen(&rho);
    let min = values.first().copied().unwrap_or(T::zero());
    if min < -T::tolerance(tol.psd) {
        return Err(Error::NotPsd(to_f64(min)));
    }
    let matrix = if min < T::zero() {
        let clipped: Vec<T> = values
            .iter()
            .map(|&v| if v < T::zero() { T::zero() } else { v })
            .collect();
        let total = clipped.iter().fold(T::zero(), |a, &b| a + b);
        let rebuilt = from_eigen(&clipped, &vectors).map(|c| c.unscale(total));
        symmetrize(&rebuilt)
    } else {
        rho
    };
    Ok(DensityMatrix {
        matrix,
        dims: gram.dims,
    })
}

/// `Tr_2`, the reduced matrix on the first factor.
pub fn partial_trace_2<T: Real>(rho: &DensityMatrix<T>) -> CMatrix<T> {
    partial_trace_second(&rho.matrix, rho.dims.0, rho.dims.1).expect("dims checked at construction")
}

/// `Tr_1`, the reduced matrix on the second factor.
pub fn partial_trace_1<T: Real>(rho: &DensityMatrix<T>) -> CMatrix<T> {
    partial_trace_first(&rho.matrix, rho.dims.0, rho.dims.1).expect("dims checked at construction")
}

pub fn partial_trace_second<T: Real>(m: &CMatrix<T>, d1: usize, d2: usize) -> Result<CMatrix<T>> {
    check_square(m, d1 * d2)?;
    Ok(CMatrix::from_fn(d1, d1, |i, k| {
        (0..d2).fold(C::new(T::zero(), T::zero()), |a, j| a + m[(i * d2 + j, k * d2 + j)])
    }))
}

pub fn partial_trace_first<T: Real>(m: &CMatrix<T>, d1: usize, d2: usize) -> Result<CMatrix<T>> {
    check_square(m, d1 * d2)?;
    Ok(CMatrix::from_fn(d2, d2, |j, l| {
        (0..d1).fold(C::new(T::zero(), T::zero()), |a, i| a + m[(i * d2 + j, i * d2 + l)])
    }))
}

fn check_square<T: Real>(m: &CMatrix<T>, d: usize) -> Result<()> {
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::Shape {
            expected: d,
            got: m.nrows(),
        });
    }
    Ok(())
}

/// `A (x) B` for trace-one PSD factors.
pub fn tensor_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<DensityMatrix<T>> {
    let tol = Tolerances::default();
    check_state(a, a.nrows(), &tol)?;
    check_state(b, b.nrows(), &tol)?;
    Ok(DensityMatrix {
        matrix: kron(a, b),
        dims: (a.nrows(), b.nrows()),
    })
}

/// Reduced states and `|| rho - Tr_2 rho (x) Tr_1 rho ||_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductFactorization<T: Real> {
    pub first: CMatrix<T>,
    pub second: CMatrix<T>,
    pub residual: T,
}

pub fn product_factor_residual<T: Real>(rho: &DensityMatrix<T>) -> ProductFactorization<T> {
    let first = partial_trace_2(rho);
    let second = partial_trace_1(rho);
    let residual = frobenius(&(&rho.matrix - kron(&first, &second)));
    ProductFactorization {
        first,
        second,
        residual,
    }
}

/// One term `w |Theta_1 (x) Theta_2><Theta_1 (x) Theta_2|` of the coherent
/// mixture; `weight` already includes the quadrature weight and density.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureTerm<T: Real> {
    pub weight: T,
    pub first: CoherentState<T>,
    pub second: CoherentState<T>,
}

/// Quadrature nodes of `sub` as weighted product coherent states.
pub fn coherent_mixture<T: Real>(
    first: &SectionBasis<T>,
    second: &SectionBasis<T>,
    sub: &Submanifold<T>,
    rule: &QuadratureRule<T>,
) -> Result<Vec<MixtureTerm<T>>> {
    check_powers(first, second)?;
    let one = real(T::one());
    (0..rule.len())
        .map(|k| {
            let node = rule.node(k);
            let p = sub.point(node)?;
            Ok(MixtureTerm {
                weight: rule.weight(k) * sub.induced_density(node)?,
                first: coherent_state(first, &p.first, one)?,
                second: coherent_state(second, &p.second, one)?,
            })
        })
        .collect()
}

/// `sum_k w_k |Theta_k><Theta_k|` for product coherent states `Theta_k`.
pub fn mixture_operator<T: Real>(terms: &[MixtureTerm<T>]) -> Result<CMatrix<T>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::DegenerateState("empty mixture".into()))?;
    let d = first.first.coeffs().len() * first.second.coeffs().len();
    let mut acc = CMatrix::<T>::zeros(d, d);
    for t in terms {
        let v = product_coherent_state(&t.first, &t.second)?;
        acc += projector(&v).map(|c| c.scale(t.weight));
    }
    Ok(acc)
}
