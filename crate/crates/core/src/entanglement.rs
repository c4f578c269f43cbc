//! Entanglement diagnostics for bipartite states: Schmidt coefficients,
//! entanglement entropy, Wootters concurrence and entanglement of formation
//! on two qubits, the partial-transpose test, and a combined report.
//!
//! Entropies are in nats.

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eigen, hermitian_eigenvalues, kron_vec, projector};
use crate::scalar::{lit, to_f64, CMatrix, CVector, Real};
use crate::states::{product_factor_residual, DensityMatrix, MixtureTerm};
use crate::tolerance::Tolerances;

/// `-sum p ln p` with `0 ln 0 = 0`; entries are clipped to `[0, 1]`.
pub fn shannon_entropy<T: Real>(probs: &[T]) -> T {
    probs.iter().fold(T::zero(), |acc, &p| {
        let p = if p < T::zero() {
            T::zero()
        } else if p > T::one() {
            T::one()
        } else {
            p
        };
        if p > T::zero() {
            acc - p * p.ln()
        } else {
            acc
        }
    })
}

fn check_unit<T: Real>(v: &CVector<T>, d1: usize, d2: usize) -> Result<()> {
    if v.len() != d1 * d2 {
        return Err(Error::Shape {
            expected: d1 * d2,
            got: v.len(),
        });
    }
    let norm = v.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt();
    if !((norm - T::one()).abs() <= T::tolerance(1e-12)) {
        return Err(Error::NonUnit(to_f64(norm)));
    }
    Ok(())
}

/// Schmidt coefficients of a unit vector of `C^{d1} (x) C^{d2}`, in
/// nonincreasing order; there are `min(d1, d2)` of them.
pub fn schmidt<T: Real>(v: &CVector<T>, d1: usize, d2: usize) -> Result<Vec<T>> {
    check_unit(v, d1, d2)?;
    let m = CMatrix::from_row_slice(d1, d2, v.as_slice());
    let mut s: Vec<T> = SVD::new(m, false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(s)
}

/// `-sum lambda ln lambda` over the squared Schmidt coefficients.
pub fn entanglement_entropy<T: Real>(v: &CVector<T>, d1: usize, d2: usize) -> Result<T> {
    let s = schmidt(v, d1, d2)?;
    let probs: Vec<T> = s.iter().map(|&x| x * x).collect();
    Ok(shannon_entropy(&probs))
}

/// Binary entropy in nats.
fn binary_entropy<T: Real>(x: T) -> T {
    shannon_entropy(&[x, T::one() - x])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wootters<T: Real> {
    pub concurrence: T,
    pub eof: T,
}

/// Concurrence and entanglement of formation of a two-qubit state.
///
/// The `lambda_i` are the singular values of `A^* Y conj(A)`, where
/// `rho = A A^*` with `A = V diag(sqrt(mu))` and `Y = sigma_y (x) sigma_y`;
/// these equal the square roots of the eigenvalues of `rho Y conj(rho) Y`.
/// Eigenvalues of `rho` at roundoff level are dropped so that rank-deficient
/// states keep exact zero `lambda`s.
pub fn wootters_eof<T: Real>(rho: &DensityMatrix<T>) -> Result<Wootters<T>> {
    let (d1, d2) = rho.dims();
    if (d1, d2) != (2, 2) {
        return Err(Error::UnsupportedDimension {
            expected: "2x2",
            d1,
            d2,
        });
    }
    let (mu, vectors) = hermitian_eigen(rho.matrix());
    let floor = T::tolerance(1e-14);
    let kept: Vec<usize> = (0..4).filter(|&k| mu[k] > floor).collect();
    let mut lambdas: Vec<T> = if kept.is_empty() {
        vec![]
    } else {
        let a = CMatrix::from_fn(4, kept.len(), |i, j| vectors[(i, kept[j])].scale(mu[kept[j]].sqrt()));
        // Y = sigma_y (x) sigma_y reverses the index order with signs (-1, 1, 1, -1)
        let sign = [-T::one(), T::one(), T::one(), -T::one()];
        let y_abar = CMatrix::from_fn(4, kept.len(), |i, j| a[(3 - i, j)].conj().scale(sign[i]));
        let m = a.adjoint() * y_abar;
        SVD::new(m, false, false).singular_values.iter().copied().collect()
    };
    lambdas.resize(4, T::zero());
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    let concurrence = if c > T::zero() { c.min(T::one()) } else { T::zero() };
    let x = (T::one() + (T::one() - concurrence * concurrence).sqrt()) * lit::<T>(0.5);
    Ok(Wootters {
        concurrence,
        eof: binary_entropy(x),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PptVerdict {
    Ppt,
    Npt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptCheck<T: Real> {
    pub min_eigenvalue: T,
    pub verdict: PptVerdict,
}

/// Partial transpose on the second factor.
pub fn partial_transpose<T: Real>(m: &CMatrix<T>, d1: usize, d2: usize) -> Result<CMatrix<T>> {
    if m.nrows() != d1 * d2 || m.ncols() != d1 * d2 {
        return Err(Error::Shape {
            expected: d1 * d2,
            got: m.nrows(),
        });
    }
    Ok(CMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i, j) = (r / d2, r % d2);
        let (k, l) = (c / d2, c % d2);
        m[(i * d2 + l, k * d2 + j)]
    }))
}

/// Peres-Horodecki test with the default threshold.
pub fn ppt_check<T: Real>(rho: &DensityMatrix<T>) -> PptCheck<T> {
    ppt_check_with(rho, &Tolerances::default())
}

pub fn ppt_check_with<T: Real>(rho: &DensityMatrix<T>, tol: &Tolerances) -> PptCheck<T> {
    let (d1, d2) = rho.dims();
    let pt = partial_transpose(rho.matrix(), d1, d2).expect("dims checked at construction");
    let min_eigenvalue = hermitian_eigenvalues(&pt)[0];
    let verdict = if min_eigenvalue < -T::tolerance(tol.ppt) {
        PptVerdict::Npt
    } else {
        PptVerdict::Ppt
    };
    PptCheck {
        min_eigenvalue,
        verdict,
    }
}

/// A separable decomposition `sum_k p_k |a_k><a_k| (x) |b_k><b_k|` with unit
/// `a_k`, `b_k` and weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDecomposition<T: Real> {
    terms: Vec<(T, CVector<T>, CVector<T>)>,
}

impl<T: Real> ProductDecomposition<T> {
    /// Normalizes arbitrary nonnegative weights and nonzero vectors.
    pub fn new(terms: Vec<(T, CVector<T>, CVector<T>)>) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        let mut total = T::zero();
        for (w, a, b) in terms {
            let (na, nb) = (a.norm_squared(), b.norm_squared());
            if w < T::zero() {
                return Err(Error::Domain("negative mixture weight".into()));
            }
            if !(na > T::zero() && nb > T::zero()) || w == T::zero() {
                continue;
            }
            let p = w * na * nb;
            total += p;
            out.push((p, a.unscale(na.sqrt()), b.unscale(nb.sqrt())));
        }
        if !(total > T::zero()) {
            return Err(Error::DegenerateState("decomposition has zero total weight".into()));
        }
        for t in &mut out {
            t.0 /= total;
        }
        Ok(Self { terms: out })
    }

    /// The coherent mixture behind a restriction state.
    pub fn from_mixture(terms: &[MixtureTerm<T>]) -> Result<Self> {
        Self::new(
            terms
                .iter()
                .map(|t| (t.weight, t.first.coeffs().clone(), t.second.coeffs().clone()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn operator(&self) -> CMatrix<T> {
        let d = self.terms.first().map_or(0, |(_, a, b)| a.len() * b.len());
        let mut acc = CMatrix::<T>::zeros(d, d);
        for (p, a, b) in &self.terms {
            acc += projector(&kron_vec(a, b)).map(|c| c.scale(*p));
        }
        acc
    }

    /// `|| rho - sum p_k P_{a_k} (x) P_{b_k} ||_F`
    pub fn residual(&self, rho: &DensityMatrix<T>) -> T {
        let op = self.operator();
        if op.nrows() != rho.size() {
            return T::max_value().unwrap_or(T::one());
        }
        frobenius(&(rho.matrix() - op))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SeparableCertified,
    EntangledCertified,
    Inconclusive,
}

/// What a certified verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Pure state with zero entanglement entropy.
    DecomposablePureState,
    /// Pure state with positive entanglement entropy.
    EntangledPureState,
    /// `rho` equals the product of its reduced states.
    ProductState,
    /// A supplied convex product decomposition reproduces `rho`.
    ConvexProductDecomposition,
    /// Two qubits with zero concurrence.
    ZeroConcurrence,
    NegativePartialTranspose,
    PositiveEntanglementOfFormation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport<T: Real> {
    pub dims: (usize, usize),
    pub purity: T,
    pub pure: bool,
    /// Pure states only.
    pub entropy: Option<T>,
    /// Pure states only.
    pub schmidt: Option<Vec<T>>,
    /// Two qubits only.
    pub concurrence: Option<T>,
    /// Entanglement of formation: the entropy for pure states, Wootters'
    /// formula for two qubits, absent otherwise.
    pub eof: Option<T>,
    pub ppt_min_eigenvalue: T,
    pub ppt: PptVerdict,
    pub product_residual: T,
    /// Residual of the supplied product decomposition, if any.
    pub decomposition_residual: Option<T>,
    pub separable_verdict: Verdict,
    pub evidence: Option<Evidence>,
    pub tolerances: Tolerances,
}

pub fn analyze<T: Real>(rho: &DensityMatrix<T>) -> Result<EntanglementReport<T>> {
    analyze_with(rho, &Tolerances::default(), None)
}

/// Full report. A `certificate`, when given, is checked against `rho` and
/// used for a separability verdict only if it reproduces it.
pub fn analyze_with<T: Real>(
    rho: &DensityMatrix<T>,
    tol: &Tolerances,
    certificate: Option<&ProductDecomposition<T>>,
) -> Result<EntanglementReport<T>> {
    let (d1, d2) = rho.dims();
    let verdict_tol = T::tolerance(tol.verdict);
    let purity = rho.purity();
    let pure = (purity - T::one()).abs() < T::tolerance(tol.purity);
    let ppt = ppt_check_with(rho, tol);
    let product_residual = product_factor_residual(rho).residual;
    let wootters = if (d1, d2) == (2, 2) {
        Some(wootters_eof(rho)?)
    } else {
        None
    };

    let (entropy, schmidt_coeffs) = if pure {
        let (_, vectors) = hermitian_eigen(rho.matrix());
        let v: CVector<T> = vectors.column(rho.size() - 1).into_owned();
        let s = schmidt(&v, d1, d2)?;
        let probs: Vec<T> = s.iter().map(|&x| x * x).collect();
        (Some(shannon_entropy(&probs)), Some(s))
    } else {
        (None, None)
    };
    let eof = entropy.or(wootters.map(|w| w.eof));
    let decomposition_residual = certificate.map(|c| c.residual(rho));

    use Evidence as E;
    let (separable_verdict, evidence) = if let Some(h) = entropy {
        if h < verdict_tol {
            (Verdict::SeparableCertified, Some(E::DecomposablePureState))
        } else {
            (Verdict::EntangledCertified, Some(E::EntangledPureState))
        }
    } else if product_residual < verdict_tol {
        (Verdict::SeparableCertified, Some(E::ProductState))
    } else if decomposition_residual.is_some_and(|r| r < verdict_tol) {
        (Verdict::SeparableCertified, Some(E::ConvexProductDecomposition))
    } else if ppt.verdict == PptVerdict::Npt {
        (Verdict::EntangledCertified, Some(E::NegativePartialTranspose))
    } else if eof.is_some_and(|e| e > verdict_tol) {
        (Verdict::EntangledCertified, Some(E::PositiveEntanglementOfFormation))
    } else if wootters.is_some_and(|w| w.concurrence <= verdict_tol) {
        (Verdict::SeparableCertified, Some(E::ZeroConcurrence))
    } else {
        (Verdict::Inconclusive, None)
    };

    Ok(EntanglementReport {
        dims: (d1, d2),
        purity,
        pure,
        entropy,
        schmidt: schmidt_coeffs,
        concurrence: wootters.map(|w| w.concurrence),
        eof,
        ppt_min_eigenvalue: ppt.min_eigenvalue,
        ppt: ppt.verdict,
        product_residual,
        decomposition_residual,
        separable_verdict,
        evidence,
        tolerances: *tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use crate::states::{partial_trace_2, tensor_product};
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::LN_2;

    fn bell_vec() -> CVector<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CVector::from_vec(vec![cplx(s, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(s, 0.0)])
    }

    fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> CVector<f64> {
        let v = CVector::from_fn(d, |_, _| cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let n = v.norm();
        v.unscale(n)
    }

    fn werner(p: f64) -> DensityMatrix<f64> {
        let bell = projector(&bell_vec());
        let m = bell * cplx(p, 0.0) + CMatrix::<f64>::identity(4, 4) * cplx((1.0 - p) / 4.0, 0.0);
        DensityMatrix::new(m, (2, 2)).unwrap()
    }

    /// Direct route: square roots of the eigenvalues of the non-Hermitian
    /// `rho Y conj(rho) Y`, via a complex Schur decomposition.
    fn concurrence_oracle(rho: &CMatrix<f64>) -> f64 {
        let mut y = CMatrix::<f64>::zeros(4, 4);
        y[(0, 3)] = cplx(-1.0, 0.0);
        y[(1, 2)] = cplx(1.0, 0.0);
        y[(2, 1)] = cplx(1.0, 0.0);
        y[(3, 0)] = cplx(-1.0, 0.0);
        let r = rho * &y * rho.map(|c| c.conj()) * &y;
        let ev = r.eigenvalues().expect("complex Schur");
        let mut l: Vec<f64> = ev.iter().map(|c| c.re.max(0.0).sqrt()).collect();
        l.sort_by(|a, b| b.partial_cmp(a).unwrap());
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn schmidt_examples() {
        let e11 = CVector::<f64>::from_vec(vec![cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)]);
        let s = schmidt(&e11, 2, 2).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15 && s[1].abs() < 1e-15);
        let s = schmidt(&bell_vec(), 2, 2).unwrap();
        for x in s {
            assert!((x - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!(matches!(
            schmidt(&(bell_vec() * cplx(2.0, 0.0)), 2, 2),
            Err(Error::NonUnit(_))
        ));
    }

    #[test]
    fn schmidt_squares_are_reduced_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &(d1, d2) in &[(2, 2), (2, 3), (3, 5), (4, 4)] {
            for _ in 0..25 {
                let v = random_vec(&mut rng, d1 * d2);
                let mut s2: Vec<f64> = schmidt(&v, d1, d2).unwrap().iter().map(|x| x * x).collect();
                s2.reverse();
                let rho = DensityMatrix::pure(&v, (d1, d2)).unwrap();
                let ev = hermitian_eigenvalues(&partial_trace_2(&rho));
                for (a, b) in s2.iter().zip(&ev) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_vec(&mut rng, 2);
        let b = random_vec(&mut rng, 3);
        assert!(entanglement_entropy(&kron_vec(&a, &b), 2, 3).unwrap() < 1e-12);
        assert!((entanglement_entropy(&bell_vec(), 2, 2).unwrap() - LN_2).abs() < 1e-12);
        let (s0, s1) = (0.9f64.sqrt(), 0.1f64.sqrt());
        let v = CVector::from_vec(vec![cplx(s0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(s1, 0.0)]);
        let h = entanglement_entropy(&v, 2, 2).unwrap();
        let oracle = -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln();
        assert!((h - oracle).abs() < 1e-12);
        assert!((h - 0.325083).abs() < 1e-6);
    }

    #[test]
    fn entropy_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let d1 = rng.random_range(1..=4);
            let d2 = rng.random_range(d1..=5);
            let v = random_vec(&mut rng, d1 * d2);
            let h = entanglement_entropy(&v, d1, d2).unwrap();
            assert!(h >= 0.0 && h <= (d1 as f64).ln() + 1e-12);
        }
    }

    #[test]
    fn wootters_bell_and_werner() {
        let bell = DensityMatrix::pure(&bell_vec(), (2, 2)).unwrap();
        let w = wootters_eof(&bell).unwrap();
        assert!((w.concurrence - 1.0).abs() < 1e-12);
        assert!((w.eof - LN_2).abs() < 1e-12);
        assert!((concurrence_oracle(bell.matrix()) - 1.0).abs() < 1e-6);

        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9] {
            let rho = werner(p);
            let w = wootters_eof(&rho).unwrap();
            let closed = ((3.0 * p - 1.0) / 2.0f64).max(0.0);
            assert!((w.concurrence - closed).abs() < 1e-12, "p={p}");
            assert!((concurrence_oracle(rho.matrix()) - closed).abs() < 1e-7, "p={p}");
        }
        assert!((wootters_eof(&werner(2.0 / 3.0)).unwrap().concurrence - 0.5).abs() < 1e-12);
    }

    #[test]
    fn wootters_matches_direct_route_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let g = DMatrix::from_fn(4, 4, |_, _| {
                cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let m = &g * g.adjoint();
            let tr = m.trace();
            let rho = DensityMatrix::new(m.map(|c| c / tr), (2, 2)).unwrap();
            let w = wootters_eof(&rho).unwrap();
            let oracle = concurrence_oracle(rho.matrix());
            assert!((w.concurrence - oracle).abs() < 1e-9);
            assert!(w.eof >= 0.0 && w.eof <= LN_2 + 1e-15);
            assert_eq!(w.eof == 0.0, w.concurrence == 0.0);
        }
    }

    #[test]
    fn wootters_rejects_other_dimensions() {
        let rho = DensityMatrix::<f64>::maximally_mixed((2, 3));
        assert!(matches!(wootters_eof(&rho), Err(Error::UnsupportedDimension { .. })));
    }

    #[test]
    fn ppt_examples() {
        let bell = DensityMatrix::pure(&bell_vec(), (2, 2)).unwrap();
        let c = ppt_check(&bell);
        assert!((c.min_eigenvalue + 0.5).abs() < 1e-14);
        assert_eq!(c.verdict, PptVerdict::Npt);
        for dims in [(2, 2), (2, 3), (3, 3)] {
            let mm = DensityMatrix::<f64>::maximally_mixed(dims);
            let c = ppt_check(&mm);
            assert!((c.min_eigenvalue - 1.0 / (dims.0 * dims.1) as f64).abs() < 1e-15);
            assert_eq!(c.verdict, PptVerdict::Ppt);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = projector(&random_vec(&mut rng, 2));
            let b = projector(&random_vec(&mut rng, 3));
            let c = ppt_check(&tensor_product(&a, &b).unwrap());
            assert!(c.min_eigenvalue >= -1e-12);
            assert_eq!(c.verdict, PptVerdict::Ppt);
        }
    }

    #[test]
    fn separable_mixtures_have_zero_eof() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let k = rng.random_range(1..6);
            let terms: Vec<_> = (0..k)
                .map(|_| {
                    (
                        rng.random_range(0.1..1.0),
                        random_vec(&mut rng, 2),
                        random_vec(&mut rng, 2),
                    )
                })
                .collect();
            let dec = ProductDecomposition::new(terms).unwrap();
            let rho = DensityMatrix::new(crate::linalg::symmetrize(&dec.operator()), (2, 2)).unwrap();
            let w = wootters_eof(&rho).unwrap();
            assert!(w.eof < 1e-10 && w.concurrence < 1e-9, "{w:?}");
            let report = analyze_with(&rho, &Tolerances::default(), Some(&dec)).unwrap();
            assert_eq!(report.separable_verdict, Verdict::SeparableCertified);
        }
    }

    #[test]
    fn analyze_pure_and_mixed() {
        let bell = DensityMatrix::pure(&bell_vec(), (2, 2)).unwrap();
        let r = analyze(&bell).unwrap();
        assert!(r.pure);
        assert!((r.entropy.unwrap() - LN_2).abs() < 1e-12);
        assert_eq!(r.ppt, PptVerdict::Npt);
        assert_eq!(r.separable_verdict, Verdict::EntangledCertified);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let v = kron_vec(&random_vec(&mut rng, 2), &random_vec(&mut rng, 3));
        let r = analyze(&DensityMatrix::pure(&v, (2, 3)).unwrap()).unwrap();
        assert!(r.entropy.unwrap() < 1e-12);
        assert_eq!(r.eof, r.entropy);
        assert_eq!(r.separable_verdict, Verdict::SeparableCertified);
        assert_eq!(r.evidence, Some(Evidence::DecomposablePureState));

        let r = analyze(&werner(0.9)).unwrap();
        assert!(!r.pure && r.entropy.is_none() && r.schmidt.is_none());
        assert_eq!(r.separable_verdict, Verdict::EntangledCertified);

        let r = analyze(&werner(0.2)).unwrap();
        assert_eq!(r.evidence, Some(Evidence::ZeroConcurrence));

        // mixed, non-product, PPT state beyond two qubits
        let a = projector(&kron_vec(&random_vec(&mut rng, 2), &random_vec(&mut rng, 3)));
        let b = projector(&kron_vec(&random_vec(&mut rng, 2), &random_vec(&mut rng, 3)));
        let rho = DensityMatrix::new(crate::linalg::symmetrize(&((a + b) * cplx(0.5, 0.0))), (2, 3)).unwrap();
        let r = analyze(&rho).unwrap();
        assert_eq!(r.separable_verdict, Verdict::Inconclusive);
        assert!(r.eof.is_none() && r.concurrence.is_none());
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let unitary = |rng: &mut ChaCha8Rng, d: usize| {
            let g = DMatrix::from_fn(d, d, |_, _| {
                cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            g.qr().q()
        };
        let states = [
            werner(0.8),
            DensityMatrix::pure(&bell_vec(), (2, 2)).unwrap(),
            werner(0.1),
        ];
        for rho in &states {
            let base = analyze(rho).unwrap();
            for _ in 0..10 {
                let u = unitary(&mut rng, 2);
                let v = unitary(&mut rng, 2);
                let r = analyze(&rho.conjugate_local(&u, &v).unwrap()).unwrap();
                assert!((r.concurrence.unwrap() - base.concurrence.unwrap()).abs() < 1e-10);
                assert!((r.ppt_min_eigenvalue - base.ppt_min_eigenvalue).abs() < 1e-10);
                assert!((r.product_residual - base.product_residual).abs() < 1e-10);
                assert_eq!(r.separable_verdict, base.separable_verdict);
            }
        }
    }
}
