//! Coherent states: the Riesz representatives of evaluation at a point.
//!
//! For a point `p` and a unit frame vector `xi = lambda e / |e|` of `O(1)`
//! at `p`, the coherent state `Theta_{p, xi}` is the unique section with
//! `<s, Theta> = h^N(s(p), xi^N)` for every section `s`. In the orthonormal
//! monomial basis its coefficients are `conj(e_k(p)) lambda^N (1 + |p|^2)^{-N/2}`.

use crate::error::{Error, Result};
use crate::linalg::kron_vec;
use crate::projective::{fs_weight, SectionBasis};
use crate::scalar::{CVector, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState<T: Real> {
    base_point: Vec<C<T>>,
    phase: C<T>,
    power: u32,
    coeffs: CVector<T>,
}

impl<T: Real> CoherentState<T> {
    pub fn base_point(&self) -> &[C<T>] {
        &self.base_point
    }

    pub fn phase(&self) -> C<T> {
        self.phase
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn coeffs(&self) -> &CVector<T> {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    /// `<s, Theta>` for a section with coefficients `s` in the same basis.
    pub fn pair(&self, s: &[C<T>]) -> Result<C<T>> {
        if s.len() != self.coeffs.len() {
            return Err(Error::Shape {
                expected: self.coeffs.len(),
                got: s.len(),
            });
        }
        Ok(s.iter()
            .zip(self.coeffs.iter())
            .fold(C::new(T::zero(), T::zero()), |a, (x, y)| a + x * y.conj()))
    }
}

/// Coherent state at `p` for the frame phase `phase`.
///
/// `phase` is normalized to unit modulus; the frame itself is the
/// normalized standard frame of the chart.
pub fn coherent_state<T: Real>(basis: &SectionBasis<T>, p: &[C<T>], phase: C<T>) -> Result<CoherentState<T>> {
    let modulus = phase.norm_sqr().sqrt();
    if !(modulus > T::zero()) {
        return Err(Error::Domain("frame phase must be nonzero".into()));
    }
    let phase = phase.unscale(modulus);
    let values = basis.values(p)?;
    let n = basis.power();
    let factor = phase.powu(n).scale(fs_weight(p, n).sqrt());
    let coeffs = CVector::from_iterator(values.len(), values.iter().map(|v| v.conj() * factor));
    Ok(CoherentState {
        base_point: p.to_vec(),
        phase,
        power: n,
        coeffs,
    })
}

/// `Theta_1 (x) Theta_2` under the row-major tensor index.
pub fn product_coherent_state<T: Real>(first: &CoherentState<T>, second: &CoherentState<T>) -> Result<CVector<T>> {
    if first.power != second.power {
        return Err(Error::PowerMismatch(first.power, second.power));
    }
    Ok(kron_vec(&first.coeffs, &second.coeffs))
}

/// Bergman density on the diagonal, `(N + n)! / (N! pi^n)`, which equals
/// `||Theta_p||^2` at every point.
pub fn bergman_diagonal<T: Real>(n: usize, power: u32) -> T {
    let mut v = 1.0f64;
    for k in 1..=n {
        v *= (power as usize + k) as f64;
    }
    crate::scalar::lit(v / std::f64::consts::PI.powi(n as i32))
}
