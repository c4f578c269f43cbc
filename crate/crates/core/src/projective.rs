//! Complex projective space `P^n` with its Fubini-Study structure and the
//! holomorphic sections of `O(N)`.
//!
//! Everything is expressed in the standard affine chart `z in C^n`. In that
//! chart a section of `O(N)` is a polynomial of degree at most `N` times the
//! standard frame, whose pointwise norm squared is `(1 + |z|^2)^(-N)`.
//!
//! Normalization: the volume measure is `dV = (1 + |z|^2)^(-(n+1)) d^{2n}x`,
//! i.e. `omega^n / n!` for `omega = (i/2) dd^c log(1 + |z|^2)`. With it the
//! monomials satisfy
//!
//! ```text
//! || z^a ||^2 = pi^n a! (N - |a|)! / (N + n)!
//! ```
//!
//! and `P^n` has volume `pi^n / n!`. Restriction states are trace
//! normalized, so this global constant never reaches them.

use crate::error::{Error, Result};
use crate::scalar::{lit, norm_sqr, Real, C};

/// `P^n` in the standard affine chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ManifoldModel {
    n: usize,
}

impl ManifoldModel {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("complex dimension must be at least 1".into()));
        }
        Ok(Self { n })
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.n
    }
}

/// Number of holomorphic sections of `O(N)` on `P^n`, `binomial(N + n, n)`.
pub fn dim_sections(n: i64, power: i64) -> Result<u64> {
    if n < 1 {
        return Err(Error::Domain(format!("complex dimension {n} < 1")));
    }
    if power < 0 {
        return Err(Error::Domain(format!("line bundle power {power} < 0")));
    }
    binomial((n + power) as u64, n as u64)
        .ok_or_else(|| Error::Domain(format!("binomial({}, {n}) overflows", n + power)))
}

fn binomial(top: u64, k: u64) -> Option<u64> {
    let k = k.min(top - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((top - i) as u128)? / (i as u128 + 1);
    }
    u64::try_from(acc).ok()
}

/// Pointwise `h^N(e, e) = (1 + |z|^2)^(-N)` of the standard frame.
pub fn fs_weight<T: Real>(z: &[C<T>], power: u32) -> T {
    let base = T::one() + norm_sqr(z);
    T::one() / base.powi(power as i32)
}

/// `|| z^a ||` in the `L^2` inner product on sections of `O(N)`.
pub fn monomial_norm<T: Real>(n: usize, power: u32, exponents: &[u32]) -> Result<T> {
    if exponents.len() != n {
        return Err(Error::Shape {
            expected: n,
            got: exponents.len(),
        });
    }
    let total: u32 = exponents.iter().sum();
    if total > power {
        return Err(Error::Domain(format!(
            "monomial degree {total} exceeds line bundle power {power}"
        )));
    }
    // (N + n)! / (a! (N - |a|)!) = prod_{k=1..n}(N + k) * multinomial(N; a, N - |a|)
    let mut denom = 1.0f64;
    for k in 1..=n {
        denom *= (power as usize + k) as f64;
    }
    let mut remaining = power as u64;
    for &a in exponents {
        denom *= binomial(remaining, a as u64).ok_or_else(|| Error::Domain("multinomial overflow".into()))? as f64;
        remaining -= a as u64;
    }
    let sq = std::f64::consts::PI.powi(n as i32) / denom;
    Ok(lit::<T>(sq).sqrt())
}

/// Orthonormal monomial basis of `H^0(P^n, O(N))`.
///
/// Basis element `k` is `z^{a_k} / ||z^{a_k}||` with the exponent vectors in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionBasis<T: Real> {
    model: ManifoldModel,
    power: u32,
    multi_indices: Vec<Vec<u32>>,
    norms: Vec<T>,
}

impl<T: Real> SectionBasis<T> {
    pub fn new(n: usize, power: u32) -> Result<Self> {
        let model = ManifoldModel::new(n)?;
        let mut multi_indices = Vec::new();
        let mut current = vec![0u32; n];
        enumerate_exponents(0, power, &mut current, &mut multi_indices);
        let norms = multi_indices
            .iter()
            .map(|a| monomial_norm(n, power, a))
            .collect::<Result<Vec<T>>>()?;
        Ok(Self {
            model,
            power,
            multi_indices,
            norms,
        })
    }

    pub fn model(&self) -> ManifoldModel {
        self.model
    }

    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn len(&self) -> usize {
        self.multi_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multi_indices.is_empty()
    }

    pub fn multi_indices(&self) -> &[Vec<u32>] {
        &self.multi_indices
    }

    pub fn norms(&self) -> &[T] {
        &self.norms
    }

    /// Position of an exponent vector in the canonical ordering.
    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.multi_indices.iter().position(|a| a.as_slice() == exponents)
    }

    /// Chart values of every normalized basis section at `z`.
    pub fn values(&self, z: &[C<T>]) -> Result<Vec<C<T>>> {
        if z.len() != self.n() {
            return Err(Error::Shape {
                expected: self.n(),
                got: z.len(),
            });
        }
        let max = self.power as usize;
        // powers[k][e] = z_k^e
        let powers: Vec<Vec<C<T>>> = z
            .iter()
            .map(|&zk| {
                let mut row = Vec::with_capacity(max + 1);
                let mut acc = C::new(T::one(), T::zero());
                for _ in 0..=max {
                    row.push(acc);
                    acc *= zk;
                }
                row
            })
            .collect();
        Ok(self
            .multi_indices
            .iter()
            .zip(&self.norms)
            .map(|(a, &norm)| {
                let mono = a
                    .iter()
                    .enumerate()
                    .fold(C::new(T::one(), T::zero()), |acc, (k, &e)| acc * powers[k][e as usize]);
                mono.unscale(norm)
            })
            .collect())
    }
}

fn enumerate_exponents(slot: usize, budget: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slot == current.len() {
        out.push(current.clone());
        return;
    }
    for e in 0..=budget {
        current[slot] = e;
        enumerate_exponents(slot + 1, budget - e, current, out);
    }
    current[slot] = 0;
}

/// Chart value `sum_k c_k z^{a_k} / ||z^{a_k}||` of the section with
/// coefficients `coeffs` in the orthonormal basis.
pub fn evaluate_section<T: Real>(basis: &SectionBasis<T>, coeffs: &[C<T>], z: &[C<T>]) -> Result<C<T>> {
    if coeffs.len() != basis.len() {
        return Err(Error::Shape {
            expected: basis.len(),
            got: coeffs.len(),
        });
    }
    let values = basis.values(z)?;
    Ok(coeffs
        .iter()
        .zip(values)
        .fold(C::new(T::zero(), T::zero()), |acc, (&c, v)| acc + c * v))
}
