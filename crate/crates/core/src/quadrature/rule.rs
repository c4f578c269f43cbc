use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{is_finite, lit, to_f64, Real, C};

/// Parameter domain descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Closed interval, integrated with Gauss-Legendre.
    Interval { a: f64, b: f64 },
    /// `[0, 2 pi)` with periodic integrands, integrated with the trapezoid rule.
    Circle,
    /// Cartesian product; an empty product is a single point.
    Tensor(Vec<Domain>),
}

impl Domain {
    /// One-dimensional factors in order.
    pub fn factors(&self) -> Vec<Domain> {
        match self {
            Domain::Tensor(parts) => parts.iter().flat_map(Domain::factors).collect(),
            other => vec![other.clone()],
        }
    }

    pub fn dim(&self) -> usize {
        self.factors().len()
    }

    pub fn volume(&self) -> f64 {
        self.factors()
            .iter()
            .map(|d| match d {
                Domain::Interval { a, b } => b - a,
                Domain::Circle => 2.0 * PI,
                Domain::Tensor(_) => unreachable!(),
            })
            .product()
    }

    fn validate(&self) -> Result<()> {
        for d in self.factors() {
            if let Domain::Interval { a, b } = d {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::UnsupportedDomain(format!("interval [{a}, {b}]")));
                }
            }
        }
        Ok(())
    }
}

/// Tensor-product rule with nodes stored flat, last dimension fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T: Real> {
    domain: Domain,
    counts: Vec<usize>,
    nodes: Vec<T>,
    weights: Vec<T>,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn one_dim(domain: &Domain, m: usize) -> (Vec<f64>, Vec<f64>) {
    match *domain {
        Domain::Interval { a, b } => {
            let (x, w) = gauss_legendre(m);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            (
                x.iter().map(|t| mid + half * t).collect(),
                w.iter().map(|t| half * t).collect(),
            )
        }
        Domain::Circle => {
            let h = 2.0 * PI / m as f64;
            ((0..m).map(|k| k as f64 * h).collect(), vec![h; m])
        }
        Domain::Tensor(_) => unreachable!("flattened before use"),
    }
}

/// Uniform node count in every dimension.
pub fn build_rule<T: Real>(domain: &Domain, nodes_per_dim: usize) -> Result<QuadratureRule<T>> {
    QuadratureRule::with_counts(domain, &vec![nodes_per_dim; domain.dim()])
}

impl<T: Real> QuadratureRule<T> {
    /// Tensor rule with `counts[k]` nodes in the `k`-th one-dimensional factor.
    pub fn with_counts(domain: &Domain, counts: &[usize]) -> Result<Self> {
        domain.validate()?;
        let factors = domain.factors();
        if counts.len() != factors.len() {
            return Err(Error::Shape {
                expected: factors.len(),
                got: counts.len(),
            });
        }
        if let Some(&m) = counts.iter().find(|&&m| m < 2) {
            return Err(Error::Domain(format!(
                "quadrature needs at least 2 nodes per dimension, got {m}"
            )));
        }
        let rules: Vec<_> = factors.iter().zip(counts).map(|(d, &m)| one_dim(d, m)).collect();
        let dim = factors.len();
        let total: usize = counts.iter().product();
        let mut nodes = Vec::with_capacity(total * dim);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut w = 1.0;
            for (k, &i) in idx.iter().enumerate() {
                nodes.push(lit::<T>(rules[k].0[i]));
                w *= rules[k].1[i];
            }
            weights.push(lit::<T>(w));
            // odometer, last dimension fastest
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < counts[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(Self {
            domain: domain.clone(),
            counts: counts.to_vec(),
            nodes,
            weights,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, k: usize) -> &[T] {
        let d = self.dim();
        &self.nodes[k * d..(k + 1) * d]
    }

    pub fn weight(&self, k: usize) -> T {
        self.weights[k]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Same domain with every node count doubled.
    pub fn refined(&self) -> Result<Self> {
        let counts: Vec<usize> = self.counts.iter().map(|m| 2 * m).collect();
        Self::with_counts(&self.domain, &counts)
    }
}

/// `sum_k w_k f(x_k)` in node order.
pub fn integrate<T, F>(rule: &QuadratureRule<T>, mut f: F) -> Result<C<T>>
where
    T: Real,
    F: FnMut(&[T]) -> C<T>,
{
    let mut acc = C::new(T::zero(), T::zero());
    for k in 0..rule.len() {
        let node = rule.node(k);
        let v = f(node);
        if !(is_finite(v.re) && is_finite(v.im)) {
            return Err(Error::NonFinite {
                node: node.iter().map(|&x| to_f64(x)).collect(),
            });
        }
        acc += v.scale(rule.weight(k));
    }
    Ok(acc)
}
