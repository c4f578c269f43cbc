use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::rule::{Domain, QuadratureRule};
use crate::error::{Error, Result};
use crate::scalar::{cis, cplx, lit, norm_sqr, to_f64, Real, C};

pub const DEFAULT_PERIODIC_NODES: usize = 256;
pub const DEFAULT_APERIODIC_NODES: usize = 128;

/// Which factor of `M1 x M2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Factor {
    First,
    Second,
}

impl TryFrom<u8> for Factor {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Factor::First),
            2 => Ok(Factor::Second),
            other => Err(format!("factor must be 1 or 2, got {other}")),
        }
    }
}

impl From<Factor> for u8 {
    fn from(f: Factor) -> u8 {
        match f {
            Factor::First => 1,
            Factor::Second => 2,
        }
    }
}

/// Submanifold of a single factor `P^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorSubmanifold<T: Real> {
    Point {
        point: Vec<C<T>>,
    },
    /// `theta -> (r e^{i theta}, 0, ..., 0)`
    Circle {
        radius: T,
    },
    /// The whole chart, i.e. `P^n` minus a hyperplane.
    Full,
}

impl<T: Real> FactorSubmanifold<T> {
    /// Parameter domain inside `P^n`.
    pub fn domain(&self, n: usize) -> Domain {
        Domain::Tensor(factor_domain(self, n))
    }

    pub fn rule(&self, n: usize, power: u32, nodes: Option<usize>) -> Result<QuadratureRule<T>> {
        let domain = self.domain(n);
        let counts = match nodes {
            Some(m) => vec![m; domain.dim()],
            None => factor_counts(self, n, power),
        };
        QuadratureRule::with_counts(&domain, &counts)
    }

    pub fn point(&self, n: usize, param: &[T]) -> Vec<C<T>> {
        factor_point(self, n, param)
    }

    /// Induced measure density in `P^n` alone.
    pub fn density(&self, n: usize, param: &[T]) -> Result<T> {
        factor_density(self, n, param)
    }
}

/// Named parametrized curves in `P^{n1} x P^{n2}`, addressed by name from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BuiltinCurve<T: Real> {
    /// `theta -> (r e^{i theta}, r e^{i k theta})`
    GraphCurve { radius: T, winding: u32 },
    /// `theta -> (r e^{i theta}, r e^{-i theta})`
    AntiDiagonalCircle { radius: T },
}

/// Parametrized submanifold `Lambda` of `P^{n1} x P^{n2}`.
///
/// Curves and circles live in the first chart coordinate of each factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum SubmanifoldSpec<T: Real> {
    Point {
        first: Vec<C<T>>,
        second: Vec<C<T>>,
    },
    /// Circle in one factor times a point (default: the origin) in the other.
    Circle {
        radius: T,
        factor: Factor,
        #[serde(default)]
        other: Option<Vec<C<T>>>,
    },
    Torus {
        r1: T,
        r2: T,
    },
    /// `{(z, w) : z = w, |z| = r}`
    DiagonalCircle {
        radius: T,
    },
    Product {
        first: FactorSubmanifold<T>,
        second: FactorSubmanifold<T>,
    },
    FullProduct,
    Custom(BuiltinCurve<T>),
}

impl<T: Real> SubmanifoldSpec<T> {
    /// Factor decomposition for product-type specs.
    pub fn as_product(&self, n1: usize, n2: usize) -> Option<(FactorSubmanifold<T>, FactorSubmanifold<T>)> {
        use FactorSubmanifold as F;
        match self {
            SubmanifoldSpec::Point { first, second } => {
                Some((F::Point { point: first.clone() }, F::Point { point: second.clone() }))
            }
            SubmanifoldSpec::Circle { radius, factor, other } => {
                let origin = |n| vec![C::new(T::zero(), T::zero()); n];
                let circle = F::Circle { radius: *radius };
                Some(match factor {
                    Factor::First => (
                        circle,
                        F::Point {
                            point: other.clone().unwrap_or_else(|| origin(n2)),
                        },
                    ),
                    Factor::Second => (
                        F::Point {
                            point: other.clone().unwrap_or_else(|| origin(n1)),
                        },
                        circle,
                    ),
                })
            }
            SubmanifoldSpec::Torus { r1, r2 } => Some((F::Circle { radius: *r1 }, F::Circle { radius: *r2 })),
            SubmanifoldSpec::Product { first, second } => Some((first.clone(), second.clone())),
            SubmanifoldSpec::FullProduct => Some((F::Full, F::Full)),
            SubmanifoldSpec::DiagonalCircle { .. } | SubmanifoldSpec::Custom(_) => None,
        }
    }

    /// The `kind` tag as it appears in JSON.
    pub fn kind_name(&self) -> &'static str {
        match self {
            SubmanifoldSpec::Point { .. } => "point",
            SubmanifoldSpec::Circle { .. } => "circle",
            SubmanifoldSpec::Torus { .. } => "torus",
            SubmanifoldSpec::DiagonalCircle { .. } => "diagonal_circle",
            SubmanifoldSpec::Product { .. } => "product",
            SubmanifoldSpec::FullProduct => "full_product",
            SubmanifoldSpec::Custom(_) => "custom",
        }
    }
}

/// Point of `M1 x M2` in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPoint<T: Real> {
    pub first: Vec<C<T>>,
    pub second: Vec<C<T>>,
}

/// Real tangent vector of `M1 x M2`, as a pair of complex chart vectors.
type Tangent<T> = (Vec<C<T>>, Vec<C<T>>);

/// A [`SubmanifoldSpec`] bound to the factor dimensions `(n1, n2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Submanifold<T: Real> {
    spec: SubmanifoldSpec<T>,
    n1: usize,
    n2: usize,
}

impl<T: Real> Submanifold<T> {
    pub fn new(spec: SubmanifoldSpec<T>, n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::Domain("factor dimensions must be at least 1".into()));
        }
        let check_point = |p: &[C<T>], n: usize| -> Result<()> {
            if p.len() != n {
                return Err(Error::Shape {
                    expected: n,
                    got: p.len(),
                });
            }
            if p.iter()
                .any(|c| !(crate::scalar::is_finite(c.re) && crate::scalar::is_finite(c.im)))
            {
                return Err(Error::Spec("chart coordinates must be finite".into()));
            }
            Ok(())
        };
        let check_radius = |r: T| -> Result<()> {
            if !crate::scalar::is_finite(r) || r < T::zero() {
                return Err(Error::Spec(format!(
                    "radius must be finite and nonnegative, got {}",
                    to_f64(r)
                )));
            }
            Ok(())
        };
        match &spec {
            SubmanifoldSpec::DiagonalCircle { radius } => check_radius(*radius)?,
            SubmanifoldSpec::Custom(BuiltinCurve::GraphCurve { radius, .. })
            | SubmanifoldSpec::Custom(BuiltinCurve::AntiDiagonalCircle { radius }) => check_radius(*radius)?,
            _ => {}
        }
        if let Some((a, b)) = spec.as_product(n1, n2) {
            for (f, n) in [(&a, n1), (&b, n2)] {
                match f {
                    FactorSubmanifold::Point { point } => check_point(point, n)?,
                    FactorSubmanifold::Circle { radius } => check_radius(*radius)?,
                    FactorSubmanifold::Full => {}
                }
            }
        }
        Ok(Self { spec, n1, n2 })
    }

    pub fn spec(&self) -> &SubmanifoldSpec<T> {
        &self.spec
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    fn factors(&self) -> Option<(FactorSubmanifold<T>, FactorSubmanifold<T>)> {
        self.spec.as_product(self.n1, self.n2)
    }

    /// Parameter domain: first-factor parameters, then second-factor ones.
    pub fn domain(&self) -> Domain {
        match self.factors() {
            Some((a, b)) => {
                let mut parts = factor_domain(&a, self.n1);
                parts.extend(factor_domain(&b, self.n2));
                Domain::Tensor(parts)
            }
            None => Domain::Tensor(vec![Domain::Circle]),
        }
    }

    /// Default node counts per parameter dimension.
    ///
    /// Circles use 256 nodes and bounded intervals 128. Full-factor
    /// parameters integrate polynomial and trigonometric integrands of
    /// degree at most `N + n - 1`, so `N + n + 2` nodes are already exact.
    pub fn default_counts(&self, power: u32) -> Vec<usize> {
        match self.factors() {
            Some((a, b)) => {
                let mut counts = factor_counts(&a, self.n1, power);
                counts.extend(factor_counts(&b, self.n2, power));
                counts
            }
            None => vec![DEFAULT_PERIODIC_NODES],
        }
    }

    /// Rule for this submanifold; `nodes` overrides every dimension.
    pub fn rule(&self, power: u32, nodes: Option<usize>) -> Result<QuadratureRule<T>> {
        let counts = match nodes {
            Some(m) => vec![m; self.domain().dim()],
            None => self.default_counts(power),
        };
        QuadratureRule::with_counts(&self.domain(), &counts)
    }

    /// Chart coordinates of the point with parameters `param`.
    pub fn point(&self, param: &[T]) -> Result<JointPoint<T>> {
        self.check_param(param)?;
        Ok(match self.factors() {
            Some((a, b)) => {
                let k = factor_param_len(&a, self.n1);
                JointPoint {
                    first: factor_point(&a, self.n1, &param[..k]),
                    second: factor_point(&b, self.n2, &param[k..]),
                }
            }
            None => self.curve(param[0]).0,
        })
    }

    fn check_param(&self, param: &[T]) -> Result<()> {
        let d = self.domain().dim();
        if param.len() != d {
            return Err(Error::Shape {
                expected: d,
                got: param.len(),
            });
        }
        Ok(())
    }

    fn curve(&self, theta: T) -> (JointPoint<T>, Tangent<T>) {
        let embed = |c: C<T>, n: usize| {
            let mut v = vec![C::new(T::zero(), T::zero()); n];
            v[0] = c;
            v
        };
        let i = cplx(T::zero(), T::one());
        let (z, dz, w, dw) = match &self.spec {
            SubmanifoldSpec::DiagonalCircle { radius } => {
                let p = cis(theta).scale(*radius);
                (p, i * p, p, i * p)
            }
            SubmanifoldSpec::Custom(BuiltinCurve::GraphCurve { radius, winding }) => {
                let k: T = lit(*winding as f64);
                let p = cis(theta).scale(*radius);
                let q = cis(theta * k).scale(*radius);
                (p, i * p, q, i * q.scale(k))
            }
            SubmanifoldSpec::Custom(BuiltinCurve::AntiDiagonalCircle { radius }) => {
                let p = cis(theta).scale(*radius);
                let q = p.conj();
                (p, i * p, q, -(i * q))
            }
            _ => unreachable!("product specs are handled factorwise"),
        };
        (
            JointPoint {
                first: embed(z, self.n1),
                second: embed(w, self.n2),
            },
            (embed(dz, self.n1), embed(dw, self.n2)),
        )
    }

    /// Density of the induced measure `d mu` with respect to the parameter
    /// measure: `sqrt(det G)` for the tangent Gram matrix `G` under the
    /// product Fubini-Study metric. Full factors use the closed-form volume
    /// density of their parametrization; points contribute 1.
    pub fn induced_density(&self, param: &[T]) -> Result<T> {
        self.check_param(param)?;
        match self.factors() {
            Some((a, b)) => {
                let k = factor_param_len(&a, self.n1);
                let da = factor_density(&a, self.n1, &param[..k])?;
                let db = factor_density(&b, self.n2, &param[k..])?;
                Ok(da * db)
            }
            None => {
                let (p, t) = self.curve(param[0]);
                tangent_density(&p, &[t], param)
            }
        }
    }
}

/// Free-function form of [`Submanifold::induced_density`].
pub fn induced_density<T: Real>(spec: &Submanifold<T>, param: &[T]) -> Result<T> {
    spec.induced_density(param)
}

/// Real part of the Fubini-Study hermitian metric at `z` on the real
/// tangent vectors `u`, `v`:
/// `Re[(<u,v>(1 + |z|^2) - <u,z><z,v>) / (1 + |z|^2)^2]`.
pub fn fs_metric<T: Real>(z: &[C<T>], u: &[C<T>], v: &[C<T>]) -> T {
    let inner = |a: &[C<T>], b: &[C<T>]| {
        a.iter()
            .zip(b)
            .fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + x * y.conj())
    };
    let s = T::one() + norm_sqr(z);
    let h = (inner(u, v).scale(s) - inner(u, z) * inner(z, v)).unscale(s * s);
    h.re
}

fn tangent_density<T: Real>(p: &JointPoint<T>, tangents: &[Tangent<T>], param: &[T]) -> Result<T> {
    let k = tangents.len();
    let g = DMatrix::<T>::from_fn(k, k, |a, b| {
        fs_metric(&p.first, &tangents[a].0, &tangents[b].0) + fs_metric(&p.second, &tangents[a].1, &tangents[b].1)
    });
    let det = g.determinant();
    let scale = g.diagonal().iter().fold(T::one(), |acc, &x| acc * x.abs());
    if !(det > T::default_epsilon() * scale) || !(det > T::zero()) {
        return Err(Error::DegenerateSubmanifold {
            param: param.iter().map(|&x| to_f64(x)).collect(),
            det: to_f64(det),
        });
    }
    Ok(det.sqrt())
}

fn factor_param_len<T: Real>(f: &FactorSubmanifold<T>, n: usize) -> usize {
    match f {
        FactorSubmanifold::Point { .. } => 0,
        FactorSubmanifold::Circle { .. } => 1,
        FactorSubmanifold::Full => 2 * n,
    }
}

fn factor_domain<T: Real>(f: &FactorSubmanifold<T>, n: usize) -> Vec<Domain> {
    match f {
        FactorSubmanifold::Point { .. } => vec![],
        FactorSubmanifold::Circle { .. } => vec![Domain::Circle],
        FactorSubmanifold::Full => {
            let mut d = vec![Domain::Interval { a: 0.0, b: 1.0 }; n];
            d.extend(std::iter::repeat_n(Domain::Circle, n));
            d
        }
    }
}

fn factor_counts<T: Real>(f: &FactorSubmanifold<T>, n: usize, power: u32) -> Vec<usize> {
    match f {
        FactorSubmanifold::Point { .. } => vec![],
        FactorSubmanifold::Circle { .. } => vec![DEFAULT_PERIODIC_NODES],
        FactorSubmanifold::Full => vec![power as usize + n + 2; 2 * n],
    }
}

/// Collapsed coordinates `x in [0,1]^n` onto the simplex `s`, with Jacobian.
fn collapse<T: Real>(x: &[T]) -> (Vec<T>, T) {
    let mut s = Vec::with_capacity(x.len());
    let mut rest = T::one();
    let mut jac = T::one();
    for &xk in x {
        s.push(xk * rest);
        jac *= rest;
        rest *= T::one() - xk;
    }
    (s, jac)
}

/// Full factor parametrization. With `s_k = |z_k|^2 / (1 + |z|^2)` on the
/// simplex and angles `theta_k`, `dV = 2^-n ds d theta`, and
/// `|z_k|^2 = s_k / (1 - sum s)`.
fn factor_point<T: Real>(f: &FactorSubmanifold<T>, n: usize, param: &[T]) -> Vec<C<T>> {
    match f {
        FactorSubmanifold::Point { point } => point.clone(),
        FactorSubmanifold::Circle { radius } => {
            let mut v = vec![C::new(T::zero(), T::zero()); n];
            v[0] = cis(param[0]).scale(*radius);
            v
        }
        FactorSubmanifold::Full => {
            let (s, _) = collapse(&param[..n]);
            let tail = T::one() - s.iter().fold(T::zero(), |a, &b| a + b);
            s.iter()
                .zip(&param[n..])
                .map(|(&sk, &theta)| cis(theta).scale((sk / tail).sqrt()))
                .collect()
        }
    }
}

fn factor_density<T: Real>(f: &FactorSubmanifold<T>, n: usize, param: &[T]) -> Result<T> {
    match f {
        FactorSubmanifold::Point { .. } => Ok(T::one()),
        FactorSubmanifold::Circle { radius } => {
            let i = cplx(T::zero(), T::one());
            let z = factor_point(f, n, param);
            let mut t = vec![C::new(T::zero(), T::zero()); n];
            t[0] = i * cis(param[0]).scale(*radius);
            let g = fs_metric(&z, &t, &t);
            if !(g > T::zero()) {
                return Err(Error::DegenerateSubmanifold {
                    param: param.iter().map(|&x| to_f64(x)).collect(),
                    det: to_f64(g),
                });
            }
            Ok(g.sqrt())
        }
        FactorSubmanifold::Full => {
            let (_, jac) = collapse(&param[..n]);
            Ok(jac / lit::<T>(2.0f64.powi(n as i32)))
        }
    }
}
