//! Deterministic quadrature on parameter domains and the measure that the
//! product Fubini-Study metric induces on parametrized submanifolds.

mod rule;
mod submanifold;

pub use rule::{build_rule, gauss_legendre, integrate, Domain, QuadratureRule};
pub use submanifold::{
    fs_metric, induced_density, BuiltinCurve, Factor, FactorSubmanifold, JointPoint, Submanifold, SubmanifoldSpec,
    DEFAULT_APERIODIC_NODES, DEFAULT_PERIODIC_NODES,
};
