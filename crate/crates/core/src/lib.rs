//! Restriction states of holomorphic sections on `P^{n1} x P^{n2}`.
//!
//! Sections of `O(N) (x) O(N)` are restricted to a real submanifold `Lambda`
//! of the product. The operator `P_N^* P_N` of that restriction, normalized
//! to unit trace, is a density matrix `rho_N` on `C^{d1} (x) C^{d2}`, and the
//! crate computes its entanglement diagnostics.
//!
//! ```
//! use kahler_entanglement::{analyze, restriction_gram, rho_from_gram, SectionBasis64, Submanifold, SubmanifoldSpec};
//!
//! let first = SectionBasis64::new(1, 1)?;
//! let second = SectionBasis64::new(1, 1)?;
//! let sub = Submanifold::new(SubmanifoldSpec::DiagonalCircle { radius: 1.0 }, 1, 1)?;
//! let rule = sub.rule(1, Some(64))?;
//! let rho = rho_from_gram(&restriction_gram(&first, &second, &sub, &rule)?)?;
//! let report = analyze(&rho)?;
//! assert!(report.concurrence.unwrap() < 1e-12);
//! # Ok::<(), kahler_entanglement::Error>(())
//! ```
//!
//! Tensor index convention: basis element `e_i (x) f_j` has index `i * d2 + j`.
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the precision.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coherent;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod linalg;
pub mod projective;
pub mod quadrature;
pub mod scalar;
pub mod states;
pub mod tolerance;

pub use coherent::{bergman_diagonal, coherent_state, product_coherent_state, CoherentState};
pub use entanglement::{
    analyze, analyze_with, entanglement_entropy, ppt_check, schmidt, wootters_eof, EntanglementReport, Evidence,
    PptVerdict, ProductDecomposition, Verdict,
};
pub use error::{Error, Result};
pub use projective::{dim_sections, fs_weight, monomial_norm, ManifoldModel, SectionBasis};
pub use quadrature::{build_rule, integrate, Domain, FactorSubmanifold, QuadratureRule, Submanifold, SubmanifoldSpec};
pub use scalar::Real;
pub use states::{
    coherent_mixture, partial_trace_1, partial_trace_2, product_factor_residual, restriction_gram,
    restriction_gram_with, rho_from_gram, tensor_product, DensityMatrix, Execution, GramOperator,
};
pub use tolerance::Tolerances;

pub type SectionBasis64 = SectionBasis<f64>;
pub type SectionBasis32 = SectionBasis<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type GramOperator64 = GramOperator<f64>;
pub type GramOperator32 = GramOperator<f32>;
pub type QuadratureRule64 = QuadratureRule<f64>;
pub type QuadratureRule32 = QuadratureRule<f32>;
pub type Submanifold64 = Submanifold<f64>;
pub type Submanifold32 = Submanifold<f32>;
pub type EntanglementReport64 = EntanglementReport<f64>;
pub type EntanglementReport32 = EntanglementReport<f32>;
