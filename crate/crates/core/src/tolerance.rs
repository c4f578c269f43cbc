use serde::{Deserialize, Serialize};

/// Numerical thresholds, stated in double precision.
///
/// Use [`crate::scalar::Real::tolerance`] to read one at a given precision;
/// it never goes below a small multiple of that type's epsilon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest allowed `|rho_ij - conj(rho_ji)|`.
    pub hermitian: f64,
    /// Largest allowed `|tr rho - 1|`.
    pub trace: f64,
    /// Eigenvalues in `[-psd, 0)` are clipped to zero, below is an error.
    pub psd: f64,
    /// Partial-transpose eigenvalues below `-ppt` certify entanglement.
    pub ppt: f64,
    /// `|tr rho^2 - 1|` below this classifies a state as pure.
    pub purity: f64,
    /// Threshold for product residual, entropy, and entanglement of
    /// formation in separability verdicts.
    pub verdict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            trace: 1e-12,
            psd: 1e-10,
            ppt: 1e-10,
            purity: 1e-10,
            verdict: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults with the verdict and PPT thresholds replaced by `tol`.
    pub fn with_verdict(tol: f64) -> Self {
        Self {
            ppt: tol,
            verdict: tol,
            ..Self::default()
        }
    }
}
