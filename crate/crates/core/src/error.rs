use thiserror::Error;

/// Errors raised by the algebra and geometry layers.
///
/// `Validation`-class errors come from malformed inputs (wrong dimensions,
/// non-antisymmetric deformation data, invalid model/calculus pairings).
/// `Consistency` signals that two independent evaluation routes of the same
/// quantity disagreed beyond tolerance; it is never swallowed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("deformation matrix mismatch between operands")]
    DeformationMismatch,

    #[error("invalid deformation matrix: {0}")]
    InvalidDeformation(String),

    #[error("axis {axis} out of range 1..={n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("form is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("form is not horizontal: {0}")]
    NotHorizontal(String),

    #[error("mixed-degree input where a pure degree is required")]
    MixedDegree,

    #[error("model A pairs with the classical calculus, model B with the non-standard one")]
    ModelCalculusMismatch,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal consistency failure in {what}: gap {gap:.3e} exceeds {tol:.3e}")]
    Consistency { what: String, gap: f64, tol: f64 },
}

impl Error {
    /// True for errors caused by malformed input rather than internal faults.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Consistency { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
