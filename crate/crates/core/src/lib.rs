//! Computer-algebra and numerical-verification engine for quantum principal
//! U(1)-bundles over the deformed n-torus: exact arithmetic in the twisted
//! torus algebra, the graded differential calculus with Hodge star and trace
//! integration, the two 1-dimensional calculi of U(1), quantum principal
//! connections with curvature and covariant derivatives on the two bundle
//! models, both Yang–Mills field equations with their solution-space
//! solvers, and the gauge Dirac operator with truncated spectra.

pub mod algebra;
pub mod bundle;
pub mod checks;
pub mod dirac;
pub mod error;
pub mod forms;
pub mod hopf;
pub mod io;
pub mod sample;
pub mod yang_mills;

pub use algebra::{DeformationMatrix, ExponentVec, GnsWindow, TorusContext, TorusElement, TAU};
pub use bundle::{
    AdSection, BundleModel, ConnectionSpec, ModelKind, MultiplicativityReport, RegularityReport,
    TotalForm,
};
pub use dirac::{GammaRep, GaugeSpinor, SpectrumReport, Spinor};
pub use error::{Error, Result};
pub use forms::{FormIndex, TorusForm};
pub use hopf::{CalculusKind, EnvelopeElement, GermsVector, LaurentElement};
pub use yang_mills::{
    KernelReport, ResidualKind, ResidualReport, ShiftReport, TrivializedSection,
};
