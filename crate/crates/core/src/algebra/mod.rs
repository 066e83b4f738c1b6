//! Exact arithmetic in the deformed torus algebra: normal-ordered monomials,
//! involution, trace, derivations and the truncated GNS operator model.

pub mod deformation;
pub mod element;
pub mod gns;

pub use deformation::DeformationMatrix;
pub use element::{contexts_match, ExponentVec, TorusContext, TorusElement, TAU};
pub use gns::{product_oracle_gap, GnsWindow, WindowVector};
