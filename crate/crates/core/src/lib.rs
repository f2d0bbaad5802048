//! Holomorphic vector bundles on a complex elliptic curve `C*/<q>`,
//! represented by matrix-valued factors of automorphy `A(u)`.
//!
//! The crate covers the Laurent-matrix algebra behind the representation,
//! the cocycle calculus and its equivalence tests, tensor/symmetric/exterior
//! functors, pullback and pushforward along the `r`-fold isogeny, normal
//! forms for indecomposable bundles of any rank and degree, and numeric
//! checks against classical theta functions.

pub mod classify;
pub mod cli;
pub mod cocycle;
pub mod error;
pub mod functors;
pub mod isogeny;
pub mod jordan;
pub mod json;
pub mod laurent;
pub mod matrix;
pub mod scalar;
pub mod theta;
pub mod torus;

pub use classify::BundleDescriptor;
pub use cocycle::{EquivalenceWitness, FactorOfAutomorphy};
pub use error::{Error, Result};
pub use isogeny::IsogenyContext;
pub use laurent::LaurentPoly;
pub use matrix::{ConstMatrix, LaurentMatrix};
pub use scalar::C64;
pub use theta::ThetaCharacteristic;
pub use torus::Torus;
