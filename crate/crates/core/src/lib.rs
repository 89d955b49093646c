//! Exact and numerical toolkit for the Weyl and twisted-Weyl `*`-algebras:
//! normal ordering, positive characters and their partial action, the induced
//! transformation groupoid and its twist, Fell-bundle fibres, Rieffel
//! deformation, and truncated operator representations.

pub mod algebra;
pub mod characters;
pub mod error;
pub mod fell;
pub mod groupoid;
pub mod operator;
pub mod phase;
pub mod random;
pub mod scalar;
pub mod window;

pub use error::{Error, Result};
pub use phase::{Phase, PhaseScalar};
pub use scalar::Scalar;
