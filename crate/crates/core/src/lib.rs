//! Sharp constants, spherical spectra and numerical certification for weighted
//! Hardy-Rellich inequalities on cones.

pub mod cone;
pub mod constants;
pub mod error;
pub mod linalg;
pub mod profiles;
pub mod quadrature;
pub mod scalar;
pub mod sharpness;
pub mod spectra;
pub mod verifier;

pub use error::{Error, Result};
