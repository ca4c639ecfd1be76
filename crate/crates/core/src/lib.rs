//! Exact linear algebra of pluricanonical systems on nodal curves whose
//! components are rational.
//!
//! A curve is a set of `P^1` components glued at nodes. [`sections`] builds
//! explicit bases of `H^0(ω_Z^k(T))` over `Q`, [`multiplication`] assembles
//! multiplication maps and power normality reports, [`geometry`] probes very
//! ampleness and simple secants, and [`verifier`] runs the whole chain of
//! statements over generated corpora.

pub mod curve;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod multiplication;
pub mod par;
pub mod poly;
pub mod scalar;
pub mod sections;
pub mod verifier;

pub use curve::{NodalCurve, Subcurve};
pub use error::{Error, Result};
pub use par::Execution;
pub use scalar::{Param, Scalar};
pub use sections::{sections_basis, BundleSpec, SectionBasis, TwistDivisor, TwistPoint};
