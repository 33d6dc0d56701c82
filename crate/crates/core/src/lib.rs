//! Exact computation of symplectically harmonic cohomology of nilmanifolds.
//!
//! A nilmanifold's de Rham cohomology is the Chevalley–Eilenberg cohomology of
//! its nilpotent Lie algebra, so every invariant here reduces to exact rational
//! linear algebra on Λ*𝔤*. The crate parses structure notation
//! ([`liespec`]), computes cohomology and cup products ([`cohomology`]), builds
//! the symplectic operators ([`symplectic`]), computes the harmonic numbers
//! `h_k` ([`harmonic`]), explores the symplectic cone ([`flexibility`]) and
//! checks the six-dimensional catalog ([`catalog`]).
//!
//! All arithmetic is exact; there is no floating point in any computation.

pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod exec;
pub mod exterior;
pub mod flexibility;
pub mod harmonic;
pub mod linalg;
pub mod liespec;
pub mod poly;
pub mod properties;
pub mod scalar;
pub mod symplectic;

pub use error::{Error, ParseError, Result};
pub use scalar::Scalar;
