//! Cyclic w-functions on the Fermat curve, the Bazhanov-Baxter vertex and
//! IRC weights, the Planar model, their ψ-vectors, and numerical checks of
//! the tetrahedron equations they satisfy.
//!
//! Module map:
//! - [`fermat`]: roots of unity, the `d` function, `w(p|a)`, the automorphism `O`.
//! - [`geometry`]: trihedra, tetrahedra and the angle assignment for each weight.
//! - [`bbm`]: spectral points, vertex weight `R`, IRC weight `W`, ψ and ψ̄.
//! - [`planar`]: the Planar model weights, ψ-vectors and decomposition of `W`.
//! - [`verify`]: dense tensor contraction and residual computations.
//! - [`suite`]: named verification suites producing a JSON-serializable report.

pub mod bbm;
pub mod error;
pub mod fermat;
pub mod geometry;
pub mod planar;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
