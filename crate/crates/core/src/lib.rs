//! Attractive inverse-square potential in momentum space, in ordinary quantum
//! mechanics and with a minimal length from a deformed Heisenberg algebra.
//!
//! Spectra come from zeros of hypergeometric quantization functions, from
//! shooting on the deformed momentum-space ODE, and from a Nyström
//! discretization of the equivalent integral equation.

pub mod deformed_model;
pub mod deformed_solver;
pub mod error;
pub mod exec;
pub mod integral_oracle;
pub mod ode;
pub mod ordinary_qm;
pub mod quadrature;
pub mod roots;
pub mod special_fn;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;

/// Complex value used throughout the public API.
pub type ComplexVal = Complex64;
