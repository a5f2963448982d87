//! Complex log-gamma, Gauss hypergeometric ₂F₁ on the real line, and the
//! local Heun function.

pub mod gamma;
pub mod heun;
pub mod hyp2f1;

pub use gamma::{gamma, ln_gamma_complex, rgamma};
pub use heun::{heun_coefficients, heun_local, heun_local_with_derivative, heun_ode_eval, HeunOdeConfig, HeunParams};
pub use hyp2f1::{hyp2f1, pfaff_reduced, Hyp2F1Params};
