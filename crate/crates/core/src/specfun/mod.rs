//! Scalar special functions used by the analytic outage expressions.
//!
//! Everything here is pure double-precision code with no shared state.

pub mod bessel;
pub mod gamma;
pub mod incgamma;
pub mod meijer;

pub use bessel::{bessel_k, bessel_k_scaled, ln_bessel_k};
pub use gamma::{digamma, ln_gamma, ln_gamma_complex, ln_gamma_signed};
pub use incgamma::{reg_gamma_pair, reg_lower_gamma, reg_upper_gamma};
pub use meijer::{
    meijer_g_2002, meijer_g_2131, meijer_g_2131_with, product_cdf_parameters, product_gamma_cdf, Accuracy,
    GMethod, ProductGammaCdf,
};
