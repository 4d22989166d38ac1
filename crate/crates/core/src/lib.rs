//! Outage probability of a dual-hop, time-switching energy-harvesting
//! full-duplex relay (amplify-and-forward and decode-and-forward) over
//! independent, non-identically distributed α-μ fading.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: log-gamma, regularized incomplete gamma, modified Bessel
//!   function of the second kind and the `G^{2,1}_{1,3}` Meijer G-function
//!   needed by the product-of-powers distribution.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature used by the semi-analytic
//!   engines and by the independent oracles in the test suites.
//! - [`fading`]: α-μ envelope, power and product distributions plus a sampler.
//! - [`relaysys`]: system configuration, derived constants and the per-draw
//!   SNR chain for both relaying modes.
//! - [`outage`]: analytic outage engines (DF closed form, AF integral,
//!   high-SNR asymptote).
//! - [`mcsim`]: Monte Carlo estimator with reproducible substreams.
//! - [`presets`]: the Rayleigh / Weibull / Nakagami evaluation scenarios.

pub mod error;
pub mod fading;
pub mod mcsim;
pub mod outage;
pub mod presets;
pub mod quad;
pub mod relaysys;
pub mod specfun;

pub use error::{Error, Result};
pub use fading::{AlphaMuParams, CdfRoute, PowerLambda, ProductDistParams};
pub use mcsim::{McEstimate, RelayMode};
pub use outage::{OutageMethod, OutageResult, QuadratureSettings};
pub use relaysys::{ChannelDraw, DerivedConstants, SystemConfig};
