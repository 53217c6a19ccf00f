//! Analytic special functions: log-gamma, Hurwitz zeta, the smooth
//! window Φ, adaptive quadrature, and the AFE cutoff weights ω_j.

pub mod bump;
pub mod gamma;
pub mod hurwitz;
pub mod omega;
pub mod quad;

pub use bump::BumpPhi;
pub use gamma::{gamma_real, ln_gamma};
pub use hurwitz::hurwitz_zeta;
pub use omega::{omega_limit, omega_series1, support_cutoff, OmegaTable, OmegaWeight};
pub use quad::adaptive_simpson;
