//! Complex special functions and oscillatory integrals.

pub mod bessel;
pub mod gamma;
pub mod zeta;

pub use bessel::k_bessel;
pub use gamma::{complex_gamma, digamma, gamma_ratio, ln_gamma, rgamma};
pub use zeta::{completed_zeta, riemann_zeta, riemann_zeta_with};
pub mod oscillatory;
pub mod whittaker;

pub use oscillatory::oscillatory_i;
pub use whittaker::{bessel_moment, whittaker_w_minus, whittaker_w_plus};
pub mod probes;

pub use probes::{probe_whittaker_bounds, BoundProbeReport, BoundRegime, GridPoint};
