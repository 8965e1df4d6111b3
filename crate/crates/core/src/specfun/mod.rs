//! Special functions on complex arguments.

mod bernoulli;
mod bessel;
pub mod dd;
mod gamma;
mod hurwitz;

pub use bernoulli::{bernoulli_2k, bernoulli_2k_dd};
pub use bessel::bessel_j;
pub use gamma::{gamma, log_gamma};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_dd, riemann_zeta, zeta_minus_one_dd};
