//! Special functions: complex Gamma and complex-order Bessel functions.

mod bessel;
mod gamma;
pub mod quadrature;

pub use bessel::{bessel_asymptotic, bessel_j, normalized_bessel, BesselMethod, BesselOrder, BesselValue};
pub use gamma::{gamma_complex, gamma_real, gamma_reciprocal};
