//! Numerical toolkit for fractional integration operators whose kernels are singular on the
//! unit sphere.
//!
//! * [`specfun`] — complex Gamma and Bessel functions of complex order.
//! * [`kernels`] — the kernel families, their radial Fourier multipliers and identity checks.
//! * [`fields`] — periodic sampled fields, FFT-based multipliers, `L^p` and Sobolev norms.
//! * [`regions`] — admissible exponent regions, generic over exact or floating scalars.
//! * [`maximal`] — dyadic shells, narrow cones, directional and averaged maximal operators.
//! * [`wave`] — spectral Duhamel solver for the forced wave equation.
//! * [`scan`] — norm-ratio experiments over test families.
//!
//! Everything numerical is generic over [`Real`] (`f32`/`f64`); the aliases below fix `f64`.

pub mod error;
pub mod fields;
pub mod kernels;
pub mod maximal;
pub mod regions;
pub mod scalar;
pub mod scan;
pub mod specfun;
pub mod wave;

pub use error::{Result, SsopsError};
pub use scalar::Real;

pub use num_complex::Complex;
pub use num_rational::Rational64;

pub type Complex64 = Complex<f64>;

pub type BesselOrder64 = specfun::BesselOrder<f64>;
pub type KernelSpec64 = kernels::KernelSpec<f64>;
pub type RadialMultiplier64 = kernels::RadialMultiplier<f64>;
pub type Grid64 = fields::GridSpec<f64>;
pub type Field64 = fields::SampledField<f64>;
pub type Field32 = fields::SampledField<f32>;
pub type SphereGrid64 = maximal::SphereGrid<f64>;
pub type WaveForcing64 = wave::WaveForcing<f64>;
pub type Query64 = regions::RegionQuery<f64>;
/// Region queries in exact rational arithmetic.
pub type RationalQuery = regions::RegionQuery<Rational64>;
