//! Kernel families singular on the unit sphere and their radial Fourier multipliers.
//!
//! Every multiplier has the form `c · ρ^{−m} J_m(2πρ)` for a family-dependent index `m`
//! (Fourier convention `f̂(ξ) = ∫ f(x) e^{−2πi x·ξ} dx`), except the Bessel potential
//! `(1 + ρ²)^{−s/2}`.

mod checks;
mod sampling;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Result, SsopsError};
use crate::scalar::Real;
use crate::specfun::{gamma_reciprocal, normalized_bessel, BesselOrder};

pub use checks::{
    decay_envelope_fit, domination_check, surface_measure_check, theta_endpoint_check, DominationReport,
    EnvelopeFit, SurfaceMeasureReport, ThetaEndpointReport,
};
pub use sampling::{sample_kernel, transform_check, TransformCheckReport};

/// Order `α` of fractional integration in dimension `n`, with the derived exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaParams<T> {
    pub alpha: Complex<T>,
    pub n: usize,
}

impl<T: Real> AlphaParams<T> {
    pub fn new(alpha: Complex<T>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(SsopsError::domain(format!("dimension must be at least 2, got {n}")));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(SsopsError::domain("alpha must be finite"));
        }
        Ok(Self { alpha, n })
    }

    pub fn real(alpha: T, n: usize) -> Result<Self> {
        Self::new(Complex::new(alpha, T::zero()), n)
    }

    pub fn dim(&self) -> T {
        T::from_usize_lossy(self.n)
    }

    /// `λ(α) = ((n+1)/2)(1 − α/n)`.
    pub fn lambda(&self) -> Complex<T> {
        let n = self.dim();
        (Complex::new(T::one(), T::zero()) - self.alpha / n) * ((n + T::one()) * T::lit(0.5))
    }

    /// `δ(α) = 1 − ((n+1)/(2n)) α`.
    pub fn delta(&self) -> Complex<T> {
        let n = self.dim();
        Complex::new(T::one(), T::zero()) - self.alpha * ((n + T::one()) / (T::lit(2.0) * n))
    }

    /// Multiplier index of the standard kernel, `((n+1)/(2n)) α − 1/2 = n/2 − λ(α)`.
    pub fn standard_index(&self) -> Complex<T> {
        let n = self.dim();
        self.alpha * ((n + T::one()) / (T::lit(2.0) * n)) - T::lit(0.5)
    }

    /// `2n/(n+1)`: the order whose standard multiplier is `sin(2πρ)/(πρ)`.
    pub fn critical_alpha(n: usize) -> T {
        let n = T::from_usize_lossy(n);
        T::lit(2.0) * n / (n + T::one())
    }

    /// `((n−1)/(n+1)) n`: the order at which the standard multiplier is a multiple of the
    /// sphere's surface-measure transform.
    pub fn surface_alpha(n: usize) -> T {
        let n = T::from_usize_lossy(n);
        (n - T::one()) / (n + T::one()) * n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// `π^{−λ} Γ(1−λ)^{−1} (1−|x|²)_+^{−λ}`.
    Standard,
    /// `(1−|x|²)_+^{−(1−α/n)}`.
    Natural,
    /// `π^{−δ} Γ(1−δ)^{−1} (1−|x|²)_+^{−δ}`.
    Flat,
    /// `π^{−λ−s} Γ(1−λ−s)^{−1} (1−|x|²)_+^{−λ−s}`.
    SWeighted,
    /// Multiplier `(1+ρ²)^{−s/2}`.
    BesselPotential,
    /// Analytic family interpolating between the s-weighted and flat kernels.
    Theta,
}

/// A member of one of the kernel families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSpec<T> {
    pub family: KernelFamily,
    pub params: AlphaParams<T>,
    pub s: T,
    pub z: Complex<T>,
}

/// `coefficient · (1 − |x|²)^{−exponent}` inside the unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalForm<T> {
    pub coefficient: Complex<T>,
    pub exponent: Complex<T>,
}

impl<T: Real> KernelSpec<T> {
    fn build(family: KernelFamily, params: AlphaParams<T>, s: T, z: Complex<T>) -> Result<Self> {
        let spec = Self { family, params, s, z };
        spec.validate()?;
        Ok(spec)
    }

    pub fn standard(alpha: Complex<T>, n: usize) -> Result<Self> {
        Self::build(KernelFamily::Standard, AlphaParams::new(alpha, n)?, T::zero(), Complex::default())
    }

    pub fn natural(alpha: Complex<T>, n: usize) -> Result<Self> {
        Self::build(KernelFamily::Natural, AlphaParams::new(alpha, n)?, T::zero(), Complex::default())
    }

    pub fn flat(alpha: Complex<T>, n: usize) -> Result<Self> {
        Self::build(KernelFamily::Flat, AlphaParams::new(alpha, n)?, T::zero(), Complex::default())
    }

    pub fn s_weighted(alpha: Complex<T>, s: T, n: usize) -> Result<Self> {
        Self::build(KernelFamily::SWeighted, AlphaParams::new(alpha, n)?, s, Complex::default())
    }

    pub fn bessel_potential(s: T, n: usize) -> Result<Self> {
        let params = AlphaParams::new(Complex::default(), n)?;
        Self::build(KernelFamily::BesselPotential, params, s, Complex::default())
    }

    pub fn theta(alpha: Complex<T>, s: T, z: Complex<T>, n: usize) -> Result<Self> {
        Self::build(KernelFamily::Theta, AlphaParams::new(alpha, n)?, s, z)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s >= T::zero()) {
            return Err(SsopsError::domain(format!("smoothness s must be non-negative, got {}", self.s)));
        }
        let n = self.params.dim();
        let re = self.params.alpha.re;
        match self.family {
            KernelFamily::Natural if !(re > T::zero() && re < n) => {
                Err(SsopsError::domain(format!("natural kernel needs 0 < Re α < n, got Re α = {re}")))
            }
            KernelFamily::Flat if !(re > T::zero() && re < AlphaParams::<T>::critical_alpha(self.params.n)) => {
                Err(SsopsError::domain(format!("flat kernel needs 0 < Re α < 2n/(n+1), got Re α = {re}")))
            }
            KernelFamily::Theta => {
                let z = self.z;
                let endpoint = z.im == T::zero() && (z.re == T::zero() || z.re == T::one());
                if endpoint || (z.re > T::zero() && z.re < T::one()) {
                    Ok(())
                } else {
                    Err(SsopsError::domain(format!("theta family needs 0 < Re z < 1 or z ∈ {{0, 1}}, got {z}")))
                }
            }
            _ => Ok(()),
        }
    }

    /// Multiplier index `m` and coefficient `c` of `c · ρ^{−m} J_m(2πρ)`; `None` for the Bessel potential.
    pub fn bessel_index(&self) -> Option<(Complex<T>, Complex<T>)> {
        let p = &self.params;
        let one = Complex::new(T::one(), T::zero());
        let n = p.dim();
        let half_gap = (n - T::one()) * T::lit(0.5);
        let standard = p.standard_index();
        match self.family {
            KernelFamily::Standard => Some((standard, one)),
            KernelFamily::Flat => Some((standard + half_gap, one)),
            KernelFamily::SWeighted => Some((standard - self.s, one)),
            KernelFamily::Natural => {
                // (1−|x|²)^{−(1−β)} = Γ(β) · [(1−|x|²)^{β−1}/Γ(β)], β = α/n.
                let beta = p.alpha / n;
                let index = beta + (n * T::lit(0.5) - T::one());
                let coefficient = (-(beta - T::one()) * T::PI().ln()).exp() / gamma_reciprocal(beta);
                Some((index, coefficient))
            }
            KernelFamily::Theta => {
                let z = self.z;
                let index = standard + z * half_gap - (one - z) * self.s;
                Some((index, one))
            }
            KernelFamily::BesselPotential => None,
        }
    }

    /// Closed physical-space form, where the kernel is locally integrable.
    pub fn physical_form(&self) -> Result<PhysicalForm<T>> {
        let p = &self.params;
        let one = Complex::new(T::one(), T::zero());
        let scaled = |e: Complex<T>| PhysicalForm {
            coefficient: (-e * T::PI().ln()).exp() * gamma_reciprocal(one - e),
            exponent: e,
        };
        match self.family {
            KernelFamily::Standard => {
                let e = p.lambda();
                if !(e.re < T::one()) {
                    return Err(SsopsError::domain(format!(
                        "standard kernel is not locally integrable for Re λ = {} ≥ 1; use the multiplier",
                        e.re
                    )));
                }
                Ok(scaled(e))
            }
            KernelFamily::Natural => Ok(PhysicalForm {
                coefficient: one,
                exponent: one - p.alpha / p.dim(),
            }),
            KernelFamily::Flat => Ok(scaled(p.delta())),
            KernelFamily::SWeighted => {
                let e = p.lambda() + self.s;
                if !(e.re < T::one()) {
                    return Err(SsopsError::domain(format!(
                        "s-weighted kernel needs Re λ + s < 1, got {}; use the multiplier",
                        e.re
                    )));
                }
                Ok(scaled(e))
            }
            KernelFamily::BesselPotential | KernelFamily::Theta => Err(SsopsError::domain(
                "no closed physical form for this family; use the multiplier",
            )),
        }
    }
}

/// Physical-space kernel value; zero outside the open unit ball.
pub fn kernel_value<T: Real>(spec: &KernelSpec<T>, x: &[T]) -> Result<Complex<T>> {
    let form = spec.physical_form()?;
    if x.len() != spec.params.n {
        return Err(SsopsError::domain(format!("point has {} coordinates, expected {}", x.len(), spec.params.n)));
    }
    let r2: T = x.iter().map(|&c| c * c).sum();
    Ok(eval_physical(&form, r2))
}

pub(crate) fn eval_physical<T: Real>(form: &PhysicalForm<T>, r2: T) -> Complex<T> {
    if r2 >= T::one() {
        return Complex::default();
    }
    form.coefficient * (-form.exponent * (T::one() - r2).ln()).exp()
}

type Profile<T> = dyn Fn(T) -> Result<Complex<T>> + Send + Sync;

/// A radial Fourier multiplier `ξ ↦ m(|ξ|)`.
#[derive(Clone)]
pub struct RadialMultiplier<T> {
    profile: Arc<Profile<T>>,
    decay_exponent: T,
    label: String,
}

impl<T: Real> RadialMultiplier<T> {
    pub fn new<F>(profile: F, decay_exponent: T, label: impl Into<String>) -> Self
    where
        F: Fn(T) -> Result<Complex<T>> + Send + Sync + 'static,
    {
        Self {
            profile: Arc::new(profile),
            decay_exponent,
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(|_| Ok(Complex::new(T::one(), T::zero())), T::zero(), "identity")
    }

    /// `m(ρ)` for `ρ ≥ 0`.
    pub fn eval(&self, rho: T) -> Result<Complex<T>> {
        if !(rho >= T::zero()) {
            return Err(SsopsError::domain(format!("radius must be non-negative, got {rho}")));
        }
        (self.profile)(rho)
    }

    /// Asserted rate `d` in `|m(ρ)| ≲ (1+ρ)^{−d}`.
    pub fn decay_exponent(&self) -> T {
        self.decay_exponent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Pointwise product of two multipliers.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.profile.clone(), other.profile.clone());
        Self {
            profile: Arc::new(move |rho| Ok(a(rho)? * b(rho)?)),
            decay_exponent: self.decay_exponent + other.decay_exponent,
            label: format!("{}*{}", self.label, other.label),
        }
    }
}

impl<T: Real> fmt::Debug for RadialMultiplier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialMultiplier")
            .field("label", &self.label)
            .field("decay_exponent", &self.decay_exponent)
            .finish()
    }
}

/// The radial multiplier of a kernel.
pub fn multiplier<T: Real>(spec: &KernelSpec<T>) -> RadialMultiplier<T> {
    let label = format!("{:?}", spec.family).to_lowercase();
    match spec.bessel_index() {
        None => {
            let half_s = spec.s * T::lit(0.5);
            RadialMultiplier::new(
                move |rho: T| Ok(Complex::new((T::one() + rho * rho).powf(-half_s), T::zero())),
                spec.s,
                label,
            )
        }
        Some((index, coefficient)) => bessel_profile(index, coefficient, label),
    }
}

/// `c · ρ^{−m} J_m(2πρ) = c (2π)^m · (2πρ)^{−m} J_m(2πρ)`.
pub fn bessel_profile<T: Real>(index: Complex<T>, coefficient: Complex<T>, label: impl Into<String>) -> RadialMultiplier<T> {
    let two_pi = T::lit(2.0) * T::PI();
    let scale = coefficient * (index * two_pi.ln()).exp();
    let order = BesselOrder::from_complex(index);
    RadialMultiplier::new(
        move |rho: T| Ok(scale * normalized_bessel(order, two_pi * rho)?),
        index.re + T::lit(0.5),
        label,
    )
}
