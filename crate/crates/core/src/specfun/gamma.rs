//! Gamma function of a complex argument.
//!
//! Lanczos approximation (g = 7, nine terms) on `Re z >= 1/2`, reflection
//! `Γ(z) Γ(1 − z) = π / sin(πz)` elsewhere.

use num_complex::Complex;

use crate::error::{Result, SsopsError};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Returns `Some(k)` when `z` is the pole `-k` of Γ.
fn pole_index<T: Real>(z: Complex<T>) -> Option<i64> {
    if z.im != T::zero() || z.re > T::zero() {
        return None;
    }
    let r = z.re.round();
    (z.re == r).then(|| -r.to_i64().unwrap_or(i64::MIN))
}

/// `sin(πz)` with the real part reduced modulo 2 before scaling.
pub(crate) fn sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    let re = z.re - two * (z.re / two).round();
    (Complex::new(re, z.im) * T::PI()).sin()
}

/// `ln Γ(z)` for `Re z >= 1/2` (not branch-continuous in `Im z`; only its exponential is used).
fn ln_gamma_right<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = T::one();
    let zm1 = z - one;
    let mut series = Complex::new(T::lit(LANCZOS_COEFFS[0]), T::zero());
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series = series + Complex::new(T::lit(c), T::zero()) / (zm1 + T::from_usize_lossy(i));
    }
    let t = zm1 + T::lit(LANCZOS_G + 0.5);
    let half_ln_two_pi = T::lit(0.5) * (T::lit(2.0) * T::PI()).ln();
    (zm1 + T::lit(0.5)) * t.ln() - t + series.ln() + half_ln_two_pi
}

/// Γ(z). Poles at `z ∈ {0, −1, −2, …}` are reported as [`SsopsError::Pole`].
pub fn gamma_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if pole_index(z).is_some() {
        return Err(SsopsError::Pole(z.re.to_f64_lossy()));
    }
    if z.re < T::lit(0.5) {
        // Logarithmic form: a complex quotient would overflow through |·|² for large |Γ|.
        let ln_reflected = ln_gamma_right(Complex::new(T::one(), T::zero()) - z);
        Ok((-sin_pi(z).ln() - ln_reflected).exp() * T::PI())
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn gamma_reciprocal<T: Real>(z: Complex<T>) -> Complex<T> {
    if pole_index(z).is_some() {
        return Complex::new(T::zero(), T::zero());
    }
    if z.re < T::lit(0.5) {
        let reflected = ln_gamma_right(Complex::new(T::one(), T::zero()) - z).exp();
        sin_pi(z) * reflected / T::PI()
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

/// Γ of a real argument, through the complex path.
pub fn gamma_real<T: Real>(x: T) -> Result<T> {
    gamma_complex(Complex::new(x, T::zero())).map(|g| g.re)
}
