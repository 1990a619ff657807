//! Bessel functions of the first kind of complex order `μ + iν` and real argument.
//!
//! The principal branch (`μ > −1/2`) evaluates the Poisson integral
//!
//! ```text
//! J_ν(ρ) = (ρ/2)^ν / (√π Γ(ν + 1/2)) ∫_{−1}^{1} e^{iρs} (1 − s²)^{ν − 1/2} ds
//! ```
//!
//! after the change of variables `s = cos t`, which turns the algebraic endpoint
//! weight into `sin^{2ν} t`. Panels are geometrically graded towards `t = 0` and
//! uniform elsewhere with at most a quarter oscillation per panel. Where the
//! prefactor would amplify rounding in the integral (large `ρ` with large `μ`)
//! the Hankel expansion or forward recurrence takes over. Orders with
//! `μ ≤ −1/2` come from the three-term recurrence run downwards from seeds in
//! `(−1/2, 3/2]`.

use num_complex::Complex;
use serde::Serialize;

use super::gamma::{gamma_real, gamma_reciprocal};
use super::quadrature::{GL16, GL32};
use crate::error::{Result, SsopsError};
use crate::scalar::Real;

/// Order `μ + iν` of a Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselOrder<T> {
    pub mu: T,
    pub nu: T,
}

impl<T: Real> BesselOrder<T> {
    pub fn new(mu: T, nu: T) -> Self {
        Self { mu, nu }
    }

    pub fn real(mu: T) -> Self {
        Self { mu, nu: T::zero() }
    }

    pub fn from_complex(order: Complex<T>) -> Self {
        Self { mu: order.re, nu: order.im }
    }

    pub fn as_complex(&self) -> Complex<T> {
        Complex::new(self.mu, self.nu)
    }

    fn shifted(&self, by: T) -> Self {
        Self { mu: self.mu + by, nu: self.nu }
    }
}

/// Evaluation route that produced a [`BesselValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BesselMethod {
    Quadrature,
    Recurrence,
    ClosedForm,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselValue<T> {
    pub value: Complex<T>,
    pub method: BesselMethod,
    pub est_abs_error: T,
}

/// Above this amplification of rounding the Poisson integral is not trusted.
const QUADRATURE_AMPLIFICATION_LIMIT: f64 = 1e4;
/// Geometric grading ratio of the panels near `t = 0`.
const GRADING_RATIO: f64 = 0.25;

/// `J_{μ+iν}(ρ)` for `ρ > 0`.
pub fn bessel_j<T: Real>(order: BesselOrder<T>, rho: T) -> Result<BesselValue<T>> {
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(SsopsError::domain(format!("Bessel argument must be positive, got {rho}")));
    }
    if !order.mu.is_finite() || !order.nu.is_finite() {
        return Err(SsopsError::domain("Bessel order must be finite"));
    }
    let value = if order.mu > T::lit(-0.5) {
        principal(order, rho)?
    } else {
        downward(order, rho)?
    };
    let scale = value.value.norm().max(T::one());
    if !value.value.re.is_finite()
        || !value.value.im.is_finite()
        || !(value.est_abs_error <= T::accuracy_limit() * scale)
    {
        return Err(SsopsError::Accuracy {
            achieved: value.est_abs_error.to_f64_lossy(),
            context: format!("J of order {}{:+}i at {rho}", order.mu, order.nu),
        });
    }
    Ok(value)
}

/// `ρ^{−(μ+iν)} J_{μ+iν}(ρ)`, continuous at `ρ = 0` where it equals `2^{−ν} / Γ(ν + 1)`.
pub fn normalized_bessel<T: Real>(order: BesselOrder<T>, rho: T) -> Result<Complex<T>> {
    if !(rho >= T::zero()) {
        return Err(SsopsError::domain(format!("argument must be non-negative, got {rho}")));
    }
    let nu = order.as_complex();
    if rho <= T::lit(2.0) {
        return Ok(normalized_series(nu, rho));
    }
    let j = bessel_j(order, rho)?;
    Ok(j.value * (-nu * rho.ln()).exp())
}

/// Leading Hankel term `(2/(πρ))^{1/2} cos(ρ − π(μ+iν)/2 − π/4)`.
pub fn bessel_asymptotic<T: Real>(order: BesselOrder<T>, rho: T) -> Complex<T> {
    let nu = order.as_complex();
    let phase = Complex::new(rho, T::zero()) - nu * (T::PI() * T::lit(0.5)) - T::FRAC_PI_4();
    phase.cos() * (T::lit(2.0) / (T::PI() * rho)).sqrt()
}

/// `2^{−ν} Σ_k (−ρ²/4)^k / (k! Γ(ν + k + 1))`; well conditioned for small `ρ`.
fn normalized_series<T: Real>(nu: Complex<T>, rho: T) -> Complex<T> {
    let q = -rho * rho * T::lit(0.25);
    let mut power = T::one();
    let mut sum = Complex::new(T::zero(), T::zero());
    for k in 0..200usize {
        let kf = T::from_usize_lossy(k);
        if k > 0 {
            power = power * q / kf;
        }
        let term = gamma_reciprocal(nu + kf + T::one()) * power;
        sum = sum + term;
        if k > 2 && term.norm() <= T::epsilon() * T::lit(0.1) * sum.norm() {
            break;
        }
        if power == T::zero() {
            break;
        }
    }
    sum * (-nu * T::LN_2()).exp()
}

/// Branch for `μ > −1/2`.
fn principal<T: Real>(order: BesselOrder<T>, x: T) -> Result<BesselValue<T>> {
    if let Some(v) = closed_form(order, x) {
        return Ok(v);
    }
    if let Some(v) = hankel(order, x) {
        return Ok(v);
    }
    let amplification = quadrature_amplification(order, x)?;
    if amplification > T::lit(QUADRATURE_AMPLIFICATION_LIMIT) && order.mu > T::lit(1.5) && order.mu < x {
        return upward(order, x);
    }
    quadrature(order, x, amplification)
}

/// Seeds for the recurrences: never recurse themselves.
fn seed<T: Real>(order: BesselOrder<T>, x: T) -> Result<BesselValue<T>> {
    if let Some(v) = closed_form(order, x) {
        return Ok(v);
    }
    if let Some(v) = hankel(order, x) {
        return Ok(v);
    }
    let amplification = quadrature_amplification(order, x)?;
    quadrature(order, x, amplification)
}

fn closed_form<T: Real>(order: BesselOrder<T>, x: T) -> Option<BesselValue<T>> {
    if order.nu != T::zero() {
        return None;
    }
    let envelope = (T::lit(2.0) / (T::PI() * x)).sqrt();
    let value = if order.mu == T::lit(0.5) {
        envelope * x.sin()
    } else if order.mu == T::lit(-0.5) {
        envelope * x.cos()
    } else {
        return None;
    };
    Some(BesselValue {
        value: Complex::new(value, T::zero()),
        method: BesselMethod::ClosedForm,
        est_abs_error: T::epsilon() * T::lit(4.0) * (envelope + value.abs()),
    })
}

/// `|(x/2)^ν| Γ(μ+1/2) / (|Γ(ν+1/2)| Γ(μ+1))`: the ratio of the integrand's absolute
/// mass (times the prefactor) to unity, i.e. how much rounding in the integral is amplified.
fn quadrature_amplification<T: Real>(order: BesselOrder<T>, x: T) -> Result<T> {
    let half = T::lit(0.5);
    let nu = order.as_complex();
    let mass = gamma_real(order.mu + half)? / gamma_real(order.mu + T::one())?;
    let pref = (x * half).powf(order.mu) * gamma_reciprocal(nu + half).norm();
    Ok(pref * mass)
}

fn quadrature<T: Real>(order: BesselOrder<T>, x: T, amplification: T) -> Result<BesselValue<T>> {
    let half = T::lit(0.5);
    let nu = order.as_complex();
    let two_nu = nu * T::lit(2.0);
    let integrand = |t: T| -> Complex<T> {
        let weight = (two_nu * t.sin().ln()).exp();
        weight * (x * t.cos()).cos()
    };

    let quarter = T::FRAC_PI_2();
    let panels = (T::lit(2.0) * x / T::PI()).max(T::lit(8.0)).ceil();
    let panel_count = panels.to_usize().unwrap_or(8);
    let width = quarter / panels;
    let tail_cut = (T::lit(1e-6) / x.sqrt().max(T::one())).min(width * T::lit(0.1));

    let mut coarse = Complex::new(T::zero(), T::zero());
    let mut fine = Complex::new(T::zero(), T::zero());
    let mut add_panel = |a: T, b: T| {
        coarse = coarse + GL16.integrate(a, b, integrand);
        fine = fine + GL32.integrate(a, b, integrand);
    };

    // Geometric grading towards the algebraic singularity at t = 0.
    let mut right = width;
    loop {
        let left = (right * T::lit(GRADING_RATIO)).max(tail_cut);
        add_panel(left, right);
        if left <= tail_cut {
            break;
        }
        right = left;
    }
    for k in 1..panel_count {
        let a = width * T::from_usize_lossy(k);
        let b = if k + 1 == panel_count { quarter } else { a + width };
        add_panel(a, b);
    }

    // ∫_0^δ cos(x cos t) sin^{2ν} t dt to second order in δ.
    let one = T::one();
    let (sx, cx) = x.sin_cos();
    let ln_cut = tail_cut.ln();
    let p1 = two_nu + one;
    let p3 = two_nu + T::lit(3.0);
    let tail = (p1 * ln_cut).exp() / p1 * cx
        + (Complex::new(x * sx * half, T::zero()) - nu * (cx / T::lit(3.0))) * ((p3 * ln_cut).exp() / p3);

    let integral = (fine + tail) * T::lit(2.0);
    let pref = (nu * (x * half).ln()).exp() * gamma_reciprocal(nu + half) / T::PI().sqrt();
    let value = pref * integral;
    let est = pref.norm() * T::lit(2.0) * (fine - coarse).norm()
        + amplification * T::epsilon() * T::lit(64.0);
    Ok(BesselValue {
        value,
        method: BesselMethod::Quadrature,
        est_abs_error: est,
    })
}

/// Hankel expansion `√(2/(πx)) (P cos χ − Q sin χ)`, accepted only when the
/// series reaches full precision before it starts to diverge.
fn hankel<T: Real>(order: BesselOrder<T>, x: T) -> Option<BesselValue<T>> {
    if x < T::lit(8.0) {
        return None;
    }
    let nu = order.as_complex();
    let four_nu_sq = nu * nu * T::lit(4.0);
    let eight_x = x * T::lit(8.0);
    let growth_until = T::lit(2.0) * nu.norm() + T::lit(2.0);

    let mut p = Complex::new(T::one(), T::zero());
    let mut q = Complex::new(T::zero(), T::zero());
    let mut term = Complex::new(T::one(), T::zero());
    let mut prev_mag = T::one();
    let mut last_mag = T::infinity();
    let mut peak = T::one();
    let mut converged = false;
    for k in 1..400usize {
        let kf = T::from_usize_lossy(k);
        let odd = T::lit(2.0) * kf - T::one();
        term = term * (four_nu_sq - odd * odd) / (kf * eight_x);
        let mag = term.norm();
        if mag > prev_mag && kf > growth_until {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
        if k % 2 == 0 {
            p = p + term * sign;
        } else {
            q = q + term * sign;
        }
        prev_mag = mag;
        last_mag = mag;
        peak = peak.max(mag);
        if mag <= T::epsilon() * T::lit(0.5) * (p.norm() + q.norm()) {
            converged = true;
            break;
        }
    }
    if !converged && !(last_mag <= T::epsilon() * T::lit(8.0)) {
        return None;
    }
    let chi = Complex::new(x, T::zero()) - (nu * T::lit(0.5) + T::lit(0.25)) * T::PI();
    let (c, s) = (chi.cos(), chi.sin());
    let envelope = (T::lit(2.0) / (T::PI() * x)).sqrt();
    let value = (p * c - q * s) * envelope;
    let trig_scale = c.norm() + s.norm();
    let est = envelope * trig_scale * (last_mag + T::epsilon() * T::lit(8.0) * (p.norm() + q.norm() + peak));
    Some(BesselValue {
        value,
        method: BesselMethod::Asymptotic,
        est_abs_error: est,
    })
}

/// Forward recurrence `J_{b+1} = (2b/x) J_b − J_{b−1}` from `μ0 ∈ (−1/2, 1/2]`; stable while `μ < x`.
fn upward<T: Real>(order: BesselOrder<T>, x: T) -> Result<BesselValue<T>> {
    let steps = (order.mu - T::lit(0.5)).ceil();
    let base = order.shifted(-steps);
    let steps = steps.to_usize().unwrap_or(0);
    let j0 = seed(base, x)?;
    let j1 = seed(base.shifted(T::one()), x)?;
    let (mut lo, mut hi) = (j0.value, j1.value);
    let (mut lo_err, mut hi_err) = (j0.est_abs_error, j1.est_abs_error);
    let mut b = base.shifted(T::one()).as_complex();
    for _ in 1..steps {
        let factor = b * (T::lit(2.0) / x);
        let next = factor * hi - lo;
        let next_err = factor.norm() * hi_err + lo_err + T::epsilon() * next.norm();
        lo = hi;
        lo_err = hi_err;
        hi = next;
        hi_err = next_err;
        b = b + T::one();
    }
    Ok(BesselValue {
        value: hi,
        method: BesselMethod::Recurrence,
        est_abs_error: hi_err,
    })
}

/// Downward recurrence `J_{b−1} = (2b/x) J_b − J_{b+1}` for `μ ≤ −1/2`.
fn downward<T: Real>(order: BesselOrder<T>, x: T) -> Result<BesselValue<T>> {
    if let Some(v) = closed_form(order, x) {
        return Ok(v);
    }
    let steps = (T::lit(0.5) - order.mu).floor();
    let top = order.shifted(steps);
    let steps = steps.to_usize().unwrap_or(0);
    let ja = principal(top, x)?;
    let jb = principal(top.shifted(T::one()), x)?;
    let (mut cur, mut above) = (ja.value, jb.value);
    let (mut cur_err, mut above_err) = (ja.est_abs_error, jb.est_abs_error);
    let mut b = top.as_complex();
    for _ in 0..steps {
        let factor = b * (T::lit(2.0) / x);
        let next = factor * cur - above;
        let next_err = factor.norm() * cur_err + above_err + T::epsilon() * next.norm();
        above = cur;
        above_err = cur_err;
        cur = next;
        cur_err = next_err;
        b = b - T::one();
    }
    Ok(BesselValue {
        value: cur,
        method: BesselMethod::Recurrence,
        est_abs_error: cur_err,
    })
}
