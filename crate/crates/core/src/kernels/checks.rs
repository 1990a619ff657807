//! Numerical identity checks on the kernel families.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{eval_physical, multiplier, AlphaParams, KernelSpec, RadialMultiplier};
use crate::error::{Result, SsopsError};
use crate::scalar::Real;
use crate::specfun::{bessel_j, gamma_real, BesselOrder};

/// Log-spaced radii in `[lo, hi]`, preceded by `0`.
fn radial_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    let mut out = vec![T::zero()];
    let (a, b) = (lo.ln(), hi.ln());
    for k in 0..count {
        let t = T::from_usize_lossy(k) / T::from_usize_lossy(count - 1);
        out.push((a + (b - a) * t).exp());
    }
    out
}

fn max_discrepancy<T: Real>(a: &RadialMultiplier<T>, b: &RadialMultiplier<T>, radii: &[T]) -> Result<T> {
    let mut worst = T::zero();
    for &rho in radii {
        worst = worst.max((a.eval(rho)? - b.eval(rho)?).norm());
    }
    Ok(worst)
}

/// Pointwise discrepancies between members of the analytic family and the kernels it passes through.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaEndpointReport<T> {
    pub radii: usize,
    /// `2s/(n−1+2s)`, where the family meets the standard multiplier.
    pub z_standard: T,
    pub z0_vs_s_weighted: T,
    pub z1_vs_flat: T,
    pub z_standard_vs_standard: T,
    /// The opposite endpoint pairing, reported for contrast; nonzero unless `s = −(n−1)/2`.
    pub z0_vs_flat: T,
    pub z1_vs_s_weighted: T,
}

impl<T: Real> ThetaEndpointReport<T> {
    /// Largest discrepancy among the identities that hold.
    pub fn max_identity_discrepancy(&self) -> T {
        self.z0_vs_s_weighted
            .max(self.z1_vs_flat)
            .max(self.z_standard_vs_standard)
    }
}

/// Compares the analytic family at `z = 0`, `1`, `2s/(n−1+2s)` with the s-weighted, flat and
/// standard multipliers on `ρ = 0` and 100 log-spaced radii in `[10^{−2}, 10^2]`.
pub fn theta_endpoint_check<T: Real>(alpha: Complex<T>, s: T, n: usize) -> Result<ThetaEndpointReport<T>> {
    let crit = AlphaParams::<T>::critical_alpha(n);
    if !(alpha.re > T::zero() && alpha.re < crit) {
        return Err(SsopsError::domain(format!("need 0 < Re α < 2n/(n+1) = {crit}, got {}", alpha.re)));
    }
    if !(s > T::zero()) {
        return Err(SsopsError::domain(format!("need s > 0, got {s}")));
    }
    let radii = radial_grid(T::lit(1e-2), T::lit(1e2), 100);
    let nf = T::from_usize_lossy(n);
    let z_standard = T::lit(2.0) * s / (nf - T::one() + T::lit(2.0) * s);
    let theta = |z: T| -> Result<RadialMultiplier<T>> {
        Ok(multiplier(&KernelSpec::theta(alpha, s, Complex::new(z, T::zero()), n)?))
    };
    let t0 = theta(T::zero())?;
    let t1 = theta(T::one())?;
    let tm = theta(z_standard)?;
    let flat = multiplier(&KernelSpec::flat(alpha, n)?);
    let weighted = multiplier(&KernelSpec::s_weighted(alpha, s, n)?);
    let standard = multiplier(&KernelSpec::standard(alpha, n)?);
    Ok(ThetaEndpointReport {
        radii: radii.len(),
        z_standard,
        z0_vs_s_weighted: max_discrepancy(&t0, &weighted, &radii)?,
        z1_vs_flat: max_discrepancy(&t1, &flat, &radii)?,
        z_standard_vs_standard: max_discrepancy(&tm, &standard, &radii)?,
        z0_vs_flat: max_discrepancy(&t0, &flat, &radii)?,
        z1_vs_s_weighted: max_discrepancy(&t1, &weighted, &radii)?,
    })
}

/// Empirical suprema of kernel ratios `|dominated(x)| / natural(x)` over sampled radii.
#[derive(Debug, Clone, Serialize)]
pub struct DominationReport<T> {
    pub samples: usize,
    /// `sup |♭Ω^α| / ♮Ω^{((n+1)/2) Re α}`.
    pub flat_sup: Option<T>,
    /// `sup |Ω^α| / ♮Ω^{((n+1)/2) Re α − ((n−1)/2) n}`.
    pub standard_sup: Option<T>,
    /// `(Im α, flat sup, standard sup)` for `Im α ∈ {0, 0.5, …, 4}` at fixed `Re α`.
    pub growth: Vec<(T, Option<T>, Option<T>)>,
    /// Least-squares slope of `ln sup` against `Im α` (flat ratio, then standard ratio).
    pub flat_rate: Option<T>,
    pub standard_rate: Option<T>,
}

fn ratio_sup<T: Real>(dominated: &KernelSpec<T>, natural: &KernelSpec<T>, radii: &[T]) -> Result<T> {
    let top = dominated.physical_form()?;
    let bottom = natural.physical_form()?;
    let mut sup = T::zero();
    for &r in radii {
        let r2 = r * r;
        let num = eval_physical(&top, r2).norm();
        let den = eval_physical(&bottom, r2).norm();
        sup = sup.max(num / den);
    }
    Ok(sup)
}

fn slope<T: Real>(points: &[(T, T)]) -> Option<T> {
    if points.len() < 2 {
        return None;
    }
    let m = T::from_usize_lossy(points.len());
    let mx = points.iter().map(|p| p.0).sum::<T>() / m;
    let my = points.iter().map(|p| p.1).sum::<T>() / m;
    let sxy: T = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: T = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// Samples `|x|` uniformly in `(0, 1)` (fixed seed) and bounds the flat kernel (and, when
/// `((n−1)/(n+1))n < Re α < n`, the standard kernel) by the natural kernel with matching exponent.
pub fn domination_check<T: Real>(alpha: Complex<T>, n: usize, samples: usize) -> Result<DominationReport<T>> {
    if samples == 0 {
        return Err(SsopsError::domain("need at least one sample"));
    }
    let nf = T::from_usize_lossy(n);
    let half_n1 = (nf + T::one()) * T::lit(0.5);
    let flat_ok = alpha.re > T::zero() && alpha.re < AlphaParams::<T>::critical_alpha(n);
    let standard_ok = alpha.re > AlphaParams::<T>::surface_alpha(n) && alpha.re < nf;
    if !flat_ok && !standard_ok {
        return Err(SsopsError::domain(format!(
            "Re α = {} is in neither the flat nor the standard comparison range",
            alpha.re
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let radii: Vec<T> = (0..samples)
        .map(|_| T::lit(rng.gen_range(f64::MIN_POSITIVE..1.0)))
        .collect();

    let flat_at = |a: Complex<T>| -> Result<T> {
        let natural = KernelSpec::natural(Complex::new(half_n1 * a.re, T::zero()), n)?;
        ratio_sup(&KernelSpec::flat(a, n)?, &natural, &radii)
    };
    let standard_at = |a: Complex<T>| -> Result<T> {
        let beta = half_n1 * a.re - (nf - T::one()) * T::lit(0.5) * nf;
        let natural = KernelSpec::natural(Complex::new(beta, T::zero()), n)?;
        ratio_sup(&KernelSpec::standard(a, n)?, &natural, &radii)
    };

    let flat_sup = if flat_ok { Some(flat_at(alpha)?) } else { None };
    let standard_sup = if standard_ok { Some(standard_at(alpha)?) } else { None };
    let mut growth = Vec::new();
    for k in 0..=8 {
        let im = T::lit(0.5) * T::from_usize_lossy(k);
        let a = Complex::new(alpha.re, im);
        let f = if flat_ok { Some(flat_at(a)?) } else { None };
        let s = if standard_ok { Some(standard_at(a)?) } else { None };
        growth.push((im, f, s));
    }
    let fit = |pick: fn(&(T, Option<T>, Option<T>)) -> Option<T>| {
        let pts: Vec<(T, T)> = growth.iter().filter_map(|g| pick(g).map(|v| (g.0, v.ln()))).collect();
        slope(&pts)
    };
    let flat_rate = fit(|g| g.1);
    let standard_rate = fit(|g| g.2);
    Ok(DominationReport {
        samples,
        flat_sup,
        standard_sup,
        growth,
        flat_rate,
        standard_rate,
    })
}

/// Ratio of the standard multiplier at `α = ((n−1)/(n+1))n` to the transform of the
/// surface measure of the unit sphere.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceMeasureReport<T> {
    pub n: usize,
    pub alpha: T,
    pub constant: T,
    /// Largest `|ratio − constant|` over the sampled radii.
    pub max_deviation: T,
}

/// `σ̂(ρ) = 2π ρ^{1−n/2} J_{n/2−1}(2πρ)`; `2 sin(2πρ)/ρ` for `n = 3`.
fn surface_transform<T: Real>(n: usize, rho: T) -> Result<T> {
    let nf = T::from_usize_lossy(n);
    let two_pi = T::lit(2.0) * T::PI();
    if rho == T::zero() {
        let half = nf * T::lit(0.5);
        return Ok(T::lit(2.0) * T::PI().powf(half) / gamma_real(half)?);
    }
    if n == 3 {
        return Ok(T::lit(2.0) * (two_pi * rho).sin() / rho);
    }
    let order = nf * T::lit(0.5) - T::one();
    let j = bessel_j(BesselOrder::real(order), two_pi * rho)?.value.re;
    Ok(two_pi * rho.powf(-order) * j)
}

pub fn surface_measure_check<T: Real>(n: usize) -> Result<SurfaceMeasureReport<T>> {
    let alpha = AlphaParams::<T>::surface_alpha(n);
    let m = multiplier(&KernelSpec::standard(Complex::new(alpha, T::zero()), n)?);
    let sigma0 = surface_transform(n, T::zero())?;
    let constant = m.eval(T::zero())?.re / sigma0;
    let decay = (T::from_usize_lossy(n) - T::one()) * T::lit(0.5);
    let mut max_deviation = T::zero();
    for rho in radial_grid(T::lit(1e-2), T::lit(50.0), 200) {
        let sigma = surface_transform(n, rho)?;
        // Skip the zeros of σ̂, where the ratio is ill-conditioned.
        if sigma.abs() < T::lit(1e-3) * sigma0.abs() * (T::one() + rho).powf(-decay) {
            continue;
        }
        let ratio = m.eval(rho)?.re / sigma;
        max_deviation = max_deviation.max((ratio - constant).abs());
    }
    Ok(SurfaceMeasureReport {
        n,
        alpha,
        constant,
        max_deviation,
    })
}

/// Log-log fit of the local maxima of `|m|`.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeFit<T> {
    pub slope: T,
    pub intercept: T,
    /// `(ρ, max |m|)` over one-unit windows starting at log-spaced radii.
    pub points: Vec<(T, T)>,
}

/// Fits `ln max_{[ρ_k, ρ_k+1]} |m|` against `ln ρ_k` for `windows` log-spaced `ρ_k ∈ [lo, hi]`.
///
/// The oscillation of `J(2πρ)` has period 1 in `ρ`, so each window holds one local maximum.
pub fn decay_envelope_fit<T: Real>(m: &RadialMultiplier<T>, lo: T, hi: T, windows: usize) -> Result<EnvelopeFit<T>> {
    if !(lo > T::zero() && hi > lo) || windows < 2 {
        return Err(SsopsError::domain("envelope fit needs 0 < lo < hi and at least two windows"));
    }
    const PER_WINDOW: usize = 64;
    let mut points = Vec::with_capacity(windows);
    let (a, b) = (lo.ln(), hi.ln());
    for k in 0..windows {
        let t = T::from_usize_lossy(k) / T::from_usize_lossy(windows - 1);
        let start = (a + (b - a) * t).exp();
        let mut peak = T::zero();
        for j in 0..PER_WINDOW {
            let rho = start + T::from_usize_lossy(j) / T::from_usize_lossy(PER_WINDOW);
            peak = peak.max(m.eval(rho)?.norm());
        }
        points.push((start, peak));
    }
    let logs: Vec<(T, T)> = points.iter().map(|&(r, v)| (r.ln(), v.ln())).collect();
    let slope = slope(&logs).expect("at least two windows");
    let m_count = T::from_usize_lossy(logs.len());
    let intercept = (logs.iter().map(|p| p.1).sum::<T>() - slope * logs.iter().map(|p| p.0).sum::<T>()) / m_count;
    Ok(EnvelopeFit {
        slope,
        intercept,
        points,
    })
}
