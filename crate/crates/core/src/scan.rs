//! Norm-ratio scans `‖f ∗ Ω^α‖_q / ‖f‖_{L^p_s}` over families of test functions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsopsError};
use crate::fields::{lp_norm, sobolev_multiplier, GridSpec, MultiplierTable, SampledField};
use crate::kernels::{multiplier, KernelSpec};
use crate::maximal::{bump_field, random_bump};
use crate::regions::{remark_one, theorem_one, theorem_two, RegionQuery};
use crate::scalar::Real;

/// Cells required across the smallest feature of a family member.
pub const MIN_CELLS_PER_FEATURE: f64 = 8.0;
/// Trend slopes above this are flagged on diagnostic runs.
pub const GROWTH_FLAG_SLOPE: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `exp(−|x|²/(2σ²))`, `σ = scale`.
    GaussianDilates,
    /// Indicator of `B(0, scale)`.
    BallIndicators,
    /// Modulated anisotropic Gaussians concentrated near `|ξ| = 1/scale` in a cap of angular
    /// width `scale^{1/2}` and radial width `1` (relative width `scale`).
    KnappCaps,
    /// `(1 − |x − c|²/scale²)_+²` with a random centre `|c| ≤ 1/2`.
    RandomBumps,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::GaussianDilates,
        FamilyKind::BallIndicators,
        FamilyKind::KnappCaps,
        FamilyKind::RandomBumps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::GaussianDilates => "gaussian_dilates",
            FamilyKind::BallIndicators => "ball_indicators",
            FamilyKind::KnappCaps => "knapp_caps",
            FamilyKind::RandomBumps => "random_bumps",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = SsopsError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SsopsError::domain(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFamily<T> {
    pub kind: FamilyKind,
    pub scales: Vec<T>,
    pub seed: u64,
}

impl<T: Real> TestFamily<T> {
    pub fn new(kind: FamilyKind, scales: Vec<T>, seed: u64) -> Result<Self> {
        if scales.is_empty() {
            return Err(SsopsError::domain("a family needs at least one scale"));
        }
        if let Some(bad) = scales.iter().find(|s| !(**s > T::zero() && s.is_finite())) {
            return Err(SsopsError::domain(format!("scales must be positive, got {bad}")));
        }
        Ok(Self { kind, scales, seed })
    }

    /// Scales `2^k` for `k = hi, hi − 1, …, lo`.
    pub fn dyadic(kind: FamilyKind, hi: i32, lo: i32, seed: u64) -> Result<Self> {
        Self::new(kind, (lo..=hi).rev().map(|k| T::lit(2.0).powi(k)).collect(), seed)
    }

    /// Smallest length the grid has to resolve for a member at this scale.
    pub fn feature_width(&self, scale: T) -> T {
        match self.kind {
            // One modulation wavelength.
            FamilyKind::KnappCaps => scale.min(scale.sqrt()),
            _ => scale * T::lit(2.0),
        }
    }

    pub fn member(&self, grid: GridSpec<T>, index: usize) -> Result<SampledField<T>> {
        let scale = *self
            .scales
            .get(index)
            .ok_or_else(|| SsopsError::domain(format!("member {index} out of range")))?;
        Ok(match self.kind {
            FamilyKind::GaussianDilates => SampledField::from_real_fn(grid, move |x| {
                let r2: T = x.iter().map(|&c| c * c).sum();
                (-r2 / (T::lit(2.0) * scale * scale)).exp()
            }),
            FamilyKind::BallIndicators => SampledField::from_real_fn(grid, move |x| {
                let r2: T = x.iter().map(|&c| c * c).sum();
                if r2 <= scale * scale {
                    T::one()
                } else {
                    T::zero()
                }
            }),
            FamilyKind::KnappCaps => knapp_cap(grid, scale),
            FamilyKind::RandomBumps => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(index as u64));
                let (centre, _) = random_bump::<T, _>(grid.n, &mut rng);
                bump_field(grid, centre, scale)
            }
        })
    }
}

/// `e^{2πi x₁/σ} e^{−π x₁²} e^{−π|x'|²/σ}`: transform `e^{−π(ξ₁ − 1/σ)²} σ^{(n−1)/2} e^{−πσ|ξ'|²}`.
/// The widths (radial 1, tangential `σ^{−1/2}` at radius `1/σ`) are the classical Knapp choice.
fn knapp_cap<T: Real>(grid: GridSpec<T>, sigma: T) -> SampledField<T> {
    let pi = T::PI();
    SampledField::from_fn(grid, move |x| {
        let transverse: T = x[1..].iter().map(|&c| c * c).sum();
        let envelope = (-pi * (x[0] * x[0] + transverse / sigma)).exp();
        Complex::from_polar(envelope, T::lit(2.0) * pi * x[0] / sigma)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow<T> {
    pub index: usize,
    pub scale: T,
    /// `‖f ∗ Ω^α‖_q`.
    pub output_norm: T,
    /// `‖f‖_{L^p_s}`.
    pub input_norm: T,
    pub ratio: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport<T> {
    pub n: usize,
    pub alpha: T,
    pub s: T,
    pub p: T,
    pub q: T,
    pub family: FamilyKind,
    pub points_per_axis: usize,
    pub half_width: T,
    /// The exponents satisfy the relevant hypotheses; otherwise this is a diagnostic run.
    pub inside_region: bool,
    pub rows: Vec<ScanRow<T>>,
    pub max_ratio: T,
    pub min_ratio: T,
    /// Least-squares slope of `ln ratio` against `ln scale`.
    pub slope: T,
    /// Diagnostic run with slope above [`GROWTH_FLAG_SLOPE`].
    pub growth_flagged: bool,
}

impl<T: Real> ScanReport<T> {
    pub fn spread(&self) -> T {
        self.max_ratio / self.min_ratio
    }
}

/// Admissibility of `(α, s, 1/p, 1/q)`: the `L^p_s → L^q` region for `p ≠ q`, and the `p = q`
/// statements (below or above `((n−1)/(n+1))n`) otherwise.
pub fn scan_admissible<T: Real>(n: usize, alpha: T, s: T, p: T, q: T) -> Result<(bool, Vec<String>)> {
    let query = RegionQuery::<f64>::new(
        n as u32,
        s.to_f64_lossy(),
        alpha.to_f64_lossy(),
        p.recip().to_f64_lossy(),
        Some(q.recip().to_f64_lossy()),
    )?;
    let verdict = if p == q {
        let limit = (n as f64 - 1.0) / (n as f64 + 1.0) * n as f64;
        if query.alpha < limit {
            theorem_two(&query)
        } else {
            remark_one(&query)
        }
    } else {
        theorem_one(&query)
    };
    match verdict {
        Ok(v) => Ok((v.admissible, v.violated().into_iter().map(String::from).collect())),
        Err(SsopsError::Domain(msg)) => Ok((false, vec![msg])),
        Err(e) => Err(e),
    }
}

/// Least-squares slope of `ln ratio` against `ln scale`; zero with fewer than two usable rows.
pub fn trend_slope<T: Real>(rows: &[ScanRow<T>]) -> T {
    let pts: Vec<(T, T)> = rows
        .iter()
        .filter(|r| r.ratio > T::zero())
        .map(|r| (r.scale.ln(), r.ratio.ln()))
        .collect();
    if pts.len() < 2 {
        return T::zero();
    }
    let m = T::from_usize_lossy(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / m;
    let my = pts.iter().map(|p| p.1).sum::<T>() / m;
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: T = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == T::zero() {
        T::zero()
    } else {
        sxy / sxx
    }
}

/// `f ↦ (‖f ∗ Ω^α‖_q, ‖f‖_{L^p_s})` on a fixed grid, with both multipliers tabulated once.
pub struct RatioOperator<T> {
    pub p: T,
    pub q: T,
    kernel: MultiplierTable<T>,
    lift: MultiplierTable<T>,
}

impl<T: Real> RatioOperator<T> {
    pub fn new(alpha: T, s: T, p: T, q: T, grid: GridSpec<T>) -> Result<Self> {
        let spec = KernelSpec::standard(Complex::new(alpha, T::zero()), grid.n)?;
        Ok(Self {
            p,
            q,
            kernel: MultiplierTable::new(&multiplier(&spec), grid)?,
            lift: MultiplierTable::new(&sobolev_multiplier(s), grid)?,
        })
    }

    pub fn norms(&self, f: &SampledField<T>) -> Result<(T, T)> {
        let input = lp_norm(&self.lift.apply(f)?, self.p)?;
        let output = lp_norm(&self.kernel.apply(f)?, self.q)?;
        Ok((output, input))
    }

    /// Zero inputs are refused: the ratio is undefined.
    pub fn row(&self, index: usize, scale: T, f: &SampledField<T>) -> Result<ScanRow<T>> {
        let (output_norm, input_norm) = self.norms(f)?;
        if input_norm == T::zero() {
            return Err(SsopsError::Validation(format!("family member {index} is zero on the grid")));
        }
        Ok(ScanRow {
            index,
            scale,
            output_norm,
            input_norm,
            ratio: output_norm / input_norm,
        })
    }

    /// Rows for arbitrary fields, in input order.
    pub fn rows(&self, members: &[(T, SampledField<T>)]) -> Result<Vec<ScanRow<T>>> {
        members
            .par_iter()
            .enumerate()
            .map(|(index, (scale, f))| self.row(index, *scale, f))
            .collect()
    }
}

/// Ratios for every member of the family. Exponents outside the hypotheses are refused unless
/// `diagnostic` is set, in which case the run is labelled and growth is flagged, never asserted.
pub fn run_scan<T: Real>(
    n: usize,
    alpha: T,
    s: T,
    p: T,
    q: T,
    family: &TestFamily<T>,
    grid: GridSpec<T>,
    diagnostic: bool,
) -> Result<ScanReport<T>> {
    if grid.n != n {
        return Err(SsopsError::domain(format!("grid is {}-dimensional, scan asks for n = {n}", grid.n)));
    }
    let (inside, failed) = scan_admissible(n, alpha, s, p, q)?;
    if !inside && !diagnostic {
        return Err(SsopsError::domain(format!(
            "exponents outside the hypotheses ({}); rerun as a diagnostic",
            failed.join(", ")
        )));
    }
    let h = grid.spacing();
    for &scale in &family.scales {
        let cells = family.feature_width(scale) / h;
        if cells < T::lit(MIN_CELLS_PER_FEATURE) {
            return Err(SsopsError::Resolution(format!(
                "{} at scale {scale}: {cells:.2} cells across the feature, need {MIN_CELLS_PER_FEATURE}",
                family.kind
            )));
        }
    }
    let operator = RatioOperator::new(alpha, s, p, q, grid)?;
    let rows = (0..family.scales.len())
        .into_par_iter()
        .map(|index| operator.row(index, family.scales[index], &family.member(grid, index)?))
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(T::zero(), T::max);
    let min_ratio = rows.iter().map(|r| r.ratio).fold(T::infinity(), T::min);
    let slope = trend_slope(&rows);
    Ok(ScanReport {
        n,
        alpha,
        s,
        p,
        q,
        family: family.kind,
        points_per_axis: grid.points_per_axis,
        half_width: grid.half_width,
        inside_region: inside,
        growth_flagged: !inside && slope > T::lit(GROWTH_FLAG_SLOPE),
        rows,
        max_ratio,
        min_ratio,
        slope,
    })
}
