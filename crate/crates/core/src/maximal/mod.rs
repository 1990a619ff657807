//! Shell decomposition of the natural kernel, directional and averaged maximal operators, and the
//! pointwise bound of the partial sums by the averaged maximal function.
//!
//! Convolutions are periodic on the grid box; pad the box so that `supp f + B(0, 1)` fits.
//! Integrals over shells, cones and rectangles are cell-centre quadratures.

mod geometry;

pub use geometry::{
    build_sphere_grid, shell_cone_inclusion_check, shell_cone_inclusion_for, ConeRectanglePair, InclusionReport,
    Shell, ShellInclusion, SphereGrid, COVERING_SAMPLES, MAX_RHO,
};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftDirection;
use serde::Serialize;

use crate::error::{Result, SsopsError};
use crate::fields::{fft_nd, lp_norm, GridSpec, SampledField};
use crate::scalar::Real;
use geometry::{in_cone, norm, pow2};

/// Grid on `[−2, 2)^n` with spacing `2^{−ρ−2}`.
pub fn grid_for_rho<T: Real>(n: usize, rho: u32) -> Result<GridSpec<T>> {
    GridSpec::new(n, 1usize << (rho + 4), T::lit(2.0))
}

/// A lattice offset inside the unit ball.
struct BallPoint<T> {
    offset: [i64; 3],
    ell: u32,
    unit: Option<[T; 3]>,
    radius: T,
}

/// Lattice offsets `k` with `kh` in some `S_ℓ`, `ℓ ≤ ρ`.
fn ball_points<T: Real>(grid: &GridSpec<T>, rho: u32) -> Vec<BallPoint<T>> {
    let h = grid.spacing();
    let reach = (T::one() / h).ceil().to_i64().unwrap_or(0);
    let n = grid.n;
    let mut out = Vec::new();
    let mut k = [-reach; 3];
    for slot in k.iter_mut().skip(n) {
        *slot = 0;
    }
    loop {
        let u: Vec<T> = (0..n).map(|i| T::lit(k[i] as f64) * h).collect();
        let r = norm(&u);
        if let Some(ell) = Shell::index_of(r).filter(|&l| l <= rho) {
            let unit = (r > T::zero()).then(|| {
                let mut e = [T::zero(); 3];
                for i in 0..n {
                    e[i] = u[i] / r;
                }
                e
            });
            out.push(BallPoint {
                offset: k,
                ell,
                unit,
                radius: r,
            });
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if k[axis] < reach {
                k[axis] += 1;
                break;
            }
            k[axis] = -reach;
        }
    }
}

/// Flat index of a periodic offset.
fn wrap_index<T: Real>(grid: &GridSpec<T>, offset: &[i64; 3]) -> usize {
    let len = grid.points_per_axis as i64;
    (0..grid.n).fold(0usize, |acc, i| acc * grid.points_per_axis + offset[i].rem_euclid(len) as usize)
}

/// Shell-by-shell offsets inside the cone around direction `v`.
fn cone_stencils<T: Real>(points: &[BallPoint<T>], sphere: &SphereGrid<T>, v: usize) -> Vec<Vec<[i64; 3]>> {
    let mut out = vec![Vec::new(); sphere.rho as usize + 1];
    let d = &sphere.directions[v][..sphere.n];
    let width = sphere.cone_width();
    for p in points {
        if let Some(unit) = &p.unit {
            if in_cone(d, &unit[..sphere.n], width) {
                out[p.ell as usize].push(p.offset);
            }
        }
    }
    out
}

/// `2^{−ℓ} 2^{−ρ(n−1)}`.
fn cone_normalizer<T: Real>(n: usize, rho: u32, ell: u32) -> T {
    pow2(-(ell as i32) - (rho as i32) * (n as i32 - 1))
}

fn check_nonnegative<T: Real>(f: &SampledField<T>) -> Result<()> {
    if !f.is_nonnegative() {
        return Err(SsopsError::domain("the maximal operators need a real, non-negative field"));
    }
    Ok(())
}

fn check_resolution<T: Real>(grid: &GridSpec<T>, rho: u32) -> Result<()> {
    let limit: T = pow2(-(rho as i32) - 2);
    if grid.spacing() > limit {
        return Err(SsopsError::Resolution(format!(
            "grid spacing {} exceeds 2^(−ρ−2) = {limit} for ρ = {rho}",
            grid.spacing()
        )));
    }
    Ok(())
}

fn check_inputs<T: Real>(f: &SampledField<T>, sphere: &SphereGrid<T>) -> Result<()> {
    if f.grid.n != sphere.n {
        return Err(SsopsError::domain(format!(
            "field is {}-dimensional, sphere grid is {}-dimensional",
            f.grid.n, sphere.n
        )));
    }
    check_nonnegative(f)?;
    check_resolution(&f.grid, sphere.rho)
}

/// `h^n Σ_k f(x − kh)` over the listed offsets.
fn stencil_sum<T: Real>(f: &SampledField<T>, x: usize, offsets: &[[i64; 3]]) -> T {
    let grid = &f.grid;
    let idx = grid.multi_index(x);
    let sum: T = offsets
        .iter()
        .map(|k| {
            let mut target = [0i64; 3];
            for i in 0..grid.n {
                target[i] = idx[i] as i64 - k[i];
            }
            f.values[wrap_index(grid, &target)].re
        })
        .sum();
    sum * grid.cell_volume()
}

/// Normalized shell-cone averages `(2^{−ℓ}2^{−ρ(n−1)})^{−1} ∫_{S_ℓ∩Γ^v_ρ} f(x − u) du`, `ℓ = 0..=ρ`.
pub fn directional_averages<T: Real>(f: &SampledField<T>, sphere: &SphereGrid<T>, v: usize, x: usize) -> Result<Vec<T>> {
    check_inputs(f, sphere)?;
    if v >= sphere.len() || x >= f.grid.len() {
        return Err(SsopsError::domain("direction or grid index out of range"));
    }
    let points = ball_points(&f.grid, sphere.rho);
    Ok(cone_stencils(&points, sphere, v)
        .iter()
        .enumerate()
        .map(|(ell, offsets)| stencil_sum(f, x, offsets) / cone_normalizer(sphere.n, sphere.rho, ell as u32))
        .collect())
}

/// `(M^v_ρ f)(x)`: the largest normalized shell-cone average at the node `x`.
pub fn directional_maximal<T: Real>(f: &SampledField<T>, sphere: &SphereGrid<T>, v: usize, x: usize) -> Result<T> {
    Ok(directional_averages(f, sphere, v, x)?
        .into_iter()
        .fold(T::zero(), T::max))
}

/// Periodic convolutions `h^n (f ⊛ K_a)`, `h^n (f ⊛ K_b)` of a real field with two real kernels,
/// packed into one complex transform.
struct Convolver<T> {
    grid: GridSpec<T>,
    spectrum: Vec<Complex<T>>,
}

impl<T: Real> Convolver<T> {
    fn new(f: &SampledField<T>) -> Self {
        let mut spectrum: Vec<Complex<T>> = f.values.iter().map(|v| Complex::new(v.re, T::zero())).collect();
        fft_nd(&mut spectrum, f.grid.n, f.grid.points_per_axis, FftDirection::Forward);
        Self { grid: f.grid, spectrum }
    }

    /// Kernels given as weighted offsets; returns the two real convolutions.
    fn pair(&self, a: &[([i64; 3], T)], b: &[([i64; 3], T)]) -> (Vec<T>, Vec<T>) {
        let grid = &self.grid;
        let mut buf = vec![Complex::<T>::default(); grid.len()];
        for (k, w) in a {
            buf[wrap_index(grid, k)].re = buf[wrap_index(grid, k)].re + *w;
        }
        for (k, w) in b {
            buf[wrap_index(grid, k)].im = buf[wrap_index(grid, k)].im + *w;
        }
        fft_nd(&mut buf, grid.n, grid.points_per_axis, FftDirection::Forward);
        buf.par_iter_mut().zip(&self.spectrum).for_each(|(k, f)| *k = *k * *f);
        fft_nd(&mut buf, grid.n, grid.points_per_axis, FftDirection::Inverse);
        let scale = grid.cell_volume() / T::from_usize_lossy(grid.len());
        buf.into_iter().map(|c| (c.re * scale, c.im * scale)).unzip()
    }

    /// One convolution per kernel, two per transform.
    fn many(&self, kernels: &[Vec<([i64; 3], T)>]) -> Vec<Vec<T>> {
        let mut out = Vec::with_capacity(kernels.len());
        for chunk in kernels.chunks(2) {
            let empty = Vec::new();
            let (a, b) = self.pair(&chunk[0], chunk.get(1).unwrap_or(&empty));
            out.push(a);
            if chunk.len() == 2 {
                out.push(b);
            }
        }
        out
    }
}

fn real_field<T: Real>(grid: GridSpec<T>, values: Vec<T>) -> SampledField<T> {
    SampledField {
        grid,
        values: values.into_iter().map(|v| Complex::new(v, T::zero())).collect(),
    }
}

/// `M^v_ρ f` at every node.
pub fn directional_maximal_field<T: Real>(f: &SampledField<T>, sphere: &SphereGrid<T>, v: usize) -> Result<SampledField<T>> {
    check_inputs(f, sphere)?;
    let points = ball_points(&f.grid, sphere.rho);
    let conv = Convolver::new(f);
    Ok(real_field(f.grid, directional_sup(&conv, &points, sphere, v)))
}

fn directional_sup<T: Real>(conv: &Convolver<T>, points: &[BallPoint<T>], sphere: &SphereGrid<T>, v: usize) -> Vec<T> {
    let kernels: Vec<Vec<([i64; 3], T)>> = cone_stencils(points, sphere, v)
        .into_iter()
        .enumerate()
        .map(|(ell, offsets)| {
            let w = T::one() / cone_normalizer::<T>(sphere.n, sphere.rho, ell as u32);
            offsets.into_iter().map(|k| (k, w)).collect()
        })
        .collect();
    let mut sup = vec![T::zero(); conv.grid.len()];
    for avg in conv.many(&kernels) {
        sup.par_iter_mut().zip(&avg).for_each(|(s, &a)| *s = s.max(a));
    }
    sup
}

/// `(M_ρ f)(x) = 2^{−ρ(n−1)} Σ_v (M^v_ρ f)(x)` at every node.
pub fn averaged_maximal<T: Real>(f: &SampledField<T>, sphere: &SphereGrid<T>) -> Result<SampledField<T>> {
    check_inputs(f, sphere)?;
    let points = ball_points(&f.grid, sphere.rho);
    let conv = Convolver::new(f);
    let mut total = vec![T::zero(); f.grid.len()];
    for v in 0..sphere.len() {
        let sup = directional_sup(&conv, &points, sphere, v);
        total.par_iter_mut().zip(&sup).for_each(|(t, &s)| *t = *t + s);
    }
    let weight: T = pow2(-(sphere.rho as i32) * (sphere.n as i32 - 1));
    Ok(real_field(f.grid, total.into_iter().map(|t| t * weight).collect()))
}

/// `‖M_ρ f‖_p / ‖f‖_p`.
pub fn maximal_norm_ratio<T: Real>(f: &SampledField<T>, maximal: &SampledField<T>, p: T) -> Result<T> {
    let denom = lp_norm(f, p)?;
    if denom == T::zero() {
        return Ok(T::zero());
    }
    Ok(lp_norm(maximal, p)? / denom)
}

fn check_alpha<T: Real>(n: usize, alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha < T::from_usize_lossy(n)) {
        return Err(SsopsError::domain(format!("need 0 < α < n = {n}, got α = {alpha}")));
    }
    Ok(())
}

/// `(Δ_ℓ I f)(x) = ∫_{S_ℓ} f(x − u) (1 − |u|²)^{−(1 − α/n)} du` for `ℓ = 0..=ρ`.
pub fn shell_terms<T: Real>(f: &SampledField<T>, alpha: T, rho: u32) -> Result<Vec<SampledField<T>>> {
    check_alpha(f.grid.n, alpha)?;
    check_nonnegative(f)?;
    check_resolution(&f.grid, rho)?;
    let exponent = T::one() - alpha / T::from_usize_lossy(f.grid.n);
    let mut kernels = vec![Vec::new(); rho as usize + 1];
    for p in ball_points(&f.grid, rho) {
        let w = (T::one() - p.radius * p.radius).powf(-exponent);
        kernels[p.ell as usize].push((p.offset, w));
    }
    let conv = Convolver::new(f);
    Ok(conv
        .many(&kernels)
        .into_iter()
        .map(|v| real_field(f.grid, v))
        .collect())
}

/// `I^ρ_α f = Σ_{ℓ ≤ ρ} Δ_ℓ I f`.
pub fn partial_operator<T: Real>(f: &SampledField<T>, alpha: T, rho: u32) -> Result<SampledField<T>> {
    Ok(sum_fields(f.grid, &shell_terms(f, alpha, rho)?))
}

fn sum_fields<T: Real>(grid: GridSpec<T>, terms: &[SampledField<T>]) -> SampledField<T> {
    let mut total = SampledField::zeros(grid);
    for t in terms {
        total.values.par_iter_mut().zip(&t.values).for_each(|(a, b)| *a = *a + *b);
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct HedbergReport<T> {
    pub n: usize,
    pub alpha: T,
    pub p: T,
    pub q: T,
    pub rho: u32,
    pub norm_p: T,
    /// `sup_x (I^ρ f)(x) / [(M_ρ f)^{p/q}(x) ‖f‖_p^{1−p/q}]` over nodes with `M_ρ f` above
    /// `10^{−12} · max M_ρ f`.
    pub empirical_constant: T,
    /// `sup (Δ_ℓ I f)(x) / (2^{−ℓα/n} (M_ρ f)(x))` over `σ(x) ≤ ℓ ≤ ρ`.
    pub shell_constant: T,
    /// `sup (Δ_ℓ I f)(x) / (‖f‖_p 2^{−ℓ(α/n − 1/p)})` over `0 ≤ ℓ < σ(x)`.
    pub holder_constant: T,
    pub points: usize,
}

fn check_exponents<T: Real>(n: usize, alpha: T, p: T, q: T) -> Result<()> {
    check_alpha(n, alpha)?;
    if !(p > T::one() && q > p && q.is_finite()) {
        return Err(SsopsError::domain(format!("need 1 < p < q < ∞, got p = {p}, q = {q}")));
    }
    let gap = p.recip() - q.recip();
    let t = alpha / T::from_usize_lossy(n);
    if (gap - t).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(16.0)) {
        return Err(SsopsError::domain(format!("need α/n = 1/p − 1/q, got {t} vs {gap}")));
    }
    Ok(())
}

/// Pointwise comparison of the partial sums with the averaged maximal function.
pub fn hedberg_check<T: Real>(f: &SampledField<T>, alpha: T, p: T, q: T, rho: u32) -> Result<HedbergReport<T>> {
    check_exponents(f.grid.n, alpha, p, q)?;
    check_nonnegative(f)?;
    let sphere = build_sphere_grid(f.grid.n, rho)?;
    let maximal = averaged_maximal(f, &sphere)?;
    let terms = shell_terms(f, alpha, rho)?;
    hedberg_evaluate(f, alpha, p, q, &terms, &maximal)
}

/// [`hedberg_check`] from precomputed shell terms and `M_ρ f`.
pub fn hedberg_evaluate<T: Real>(
    f: &SampledField<T>,
    alpha: T,
    p: T,
    q: T,
    terms: &[SampledField<T>],
    maximal: &SampledField<T>,
) -> Result<HedbergReport<T>> {
    let n = f.grid.n;
    check_exponents(n, alpha, p, q)?;
    check_nonnegative(f)?;
    let rho = terms.len().saturating_sub(1) as u32;
    let norm_p = lp_norm(f, p)?;
    let mut report = HedbergReport {
        n,
        alpha,
        p,
        q,
        rho,
        norm_p,
        empirical_constant: T::zero(),
        shell_constant: T::zero(),
        holder_constant: T::zero(),
        points: 0,
    };
    if norm_p == T::zero() {
        return Ok(report);
    }
    let t = alpha / T::from_usize_lossy(n);
    let ratio = p / q;
    let floor = maximal.max_abs() * T::lit(1e-12);
    let holder_scale: Vec<T> = (0..terms.len())
        .map(|l| norm_p * T::lit(2.0).powf(-T::from_usize_lossy(l) * (t - p.recip())))
        .collect();
    let shell_scale: Vec<T> = (0..terms.len())
        .map(|l| T::lit(2.0).powf(-T::from_usize_lossy(l) * t))
        .collect();
    let per_point: Vec<(T, T, T, usize)> = (0..f.grid.len())
        .into_par_iter()
        .map(|x| {
            let m = maximal.values[x].re;
            let total: T = terms.iter().map(|term| term.values[x].re).sum();
            let (mut hedberg, mut shell, mut holder, mut counted) = (T::zero(), T::zero(), T::zero(), 0);
            let sigma = if m > floor {
                hedberg = total / (m.powf(ratio) * norm_p.powf(T::one() - ratio));
                counted = 1;
                p * (m / norm_p).log2()
            } else {
                T::infinity()
            };
            for (l, term) in terms.iter().enumerate() {
                let value = term.values[x].re.max(T::zero());
                if T::from_usize_lossy(l) >= sigma {
                    shell = shell.max(value / (shell_scale[l] * m));
                } else {
                    holder = holder.max(value / holder_scale[l]);
                }
            }
            (hedberg, shell, holder, counted)
        })
        .collect();
    for (h, s, o, c) in per_point {
        report.empirical_constant = report.empirical_constant.max(h);
        report.shell_constant = report.shell_constant.max(s);
        report.holder_constant = report.holder_constant.max(o);
        report.points += c;
    }
    Ok(report)
}

/// Lattice offsets `k` with `kh` in the rectangle centred on `u^v`, scanned over its
/// axis-aligned bounding box.
fn rectangle_offsets<T: Real>(pair: &ConeRectanglePair<T>, h: T) -> Vec<[i64; 3]> {
    let n = pair.n;
    let extent = pair.axis_extent();
    let lo: Vec<i64> = (0..n)
        .map(|i| ((pair.direction[i] - extent[i]) / h).floor().to_i64().unwrap_or(0))
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|i| ((pair.direction[i] + extent[i]) / h).ceil().to_i64().unwrap_or(0))
        .collect();
    let mut out = Vec::new();
    let mut k = [0i64; 3];
    k[..n].copy_from_slice(&lo);
    loop {
        let u: Vec<T> = (0..n).map(|i| T::lit(k[i] as f64) * h).collect();
        if pair.rectangle_contains(&u) {
            out.push(k);
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if k[axis] < hi[axis] {
                k[axis] += 1;
                break;
            }
            k[axis] = lo[axis];
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RectangleDomination<T> {
    pub checks: usize,
    pub violations: usize,
    /// Largest shell-cone average divided by `5^n` times the rectangle average.
    pub max_ratio: T,
}

/// Samples `(x, v, ℓ)` and compares the shell-cone average with `5^n/|R|` times the integral of
/// `f(x − u^v − u)` over the origin-centred rectangle.
pub fn rectangle_domination_check<T: Real>(
    f: &SampledField<T>,
    sphere: &SphereGrid<T>,
    samples: usize,
    seed: u64,
) -> Result<RectangleDomination<T>> {
    check_inputs(f, sphere)?;
    let grid = &f.grid;
    let n = grid.n;
    let h = grid.spacing();
    let points = ball_points(grid, sphere.rho);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RectangleDomination {
        checks: 0,
        violations: 0,
        max_ratio: T::zero(),
    };
    for _ in 0..samples {
        let v = rng.gen_range(0..sphere.len());
        let ell = rng.gen_range(0..=sphere.rho);
        let x = rng.gen_range(0..grid.len());
        let pair = ConeRectanglePair::new(n, sphere.rho, ell, sphere.directions[v])?;
        let stencil = &cone_stencils(&points, sphere, v)[ell as usize];
        let lhs = stencil_sum(f, x, stencil) / cone_normalizer(n, sphere.rho, ell);
        let rect = rectangle_offsets(&pair, h);
        let rhs = T::lit(5f64.powi(n as i32)) * stencil_sum(f, x, &rect) / pair.rectangle_measure();
        out.checks += 1;
        if lhs > rhs * (T::one() + T::lit(1e-12)) {
            out.violations += 1;
        }
        if rhs > T::zero() {
            out.max_ratio = out.max_ratio.max(lhs / rhs);
        }
    }
    Ok(out)
}

/// Gaussian `e^{−|x|²/(2·0.3²)}`, the indicator of `B(0, 1/2)`, and five bumps
/// `(1 − |x − c|²/r²)_+²` with `|c| ≤ 1/2`, `r ≤ 0.3`.
pub fn hedberg_family<T: Real>(grid: GridSpec<T>, seed: u64) -> Vec<(String, SampledField<T>)> {
    let mut out = vec![
        (
            "gaussian".to_string(),
            SampledField::from_real_fn(grid, |x| {
                let r2: T = x.iter().map(|&c| c * c).sum();
                (-r2 / T::lit(2.0 * 0.09)).exp()
            }),
        ),
        (
            "ball".to_string(),
            SampledField::from_real_fn(grid, |x| {
                let r2: T = x.iter().map(|&c| c * c).sum();
                if r2 <= T::lit(0.25) {
                    T::one()
                } else {
                    T::zero()
                }
            }),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for b in 0..5 {
        let (centre, radius) = random_bump::<T, _>(grid.n, &mut rng);
        out.push((format!("bump{b}"), bump_field(grid, centre, radius)));
    }
    out
}

pub(crate) fn random_bump<T: Real, R: Rng>(n: usize, rng: &mut R) -> ([T; 3], T) {
    let dir = geometry::random_unit::<T, R>(n, rng);
    let dist = T::lit(0.5 * rng.gen_range(0.0f64..1.0).powf(1.0 / n as f64));
    let radius = T::lit(rng.gen_range(0.1..=0.3));
    let mut centre = [T::zero(); 3];
    for i in 0..n {
        centre[i] = dir[i] * dist;
    }
    (centre, radius)
}

pub(crate) fn bump_field<T: Real>(grid: GridSpec<T>, centre: [T; 3], radius: T) -> SampledField<T> {
    SampledField::from_real_fn(grid, move |x| {
        let r2: T = x.iter().zip(&centre).map(|(&a, &c)| (a - c) * (a - c)).sum();
        let s = T::one() - r2 / (radius * radius);
        if s > T::zero() {
            s * s
        } else {
            T::zero()
        }
    })
}

/// One row of the maximal-operator report.
#[derive(Debug, Clone, Serialize)]
pub struct MaximalReportRow {
    pub member: String,
    pub rho: u32,
    pub inclusion_violations: usize,
    pub directions: usize,
    pub maximal_ratio_p: f64,
    pub hedberg_constant: f64,
    pub shell_constant: f64,
    pub holder_constant: f64,
}

/// Report rows for every member of [`hedberg_family`] and every `ρ`, on [`grid_for_rho`] grids.
pub fn maximal_report(
    n: usize,
    alpha: f64,
    p: f64,
    q: f64,
    rhos: &[u32],
    inclusion_samples: usize,
    seed: u64,
) -> Result<Vec<MaximalReportRow>> {
    let mut rows = Vec::new();
    for &rho in rhos {
        let grid = grid_for_rho::<f64>(n, rho)?;
        let sphere = build_sphere_grid::<f64>(n, rho)?;
        let inclusion = shell_cone_inclusion_check::<f64>(n, rho, inclusion_samples)?;
        for (member, f) in hedberg_family(grid, seed) {
            let maximal = averaged_maximal(&f, &sphere)?;
            let terms = shell_terms(&f, alpha, rho)?;
            let hedberg = hedberg_evaluate(&f, alpha, p, q, &terms, &maximal)?;
            rows.push(MaximalReportRow {
                member,
                rho,
                inclusion_violations: inclusion.violations,
                directions: sphere.len(),
                maximal_ratio_p: maximal_norm_ratio(&f, &maximal, p)?,
                hedberg_constant: hedberg.empirical_constant,
                shell_constant: hedberg.shell_constant,
                holder_constant: hedberg.holder_constant,
            });
        }
    }
    Ok(rows)
}
