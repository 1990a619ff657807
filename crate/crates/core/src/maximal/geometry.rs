//! Dyadic shells, sphere grids, narrow cones and the rectangles that contain their intersections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SsopsError};
use crate::scalar::Real;

/// Unit vectors drawn when verifying a covering.
pub const COVERING_SAMPLES: usize = 100_000;
/// Largest refinement index accepted by [`build_sphere_grid`].
pub const MAX_RHO: u32 = 8;

pub(crate) fn pow2<T: Real>(k: i32) -> T {
    T::lit(2.0).powi(k)
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// `S_ℓ = {u : 2^{−ℓ−1} ≤ 1 − |u| < 2^{−ℓ}}`.
///
/// The outermost shell also takes the origin (`1 − |u| = 1`), so the shells partition the open
/// unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Shell {
    pub ell: u32,
}

impl Shell {
    pub fn new(ell: u32) -> Self {
        Self { ell }
    }

    /// `(inner, outer)` radii: the shell is `inner < |u| ≤ outer`.
    pub fn radii<T: Real>(&self) -> (T, T) {
        let e = self.ell as i32;
        (T::one() - pow2(-e), T::one() - pow2(-e - 1))
    }

    /// The shell holding a point at distance `r` from the origin.
    pub fn index_of<T: Real>(r: T) -> Option<u32> {
        let gap = T::one() - r;
        if !(gap > T::zero() && gap <= T::one()) {
            return None;
        }
        let mut ell = 0;
        let mut lower = T::lit(0.5);
        while gap < lower {
            ell += 1;
            lower = lower * T::lit(0.5);
        }
        Some(ell)
    }

    pub fn contains_radius<T: Real>(&self, r: T) -> bool {
        Self::index_of(r) == Some(self.ell)
    }

    pub fn contains<T: Real>(&self, u: &[T]) -> bool {
        self.contains_radius(norm(u))
    }
}

/// Grid directions `u^v` with their verified covering radius.
#[derive(Debug, Clone, Serialize)]
pub struct SphereGrid<T> {
    pub n: usize,
    pub rho: u32,
    pub directions: Vec<[T; 3]>,
    /// Distance from the worst-covered unit vector to its nearest direction (exact for `n = 2`,
    /// the sampled maximum for `n = 3`).
    pub covering_radius: T,
    /// `#directions / 2^{ρ(n−1)}`.
    pub count_constant: T,
    /// Most directions within `2^{−ρ}` of one sampled unit vector.
    pub multiplicity: usize,
    pub samples: usize,
}

impl<T: Real> SphereGrid<T> {
    /// Cone half-width `2^{−ρ}` (chordal).
    pub fn cone_width(&self) -> T {
        pow2(-(self.rho as i32))
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Unit vector `u/|u|` lies in the narrow cone around direction `v`.
    pub fn cone_contains_unit(&self, v: usize, unit: &[T]) -> bool {
        in_cone(&self.directions[v][..self.n], unit, self.cone_width())
    }
}

/// `|e − d| ≤ w` for unit `e`, `d`, compared as `e·d ≥ 1 − w²/2`.
pub(crate) fn in_cone<T: Real>(d: &[T], unit: &[T], width: T) -> bool {
    dot(d, unit) >= T::one() - width * width * T::lit(0.5)
}

pub(crate) fn random_unit<T: Real, R: Rng>(n: usize, rng: &mut R) -> [T; 3] {
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    if n == 2 {
        return [T::lit(phi.cos()), T::lit(phi.sin()), T::zero()];
    }
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [T::lit(r * phi.cos()), T::lit(r * phi.sin()), T::lit(z)]
}

fn circle<T: Real>(count: usize) -> Vec<[T; 3]> {
    (0..count)
        .map(|k| {
            let t = T::lit(std::f64::consts::TAU) * T::from_usize_lossy(k) / T::from_usize_lossy(count);
            [t.cos(), t.sin(), T::zero()]
        })
        .collect()
}

/// Fibonacci lattice, ordered by decreasing `z`.
fn fibonacci<T: Real>(count: usize) -> Vec<[T; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [T::lit(r * phi.cos()), T::lit(r * phi.sin()), T::lit(z)]
        })
        .collect()
}

struct Coverage<T> {
    worst: T,
    worst_direction: [T; 3],
    multiplicity: usize,
}

/// Nearest-direction distances for the samples. For `n = 3` the candidates are restricted to the
/// `z`-band that can lie within `width`; samples with no candidate there are resolved by brute force.
fn coverage<T: Real>(n: usize, dirs: &[[T; 3]], samples: &[[T; 3]], width: T) -> Coverage<T> {
    let count = dirs.len();
    let span = |e: &[T; 3]| -> (usize, usize) {
        if n == 2 {
            return (0, count);
        }
        let nf = count as f64;
        let (z, w) = (e[2].to_f64_lossy(), width.to_f64_lossy());
        let lo = (((1.0 - z - w) * nf - 1.0) / 2.0).floor().max(0.0) as usize;
        let hi = ((((1.0 - z + w) * nf - 1.0) / 2.0).ceil().max(0.0) as usize + 1).min(count);
        (lo.min(count), hi)
    };
    let per_sample: Vec<(T, usize)> = samples
        .par_iter()
        .map(|e| {
            let (lo, hi) = span(e);
            let mut best = T::infinity();
            let mut within = 0;
            for d in &dirs[lo..hi] {
                let dist = chord(&d[..n], &e[..n]);
                best = best.min(dist);
                if dist <= width {
                    within += 1;
                }
            }
            if best > width {
                best = dirs.iter().map(|d| chord(&d[..n], &e[..n])).fold(T::infinity(), T::min);
            }
            (best, within)
        })
        .collect();
    let (worst_index, worst) = per_sample
        .iter()
        .enumerate()
        .fold((0, T::zero()), |acc, (i, &(d, _))| if d > acc.1 { (i, d) } else { acc });
    Coverage {
        worst,
        worst_direction: samples[worst_index],
        multiplicity: per_sample.iter().map(|p| p.1).max().unwrap_or(0),
    }
}

fn chord<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt()
}

/// Directions whose narrow cones cover the sphere: uniform angles for `n = 2`, a Fibonacci
/// lattice grown until [`COVERING_SAMPLES`] random directions all lie within `0.95 · 2^{−ρ}` for
/// `n = 3`.
pub fn build_sphere_grid<T: Real>(n: usize, rho: u32) -> Result<SphereGrid<T>> {
    if n != 2 && n != 3 {
        return Err(SsopsError::domain(format!("sphere grids need n ∈ {{2, 3}}, got {n}")));
    }
    if rho == 0 || rho > MAX_RHO {
        return Err(SsopsError::domain(format!("refinement index must lie in 1..={MAX_RHO}, got {rho}")));
    }
    let width: T = pow2(-(rho as i32));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e_11_00 + rho as u64 * 16 + n as u64);
    let samples: Vec<[T; 3]> = (0..COVERING_SAMPLES).map(|_| random_unit(n, &mut rng)).collect();
    let scale = T::from_usize_lossy(1usize << (rho as usize * (n - 1)));

    if n == 2 {
        let count = (std::f64::consts::TAU * 2f64.powi(rho as i32)).ceil() as usize;
        let directions = circle::<T>(count);
        let cov = coverage(n, &directions, &samples, width);
        let exact = T::lit(2.0) * (T::PI() / T::from_usize_lossy(2 * count)).sin();
        if cov.worst > width {
            return Err(uncovered(cov));
        }
        return Ok(SphereGrid {
            n,
            rho,
            count_constant: T::from_usize_lossy(count) / scale,
            directions,
            covering_radius: exact.max(cov.worst),
            multiplicity: cov.multiplicity,
            samples: COVERING_SAMPLES,
        });
    }

    let target = width * T::lit(0.95);
    let mut count = (6.0 * 4f64.powi(rho as i32)).ceil() as usize;
    let mut last = None;
    for _ in 0..60 {
        let directions = fibonacci::<T>(count);
        let cov = coverage(n, &directions, &samples, width);
        if cov.worst <= target {
            return Ok(SphereGrid {
                n,
                rho,
                count_constant: T::from_usize_lossy(count) / scale,
                directions,
                covering_radius: cov.worst,
                multiplicity: cov.multiplicity,
                samples: COVERING_SAMPLES,
            });
        }
        last = Some(cov);
        count = (count as f64 * 1.08).ceil() as usize;
    }
    Err(uncovered(last.expect("at least one attempt")))
}

fn uncovered<T: Real>(cov: Coverage<T>) -> SsopsError {
    let d = cov.worst_direction;
    SsopsError::Validation(format!(
        "sphere grid covering not verified: direction ({}, {}, {}) is {} from the grid",
        d[0], d[1], d[2], cov.worst
    ))
}

/// Unit vectors orthogonal to `d` completing an orthonormal frame (one for `n = 2`, two for `n = 3`).
pub(crate) fn transverse_frame<T: Real>(n: usize, d: &[T; 3]) -> [[T; 3]; 2] {
    if n == 2 {
        return [[-d[1], d[0], T::zero()], [T::zero(); 3]];
    }
    let a = if d[0].abs() < T::lit(0.9) {
        [T::one(), T::zero(), T::zero()]
    } else {
        [T::zero(), T::one(), T::zero()]
    };
    let ad = dot(&a, d);
    let mut e1 = [a[0] - ad * d[0], a[1] - ad * d[1], a[2] - ad * d[2]];
    let len = norm(&e1);
    e1.iter_mut().for_each(|x| *x = *x / len);
    let e2 = [
        d[1] * e1[2] - d[2] * e1[1],
        d[2] * e1[0] - d[0] * e1[2],
        d[0] * e1[1] - d[1] * e1[0],
    ];
    [e1, e2]
}

/// The narrow cone `Γ^v_ρ` around one direction, the shell `S_ℓ`, and the rectangle centred on
/// `u^v` with side `5·2^{−ℓ}` along it and `5·2^{−ρ}` across.
#[derive(Debug, Clone, Serialize)]
pub struct ConeRectanglePair<T> {
    pub n: usize,
    pub rho: u32,
    pub ell: u32,
    pub direction: [T; 3],
    frame: [[T; 3]; 2],
}

impl<T: Real> ConeRectanglePair<T> {
    pub fn new(n: usize, rho: u32, ell: u32, direction: [T; 3]) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(SsopsError::domain(format!("need n ∈ {{2, 3}}, got {n}")));
        }
        if ell > rho {
            return Err(SsopsError::domain(format!("need ℓ ≤ ρ, got ℓ = {ell}, ρ = {rho}")));
        }
        let len = norm(&direction[..n]);
        if (len - T::one()).abs() > T::lit(1e3) * T::epsilon() {
            return Err(SsopsError::domain(format!("direction must be a unit vector, |u| = {len}")));
        }
        Ok(Self {
            n,
            rho,
            ell,
            direction,
            frame: transverse_frame(n, &direction),
        })
    }

    pub fn shell(&self) -> Shell {
        Shell::new(self.ell)
    }

    pub fn cone_width(&self) -> T {
        pow2(-(self.rho as i32))
    }

    pub fn cone_contains(&self, u: &[T]) -> bool {
        let r = norm(&u[..self.n]);
        if r == T::zero() {
            return false;
        }
        let unit: Vec<T> = u[..self.n].iter().map(|&x| x / r).collect();
        in_cone(&self.direction[..self.n], &unit, self.cone_width())
    }

    /// Side lengths: axial first, then the transverse ones.
    pub fn rectangle_sides(&self) -> Vec<T> {
        let five = T::lit(5.0);
        let mut sides = vec![five * pow2(-(self.ell as i32))];
        sides.extend(std::iter::repeat(five * self.cone_width()).take(self.n - 1));
        sides
    }

    /// Product of the side lengths.
    pub fn rectangle_measure(&self) -> T {
        self.rectangle_sides().into_iter().fold(T::one(), |a, b| a * b)
    }

    /// `5^n 2^{−ℓ} 2^{−ρ(n−1)}`.
    pub fn rectangle_measure_formula(&self) -> T {
        let exponent = self.ell as i32 + self.rho as i32 * (self.n as i32 - 1);
        T::lit(5f64.powi(self.n as i32)) * pow2(-exponent)
    }

    /// Half-extent of the rectangle along each coordinate axis.
    pub fn axis_extent(&self) -> [T; 3] {
        let sides = self.rectangle_sides();
        let half = T::lit(0.5);
        let mut out = [T::zero(); 3];
        for (i, slot) in out.iter_mut().enumerate().take(self.n) {
            *slot = self.direction[i].abs() * sides[0] * half
                + self.frame[..self.n - 1]
                    .iter()
                    .zip(&sides[1..])
                    .map(|(e, &side)| e[i].abs() * side * half)
                    .sum::<T>();
        }
        out
    }

    /// Coordinates of `w` along the direction and the transverse frame.
    fn local(&self, w: &[T]) -> [T; 3] {
        let n = self.n;
        let mut out = [dot(&w[..n], &self.direction[..n]), T::zero(), T::zero()];
        for (slot, e) in out[1..n].iter_mut().zip(&self.frame) {
            *slot = dot(&w[..n], &e[..n]);
        }
        out
    }

    /// Membership of `w` in the rectangle translated to the origin.
    pub fn centered_rectangle_contains(&self, w: &[T]) -> bool {
        let sides = self.rectangle_sides();
        let local = self.local(w);
        local[..self.n]
            .iter()
            .zip(&sides)
            .all(|(&c, &side)| c.abs() <= side * T::lit(0.5))
    }

    /// Membership in the rectangle centred on `u^v`.
    pub fn rectangle_contains(&self, u: &[T]) -> bool {
        let w: Vec<T> = (0..self.n).map(|i| u[i] - self.direction[i]).collect();
        self.centered_rectangle_contains(&w)
    }

    /// `(|axial offset|, |transverse offset|)` from `u^v`, each divided by its half side.
    pub fn rectangle_fill(&self, u: &[T]) -> (T, T) {
        let w: Vec<T> = (0..self.n).map(|i| u[i] - self.direction[i]).collect();
        let local = self.local(&w);
        let sides = self.rectangle_sides();
        let half = T::lit(0.5);
        let axial = local[0].abs() / (sides[0] * half);
        let transverse = local[1..self.n].iter().map(|c| c.abs()).fold(T::zero(), T::max) / (sides[1] * half);
        (axial, transverse)
    }

    /// A point uniformly distributed in `S_ℓ ∩ Γ^v_ρ`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> [T; 3] {
        let (r0, r1) = self.shell().radii::<T>();
        let nf = self.n as i32;
        let (a, b) = (r0.powi(nf).to_f64_lossy(), r1.powi(nf).to_f64_lossy());
        // U ∈ (0, 1] keeps r in the half-open range (r0, r1].
        let u = 1.0 - rng.gen_range(0.0..1.0);
        let r = T::lit((a + u * (b - a)).powf(1.0 / self.n as f64));
        let w = self.cone_width().to_f64_lossy();
        let theta_max = 2.0 * (w / 2.0).asin();
        let d = &self.direction;
        let [e1, e2] = &self.frame;
        let (c, s1, s2) = if self.n == 2 {
            let t = rng.gen_range(-theta_max..=theta_max);
            (t.cos(), t.sin(), 0.0)
        } else {
            let cos_t = rng.gen_range(theta_max.cos()..=1.0);
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            (cos_t, sin_t * phi.cos(), sin_t * phi.sin())
        };
        let (c, s1, s2) = (T::lit(c), T::lit(s1), T::lit(s2));
        let mut out = [T::zero(); 3];
        for i in 0..self.n {
            out[i] = r * (c * d[i] + s1 * e1[i] + s2 * e2[i]);
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShellInclusion<T> {
    pub ell: u32,
    pub samples: usize,
    pub violations: usize,
    /// Largest axial offset from `u^v` over the samples, in units of the half side.
    pub axial_fill: T,
    pub transverse_fill: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport<T> {
    pub n: usize,
    pub rho: u32,
    pub directions: usize,
    pub shells: Vec<ShellInclusion<T>>,
    pub violations: usize,
}

/// Samples `S_ℓ ∩ Γ^v_ρ` (random grid direction per sample) for every `0 ≤ ℓ ≤ ρ` and counts the
/// points outside the rectangle centred on `u^v`.
pub fn shell_cone_inclusion_check<T: Real>(n: usize, rho: u32, samples: usize) -> Result<InclusionReport<T>> {
    let ells: Vec<u32> = (0..=rho).collect();
    shell_cone_inclusion_for(n, rho, &ells, samples, 0x1c1)
}

/// [`shell_cone_inclusion_check`] restricted to the listed shells.
pub fn shell_cone_inclusion_for<T: Real>(
    n: usize,
    rho: u32,
    ells: &[u32],
    samples: usize,
    seed: u64,
) -> Result<InclusionReport<T>> {
    let grid = build_sphere_grid::<T>(n, rho)?;
    let shells = ells
        .par_iter()
        .map(|&ell| {
            if ell > rho {
                return Err(SsopsError::domain(format!("need ℓ ≤ ρ, got ℓ = {ell}, ρ = {rho}")));
            }
            let pairs = grid
                .directions
                .iter()
                .map(|&d| ConeRectanglePair::new(n, rho, ell, d))
                .collect::<Result<Vec<_>>>()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((ell as u64) << 32) ^ rho as u64);
            let mut report = ShellInclusion {
                ell,
                samples,
                violations: 0,
                axial_fill: T::zero(),
                transverse_fill: T::zero(),
            };
            for _ in 0..samples {
                let pair = &pairs[rng.gen_range(0..pairs.len())];
                let u = pair.sample(&mut rng);
                if !pair.rectangle_contains(&u) {
                    report.violations += 1;
                }
                let (a, t) = pair.rectangle_fill(&u);
                report.axial_fill = report.axial_fill.max(a);
                report.transverse_fill = report.transverse_fill.max(t);
            }
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InclusionReport {
        n,
        rho,
        directions: grid.len(),
        violations: shells.iter().map(|s| s.violations).sum(),
        shells,
    })
}
