//! Sampled fields on the periodic grid `[−L, L)^n`, their physical-unit Fourier transforms,
//! radial multipliers, and `L^p` / Sobolev norms.

mod fft;
mod io;


use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SsopsError};
use crate::kernels::RadialMultiplier;
use crate::scalar::Real;

pub use fft::{fft_nd, forward, inverse, Spectrum};
pub use io::{load_field, read_field, save_field, write_field, HEADER_LEN, MAGIC};

/// Nodes `x_j = −L + j h`, `h = 2L/N`, along each of `n` axes; axis 0 varies slowest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec<T> {
    pub n: usize,
    pub points_per_axis: usize,
    pub half_width: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(n: usize, points_per_axis: usize, half_width: T) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(SsopsError::domain(format!("grids are 2- or 3-dimensional, got n = {n}")));
        }
        if points_per_axis < 2 || !points_per_axis.is_power_of_two() {
            return Err(SsopsError::domain(format!(
                "points per axis must be a power of two, got {points_per_axis}"
            )));
        }
        if !(half_width >= T::lit(2.0)) || !half_width.is_finite() {
            return Err(SsopsError::domain(format!("half width must be at least 2, got {half_width}")));
        }
        Ok(Self {
            n,
            points_per_axis,
            half_width,
        })
    }

    /// 512² or 128³ on `[−4, 4)^n`.
    pub fn default_for(n: usize) -> Result<Self> {
        let points = if n == 2 { 512 } else { 128 };
        Self::new(n, points, T::lit(4.0))
    }

    pub fn spacing(&self) -> T {
        T::lit(2.0) * self.half_width / T::from_usize_lossy(self.points_per_axis)
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.n as i32)
    }

    /// Volume `(2L)^{−n}` of a frequency-lattice cell.
    pub fn frequency_cell_volume(&self) -> T {
        (T::lit(2.0) * self.half_width).powi(-(self.n as i32))
    }

    pub fn node(&self, j: usize) -> T {
        -self.half_width + T::from_usize_lossy(j) * self.spacing()
    }

    /// Axis indices of a flat index (unused trailing entries are 0).
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let len = self.points_per_axis;
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for axis in (0..self.n).rev() {
            idx[axis] = rest % len;
            rest /= len;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx[..self.n].iter().fold(0, |acc, &i| acc * self.points_per_axis + i)
    }

    /// Physical coordinates of a node (unused trailing entries are 0).
    pub fn point(&self, flat: usize) -> [T; 3] {
        let idx = self.multi_index(flat);
        let mut x = [T::zero(); 3];
        for axis in 0..self.n {
            x[axis] = self.node(idx[axis]);
        }
        x
    }

    /// Flat index of the node nearest to `x`, if it lies inside the box.
    pub fn nearest_node(&self, x: &[T]) -> Option<usize> {
        let mut idx = [0usize; 3];
        for axis in 0..self.n {
            let j = ((x[axis] + self.half_width) / self.spacing()).round();
            if j < T::zero() || j >= T::from_usize_lossy(self.points_per_axis) {
                return None;
            }
            idx[axis] = j.to_usize()?;
        }
        Some(self.flat_index(&idx))
    }

    /// Signed wavenumber `k ∈ [−N/2, N/2)` of an FFT index.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let len = self.points_per_axis as i64;
        let j = j as i64;
        if j < len / 2 {
            j
        } else {
            j - len
        }
    }

    pub fn wavenumbers(&self, flat: usize) -> [i64; 3] {
        let idx = self.multi_index(flat);
        let mut k = [0i64; 3];
        for axis in 0..self.n {
            k[axis] = self.wavenumber(idx[axis]);
        }
        k
    }

    /// `Σ k_i²` at a flat spectral index; the radius is `√(Σk²)/(2L)`.
    pub fn radius_squared_index(&self, flat: usize) -> usize {
        self.wavenumbers(flat).iter().map(|&k| (k * k) as usize).sum()
    }

    pub fn radius_of_squared_index(&self, sq: usize) -> T {
        T::from_usize_lossy(sq).sqrt() / (T::lit(2.0) * self.half_width)
    }

    pub fn frequency_vector(&self, flat: usize) -> [T; 3] {
        let k = self.wavenumbers(flat);
        let scale = T::one() / (T::lit(2.0) * self.half_width);
        let mut xi = [T::zero(); 3];
        for axis in 0..self.n {
            xi[axis] = T::from_i64(k[axis]).expect("wavenumber representable") * scale;
        }
        xi
    }

    /// Largest lattice frequency radius.
    pub fn max_frequency(&self) -> T {
        self.radius_of_squared_index(self.n * (self.points_per_axis / 2).pow(2))
    }
}

/// Complex samples at every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> SampledField<T> {
    pub fn new(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SsopsError::domain(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self {
            grid,
            values: vec![Complex::default(); grid.len()],
        }
    }

    pub fn from_fn<F>(grid: GridSpec<T>, f: F) -> Self
    where
        F: Fn(&[T]) -> Complex<T> + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|flat| f(&grid.point(flat)[..grid.n]))
            .collect();
        Self { grid, values }
    }

    pub fn from_real_fn<F>(grid: GridSpec<T>, f: F) -> Self
    where
        F: Fn(&[T]) -> T + Sync,
    {
        Self::from_fn(grid, |x| Complex::new(f(x), T::zero()))
    }

    /// Unit-mass impulse at the node nearest the origin (value `h^{−n}`).
    pub fn impulse(grid: GridSpec<T>) -> Self {
        let mut field = Self::zeros(grid);
        let origin = grid.nearest_node(&[T::zero(); 3]).expect("origin is a node");
        field.values[origin] = Complex::new(T::one() / grid.cell_volume(), T::zero());
        field
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(SsopsError::domain("fields live on different grids"));
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    /// Periodic shift by whole grid steps along each axis.
    pub fn translate(&self, steps: &[isize]) -> Self {
        let len = self.grid.points_per_axis as isize;
        let mut out = Self::zeros(self.grid);
        for flat in 0..self.values.len() {
            let idx = self.grid.multi_index(flat);
            let mut target = [0usize; 3];
            for axis in 0..self.grid.n {
                target[axis] = (idx[axis] as isize + steps[axis]).rem_euclid(len) as usize;
            }
            out.values[self.grid.flat_index(&target)] = self.values[flat];
        }
        out
    }

    pub fn real_parts(&self) -> Vec<T> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// True when every sample is real and non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v.im == T::zero() && v.re >= T::zero())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_difference(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn lp_norm(&self, p: T) -> Result<T> {
        lp_norm(self, p)
    }
}

const NORM_CHUNK: usize = 4096;

/// `(h^n Σ |f_j|^p)^{1/p}`, or `max |f_j|` for `p = ∞`.
pub fn lp_norm<T: Real>(f: &SampledField<T>, p: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(SsopsError::domain(format!("L^p norms need p ≥ 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    // Fixed chunks keep the summation order, and so the result, independent of the thread count.
    let partial: Vec<T> = f
        .values
        .par_chunks(NORM_CHUNK)
        .map(|chunk| {
            if p == T::lit(2.0) {
                chunk.iter().map(|v| v.norm_sqr()).sum()
            } else {
                chunk.iter().map(|v| v.norm().powf(p)).sum()
            }
        })
        .collect();
    let sum: T = partial.into_iter().sum();
    Ok((sum * f.grid.cell_volume()).powf(p.recip()))
}

/// A multiplier evaluated once per distinct lattice radius `√(Σk²)/(2L)`.
#[derive(Debug, Clone)]
pub struct MultiplierTable<T> {
    pub grid: GridSpec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> MultiplierTable<T> {
    pub fn new(m: &RadialMultiplier<T>, grid: GridSpec<T>) -> Result<Self> {
        let half = (grid.points_per_axis / 2) as i64;
        let max_sq = grid.n * (half * half) as usize;
        // Only radii that occur on the lattice are evaluated.
        let mut seen = vec![false; max_sq + 1];
        let axis: Vec<usize> = (-half..half).map(|a| (a * a) as usize).collect();
        for &a in &axis {
            for &b in &axis {
                if grid.n == 2 {
                    seen[a + b] = true;
                } else {
                    for &c in &axis {
                        seen[a + b + c] = true;
                    }
                }
            }
        }
        let squares: Vec<usize> = (0..=max_sq).filter(|&sq| seen[sq]).collect();
        let evaluated: Vec<Complex<T>> = squares
            .par_iter()
            .map(|&sq| m.eval(grid.radius_of_squared_index(sq)))
            .collect::<Result<_>>()?;
        let mut values = vec![Complex::default(); max_sq + 1];
        for (sq, v) in squares.into_iter().zip(evaluated) {
            values[sq] = v;
        }
        Ok(Self { grid, values })
    }

    pub fn at_squared_index(&self, sq: usize) -> Complex<T> {
        self.values[sq]
    }

    pub fn at_flat(&self, flat: usize) -> Complex<T> {
        self.values[self.grid.radius_squared_index(flat)]
    }

    /// Multiplies a spectrum in place.
    pub fn apply_spectrum(&self, spectrum: &mut Spectrum<T>) {
        let grid = self.grid;
        spectrum
            .values
            .par_iter_mut()
            .enumerate()
            .for_each(|(flat, v)| *v = *v * self.values[grid.radius_squared_index(flat)]);
    }

    pub fn apply(&self, f: &SampledField<T>) -> Result<SampledField<T>> {
        if f.grid != self.grid {
            return Err(SsopsError::domain("multiplier table built for a different grid"));
        }
        let mut spectrum = forward(f);
        self.apply_spectrum(&mut spectrum);
        Ok(inverse(&spectrum))
    }

    /// `sup |m|` over the lattice radii: the operator norm on `L²` of the grid.
    pub fn sup_abs(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }
}

/// Inverse transform of `f̂ · m(|ξ|)`.
pub fn apply_multiplier<T: Real>(f: &SampledField<T>, m: &RadialMultiplier<T>) -> Result<SampledField<T>> {
    MultiplierTable::new(m, f.grid)?.apply(f)
}

/// `(1 + |ξ|²)^{s/2}`, the symbol of the lift in [`sobolev_lift`].
pub fn sobolev_multiplier<T: Real>(s: T) -> RadialMultiplier<T> {
    let e = s * T::lit(0.5);
    RadialMultiplier::new(
        move |rho: T| Ok(Complex::new((T::one() + rho * rho).powf(e), T::zero())),
        -s,
        "sobolev",
    )
}

/// The field with transform `f̂(ξ)(1 + |ξ|²)^{s/2}`.
pub fn sobolev_lift<T: Real>(f: &SampledField<T>, s: T) -> Result<SampledField<T>> {
    if !(s >= T::zero()) {
        return Err(SsopsError::domain(format!("smoothness must be non-negative, got {s}")));
    }
    if s == T::zero() {
        return Ok(f.clone());
    }
    apply_multiplier(f, &sobolev_multiplier(s))
}

/// `‖f‖_{L^p_s} = ‖sobolev_lift(f, s)‖_p`.
pub fn sobolev_norm<T: Real>(f: &SampledField<T>, p: T, s: T) -> Result<T> {
    lp_norm(&sobolev_lift(f, s)?, p)
}

/// `L²` operator norm of a multiplier on the grid: the supremum over lattice radii.
pub fn operator_norm_l2<T: Real>(m: &RadialMultiplier<T>, grid: GridSpec<T>) -> Result<T> {
    Ok(MultiplierTable::new(m, grid)?.sup_abs())
}
