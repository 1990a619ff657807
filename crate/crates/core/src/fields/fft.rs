//! Multidimensional FFT on row-major cubes and the physical-unit transform pair.

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use super::{GridSpec, SampledField};
use crate::scalar::Real;

/// Unnormalized in-place DFT along every axis of an `len^dims` row-major array.
pub fn fft_nd<T: Real>(data: &mut [Complex<T>], dims: usize, len: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), len.pow(dims as u32));
    let fft: Arc<dyn Fft<T>> = FftPlanner::new().plan_fft(len, direction);
    for axis in 0..dims {
        let stride = len.pow((dims - 1 - axis) as u32);
        if stride == 1 {
            data.par_chunks_mut(len).for_each_init(
                || vec![Complex::default(); fft.get_inplace_scratch_len()],
                |scratch, line| fft.process_with_scratch(line, scratch),
            );
            continue;
        }
        data.par_chunks_mut(len * stride).for_each_init(
            || {
                (
                    vec![Complex::default(); len],
                    vec![Complex::default(); fft.get_inplace_scratch_len()],
                )
            },
            |(line, scratch), block| {
                for inner in 0..stride {
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot = block[inner + k * stride];
                    }
                    fft.process_with_scratch(line, scratch);
                    for (k, value) in line.iter().enumerate() {
                        block[inner + k * stride] = *value;
                    }
                }
            },
        );
    }
}

/// Samples of `f̂(ξ) = ∫ f(x) e^{−2πi x·ξ} dx` at the lattice frequencies `ξ = k/(2L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    /// `(∫ |f̂|² dξ)^{1/2}` by the lattice sum with cell `(2L)^{−n}`.
    pub fn l2_norm(&self) -> T {
        let cell = self.grid.frequency_cell_volume();
        let sum: T = self.values.iter().map(|v| v.norm_sqr()).sum();
        (sum * cell).sqrt()
    }

    /// Lattice frequency vector at a flat index.
    pub fn frequency(&self, flat: usize) -> [T; 3] {
        self.grid.frequency_vector(flat)
    }
}

/// `(−1)^{Σk}`: the phase of the shift from `[0, 2L)` to `[−L, L)`.
fn checkerboard<T: Real>(grid: &GridSpec<T>, values: &mut [Complex<T>]) {
    let len = grid.points_per_axis;
    values.par_iter_mut().enumerate().for_each(|(flat, v)| {
        let mut parity = 0usize;
        let mut rest = flat;
        for _ in 0..grid.n {
            parity += rest % len;
            rest /= len;
        }
        if parity % 2 == 1 {
            *v = -*v;
        }
    });
}

pub fn forward<T: Real>(field: &SampledField<T>) -> Spectrum<T> {
    let grid = field.grid;
    let mut values = field.values.clone();
    fft_nd(&mut values, grid.n, grid.points_per_axis, FftDirection::Forward);
    let cell = grid.cell_volume();
    values.par_iter_mut().for_each(|v| *v = *v * cell);
    checkerboard(&grid, &mut values);
    Spectrum { grid, values }
}

pub fn inverse<T: Real>(spectrum: &Spectrum<T>) -> SampledField<T> {
    let grid = spectrum.grid;
    let mut values = spectrum.values.clone();
    checkerboard(&grid, &mut values);
    fft_nd(&mut values, grid.n, grid.points_per_axis, FftDirection::Inverse);
    let scale = grid.frequency_cell_volume();
    values.par_iter_mut().for_each(|v| *v = *v * scale);
    SampledField { grid, values }
}
