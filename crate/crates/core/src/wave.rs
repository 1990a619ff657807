//! Forced wave equation `∂²_t u − Δu = f`, `u(·,0) = ∂_t u(·,0) = 0`, solved mode by mode:
//! `û(ξ,t) = ∫_0^t sin((t−s)ω)/ω · f̂(ξ,s) ds` with `ω = 2π|ξ|` under the `e^{−2πix·ξ}` transform.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsopsError};
use crate::fields::{forward, inverse, load_field, lp_norm, save_field, sobolev_norm, GridSpec, SampledField, Spectrum};
use crate::kernels::{multiplier, AlphaParams, KernelSpec};
use crate::regions::{theorem_one, RegionQuery};
use crate::scalar::Real;

/// Samples `f(·, k·dt)`, `k = 0, …, frames − 1`.
#[derive(Debug, Clone)]
pub struct WaveForcing<T> {
    pub grid: GridSpec<T>,
    pub dt: T,
    pub frames: Vec<SampledField<T>>,
}

impl<T: Real> WaveForcing<T> {
    pub fn new(dt: T, frames: Vec<SampledField<T>>) -> Result<Self> {
        if !(dt > T::zero() && dt.is_finite()) {
            return Err(SsopsError::domain(format!("time step must be positive, got {dt}")));
        }
        let grid = frames
            .first()
            .ok_or_else(|| SsopsError::domain("forcing needs at least one frame"))?
            .grid;
        if frames.iter().any(|f| f.grid != grid) {
            return Err(SsopsError::domain("forcing frames live on different grids"));
        }
        Ok(Self { grid, dt, frames })
    }

    /// `f(x, t) = g(x) b(t)`.
    pub fn separable<B: Fn(T) -> T>(spatial: &SampledField<T>, dt: T, count: usize, temporal: B) -> Result<Self> {
        let frames = (0..count)
            .map(|k| spatial.scale(temporal(dt * T::from_usize_lossy(k))))
            .collect();
        Self::new(dt, frames)
    }

    pub fn times(&self) -> Vec<T> {
        (0..self.frames.len()).map(|k| self.dt * T::from_usize_lossy(k)).collect()
    }

    pub fn max_time(&self) -> T {
        self.dt * T::from_usize_lossy(self.frames.len() - 1)
    }

    /// Index `k` with `t = k·dt`; off-lattice or out-of-range times are refused.
    pub fn step_of(&self, t: T) -> Result<usize> {
        let k = (t / self.dt).round();
        let tol = T::lit(1e-9) * self.dt.max(t.abs());
        if !(t >= T::zero()) || (t - k * self.dt).abs() > tol {
            return Err(SsopsError::domain(format!(
                "t = {t} is not on the time lattice with step {}; interpolation is not performed",
                self.dt
            )));
        }
        let k = k.to_usize().unwrap_or(usize::MAX);
        if k >= self.frames.len() {
            return Err(SsopsError::domain(format!("t = {t} exceeds the last frame at {}", self.max_time())));
        }
        Ok(k)
    }
}

/// `{dt, count}` next to `frame_00000.fld`, `frame_00001.fld`, …
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveManifest {
    pub dt: f64,
    pub count: usize,
}

pub const MANIFEST_NAME: &str = "manifest.json";

pub fn frame_file_name(k: usize) -> String {
    format!("frame_{k:05}.fld")
}

/// Writes the manifest and one field file per frame into `dir`.
pub fn save_forcing<T: Real>(forcing: &WaveForcing<T>, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let manifest = WaveManifest {
        dt: forcing.dt.to_f64_lossy(),
        count: forcing.frames.len(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| SsopsError::Format(e.to_string()))?;
    fs::write(dir.join(MANIFEST_NAME), json)?;
    for (k, frame) in forcing.frames.iter().enumerate() {
        save_field(frame, dir.join(frame_file_name(k)))?;
    }
    Ok(())
}

/// Reads a forcing written by [`save_forcing`]; `path` is the manifest or its directory.
pub fn load_forcing<T: Real>(path: impl AsRef<Path>) -> Result<WaveForcing<T>> {
    let path = path.as_ref();
    let (dir, manifest_path) = if path.is_dir() {
        (path.to_path_buf(), path.join(MANIFEST_NAME))
    } else {
        (path.parent().map(Path::to_path_buf).unwrap_or_default(), path.to_path_buf())
    };
    let text = fs::read_to_string(&manifest_path)?;
    let manifest: WaveManifest = serde_json::from_str(&text).map_err(|e| SsopsError::Format(e.to_string()))?;
    let frames = (0..manifest.count)
        .map(|k| load_field(dir.join(frame_file_name(k))))
        .collect::<Result<Vec<_>>>()?;
    WaveForcing::new(T::lit(manifest.dt), frames)
}

/// Spectra of all frames, ready for repeated Duhamel evaluations.
#[derive(Debug, Clone)]
pub struct WaveSolver<T> {
    forcing: WaveForcing<T>,
    spectra: Vec<Spectrum<T>>,
    omega: Vec<T>,
}

/// `û(·,t)` and `∂_t û(·,t)`.
#[derive(Debug, Clone)]
pub struct WaveState<T> {
    pub t: T,
    pub u: Spectrum<T>,
    pub u_t: Spectrum<T>,
}

impl<T: Real> WaveSolver<T> {
    /// Refuses time steps with `dt · ω_max > π/4`.
    pub fn new(forcing: WaveForcing<T>) -> Result<Self> {
        let grid = forcing.grid;
        let omega_max = T::lit(2.0) * T::PI() * grid.max_frequency();
        if forcing.dt * omega_max > T::FRAC_PI_4() * (T::one() + T::lit(1e-12)) {
            return Err(SsopsError::Resolution(format!(
                "time step {} does not resolve ω_max = {omega_max}: need dt ≤ π/(4 ω_max) = {}",
                forcing.dt,
                T::FRAC_PI_4() / omega_max
            )));
        }
        let spectra = forcing.frames.iter().map(forward).collect();
        let two_pi = T::lit(2.0) * T::PI();
        let omega = (0..grid.len())
            .map(|flat| {
                let xi = grid.frequency_vector(flat);
                two_pi * xi[..grid.n].iter().map(|&c| c * c).sum::<T>().sqrt()
            })
            .collect();
        Ok(Self {
            forcing,
            spectra,
            omega,
        })
    }

    pub fn forcing(&self) -> &WaveForcing<T> {
        &self.forcing
    }

    /// Trapezoid rule in `s` on the frame lattice; `sin((t−s)ω)/ω → t − s` at `ω = 0`.
    pub fn state(&self, t: T) -> Result<WaveState<T>> {
        let k = self.forcing.step_of(t)?;
        let t = self.forcing.dt * T::from_usize_lossy(k);
        let dt = self.forcing.dt;
        let weights: Vec<T> = (0..=k)
            .map(|j| if j == 0 || j == k { dt * T::lit(0.5) } else { dt })
            .collect();
        let (u, u_t): (Vec<Complex<T>>, Vec<Complex<T>>) = (0..self.omega.len())
            .into_par_iter()
            .map(|flat| {
                let w = self.omega[flat];
                let (mut u, mut ut) = (Complex::default(), Complex::default());
                if k == 0 {
                    return (u, ut);
                }
                for (j, &wj) in weights.iter().enumerate() {
                    let lag = t - dt * T::from_usize_lossy(j);
                    let f = self.spectra[j].values[flat] * wj;
                    let (sin_term, cos_term) = if w == T::zero() {
                        (lag, T::one())
                    } else {
                        let (s, c) = (lag * w).sin_cos();
                        (s / w, c)
                    };
                    u = u + f * sin_term;
                    ut = ut + f * cos_term;
                }
                (u, ut)
            })
            .unzip();
        let grid = self.forcing.grid;
        Ok(WaveState {
            t,
            u: Spectrum { grid, values: u },
            u_t: Spectrum { grid, values: u_t },
        })
    }

    pub fn solve(&self, t: T) -> Result<SampledField<T>> {
        Ok(inverse(&self.state(t)?.u))
    }

    /// `‖∂_t u‖_2² + ‖∇u‖_2²` through Plancherel.
    pub fn energy(&self, t: T) -> Result<T> {
        let state = self.state(t)?;
        let cell = self.forcing.grid.frequency_cell_volume();
        let sum: T = state
            .u
            .values
            .iter()
            .zip(&state.u_t.values)
            .zip(&self.omega)
            .map(|((u, ut), &w)| ut.norm_sqr() + w * w * u.norm_sqr())
            .sum();
        Ok(sum * cell)
    }
}

pub fn solve_wave<T: Real>(forcing: &WaveForcing<T>, t: T) -> Result<SampledField<T>> {
    WaveSolver::new(forcing.clone())?.solve(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct DuhamelReport<T> {
    pub t: T,
    pub p: T,
    pub q: T,
    pub s: T,
    /// `‖u(·,t)‖_q`.
    pub solution_norm: T,
    /// `∫_0^t ‖f(·,t−r)‖_{L^p_s} r^{−(n−1)/(n+1)} dr`.
    pub forcing_integral: T,
    pub ratio: T,
}

/// Checks the exponents against the hypotheses of the wave estimate (`α = 2n/(n+1)`).
pub fn check_wave_exponents<T: Real>(n: usize, p: T, q: T, s: T) -> Result<()> {
    let alpha = AlphaParams::<T>::critical_alpha(n).to_f64_lossy();
    let query = RegionQuery::<f64>::new(
        n as u32,
        s.to_f64_lossy(),
        alpha,
        p.recip().to_f64_lossy(),
        Some(q.recip().to_f64_lossy()),
    )?;
    let verdict = theorem_one(&query)?;
    if !verdict.admissible {
        return Err(SsopsError::domain(format!(
            "(p, q, s) = ({p}, {q}, {s}) is outside the admissible region: {} fails",
            verdict.violated().join(", ")
        )));
    }
    Ok(())
}

/// `‖u(·,t)‖_q` divided by the forcing integral; the integral uses `r = t·v^{(n+1)/2}`, which turns
/// `r^{−(n−1)/(n+1)} dr` into `((n+1)/2) t^{2/(n+1)} dv`, with the trapezoid rule on `4k` panels in `v`
/// and linear interpolation of the lattice norms in `r`.
pub fn duhamel_estimate_check<T: Real>(forcing: &WaveForcing<T>, t: T, p: T, q: T, s: T) -> Result<DuhamelReport<T>> {
    let solver = WaveSolver::new(forcing.clone())?;
    duhamel_estimate_with(&solver, t, p, q, s)
}

/// [`duhamel_estimate_check`] reusing a solver.
pub fn duhamel_estimate_with<T: Real>(solver: &WaveSolver<T>, t: T, p: T, q: T, s: T) -> Result<DuhamelReport<T>> {
    let forcing = solver.forcing();
    let n = forcing.grid.n;
    check_wave_exponents(n, p, q, s)?;
    let k = forcing.step_of(t)?;
    let solution_norm = lp_norm(&solver.solve(t)?, q)?;
    let norms = forcing.frames[..=k]
        .iter()
        .map(|f| sobolev_norm(f, p, s))
        .collect::<Result<Vec<T>>>()?;
    let mut forcing_integral = T::zero();
    if k > 0 {
        let nf = T::from_usize_lossy(n);
        let gamma = (nf + T::one()) * T::lit(0.5);
        let panels = 4 * k;
        // g(r) = ‖f(·, t − r)‖: frame index k − r/dt.
        let g = |r: T| {
            let pos = (t - r) / forcing.dt;
            let j = pos.floor().max(T::zero()).min(T::from_usize_lossy(k));
            let i = j.to_usize().unwrap_or(0).min(k);
            if i == k {
                return norms[k];
            }
            let frac = pos - j;
            norms[i] * (T::one() - frac) + norms[i + 1] * frac
        };
        let mut sum = T::zero();
        for m in 0..=panels {
            let v = T::from_usize_lossy(m) / T::from_usize_lossy(panels);
            let w = if m == 0 || m == panels { T::lit(0.5) } else { T::one() };
            sum = sum + w * g(t * v.powf(gamma));
        }
        let h = T::one() / T::from_usize_lossy(panels);
        forcing_integral = sum * h * gamma * t.powf(T::lit(2.0) / (nf + T::one()));
    }
    let ratio = if forcing_integral > T::zero() {
        solution_norm / forcing_integral
    } else {
        T::zero()
    };
    Ok(DuhamelReport {
        t,
        p,
        q,
        s,
        solution_norm,
        forcing_integral,
        ratio,
    })
}

/// Largest `|sin(rω)/ω − (r/2)·m(rξ)|` over lattice frequencies and the given dilations, where
/// `m` is the multiplier at `α = 2n/(n+1)`, measured relative to `max(1, |sin(rω)/ω|)`.
pub fn dilation_identity_check<T: Real>(grid: GridSpec<T>, radii: &[T]) -> Result<T> {
    let n = grid.n;
    let spec = KernelSpec::standard(Complex::new(AlphaParams::<T>::critical_alpha(n), T::zero()), n)?;
    let m = multiplier(&spec);
    let mut squares: Vec<usize> = (0..grid.len()).map(|f| grid.radius_squared_index(f)).collect();
    squares.sort_unstable();
    squares.dedup();
    let two_pi = T::lit(2.0) * T::PI();
    let worst = squares
        .par_iter()
        .map(|&sq| -> Result<T> {
            let rho = grid.radius_of_squared_index(sq);
            let w = two_pi * rho;
            let mut worst = T::zero();
            for &r in radii {
                let lhs = if w == T::zero() { r } else { (r * w).sin() / w };
                let rhs = m.eval(r * rho)? * (r * T::lit(0.5));
                worst = worst.max((rhs - lhs).norm() / lhs.abs().max(T::one()));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(worst.into_iter().fold(T::zero(), T::max))
}
