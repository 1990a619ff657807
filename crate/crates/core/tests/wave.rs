use num_complex::Complex;
use proptest::prelude::*;
use ssops::fields::{forward, inverse, lp_norm, GridSpec, SampledField, Spectrum};
use ssops::wave::*;
use ssops::SsopsError;

fn gaussian(grid: GridSpec<f64>, sigma: f64) -> SampledField<f64> {
    SampledField::from_real_fn(grid, move |x| {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        (-r2 / (2.0 * sigma * sigma)).exp()
    })
}

fn l2(values: &[Complex<f64>]) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// C¹ pulse `sin²(πt/t0)` on `[0, t0]`.
fn pulse(t0: f64) -> impl Fn(f64) -> f64 {
    move |t| {
        if t < t0 {
            (std::f64::consts::PI * t / t0).sin().powi(2)
        } else {
            0.0
        }
    }
}

#[test]
fn zero_forcing_gives_zero_solution() {
    let grid = GridSpec::<f64>::new(2, 32, 2.0).unwrap();
    let forcing = WaveForcing::separable(&SampledField::zeros(grid), 0.02, 20, |_| 1.0).unwrap();
    let solver = WaveSolver::new(forcing).unwrap();
    for k in [0, 5, 19] {
        assert_eq!(solver.solve(0.02 * k as f64).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn time_independent_forcing_matches_closed_form() {
    let grid = GridSpec::<f64>::new(2, 128, 4.0).unwrap();
    let t = 2.0;
    let g = gaussian(grid, 0.3);
    let forcing = WaveForcing::separable(&g, t / 256.0, 257, |_| 1.0).unwrap();
    let u = solve_wave(&forcing, t).unwrap();
    let g_hat = forward(&g);
    let exact_hat: Vec<Complex<f64>> = g_hat
        .values
        .iter()
        .enumerate()
        .map(|(flat, &v)| {
            let xi = grid.frequency_vector(flat);
            let w = std::f64::consts::TAU * (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            if w == 0.0 {
                v * (t * t / 2.0)
            } else {
                v * ((1.0 - (t * w).cos()) / (w * w))
            }
        })
        .collect();
    let exact = inverse(&Spectrum { grid, values: exact_hat });
    let diff: Vec<Complex<f64>> = u.values.iter().zip(&exact.values).map(|(a, b)| a - b).collect();
    let rel = l2(&diff) / l2(&exact.values);
    assert!(rel <= 1e-3, "{rel}");
}

#[test]
fn single_mode_matches_oscillatory_integral() {
    let grid = GridSpec::<f64>::new(2, 16, 2.0).unwrap();
    let (nu, t, dt) = (1.0f64, 1.0, 1.0 / 1024.0);
    // e^{2πi x·ξ0} with ξ0 = (1/4, 0).
    let mode = SampledField::from_fn(grid, |x| Complex::new(0.0, std::f64::consts::TAU * x[0] / 4.0).exp());
    let frames = (0..=1024)
        .map(|k| {
            let phase = Complex::new(0.0, nu * k as f64 * dt).exp();
            SampledField::new(grid, mode.values.iter().map(|v| v * phase).collect()).unwrap()
        })
        .collect();
    let solver = WaveSolver::new(WaveForcing::new(dt, frames).unwrap()).unwrap();
    let state = solver.state(t).unwrap();
    let spectrum = forward(&mode);
    let k0 = (0..grid.len())
        .max_by(|&a, &b| spectrum.values[a].norm().total_cmp(&spectrum.values[b].norm()))
        .unwrap();
    let w = std::f64::consts::FRAC_PI_2;
    let i = Complex::new(0.0, 1.0);
    let y = ((i * nu * t).exp() - (w * t).cos() - i * (nu / w) * (w * t).sin()) / (w * w - nu * nu);
    let want = spectrum.values[k0] * y;
    let got = state.u.values[k0];
    assert!((got - want).norm() <= 1e-6 * want.norm(), "{got} vs {want}");
    // Every other mode stays at rounding level.
    let leak = (0..grid.len()).filter(|&f| f != k0).map(|f| state.u.values[f].norm()).fold(0.0, f64::max);
    assert!(leak <= 1e-12 * want.norm());
}

#[test]
fn energy_is_conserved_after_switch_off() {
    let grid = GridSpec::<f64>::new(2, 64, 4.0).unwrap();
    let forcing = WaveForcing::separable(&gaussian(grid, 0.4), 1.0 / 64.0, 129, pulse(0.75)).unwrap();
    let solver = WaveSolver::new(forcing).unwrap();
    let energies: Vec<f64> = [0.75, 1.0, 1.5, 2.0].iter().map(|&t| solver.energy(t).unwrap()).collect();
    let (lo, hi) = energies.iter().fold((f64::MAX, f64::MIN), |(a, b), &e| (a.min(e), b.max(e)));
    assert!(lo > 0.0 && (hi - lo) / hi <= 5e-3, "{energies:?}");
}

#[test]
fn zero_initial_data() {
    let grid = GridSpec::<f64>::new(2, 32, 2.0).unwrap();
    let mut slopes = Vec::new();
    for dt in [1.0 / 64.0, 1.0 / 128.0] {
        let forcing = WaveForcing::separable(&gaussian(grid, 0.4), dt, 3, |_| 1.0).unwrap();
        let solver = WaveSolver::new(forcing).unwrap();
        let u0 = solver.solve(0.0).unwrap();
        assert_eq!(u0.max_abs(), 0.0);
        let u1 = solver.solve(dt).unwrap();
        slopes.push(lp_norm(&u1, 2.0).unwrap() / dt);
    }
    // (u(dt) − u(0))/dt = O(dt).
    assert!((slopes[0] / slopes[1] - 2.0).abs() < 0.05, "{slopes:?}");
}

#[test]
fn solutions_are_linear_in_the_forcing() {
    let grid = GridSpec::<f64>::new(2, 32, 2.0).unwrap();
    let a = WaveForcing::separable(&gaussian(grid, 0.3), 0.01, 40, pulse(0.2)).unwrap();
    let b = WaveForcing::separable(&gaussian(grid, 0.5).translate(&[3, -2]), 0.01, 40, |t| t).unwrap();
    let sum_frames = a.frames.iter().zip(&b.frames).map(|(x, y)| x.add(y).unwrap()).collect();
    let sum = WaveForcing::new(0.01, sum_frames).unwrap();
    let t = 0.39;
    let ua = solve_wave(&a, t).unwrap();
    let ub = solve_wave(&b, t).unwrap();
    let us = solve_wave(&sum, t).unwrap();
    let err = us.max_abs_difference(&ua.add(&ub).unwrap());
    assert!(err <= 1e-13 * us.max_abs(), "{err}");
}

fn three_dimensional_forcing(dt: f64) -> WaveForcing<f64> {
    let grid = GridSpec::<f64>::new(3, 32, 2.0).unwrap();
    let steps = (1.0 / dt).round() as usize;
    WaveForcing::separable(&gaussian(grid, 0.35), dt, steps + 1, pulse(0.5)).unwrap()
}

#[test]
fn corollary_ratio_is_finite_and_stable_under_refinement() {
    let (p, q, s) = (4.0 / 3.0, 4.0, 0.5);
    let coarse = duhamel_estimate_check(&three_dimensional_forcing(1.0 / 64.0), 1.0, p, q, s).unwrap();
    let fine = duhamel_estimate_check(&three_dimensional_forcing(1.0 / 128.0), 1.0, p, q, s).unwrap();
    assert!(coarse.ratio.is_finite() && coarse.ratio > 0.0);
    let spread = coarse.ratio.max(fine.ratio) / coarse.ratio.min(fine.ratio);
    assert!(spread < 2.0, "{} vs {}", coarse.ratio, fine.ratio);
}

#[test]
fn corollary_ratio_conventions() {
    let grid = GridSpec::<f64>::new(3, 16, 2.0).unwrap();
    let zero = WaveForcing::separable(&SampledField::zeros(grid), 1.0 / 32.0, 33, |_| 1.0).unwrap();
    assert_eq!(duhamel_estimate_check(&zero, 1.0, 4.0 / 3.0, 4.0, 0.5).unwrap().ratio, 0.0);
    let err = duhamel_estimate_check(&zero, 1.0, 2.0, 4.0, 0.5).unwrap_err();
    assert!(matches!(&err, SsopsError::Domain(msg) if msg.contains("alpha/n = 1/p - 1/q")), "{err}");
    // 1/p = 0.9 > upper bound 5/6 at s = 1/2.
    let err = duhamel_estimate_check(&zero, 1.0, 1.0 / 0.9, 1.0 / 0.4, 0.5).unwrap_err();
    assert!(matches!(&err, SsopsError::Domain(msg) if msg.contains("1/p interval")), "{err}");
}

#[test]
fn dilation_bookkeeping_identity() {
    for n in [2, 3] {
        let grid = GridSpec::<f64>::new(n, 16, 2.0).unwrap();
        let worst = dilation_identity_check(grid, &[0.1, 0.25, 0.5, 1.0, 2.0]).unwrap();
        assert!(worst <= 1e-12, "n = {n}: {worst}");
    }
}

#[test]
fn forcing_roundtrips_through_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let grid = GridSpec::<f64>::new(2, 16, 2.0).unwrap();
    let forcing = WaveForcing::separable(&gaussian(grid, 0.3), 0.05, 4, |t| 1.0 + t).unwrap();
    save_forcing(&forcing, dir.path()).unwrap();
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(MANIFEST_NAME)).unwrap()).unwrap();
    assert_eq!(manifest["count"], 4);
    for path in [dir.path().to_path_buf(), dir.path().join(MANIFEST_NAME)] {
        let back = load_forcing::<f64>(&path).unwrap();
        assert_eq!(back.dt, forcing.dt);
        assert_eq!(back.frames, forcing.frames);
    }
    std::fs::remove_file(dir.path().join(frame_file_name(3))).unwrap();
    assert!(load_forcing::<f64>(dir.path()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn corollary_ratio_is_scale_invariant(c in 1e-3f64..1e3) {
        let grid = GridSpec::<f64>::new(3, 16, 2.0).unwrap();
        let forcing = WaveForcing::separable(&gaussian(grid, 0.4), 1.0 / 32.0, 17, pulse(0.3)).unwrap();
        let scaled = WaveForcing::new(forcing.dt, forcing.frames.iter().map(|f| f.scale(c)).collect()).unwrap();
        let a = duhamel_estimate_check(&forcing, 0.5, 4.0 / 3.0, 4.0, 0.5).unwrap().ratio;
        let b = duhamel_estimate_check(&scaled, 0.5, 4.0 / 3.0, 4.0, 0.5).unwrap().ratio;
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn linearity_with_random_weights(a in -5.0f64..5.0, b in -5.0f64..5.0, k in 1usize..30) {
        let grid = GridSpec::<f64>::new(2, 16, 2.0).unwrap();
        let f = WaveForcing::separable(&gaussian(grid, 0.3), 0.02, 30, |t| t.sin()).unwrap();
        let g = WaveForcing::separable(&gaussian(grid, 0.6), 0.02, 30, |t| 1.0 - t).unwrap();
        let mix = WaveForcing::new(0.02, f.frames.iter().zip(&g.frames).map(|(x, y)| x.scale(a).add(&y.scale(b)).unwrap()).collect()).unwrap();
        let t = 0.02 * k as f64;
        let lhs = solve_wave(&mix, t).unwrap();
        let rhs = solve_wave(&f, t).unwrap().scale(a).add(&solve_wave(&g, t).unwrap().scale(b)).unwrap();
        prop_assert!(lhs.max_abs_difference(&rhs) <= 1e-12 * (1.0 + lhs.max_abs()));
    }
}
