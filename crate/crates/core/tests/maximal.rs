use num_complex::Complex;
use proptest::prelude::*;
use ssops::fields::{GridSpec, SampledField};
use ssops::kernels::{kernel_value, KernelSpec};
use ssops::maximal::*;

fn constant_field(grid: GridSpec<f64>, c: f64) -> SampledField<f64> {
    SampledField::from_real_fn(grid, move |_| c)
}

fn radial_bump(grid: GridSpec<f64>) -> SampledField<f64> {
    SampledField::from_real_fn(grid, |x| {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        (1.0 - r2 / 0.36).max(0.0).powi(2)
    })
}

#[test]
fn circle_grids_have_arc_length_counts() {
    let g = build_sphere_grid::<f64>(2, 3).unwrap();
    assert!(g.len() >= 51);
    assert!(g.covering_radius <= 0.125);
    assert!(build_sphere_grid::<f64>(2, 1).unwrap().len() >= 13);
    for rho in 1..=6 {
        let g = build_sphere_grid::<f64>(2, rho).unwrap();
        assert!(g.covering_radius <= g.cone_width());
        assert!(g.count_constant <= 7.0);
    }
}

#[test]
fn grid_directions_are_unit() {
    for (n, rho) in [(2, 4), (3, 1), (3, 2), (3, 3)] {
        let g = build_sphere_grid::<f64>(n, rho).unwrap();
        for d in &g.directions {
            let len: f64 = d.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((len - 1.0).abs() < 1e-14);
        }
        assert!(g.covering_radius <= g.cone_width(), "n={n} ρ={rho}");
        assert!(g.multiplicity >= 1);
    }
}

#[test]
fn sphere_grid_rejects_bad_input() {
    assert!(build_sphere_grid::<f64>(4, 2).is_err());
    assert!(build_sphere_grid::<f64>(2, 0).is_err());
    assert!(build_sphere_grid::<f64>(2, MAX_RHO + 1).is_err());
}

#[test]
fn fine_refinement_shells_have_no_violations() {
    let report = shell_cone_inclusion_for::<f64>(2, 5, &[3, 5], 100_000, 11).unwrap();
    assert_eq!(report.violations, 0);
    for s in &report.shells {
        assert!(s.axial_fill <= 1.0 && s.transverse_fill <= 1.0);
    }
}

#[test]
fn outermost_shell_has_no_violations() {
    for n in [2, 3] {
        let report = shell_cone_inclusion_for::<f64>(n, 3, &[0], 100_000, 5).unwrap();
        assert_eq!(report.violations, 0);
    }
}

#[test]
fn shell_is_half_open() {
    for ell in 0..8 {
        let s = Shell::new(ell);
        let outer_gap = 2f64.powi(-(ell as i32));
        assert!(!s.contains(&[1.0 - outer_gap, 0.0]) || ell == 0);
        assert!(s.contains(&[0.0, 1.0 - outer_gap / 2.0]));
    }
}

#[test]
fn rectangle_measures_are_exact() {
    for n in [2, 3] {
        for rho in 0..=8 {
            for ell in 0..=rho {
                let d = if n == 2 { [0.6, 0.8, 0.0] } else { [0.0, 0.6, 0.8] };
                let pair = ConeRectanglePair::new(n, rho, ell, d).unwrap();
                assert_eq!(pair.rectangle_measure(), pair.rectangle_measure_formula());
            }
        }
    }
    assert!(ConeRectanglePair::new(2, 2, 3, [1.0, 0.0, 0.0]).is_err());
}

#[test]
fn zero_field_has_zero_maximal_function() {
    let grid = grid_for_rho::<f64>(2, 2).unwrap();
    let sphere = build_sphere_grid::<f64>(2, 2).unwrap();
    let zero = SampledField::zeros(grid);
    assert_eq!(directional_maximal(&zero, &sphere, 0, 100).unwrap(), 0.0);
    let m = averaged_maximal(&zero, &sphere).unwrap();
    assert_eq!(m.max_abs(), 0.0);
}

#[test]
fn constant_field_averages_are_geometric_ratios() {
    // f ≡ 1 near x: each average is |S_ℓ ∩ Γ| / (2^{−ℓ} 2^{−ρ}), with
    // |S_ℓ ∩ Γ| = 2θ (r1² − r0²)/2 and θ = 2 arcsin(2^{−ρ−1}).
    let rho = 3;
    let grid = GridSpec::<f64>::new(2, 512, 2.0).unwrap();
    let sphere = build_sphere_grid::<f64>(2, rho).unwrap();
    let f = constant_field(grid, 1.0);
    let centre = grid.nearest_node(&[0.0, 0.0]).unwrap();
    let theta = 2.0 * (sphere.cone_width() / 2.0).asin();
    for v in [0, 7, 20] {
        let averages = directional_averages(&f, &sphere, v, centre).unwrap();
        for (ell, avg) in averages.iter().enumerate() {
            let shell = Shell::new(ell as u32);
            let (r0, r1) = shell.radii::<f64>();
            let area = theta * (r1 * r1 - r0 * r0);
            let want = area / (2f64.powi(-(ell as i32)) * sphere.cone_width());
            assert!((avg - want).abs() <= 0.05 * want, "v={v} ℓ={ell}: {avg} vs {want}");
        }
    }
}

#[test]
fn radial_input_gives_nearly_radial_output() {
    let rho = 3;
    let grid = GridSpec::<f64>::new(2, 512, 2.0).unwrap();
    let sphere = build_sphere_grid::<f64>(2, rho).unwrap();
    let m = averaged_maximal(&radial_bump(grid), &sphere).unwrap();
    let mid = grid.points_per_axis as i64 / 2;
    let at = |i: i64, j: i64| m.values[grid.flat_index(&[(mid + 4 * i) as usize, (mid + 4 * j) as usize])].re;
    // Lattice points sharing a radius.
    let orbits: [&[(i64, i64)]; 3] = [
        &[(5, 0), (4, 3), (3, 4), (0, 5), (-3, 4), (-5, 0), (0, -5), (4, -3)],
        &[(1, 8), (4, 7), (7, 4), (8, 1), (-8, 1), (-4, -7)],
        &[(2, 9), (6, 7), (7, 6), (9, 2), (-2, -9), (-7, 6)],
    ];
    for orbit in orbits {
        let values: Vec<f64> = orbit.iter().map(|&(i, j)| at(i, j)).collect();
        let hi = values.iter().cloned().fold(f64::MIN, f64::max);
        let lo = values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(hi - lo <= 0.02 * hi, "{values:?}");
    }
}

#[test]
fn impulse_response_is_the_truncated_kernel() {
    let (alpha, rho) = (1.0, 3);
    let grid = grid_for_rho::<f64>(2, rho).unwrap();
    let out = partial_operator(&SampledField::impulse(grid), alpha, rho).unwrap();
    let spec = KernelSpec::natural(Complex::new(alpha, 0.0), 2).unwrap();
    let cutoff = 2f64.powi(-(rho as i32) - 1);
    for flat in 0..grid.len() {
        let x = grid.point(flat);
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let want = if 1.0 - r >= cutoff {
            kernel_value(&spec, &x[..2]).unwrap().re
        } else {
            0.0
        };
        assert!((out.values[flat].re - want).abs() <= 1e-9 * want.max(1.0), "{x:?}");
    }
}

#[test]
fn partial_sums_increase_with_rho() {
    let grid = grid_for_rho::<f64>(2, 4).unwrap();
    let f = radial_bump(grid);
    let mut previous = partial_operator(&f, 1.0, 0).unwrap();
    for rho in 1..=4 {
        let next = partial_operator(&f, 1.0, rho).unwrap();
        for (a, b) in previous.values.iter().zip(&next.values) {
            assert!(b.re >= a.re - 1e-12);
        }
        previous = next;
    }
}

#[test]
fn partial_sum_of_constant_matches_radial_integral() {
    // n = 2, α = 1: Σ_ℓ 2π ∫_{shell} (1 − r²)^{−1/2} r dr = 2π (1 − √(1 − b²)), b = 1 − 2^{−ρ−1}.
    let rho = 3;
    let grid = GridSpec::<f64>::new(2, 512, 2.0).unwrap();
    let out = partial_operator(&constant_field(grid, 1.0), 1.0, rho).unwrap();
    let b = 1.0 - 2f64.powi(-(rho as i32) - 1);
    let want = std::f64::consts::TAU * (1.0 - (1.0 - b * b).sqrt());
    let got = out.values[grid.nearest_node(&[0.0, 0.0]).unwrap()].re;
    assert!((got - want).abs() <= 0.01 * want, "{got} vs {want}");
}

#[test]
fn coarse_grids_are_refused() {
    let grid = grid_for_rho::<f64>(2, 3).unwrap();
    let sphere = build_sphere_grid::<f64>(2, 4).unwrap();
    let f = radial_bump(grid);
    assert!(matches!(averaged_maximal(&f, &sphere), Err(ssops::SsopsError::Resolution(_))));
}

#[test]
fn hedberg_conventions_and_errors() {
    let rho = 3;
    let grid = grid_for_rho::<f64>(2, rho).unwrap();
    let zero = SampledField::zeros(grid);
    assert_eq!(hedberg_check(&zero, 1.0, 4.0 / 3.0, 4.0, rho).unwrap().empirical_constant, 0.0);
    let negative = radial_bump(grid).scale(-1.0);
    assert!(matches!(
        hedberg_check(&negative, 1.0, 4.0 / 3.0, 4.0, rho),
        Err(ssops::SsopsError::Domain(_))
    ));
    assert!(hedberg_check(&radial_bump(grid), 1.0, 2.0, 4.0, rho).is_err());
}

#[test]
fn hedberg_constant_is_scale_invariant_and_finite() {
    let rho = 3;
    let grid = grid_for_rho::<f64>(2, rho).unwrap();
    let (_, gaussian) = hedberg_family(grid, 1).remove(0);
    let base = hedberg_check(&gaussian, 1.0, 4.0 / 3.0, 4.0, rho).unwrap();
    assert!(base.empirical_constant.is_finite() && base.empirical_constant > 0.0);
    assert!(base.shell_constant.is_finite() && base.holder_constant.is_finite());
    for c in [1e-3, 7.5, 1e4] {
        let scaled = hedberg_check(&gaussian.scale(c), 1.0, 4.0 / 3.0, 4.0, rho).unwrap();
        let rel = (scaled.empirical_constant - base.empirical_constant).abs() / base.empirical_constant;
        assert!(rel < 1e-10, "c = {c}: {rel}");
    }
}

#[test]
fn rectangles_dominate_shell_cone_averages() {
    for (n, rho) in [(2, 3), (3, 1)] {
        let grid = grid_for_rho::<f64>(n, rho).unwrap();
        let sphere = build_sphere_grid::<f64>(n, rho).unwrap();
        for (_, f) in hedberg_family(grid, 3).into_iter().take(3) {
            let report = rectangle_domination_check(&f, &sphere, 200, 9).unwrap();
            assert_eq!(report.violations, 0);
            assert!(report.max_ratio <= 1.0);
        }
    }
}

#[test]
fn report_rows_cover_family_and_rho() {
    let rows = maximal_report(2, 1.0, 4.0 / 3.0, 4.0, &[2, 3], 1000, 4).unwrap();
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| r.inclusion_violations == 0 && r.hedberg_constant > 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_interior_point_lies_in_exactly_one_shell(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let u = [x, y, z];
        let r = (x * x + y * y + z * z).sqrt();
        prop_assume!(r < 1.0);
        let hits = (0..60).filter(|&l| Shell::new(l).contains(&u)).count();
        prop_assert_eq!(hits, 1);
    }

    #[test]
    fn sampled_intersections_fit_their_rectangles(n in 2usize..=3, rho in 1u32..=4, ell_frac in 0.0f64..1.0, seed in 0u64..1000) {
        let ell = (ell_frac * (rho + 1) as f64) as u32;
        let report = shell_cone_inclusion_for::<f64>(n, rho, &[ell.min(rho)], 500, seed).unwrap();
        prop_assert_eq!(report.violations, 0);
    }

    #[test]
    fn directional_maximal_is_homogeneous(c in 0.0f64..50.0, v in 0usize..25, x in 0usize..4096) {
        let grid = grid_for_rho::<f64>(2, 2).unwrap();
        let sphere = build_sphere_grid::<f64>(2, 2).unwrap();
        let f = radial_bump(grid);
        let a = directional_maximal(&f, &sphere, v, x).unwrap();
        let b = directional_maximal(&f.scale(c), &sphere, v, x).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-12 * (1.0 + c * a));
    }
}
