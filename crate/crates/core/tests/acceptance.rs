//! Acceptance criteria A1–A10, one PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex;
use num_rational::Ratio;
use ssops::fields::{forward, inverse, lp_norm, GridSpec, SampledField, Spectrum};
use ssops::kernels::{decay_envelope_fit, multiplier, theta_endpoint_check, transform_check, AlphaParams, KernelSpec};
use ssops::maximal::{
    averaged_maximal, build_sphere_grid, grid_for_rho, hedberg_evaluate, hedberg_family, maximal_norm_ratio,
    shell_cone_inclusion_check, shell_terms, ConeRectanglePair,
};
use ssops::regions::{lemma_two, theorem_one, theorem_one_bounds};
use ssops::scan::{run_scan, FamilyKind, TestFamily};
use ssops::specfun::{bessel_j, gamma_real, BesselOrder};
use ssops::wave::{duhamel_estimate_check, solve_wave, WaveForcing, WaveSolver};
use ssops::{RationalQuery, SsopsError};

type Q = Ratio<i64>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

const ORACLE: &str = include_str!("fixtures/bessel_series_oracle.csv");

fn a1_bessel() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for line in ORACLE.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.trim().parse().unwrap()).collect();
        let got = match bessel_j(BesselOrder::new(v[0], v[1]), v[2]) {
            Ok(b) => b.value,
            Err(e) => return Outcome::new(false, format!("μ={} ν={} ρ={}: {e}", v[0], v[1], v[2])),
        };
        worst = worst.max((got - Complex::new(v[3], v[4])).norm());
        rows += 1;
    }
    let mut closed: f64 = 0.0;
    for k in 0..200 {
        let rho = 0.01 * 1.05f64.powi(k);
        let env = (2.0 / (PI * rho)).sqrt();
        let (s, c) = rho.sin_cos();
        let j = |mu: f64| bessel_j(BesselOrder::real(mu), rho).map(|b| b.value.re).unwrap_or(f64::NAN);
        closed = closed
            .max((j(0.5) - env * s).abs())
            .max((j(-0.5) - env * c).abs())
            .max((j(1.5) - env * (s / rho - c)).abs());
    }
    Outcome::new(
        rows == 1080 && worst <= 1e-9 && closed <= 1e-9,
        format!("{rows} oracle points, max abs error {worst:.2e}; closed forms {closed:.2e} (tol 1e-9)"),
    )
}

fn a2_transform() -> Outcome {
    let grid = GridSpec::new(2, 512, 2.0).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for alpha in [1.0, 1.2] {
        match KernelSpec::standard(Complex::new(alpha, 0.0), 2).and_then(|s| transform_check(&s, grid, 32.0)) {
            Ok(r) => {
                pass &= r.relative_mismatch <= 0.03;
                parts.push(format!("α={alpha}: {:.4}", r.relative_mismatch));
            }
            Err(e) => return Outcome::new(false, format!("α={alpha}: {e}")),
        }
    }
    Outcome::new(pass, format!("512² grid, |ξ| ≤ 32, mismatch {} (tol 0.03)", parts.join(", ")))
}

fn a3_decay() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, alpha) in [(2usize, 1.0), (3, 1.5), (3, 2.0)] {
        let m = multiplier(&KernelSpec::standard(Complex::new(alpha, 0.0), n).unwrap());
        let fit = decay_envelope_fit(&m, 10.0, 1e4, 40).unwrap();
        let want = -((n as f64 + 1.0) / (2.0 * n as f64)) * alpha;
        pass &= (fit.slope - want).abs() <= 0.05;
        parts.push(format!("(n={n}, α={alpha}) {:.4} vs {want:.4}", fit.slope));
    }
    Outcome::new(pass, format!("envelope slopes {} (tol 0.05)", parts.join("; ")))
}

fn a4_special_values() -> Outcome {
    let mut sinc: f64 = 0.0;
    for n in [2usize, 3] {
        let m = multiplier(&KernelSpec::standard(Complex::new(AlphaParams::<f64>::critical_alpha(n), 0.0), n).unwrap());
        for k in 1..=100 {
            let rho = 0.1 * k as f64 - 0.037;
            sinc = sinc.max((m.eval(rho).unwrap().re - (TAU * rho).sin() / (PI * rho)).abs());
        }
    }
    let mut volume: f64 = 0.0;
    for n in [2usize, 3] {
        let m = multiplier(&KernelSpec::standard(Complex::new(n as f64, 0.0), n).unwrap());
        let v = PI.powf(n as f64 / 2.0) / gamma_real(n as f64 / 2.0 + 1.0).unwrap();
        volume = volume.max((m.eval(0.0).unwrap().re - v).abs());
    }
    let mut theta: f64 = 0.0;
    for (alpha, s, n) in [(Complex::new(1.0, 0.0), 0.5, 2), (Complex::new(1.0, 0.0), 0.5, 3), (Complex::new(0.7, 1.5), 0.3, 3)] {
        theta = theta.max(theta_endpoint_check(alpha, s, n).unwrap().max_identity_discrepancy());
    }
    Outcome::new(
        sinc <= 1e-9 && volume <= 1e-6 && theta <= 1e-9,
        format!("sinc profile {sinc:.2e} (1e-9), ball volume {volume:.2e} (1e-6), endpoint identities {theta:.2e} (1e-9)"),
    )
}

fn a5_regions() -> Outcome {
    let r = |a: i64, b: i64| Q::new(a, b);
    let half = r(1, 2);
    let mut failures = Vec::new();
    for n in [2i64, 3] {
        for k in 0..=24 {
            let t = r(k, 24);
            let (lo, hi) = theorem_one_bounds(n as u32, &half, &t);
            if lo != r(n - 1, 2 * n) + r(n + 1, 2 * n) * t || hi != r(n + 1, 2 * n) + r(n - 1, 2 * n) * t {
                failures.push(format!("s=1/2 bounds n={n} t={t}"));
            }
            // Both lemma branches at s = 1/2.
            if (r(1, 1) - half) * t != t / 2 || half + t * (half - half) != half {
                failures.push(format!("lemma branches t={t}"));
            }
            for m in 1..24 {
                let inv_p = r(m, 24);
                let inv_q = inv_p - t;
                if inv_q <= r(0, 1) || k == 0 || k == 24 {
                    continue;
                }
                let alpha = t * r(n, 1);
                let a = theorem_one(&RationalQuery::new(n as u32, half, alpha, inv_p, Some(inv_q)).unwrap()).unwrap();
                let b = theorem_one(&RationalQuery::new(n as u32, half, alpha, r(1, 1) - inv_q, Some(r(1, 1) - inv_p)).unwrap())
                    .unwrap();
                if a.admissible != b.admissible {
                    failures.push(format!("duality n={n} 1/p={inv_p} 1/q={inv_q}"));
                }
                let l = lemma_two(&RationalQuery::new(n as u32, half, alpha, inv_p, Some(inv_q)).unwrap()).unwrap();
                let upper = inv_p - inv_q == t / 2 && inv_p >= half && inv_p <= half + t / 2;
                if l.admissible != upper {
                    failures.push(format!("lemma_two n={n} 1/p={inv_p} 1/q={inv_q}"));
                }
            }
        }
        // α/n = 2/(n+1) with the wave-estimate coefficients.
        for s in [r(1, 4), r(1, 2), r(3, 1)] {
            let t = r(2, n + 1);
            let d = r(2 * n - 2, 1) + r(4, 1) * s;
            let lo = r(n - 1, 1) / d + (r(4, 1) * s + r(n - 1, 1)) / d * t;
            let hi = (r(n - 1, 1) + r(4, 1) * s) / d + r(n - 1, 1) / d * t;
            if theorem_one_bounds(n as u32, &s, &t) != (lo, hi) {
                failures.push(format!("corollary n={n} s={s}"));
            }
        }
    }
    let (lo, hi) = theorem_one_bounds(3, &half, &half);
    if (lo, hi) != (r(2, 3), r(5, 6)) {
        failures.push("n=3 α/n=1/2 spot check".into());
    }
    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            "exact rational checks: s=1/2 bounds, lemma branches, duality, corollary coefficients".to_string()
        } else {
            format!("mismatches: {}", failures.join(", "))
        },
    )
}

fn a6_geometry() -> Outcome {
    let mut violations = 0;
    let mut pairs = 0;
    let mut detail = Vec::new();
    for (n, max_rho) in [(2usize, 6u32), (3, 4)] {
        // The refinement index starts at 1; every shell 0 ≤ ℓ ≤ ρ is checked.
        for rho in 1..=max_rho {
            match shell_cone_inclusion_check::<f64>(n, rho, 100_000) {
                Ok(r) => {
                    violations += r.violations;
                    pairs += r.shells.len();
                }
                Err(e) => {
                    detail.push(format!("n={n} ρ={rho}: {e}"));
                    violations += 1;
                }
            }
        }
    }
    let mut measures = 0;
    let mut measure_mismatch = 0;
    for n in [2, 3] {
        for rho in 0..=8 {
            for ell in 0..=rho {
                let d = if n == 2 { [0.6, 0.8, 0.0] } else { [0.0, 0.6, 0.8] };
                let pair = ConeRectanglePair::new(n, rho, ell, d).unwrap();
                measures += 1;
                if pair.rectangle_measure() != pair.rectangle_measure_formula() {
                    measure_mismatch += 1;
                }
            }
        }
    }
    detail.insert(
        0,
        format!(
            "{pairs} (ℓ, ρ) pairs × 1e5 samples, {violations} inclusion violations; {measure_mismatch}/{measures} rectangle measures differ"
        ),
    );
    Outcome::new(violations == 0 && measure_mismatch == 0, detail.join("; "))
}

const FAMILY_SEED: u64 = 1;
const RHOS: [u32; 3] = [3, 4, 5];
const MAXIMAL_P: [f64; 3] = [4.0 / 3.0, 2.0, 4.0];

struct MaximalData {
    /// (member, ρ, Hedberg constant, ratios for each p)
    rows: Vec<(String, u32, f64, [f64; 3])>,
    elapsed: Duration,
}

fn maximal_data() -> Result<MaximalData, SsopsError> {
    let start = Instant::now();
    let mut rows = Vec::new();
    for rho in RHOS {
        let grid = grid_for_rho::<f64>(2, rho)?;
        let sphere = build_sphere_grid::<f64>(2, rho)?;
        for (name, f) in hedberg_family(grid, FAMILY_SEED) {
            let m = averaged_maximal(&f, &sphere)?;
            let terms = shell_terms(&f, 1.0, rho)?;
            let h = hedberg_evaluate(&f, 1.0, 4.0 / 3.0, 4.0, &terms, &m)?;
            let mut ratios = [0.0; 3];
            for (k, &p) in MAXIMAL_P.iter().enumerate() {
                ratios[k] = maximal_norm_ratio(&f, &m, p)?;
            }
            rows.push((name, rho, h.empirical_constant, ratios));
        }
    }
    Ok(MaximalData { rows, elapsed: start.elapsed() })
}

fn a7_hedberg(data: &MaximalData) -> Outcome {
    let c: Vec<f64> = data.rows.iter().map(|r| r.2).collect();
    let (lo, hi) = c.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    let finite = c.iter().all(|x| x.is_finite() && *x > 0.0);
    Outcome::new(
        finite && hi / lo < 2.0,
        format!("{} (member, ρ) constants in [{lo:.4}, {hi:.4}], spread ×{:.3} (< 2)", c.len(), hi / lo),
    )
}

fn a8_maximal(data: &MaximalData) -> Outcome {
    let mut worst = (1.0, String::new());
    let members: Vec<String> = data.rows.iter().filter(|r| r.1 == RHOS[0]).map(|r| r.0.clone()).collect();
    for member in &members {
        for (k, p) in MAXIMAL_P.iter().enumerate() {
            let vals: Vec<f64> = data.rows.iter().filter(|r| &r.0 == member).map(|r| r.3[k]).collect();
            let (lo, hi) = vals.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
            let spread = hi / lo;
            if !(spread <= worst.0) {
                worst = (spread, format!("{member}, p={p:.3}"));
            }
        }
    }
    Outcome::new(
        worst.0 < 2.0,
        format!("{} members × 3 exponents, worst spread across ρ ∈ {{3,4,5}} ×{:.3} ({}) (< 2)", members.len(), worst.0, worst.1),
    )
}

fn gaussian(grid: GridSpec<f64>, sigma: f64) -> SampledField<f64> {
    SampledField::from_real_fn(grid, move |x| {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        (-r2 / (2.0 * sigma * sigma)).exp()
    })
}

fn pulse(t0: f64) -> impl Fn(f64) -> f64 {
    move |t| if t < t0 { (PI * t / t0).sin().powi(2) } else { 0.0 }
}

fn a9_wave() -> Result<Outcome, SsopsError> {
    // Constant-in-time forcing: û(t) = ĝ (1 − cos ωt)/ω².
    let grid = GridSpec::new(2, 128, 4.0)?;
    let t = 2.0;
    let g = gaussian(grid, 0.3);
    let u = solve_wave(&WaveForcing::separable(&g, t / 256.0, 257, |_| 1.0)?, t)?;
    let g_hat = forward(&g);
    let exact_hat = g_hat
        .values
        .iter()
        .enumerate()
        .map(|(flat, &v)| {
            let xi = grid.frequency_vector(flat);
            let w = TAU * (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            if w == 0.0 {
                v * (t * t / 2.0)
            } else {
                v * ((1.0 - (t * w).cos()) / (w * w))
            }
        })
        .collect();
    let exact = inverse(&Spectrum { grid, values: exact_hat });
    let diff = SampledField::new(grid, u.values.iter().zip(&exact.values).map(|(a, b)| a - b).collect())?;
    let closed = lp_norm(&diff, 2.0)? / lp_norm(&exact, 2.0)?;

    let solver = WaveSolver::new(WaveForcing::separable(&gaussian(GridSpec::new(2, 64, 4.0)?, 0.4), 1.0 / 64.0, 129, pulse(0.75))?)?;
    let energies = [0.75, 1.0, 1.5, 2.0].map(|t| solver.energy(t).unwrap_or(f64::NAN));
    let (lo, hi) = energies.iter().fold((f64::MAX, f64::MIN), |(a, b), &e| (a.min(e), b.max(e)));
    let drift = (hi - lo) / hi;

    let three_d = |dt: f64| -> Result<f64, SsopsError> {
        let grid = GridSpec::new(3, 32, 2.0)?;
        let steps = (1.0 / dt).round() as usize;
        let f = WaveForcing::separable(&gaussian(grid, 0.35), dt, steps + 1, pulse(0.5))?;
        Ok(duhamel_estimate_check(&f, 1.0, 4.0 / 3.0, 4.0, 0.5)?.ratio)
    };
    let (coarse, fine) = (three_d(1.0 / 64.0)?, three_d(1.0 / 128.0)?);
    let stability = coarse.max(fine) / coarse.min(fine);
    Ok(Outcome::new(
        closed <= 1e-3 && drift <= 5e-3 && coarse.is_finite() && coarse > 0.0 && stability < 2.0,
        format!(
            "closed form rel {closed:.2e} (1e-3); energy drift {:.3}% (0.5%); n=3 ratio {coarse:.4} → {fine:.4} under dt halving, ×{stability:.3} (< 2)",
            100.0 * drift
        ),
    ))
}

fn a10_scan() -> Outcome {
    let (n, alpha, s, p, q) = (3, 1.5, 0.5, 4.0 / 3.0, 4.0);
    let grid = GridSpec::<f64>::default_for(3).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for kind in [FamilyKind::GaussianDilates, FamilyKind::KnappCaps] {
        let family = TestFamily::dyadic(kind, 0, -4, 0).unwrap();
        match run_scan(n, alpha, s, p, q, &family, grid, false) {
            Ok(r) => {
                let ok = r.spread() < 2.0 && r.slope.abs() <= 0.1;
                pass &= ok;
                parts.push(format!("{kind}: spread ×{:.3}, slope {:.3}", r.spread(), r.slope));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{kind} on 128³: {e}"));
            }
        }
    }
    if !pass {
        // Context for the failure: the same scan on the finest admissible 128³ box, largest resolvable range.
        let fine = GridSpec::<f64>::new(3, 128, 2.0).unwrap();
        for (kind, finest) in [(FamilyKind::GaussianDilates, -3), (FamilyKind::KnappCaps, -2)] {
            let family = TestFamily::dyadic(kind, 0, finest, 0).unwrap();
            if let Ok(r) = run_scan(n, alpha, s, p, q, &family, fine, false) {
                let ratios: Vec<String> = r.rows.iter().map(|row| format!("{:.4}", row.ratio)).collect();
                parts.push(format!(
                    "diagnostic {kind} 2^0..2^{finest} on [−2,2)³: ratios [{}], spread ×{:.3}, slope {:.3}",
                    ratios.join(", "),
                    r.spread(),
                    r.slope
                ));
            }
        }
    }
    Outcome::new(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let budgets = [10u64, 30, 5, 10, 10, 60, 300, 300, 120, 300];
    let mut results: Vec<(Outcome, Duration)> = Vec::new();
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        (o, start.elapsed())
    };
    results.push(timed(&a1_bessel));
    results.push(timed(&a2_transform));
    results.push(timed(&a3_decay));
    results.push(timed(&a4_special_values));
    results.push(timed(&a5_regions));
    results.push(timed(&a6_geometry));
    match maximal_data() {
        Ok(data) => {
            // The shared maximal computations count against both budgets.
            results.push((a7_hedberg(&data), data.elapsed));
            results.push((a8_maximal(&data), data.elapsed));
        }
        Err(e) => {
            results.push((Outcome::new(false, e.to_string()), Duration::ZERO));
            results.push((Outcome::new(false, e.to_string()), Duration::ZERO));
        }
    }
    results.push(timed(&|| a9_wave().unwrap_or_else(|e| Outcome::new(false, e.to_string()))));
    results.push(timed(&a10_scan));

    let mut failed = 0;
    for (k, ((outcome, elapsed), budget)) in results.iter().zip(budgets).enumerate() {
        let in_time = elapsed.as_secs_f64() < budget as f64;
        let pass = outcome.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "A{} {} {} [{:.1} s, budget {budget} s{}]",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
