//! Quick sanity examples with known answers, one set per subcommand.

use std::f64::consts::PI;

use num_complex::Complex;
use ssops::fields::{GridSpec, SampledField};
use ssops::kernels::{kernel_value, multiplier, theta_endpoint_check, transform_check, KernelSpec};
use ssops::maximal::{averaged_maximal, build_sphere_grid, grid_for_rho, Shell};
use ssops::regions::theorem_one_bounds;
use ssops::scan::RatioOperator;
use ssops::specfun::{bessel_j, BesselOrder};
use ssops::wave::{duhamel_estimate_check, solve_wave, WaveForcing};
use ssops::{Rational64, SsopsError};

use crate::commands::classify;
use crate::{Command, Failure};

type Check = (&'static str, Result<bool, SsopsError>);

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn bessel() -> Vec<Check> {
    let j = |mu: f64, x: f64| bessel_j(BesselOrder::real(mu), x).map(|v| v.value.re);
    let x = 1.3;
    vec![
        ("J_1/2(pi/2) = 2/pi", j(0.5, PI / 2.0).map(|v| close(v, 2.0 / PI, 1e-9))),
        (
            "J_-1/2 closed form",
            j(-0.5, x).map(|v| close(v, (2.0 / (PI * x)).sqrt() * x.cos(), 1e-9)),
        ),
        (
            "J_3/2 closed form",
            j(1.5, x).map(|v| close(v, (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos()), 1e-9)),
        ),
    ]
}

fn kernel() -> Vec<Check> {
    let ball = || KernelSpec::standard(Complex::new(2.0, 0.0), 2);
    vec![
        (
            "alpha = n kernel is one inside the ball",
            ball().and_then(|s| kernel_value(&s, &[0.3, 0.4])).map(|v| close(v.re, 1.0, 1e-12)),
        ),
        (
            "kernels vanish outside the ball",
            ball().and_then(|s| kernel_value(&s, &[0.9, 0.9])).map(|v| v == Complex::new(0.0, 0.0)),
        ),
    ]
}

fn multiplier_checks() -> Vec<Check> {
    let sinc = || -> Result<bool, SsopsError> {
        let m = multiplier(&KernelSpec::standard(Complex::new(4.0 / 3.0, 0.0), 2)?);
        for k in 1..=20 {
            let r = k as f64 * 0.37;
            if !close(m.eval(r)?.re, (2.0 * PI * r).sin() / (PI * r), 1e-9) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let volume = || -> Result<bool, SsopsError> {
        let m = multiplier(&KernelSpec::standard(Complex::new(3.0, 0.0), 3)?);
        Ok(close(m.eval(0.0)?.re, 4.0 * PI / 3.0, 1e-6))
    };
    vec![("critical profile is sin(2 pi r)/(pi r)", sinc()), ("alpha = n profile at 0 is the ball volume", volume())]
}

fn region() -> Vec<Check> {
    let half = Rational64::new(1, 2);
    let (lo, hi) = theorem_one_bounds(3, &half, &half);
    vec![
        ("n = 3, s = 1/2, alpha/n = 1/2 gives (2/3, 5/6)", Ok(lo == Rational64::new(2, 3) && hi == Rational64::new(5, 6))),
        ("interior point is admissible", classify(3, 0.5, 1.5, 0.75, 0.25).map(|v| v.admissible)),
        ("gap mismatch is rejected", classify(3, 0.5, 1.5, 0.75, 0.5).map(|v| !v.admissible)),
    ]
}

fn transform() -> Vec<Check> {
    let run = || -> Result<bool, SsopsError> {
        let spec = KernelSpec::standard(Complex::new(2.0, 0.0), 2)?;
        let report = transform_check(&spec, GridSpec::new(2, 128, 2.0)?, 8.0)?;
        Ok(report.relative_mismatch <= 0.03)
    };
    vec![("ball indicator transform on 128^2", run())]
}

fn scan() -> Vec<Check> {
    let zero = || -> Result<bool, SsopsError> {
        let grid = GridSpec::new(2, 32, 2.0)?;
        let op = RatioOperator::new(1.0, 0.5, 2.0, 2.0, grid)?;
        Ok(matches!(op.rows(&[(1.0, SampledField::zeros(grid))]), Err(SsopsError::Validation(_))))
    };
    let homogeneous = || -> Result<bool, SsopsError> {
        let grid = GridSpec::new(2, 32, 2.0)?;
        let op = RatioOperator::new(1.0, 0.5, 2.0, 4.0, grid)?;
        let f = SampledField::from_real_fn(grid, |x: &[f64]| (-(x[0] * x[0] + x[1] * x[1]) * 4.0).exp());
        let (a, b) = op.norms(&f)?;
        let (c, d) = op.norms(&f.scale(7.0))?;
        Ok(close(a / b, c / d, 1e-12 * a / b))
    };
    vec![("zero family is refused", zero()), ("ratio is homogeneous of degree 0", homogeneous())]
}

fn hedberg() -> Vec<Check> {
    let shells = || -> Result<bool, SsopsError> {
        Ok((0..8).all(|ell| {
            let (inner, outer): (f64, f64) = Shell::new(ell).radii();
            Shell::index_of(0.5 * (inner + outer)) == Some(ell)
        }))
    };
    let zero = || -> Result<bool, SsopsError> {
        let grid = grid_for_rho::<f64>(2, 2)?;
        let sphere = build_sphere_grid::<f64>(2, 2)?;
        Ok(averaged_maximal(&SampledField::zeros(grid), &sphere)?.max_abs() == 0.0)
    };
    vec![("shells are indexed by their midpoints", shells()), ("zero field has zero maximal function", zero())]
}

fn wave() -> Vec<Check> {
    let zero = || -> Result<bool, SsopsError> {
        let grid = GridSpec::new(3, 16, 2.0)?;
        let forcing = WaveForcing::separable(&SampledField::zeros(grid), 1.0 / 32.0, 33, |_| 1.0)?;
        let u = solve_wave(&forcing, 1.0)?;
        let ratio = duhamel_estimate_check(&forcing, 1.0, 4.0 / 3.0, 4.0, 0.5)?.ratio;
        Ok(u.max_abs() == 0.0 && ratio == 0.0)
    };
    vec![("zero forcing gives zero solution and ratio 0", zero())]
}

fn theta() -> Vec<Check> {
    let run = theta_endpoint_check(Complex::new(1.0, 0.0), 0.5, 3).map(|r| r.max_identity_discrepancy() <= 1e-9);
    vec![("analytic family meets its endpoints", run)]
}

pub fn run(command: &Command) -> Result<(), Failure> {
    let checks = match command {
        Command::Bessel { .. } => bessel(),
        Command::Kernel { .. } => kernel(),
        Command::Multiplier { .. } => multiplier_checks(),
        Command::Region { .. } => region(),
        Command::TransformCheck { .. } => transform(),
        Command::Scan { .. } => scan(),
        Command::Hedberg { .. } => hedberg(),
        Command::Wave { .. } => wave(),
        Command::ThetaCheck { .. } => theta(),
    };
    let mut failed = 0;
    for (name, outcome) in checks {
        let status = match outcome {
            Ok(true) => "ok".to_string(),
            Ok(false) => {
                failed += 1;
                "FAILED".to_string()
            }
            Err(e) => {
                failed += 1;
                format!("FAILED ({e})")
            }
        };
        println!("{} {name}: {status}", command.name());
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Selftest(failed))
    }
}
