use serde::Serialize;
use ssops::fields::{save_field, GridSpec, SampledField};
use ssops::kernels::{kernel_value, multiplier, theta_endpoint_check, transform_check, KernelSpec};
use ssops::maximal::maximal_report;
use ssops::regions::{
    region_polygon, region_svg, polygon_csv, remark_one, theorem_one, theorem_one_bounds, theorem_two, PolygonRow,
    RegionQuery, RegionScalar,
};
use ssops::scan::{run_scan, TestFamily};
use ssops::specfun::{bessel_j, BesselOrder};
use ssops::wave::{load_forcing, WaveForcing, WaveSolver, duhamel_estimate_with};
use ssops::{Rational64, SsopsError};

use crate::output::{emit, json, profile_svg, table, Format};
use crate::{Cli, Command, Failure, Family, KernelArgs};

pub fn kernel_spec(k: &KernelArgs) -> Result<KernelSpec<f64>, SsopsError> {
    match k.family {
        Family::Standard => KernelSpec::standard(k.alpha, k.n),
        Family::Natural => KernelSpec::natural(k.alpha, k.n),
        Family::Flat => KernelSpec::flat(k.alpha, k.n),
        Family::SWeighted => KernelSpec::s_weighted(k.alpha, k.s, k.n),
        Family::BesselPotential => KernelSpec::bessel_potential(k.s, k.n),
        Family::Theta => KernelSpec::theta(k.alpha, k.s, k.z, k.n),
    }
}

#[derive(Serialize)]
struct BesselRow {
    mu: f64,
    nu: f64,
    rho: f64,
    re: f64,
    im: f64,
    method: ssops::specfun::BesselMethod,
    est_abs_error: f64,
}

#[derive(Serialize)]
struct ProfileRow {
    r: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ProfileReport<'a> {
    label: &'a str,
    n: usize,
    alpha_re: f64,
    alpha_im: f64,
    rows: &'a [ProfileRow],
}

/// `points` equally spaced values on `[0, end]`.
fn linspace(end: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points < 2 {
        return Err(Failure::Usage("need at least two points".into()));
    }
    Ok((0..points).map(|k| end * k as f64 / (points - 1) as f64).collect())
}

fn profile(k: &KernelArgs, rows: Vec<ProfileRow>, format: Format, label: &str) -> Result<String, Failure> {
    let report = ProfileReport {
        label,
        n: k.n,
        alpha_re: k.alpha.re,
        alpha_im: k.alpha.im,
        rows: &rows,
    };
    match format {
        Format::Svg => {
            let pts: Vec<_> = rows.iter().map(|r| (r.r, r.re, r.im)).collect();
            Ok(profile_svg(label, &pts))
        }
        _ => table(format, &rows, &report),
    }
}

fn region_rows(n: u32, s: f64, alpha: Option<f64>, steps: usize) -> Result<Vec<PolygonRow<Rational64>>, Failure> {
    let exact = |x: f64, what: &str| {
        Rational64::approx_f64(x).ok_or_else(|| Failure::Core(SsopsError::Domain(format!("{what} = {x} is not representable"))))
    };
    let s = exact(s, "s")?;
    let mut rows = region_polygon(n, s, steps)?;
    if let Some(alpha) = alpha {
        let t = exact(alpha, "alpha")? / Rational64::from_integer(n as i64);
        if !rows.iter().any(|r| r.alpha_over_n == t) {
            let (lo, hi) = theorem_one_bounds(n, &s, &t);
            let at = rows.iter().position(|r| r.alpha_over_n > t).unwrap_or(rows.len());
            rows.insert(
                at,
                PolygonRow {
                    alpha_over_n: t,
                    inv_p_lower: lo,
                    inv_p_upper: hi,
                    s,
                    n,
                },
            );
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct FloatPolygonRow {
    alpha_over_n: f64,
    inv_p_lower: f64,
    inv_p_upper: f64,
    s: f64,
    n: u32,
}

pub fn classify(n: u32, s: f64, alpha: f64, inv_p: f64, inv_q: f64) -> Result<ssops::regions::RegionVerdict<f64>, SsopsError> {
    let query = RegionQuery::<f64>::new(n, s, alpha, inv_p, Some(inv_q))?;
    if inv_p != inv_q {
        return theorem_one(&query);
    }
    if alpha < (n as f64 - 1.0) / (n as f64 + 1.0) * n as f64 {
        theorem_two(&query)
    } else {
        remark_one(&query)
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let format = cli.format.unwrap_or(Format::Csv);
    let text = match &cli.command {
        Command::Bessel { mu, nu, rho } => {
            let order = BesselOrder::new(*mu, *nu);
            let rows = rho
                .iter()
                .map(|&r| {
                    let v = bessel_j(order, r)?;
                    Ok(BesselRow {
                        mu: *mu,
                        nu: *nu,
                        rho: r,
                        re: v.value.re,
                        im: v.value.im,
                        method: v.method,
                        est_abs_error: v.est_abs_error,
                    })
                })
                .collect::<Result<Vec<_>, SsopsError>>()?;
            if rows.len() == 1 {
                table(format, &rows, &rows[0])?
            } else {
                table(format, &rows, &rows)?
            }
        }
        Command::Kernel { kernel, points } => {
            let spec = kernel_spec(kernel)?;
            let rows = linspace(1.0, *points + 1)?
                .into_iter()
                .take(*points)
                .map(|r| {
                    let mut x = vec![0.0; kernel.n];
                    x[0] = r;
                    let v = kernel_value(&spec, &x)?;
                    Ok(ProfileRow { r, re: v.re, im: v.im })
                })
                .collect::<Result<Vec<_>, SsopsError>>()?;
            profile(kernel, rows, format, "kernel")?
        }
        Command::Multiplier { kernel, rho_max, points } => {
            let m = multiplier(&kernel_spec(kernel)?);
            let rows = linspace(*rho_max, *points)?
                .into_iter()
                .map(|r| {
                    let v = m.eval(r)?;
                    Ok(ProfileRow { r, re: v.re, im: v.im })
                })
                .collect::<Result<Vec<_>, SsopsError>>()?;
            profile(kernel, rows, format, m.label())?
        }
        Command::Region { n, s, alpha, steps, emit: fmt, inv_p, inv_q } => {
            let format = fmt.or(cli.format).unwrap_or(Format::Csv);
            if let (Some(alpha), Some(inv_p), Some(inv_q)) = (alpha, inv_p, inv_q) {
                let verdict = classify(*n, *s, *alpha, *inv_p, *inv_q)?;
                table(format, &verdict.constraints, &verdict)?
            } else {
                match format {
                    Format::Svg => {
                        let alpha = alpha.ok_or_else(|| Failure::Usage("SVG output needs --alpha".into()))?;
                        region_svg(*n, *s, alpha)?
                    }
                    Format::Csv => polygon_csv(&region_rows(*n, *s, *alpha, *steps)?),
                    Format::Json => {
                        let rows: Vec<FloatPolygonRow> = region_rows(*n, *s, *alpha, *steps)?
                            .iter()
                            .map(|r| FloatPolygonRow {
                                alpha_over_n: r.alpha_over_n.to_f64_lossy(),
                                inv_p_lower: r.inv_p_lower.to_f64_lossy(),
                                inv_p_upper: r.inv_p_upper.to_f64_lossy(),
                                s: r.s.to_f64_lossy(),
                                n: r.n,
                            })
                            .collect();
                        json(&rows)?
                    }
                }
            }
        }
        Command::TransformCheck { kernel, grid, half_width, xi_max, tolerance } => {
            let spec = kernel_spec(kernel)?;
            let grid = GridSpec::new(kernel.n, *grid, *half_width)?;
            let report = transform_check(&spec, grid, *xi_max)?;
            let text = table(format, std::slice::from_ref(&report), &report)?;
            if !(report.relative_mismatch <= *tolerance) {
                emit(cli.output.as_deref(), &text)?;
                return Err(SsopsError::Accuracy {
                    achieved: report.relative_mismatch,
                    context: format!("kernel transform vs multiplier, tolerance {tolerance}"),
                }
                .into());
            }
            text
        }
        Command::Scan {
            n,
            alpha,
            s,
            inv_p,
            inv_q,
            family,
            scales,
            coarsest,
            finest,
            seed,
            grid,
            half_width,
            diagnostic,
        } => {
            let fam = match scales {
                Some(scales) => TestFamily::new(*family, scales.clone(), *seed)?,
                None => TestFamily::dyadic(*family, *coarsest, *finest, *seed)?,
            };
            let points = grid.unwrap_or(if *n == 2 { 512 } else { 128 });
            let grid = GridSpec::new(*n, points, *half_width)?;
            let report = run_scan(*n, *alpha, *s, inv_p.recip(), inv_q.recip(), &fam, grid, *diagnostic)?;
            if !report.inside_region {
                eprintln!(
                    "diagnostic run outside the hypotheses: slope {:.4}{}",
                    report.slope,
                    if report.growth_flagged { " (growth flagged)" } else { "" }
                );
            }
            table(format, &report.rows, &report)?
        }
        Command::Hedberg { n, alpha, inv_p, inv_q, rho, samples, seed } => {
            let rows = maximal_report(*n, *alpha, inv_p.recip(), inv_q.recip(), rho, *samples, *seed)?;
            table(format, &rows, &rows)?
        }
        Command::Wave { forcing, t, dt, inv_p, inv_q, s, solution } => {
            let forcing = match forcing {
                Some(path) => load_forcing::<f64>(path)?,
                None => builtin_forcing(*t, *dt)?,
            };
            let solver = WaveSolver::new(forcing)?;
            let report = duhamel_estimate_with(&solver, *t, inv_p.recip(), inv_q.recip(), *s)?;
            if let Some(path) = solution {
                save_field(&solver.solve(*t)?, path)?;
            }
            table(format, std::slice::from_ref(&report), &report)?
        }
        Command::ThetaCheck { n, alpha, s } => {
            let report = theta_endpoint_check(*alpha, *s, *n)?;
            table(format, std::slice::from_ref(&report), &report)?
        }
    };
    emit(cli.output.as_deref(), &text)
}

/// Gaussian in space (σ = 0.35) on 32³, `[−2, 2)³`, times `sin²(πt/t₀)` on `[0, t₀]`, `t₀ = t/2`.
pub fn builtin_forcing(t: f64, dt: f64) -> Result<WaveForcing<f64>, SsopsError> {
    if !(t > 0.0 && dt > 0.0) {
        return Err(SsopsError::Domain(format!("need t > 0 and dt > 0, got t = {t}, dt = {dt}")));
    }
    let steps = (t / dt).round();
    if (steps * dt - t).abs() > 1e-9 * t {
        return Err(SsopsError::Domain(format!("t = {t} is not a multiple of dt = {dt}")));
    }
    let grid = GridSpec::new(3, 32, 2.0)?;
    let spatial = SampledField::from_real_fn(grid, |x| {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        (-r2 / (2.0 * 0.35 * 0.35)).exp()
    });
    let t0 = t / 2.0;
    WaveForcing::separable(&spatial, dt, steps as usize + 1, move |s| {
        if s < t0 {
            (std::f64::consts::PI * s / t0).sin().powi(2)
        } else {
            0.0
        }
    })
}
