//! Admissible exponent regions, evaluated in floating or exact rational arithmetic.
//!
//! Every predicate works on the reciprocals `1/p`, `1/q`; strict inequalities that hold with
//! equality are reported as inadmissible with the `boundary` flag set.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};
use serde::Serialize;

use crate::error::{Result, SsopsError};

/// Scalar field the region algebra is evaluated in.
pub trait RegionScalar: Clone + PartialOrd + Num + Neg<Output = Self> + Debug + Display {
    fn ratio(num: i64, den: i64) -> Self;
    /// Nearest representable value (a best rational approximation for exact types).
    fn approx_f64(x: f64) -> Option<Self>;
    fn to_f64_lossy(&self) -> f64;
    /// Equality up to the type's tolerance (`1e−12` absolute for floats, exact for rationals).
    fn close(a: &Self, b: &Self) -> bool;

    fn int(k: i64) -> Self {
        Self::ratio(k, 1)
    }
}

impl RegionScalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn approx_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn close(a: &Self, b: &Self) -> bool {
        (a - b).abs() <= 1e-12
    }
}

impl RegionScalar for f32 {
    fn ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn approx_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x as f32)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
    fn close(a: &Self, b: &Self) -> bool {
        (a - b).abs() <= 4.0 * f32::EPSILON
    }
}

impl RegionScalar for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn approx_f64(x: f64) -> Option<Self> {
        Ratio::approximate_float(x)
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn close(a: &Self, b: &Self) -> bool {
        a == b
    }
}

/// Exponent data `(n, s, α, 1/p, 1/q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionQuery<S> {
    pub n: u32,
    pub s: S,
    pub alpha: S,
    pub inv_p: S,
    /// Absent for `L^p → L^p` statements.
    pub inv_q: Option<S>,
}

impl<S: RegionScalar> RegionQuery<S> {
    /// Query from reciprocal exponents.
    pub fn new(n: u32, s: S, alpha: S, inv_p: S, inv_q: Option<S>) -> Result<Self> {
        if n < 2 {
            return Err(SsopsError::domain(format!("dimension must be at least 2, got {n}")));
        }
        let unit = |x: &S, name: &str| {
            if *x > S::zero() && *x < S::one() {
                Ok(())
            } else {
                Err(SsopsError::domain(format!("{name} must lie in (0, 1), got {x}")))
            }
        };
        unit(&inv_p, "1/p")?;
        if let Some(q) = &inv_q {
            unit(q, "1/q")?;
        }
        Ok(Self {
            n,
            s,
            alpha,
            inv_p,
            inv_q,
        })
    }

    /// Query from exponents `p`, `q` (not reciprocals).
    pub fn from_exponents(n: u32, s: S, alpha: S, p: S, q: Option<S>) -> Result<Self> {
        let recip = |x: S| {
            if x > S::one() {
                Ok(S::one() / x)
            } else {
                Err(SsopsError::domain(format!("exponents must exceed 1, got {x}")))
            }
        };
        let inv_q = q.map(recip).transpose()?;
        Self::new(n, s, alpha, recip(p)?, inv_q)
    }

    fn dim(&self) -> S {
        S::int(self.n as i64)
    }

    fn alpha_over_n(&self) -> S {
        self.alpha.clone() / self.dim()
    }

    fn require_q(&self) -> Result<S> {
        self.inv_q
            .clone()
            .ok_or_else(|| SsopsError::domain("this statement needs q"))
    }

    /// `1/q`, or `1/p` when `q` is absent.
    fn inv_q_or_p(&self) -> S {
        self.inv_q.clone().unwrap_or_else(|| self.inv_p.clone())
    }
}

/// One constraint `lower (<|≤) value (<|≤) upper`; an equality has `lower = upper = target`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint<S> {
    pub name: String,
    pub lower: Option<S>,
    pub lower_strict: bool,
    pub value: S,
    pub upper: Option<S>,
    pub upper_strict: bool,
    pub satisfied: bool,
    /// The value sits on a strict bound (within tolerance).
    pub boundary: bool,
}

impl<S: RegionScalar> Constraint<S> {
    fn interval(name: &str, lower: Option<(S, bool)>, value: S, upper: Option<(S, bool)>) -> Self {
        let mut satisfied = true;
        let mut boundary = false;
        if let Some((lo, strict)) = &lower {
            let on = S::close(lo, &value);
            boundary |= on && *strict;
            satisfied &= if *strict { value > *lo && !on } else { value >= *lo || on };
        }
        if let Some((hi, strict)) = &upper {
            let on = S::close(hi, &value);
            boundary |= on && *strict;
            satisfied &= if *strict { value < *hi && !on } else { value <= *hi || on };
        }
        Self {
            name: name.to_string(),
            lower_strict: lower.as_ref().is_some_and(|l| l.1),
            lower: lower.map(|l| l.0),
            value,
            upper_strict: upper.as_ref().is_some_and(|u| u.1),
            upper: upper.map(|u| u.0),
            satisfied,
            boundary,
        }
    }

    fn equality(name: &str, value: S, target: S) -> Self {
        let satisfied = S::close(&value, &target);
        Self {
            name: name.to_string(),
            lower: Some(target.clone()),
            lower_strict: false,
            value,
            upper: Some(target),
            upper_strict: false,
            satisfied,
            boundary: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionVerdict<S> {
    pub admissible: bool,
    pub boundary: bool,
    pub constraints: Vec<Constraint<S>>,
}

impl<S: RegionScalar> RegionVerdict<S> {
    fn from(constraints: Vec<Constraint<S>>) -> Self {
        Self {
            admissible: constraints.iter().all(|c| c.satisfied),
            boundary: constraints.iter().any(|c| c.boundary),
            constraints,
        }
    }

    /// Names of the constraints that fail.
    pub fn violated(&self) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.satisfied)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Open interval of admissible `1/p` for the `L^p_s → L^q` estimate.
pub fn theorem_one_bounds<S: RegionScalar>(n: u32, s: &S, alpha_over_n: &S) -> (S, S) {
    let n = S::int(n as i64);
    let one = S::one();
    let four_s = S::int(4) * s.clone();
    let d = S::int(2) * n.clone() - S::int(2) + four_s.clone();
    let lower = (n.clone() - one.clone()) / d.clone()
        + (four_s.clone() + n.clone() - one.clone()) / d.clone() * alpha_over_n.clone();
    let upper = (n.clone() - one.clone() + four_s) / d.clone() + (n - one) / d * alpha_over_n.clone();
    (lower, upper)
}

/// Open interval of admissible `1/p` for the `L^p_s → L^p` estimate.
pub fn theorem_two_bounds<S: RegionScalar>(n: u32, s: &S, alpha_over_n: &S) -> (S, S) {
    let n = S::int(n as i64);
    let one = S::one();
    let four_s = S::int(4) * s.clone();
    let d = S::int(2) * n.clone() - S::int(2) + four_s.clone();
    let slope = (n.clone() + one.clone()) / d.clone() * alpha_over_n.clone();
    let lower = (n.clone() - one.clone()) / d.clone() - slope.clone();
    let upper = (n - one + four_s) / d + slope;
    (lower, upper)
}

fn check_alpha_range<S: RegionScalar>(q: &RegionQuery<S>, upper: S, upper_name: &str) -> Result<()> {
    if !(q.alpha > S::zero() && q.alpha < upper) {
        return Err(SsopsError::domain(format!(
            "hypothesis 0 < α < {upper_name} fails for α = {}",
            q.alpha
        )));
    }
    Ok(())
}

fn check_positive_s<S: RegionScalar>(q: &RegionQuery<S>) -> Result<()> {
    if !(q.s > S::zero()) {
        return Err(SsopsError::domain(format!("hypothesis s > 0 fails for s = {}", q.s)));
    }
    Ok(())
}

/// `α/n = 1/p − 1/q` and `1/p` strictly inside [`theorem_one_bounds`].
pub fn theorem_one<S: RegionScalar>(q: &RegionQuery<S>) -> Result<RegionVerdict<S>> {
    check_alpha_range(q, q.dim(), "n")?;
    check_positive_s(q)?;
    let inv_q = q.require_q()?;
    let t = q.alpha_over_n();
    let (lo, hi) = theorem_one_bounds(q.n, &q.s, &t);
    Ok(RegionVerdict::from(vec![
        Constraint::equality("alpha/n = 1/p - 1/q", q.inv_p.clone() - inv_q, t),
        Constraint::interval("1/p interval", Some((lo, true)), q.inv_p.clone(), Some((hi, true))),
    ]))
}

/// `1/p` strictly inside [`theorem_two_bounds`], for `0 < α < ((n−1)/(n+1)) n` and `p = q`.
pub fn theorem_two<S: RegionScalar>(q: &RegionQuery<S>) -> Result<RegionVerdict<S>> {
    let n = q.dim();
    let limit = (n.clone() - S::one()) / (n.clone() + S::one()) * n;
    if q.alpha >= limit {
        return Err(SsopsError::domain(format!(
            "α = {} ≥ ((n−1)/(n+1))n = {limit}; use remark_one",
            q.alpha
        )));
    }
    check_alpha_range(q, limit, "((n−1)/(n+1))n")?;
    check_positive_s(q)?;
    let mut constraints = Vec::new();
    if let Some(inv_q) = &q.inv_q {
        constraints.push(Constraint::equality("p = q", inv_q.clone(), q.inv_p.clone()));
    }
    let (lo, hi) = theorem_two_bounds(q.n, &q.s, &q.alpha_over_n());
    constraints.push(Constraint::interval(
        "1/p interval",
        Some((lo, true)),
        q.inv_p.clone(),
        Some((hi, true)),
    ));
    Ok(RegionVerdict::from(constraints))
}

/// `((n−1)/(n+1)) n ≤ α < n`, `1 < p < ∞`, `p = q`.
pub fn remark_one<S: RegionScalar>(q: &RegionQuery<S>) -> Result<RegionVerdict<S>> {
    let n = q.dim();
    let limit = (n.clone() - S::one()) / (n.clone() + S::one()) * n.clone();
    let mut constraints = Vec::new();
    if let Some(inv_q) = &q.inv_q {
        constraints.push(Constraint::equality("p = q", inv_q.clone(), q.inv_p.clone()));
    }
    constraints.push(Constraint::interval(
        "alpha range",
        Some((limit, false)),
        q.alpha.clone(),
        Some((n, true)),
    ));
    constraints.push(Constraint::interval(
        "1/p in (0, 1)",
        Some((S::zero(), true)),
        q.inv_p.clone(),
        Some((S::one(), true)),
    ));
    Ok(RegionVerdict::from(constraints))
}

/// `α/n ≥ 1/p − 1/q` for `1 < p ≤ q < ∞`.
pub fn lemma_one<S: RegionScalar>(q: &RegionQuery<S>) -> Result<RegionVerdict<S>> {
    check_alpha_range(q, q.dim(), "n")?;
    let inv_q = q.inv_q_or_p();
    if inv_q > q.inv_p {
        return Err(SsopsError::domain("hypothesis p ≤ q fails"));
    }
    Ok(RegionVerdict::from(vec![Constraint::interval(
        "1/p - 1/q <= alpha/n",
        None,
        q.inv_p.clone() - inv_q,
        Some((q.alpha_over_n(), false)),
    )]))
}

/// The `L^p → L^q` estimate for the s-weighted kernel composed with the Bessel potential.
///
/// `s ≤ 1/2`: `(1−s)(α/n) = 1/p − 1/q`, `1/2 + (α/n)(1/2 − s) ≤ 1/p ≤ 1/2 + α/(2n)`;
/// `s ≥ 1/2`: `α/(2n) = 1/p − 1/q`, `1/2 ≤ 1/p ≤ 1/2 + α/(2n)`.
pub fn lemma_two<S: RegionScalar>(q: &RegionQuery<S>) -> Result<RegionVerdict<S>> {
    check_alpha_range(q, q.dim(), "n")?;
    if q.s < S::zero() {
        return Err(SsopsError::domain(format!("hypothesis s ≥ 0 fails for s = {}", q.s)));
    }
    let inv_q = q.inv_q_or_p();
    let t = q.alpha_over_n();
    let half = S::ratio(1, 2);
    let top = half.clone() + t.clone() / S::int(2);
    let (gap, bottom) = if q.s <= half {
        (
            (S::one() - q.s.clone()) * t.clone(),
            half.clone() + t * (half.clone() - q.s.clone()),
        )
    } else {
        (t / S::int(2), half)
    };
    Ok(RegionVerdict::from(vec![
        Constraint::equality("gap = 1/p - 1/q", q.inv_p.clone() - inv_q, gap),
        Constraint::interval("1/p interval", Some((bottom, false)), q.inv_p.clone(), Some((top, false))),
    ]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonRow<S> {
    pub alpha_over_n: S,
    pub inv_p_lower: S,
    pub inv_p_upper: S,
    pub s: S,
    pub n: u32,
}

/// [`theorem_one_bounds`] at `α/n = k/(steps−1)`, `k = 0, …, steps−1`; the end rows are the
/// limits `α → 0` and `α → n` of the open range.
pub fn region_polygon<S: RegionScalar>(n: u32, s: S, steps: usize) -> Result<Vec<PolygonRow<S>>> {
    if steps < 2 {
        return Err(SsopsError::domain("need at least two steps"));
    }
    if n < 2 {
        return Err(SsopsError::domain(format!("dimension must be at least 2, got {n}")));
    }
    let last = (steps - 1) as i64;
    Ok((0..=last)
        .map(|k| {
            let t = S::ratio(k, last);
            let (lo, hi) = theorem_one_bounds(n, &s, &t);
            PolygonRow {
                alpha_over_n: t,
                inv_p_lower: lo,
                inv_p_upper: hi,
                s: s.clone(),
                n,
            }
        })
        .collect())
}

/// CSV with columns `alpha_over_n,inv_p_lower,inv_p_upper,s,n`.
pub fn polygon_csv<S: RegionScalar>(rows: &[PolygonRow<S>]) -> String {
    let mut out = String::from("alpha_over_n,inv_p_lower,inv_p_upper,s,n\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_num(r.alpha_over_n.to_f64_lossy()),
            fmt_num(r.inv_p_lower.to_f64_lossy()),
            fmt_num(r.inv_p_upper.to_f64_lossy()),
            fmt_num(r.s.to_f64_lossy()),
            r.n
        ));
    }
    out
}

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.15}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

/// The admissible set in the `(1/p, 1/q)` square for fixed `(n, s)`, with the segment for `α`
/// highlighted.
pub fn region_svg(n: u32, s: f64, alpha: f64) -> Result<String> {
    let t = alpha / n as f64;
    if !(t > 0.0 && t < 1.0) {
        return Err(SsopsError::domain(format!("need 0 < α < n, got α = {alpha}")));
    }
    let (l0, u0) = theorem_one_bounds(n, &s, &0.0);
    let (lo, hi) = theorem_one_bounds(n, &s, &t);
    const SIZE: f64 = 400.0;
    const PAD: f64 = 40.0;
    let px = |x: f64| PAD + x * SIZE;
    let py = |y: f64| PAD + (1.0 - y) * SIZE;
    let pt = |x: f64, y: f64| format!("{:.2},{:.2}", px(x), py(y));
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{w}\" viewBox=\"0 0 {w} {w}\">\n",
        w = SIZE + 2.0 * PAD
    ));
    svg.push_str(&format!(
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    ));
    // Union over α of the open segments 1/q = 1/p − α/n: the triangle with apex (1, 0).
    svg.push_str(&format!(
        "<polygon points=\"{} {} {}\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"#3182bd\"/>\n",
        pt(l0, l0),
        pt(u0, u0),
        pt(1.0, 0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#de2d26\" stroke-width=\"3\"/>\n",
        px(lo),
        py(lo - t),
        px(hi),
        py(hi - t)
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">1/p</text>\n",
        px(0.5),
        SIZE + 2.0 * PAD - 8.0
    ));
    svg.push_str(&format!(
        "<text x=\"12\" y=\"{:.2}\" transform=\"rotate(-90 12 {:.2})\" text-anchor=\"middle\">1/q</text>\n",
        py(0.5),
        py(0.5)
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\">n = {n}, s = {s}, alpha = {alpha}</text>\n",
        px(0.5)
    ));
    svg.push_str("</svg>\n");
    Ok(svg)
}
