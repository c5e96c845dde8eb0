//! Shifted fractional-part sums S(x, α), their window average σ(u), integer points
//! on shifted hyperbolas (u + ξ)v = x, and a grid search over shifts of x.

use crate::dd::CompensatedSum;
use crate::divisor::{divisors, isqrt};
use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::sawtooth::rho;

/// S(x, α) = Σ_{a≤√x} (1/2 − {x/(a+α)}).
pub fn s_sum(x: f64, alpha: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return domain(format!("s_sum needs finite x >= 1, got {x}"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return domain(format!("shift alpha must lie in [0, 1), got {alpha}"));
    }
    let top = x.sqrt().floor() as u64;
    let acc: CompensatedSum = (1..=top).map(|a| rho(x / (a as f64 + alpha))).collect();
    Ok(acc.value())
}

/// S(x, 0) for integer x with exact fractional parts (x mod a)/a.
pub fn s_sum_int(x: u64) -> f64 {
    let acc: CompensatedSum = (1..=isqrt(x)).map(|a| 0.5 - (x % a) as f64 / a as f64).collect();
    acc.value()
}

/// A discontinuity of α ↦ {x/(a+α)}: x/(a + alpha) = b exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Breakpoint {
    pub a: u64,
    pub b: u64,
    pub alpha: Rational,
}

fn breakpoints_in(x: Rational, a: u64, lo: f64, hi: f64, include_hi: bool) -> Result<Vec<Breakpoint>> {
    if x.numer() <= 0 {
        return domain("x must be positive");
    }
    if a == 0 || !(lo < hi) {
        return domain(format!("need a >= 1 and lo < hi, got a={a} [{lo}, {hi}]"));
    }
    let af = a as f64;
    if af + lo <= 0.0 {
        return domain("window reaches a + alpha <= 0");
    }
    let xf = x.to_f64();
    // candidate levels with one unit of slack on either side, then exact filtering
    let b_min = ((xf / (af + hi)).floor() as i64 - 1).max(1);
    let b_max = (xf / (af + lo)).ceil() as i64 + 1;
    let a_rat = Rational::integer(a as i64);
    let mut out = Vec::new();
    for b in (b_min..=b_max).rev() {
        let alpha = x.checked_div(Rational::integer(b))?.checked_sub(a_rat)?;
        let af64 = alpha.to_f64();
        let inside = af64 >= lo && if include_hi { af64 <= hi } else { af64 < hi };
        if inside {
            out.push(Breakpoint { a, b: b as u64, alpha });
        }
    }
    Ok(out)
}

/// All α in `[lo, hi)` at which x/(a + α) is a positive integer, ascending.
pub fn breakpoints(x: Rational, a: u64, lo: f64, hi: f64) -> Result<Vec<Breakpoint>> {
    breakpoints_in(x, a, lo, hi, false)
}

/// ln(1+t) − t without cancellation for small t.
fn ln1p_minus(t: f64) -> f64 {
    if t.abs() < 1e-2 {
        let mut term = t;
        let mut acc = 0.0;
        for k in 2..=12 {
            term *= -t;
            acc += term / k as f64;
        }
        acc
    } else {
        t.ln_1p() - t
    }
}

/// ∫_p^q (1/2 − (x/(a+α) − b)) dα where x/(a+α) − b lies in [0, 1) on (p, q)
/// and equals `y_left` at p.
fn piece_integral(a: f64, b: f64, p: f64, q: f64, y_left: f64) -> f64 {
    let h = q - p;
    if h <= 0.0 {
        return 0.0;
    }
    let base = a + p;
    let t = h / base;
    // ∫(x/(a+α) − b) = base·[b(ln(1+t) − t) + y_left·ln(1+t)], using x = base·(b + y_left)
    let frac_integral = base * (b * ln1p_minus(t) + y_left * t.ln_1p());
    0.5 * h - frac_integral
}

/// Which a-terms enter the smoothed sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermFilter {
    All,
    /// Skip a-terms whose window [u−δ, u+δ] contains a breakpoint.
    ContinuousOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaValue {
    pub value: f64,
    pub terms: usize,
    pub skipped: usize,
}

/// σ(u) = (1/2δ) ∫_{u−δ}^{u+δ} S(x, α) dα with each term integrated piecewise in closed form.
pub fn sigma_smoothed_with(x: Rational, u: f64, delta: f64, filter: TermFilter) -> Result<SigmaValue> {
    if !(0.0..1.0).contains(&u) {
        return domain(format!("u must lie in [0, 1), got {u}"));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return domain(format!("delta must lie in (0, 1/2), got {delta}"));
    }
    if x < Rational::integer(1) {
        return domain("sigma_smoothed needs x >= 1");
    }
    let xf = x.to_f64();
    let (lo, hi) = (u - delta, u + delta);
    let top = isqrt(x.floor() as u64);
    let mut acc = CompensatedSum::new();
    let mut skipped = 0;
    for a in 1..=top {
        let bps = breakpoints_in(x, a, lo, hi, true)?;
        if filter == TermFilter::ContinuousOnly && !bps.is_empty() {
            skipped += 1;
            continue;
        }
        let af = a as f64;
        let mut left = lo;
        let mut level = match bps.first() {
            Some(bp) => bp.b as f64,
            None => (xf / (af + 0.5 * (lo + hi))).floor(),
        };
        let mut y_left = xf / (af + lo) - level;
        for bp in &bps {
            let at = bp.alpha.to_f64();
            acc.add(piece_integral(af, level, left, at, y_left));
            left = at;
            level = bp.b as f64 - 1.0;
            y_left = 1.0;
        }
        acc.add(piece_integral(af, level, left, hi, y_left));
    }
    Ok(SigmaValue { value: acc.value() / (2.0 * delta), terms: top as usize - skipped, skipped })
}

pub fn sigma_smoothed(x: Rational, u: f64, delta: f64) -> Result<f64> {
    sigma_smoothed_with(x, u, delta, TermFilter::All).map(|s| s.value)
}

/// The shift ξ, either an exact rational a/q or a double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftValue {
    Rational(Rational),
    Real(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatchMode {
    ExactRational,
    RealWithTolerance(f64),
}

/// A request for integer points on (u + shift)·v = x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftQuery {
    pub x: u64,
    pub shift: ShiftValue,
    pub mode: MatchMode,
}

impl ShiftQuery {
    pub fn rational(x: u64, shift: Rational) -> Result<Self> {
        check_rational_shift(shift)?;
        Ok(ShiftQuery { x, shift: ShiftValue::Rational(shift), mode: MatchMode::ExactRational })
    }

    pub fn real(x: u64, xi: f64, tol: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&xi) || !(tol >= 0.0) {
            return domain(format!("need 0 <= xi < 1 and tol >= 0, got xi={xi} tol={tol}"));
        }
        Ok(ShiftQuery { x, shift: ShiftValue::Real(xi), mode: MatchMode::RealWithTolerance(tol) })
    }

    pub fn points(&self) -> Result<Vec<(u64, u64)>> {
        match (self.shift, self.mode) {
            (ShiftValue::Rational(r), MatchMode::ExactRational) => shifted_lattice_rational(self.x, r),
            (ShiftValue::Rational(r), MatchMode::RealWithTolerance(tol)) => {
                shifted_lattice_real(self.x, r.to_f64(), tol)
            }
            (ShiftValue::Real(xi), MatchMode::RealWithTolerance(tol)) => shifted_lattice_real(self.x, xi, tol),
            (ShiftValue::Real(_), MatchMode::ExactRational) => {
                domain("exact mode needs a rational shift")
            }
        }
    }
}

fn check_rational_shift(shift: Rational) -> Result<()> {
    if shift.numer() < 0 || shift.numer() >= shift.denom() {
        return domain(format!("shift must lie in [0, 1), got {shift}"));
    }
    Ok(())
}

/// Integer points u, v ≥ 1 on (u + a/q)v = x, via divisors d ≡ a (mod q), d > a, of qx.
pub fn shifted_lattice_rational(x: u64, shift: Rational) -> Result<Vec<(u64, u64)>> {
    if x == 0 {
        return domain("x must be positive");
    }
    check_rational_shift(shift)?;
    let (a, q) = (shift.numer() as u64, shift.denom() as u64);
    let qx = q.checked_mul(x).filter(|&v| v <= i64::MAX as u64).ok_or(Error::Overflow("q*x"))?;
    let mut pts: Vec<(u64, u64)> = divisors(qx)
        .into_iter()
        .filter(|&d| d > a && d % q == a % q)
        .map(|d| ((d - a) / q, qx / d))
        .collect();
    pts.sort_unstable();
    Ok(pts)
}

/// Integer points with |x/v − ξ − u| ≤ tol, u ≥ 1, scanning v = 1..=x.
///
/// The residual is evaluated as fma(−ξ, v, x − u·v)/v, which is exactly zero iff
/// (u + ξ)v = x for the double ξ as given; `tol = 0` is therefore an exact test.
pub fn shifted_lattice_real(x: u64, xi: f64, tol: f64) -> Result<Vec<(u64, u64)>> {
    if x == 0 || x > (1u64 << 52) {
        return domain(format!("x must lie in [1, 2^52], got {x}"));
    }
    if !(0.0..1.0).contains(&xi) || !(tol >= 0.0) {
        return domain(format!("need 0 <= xi < 1 and tol >= 0, got xi={xi} tol={tol}"));
    }
    let xf = x as f64;
    let mut pts = Vec::new();
    for v in 1..=x {
        let vf = v as f64;
        let u = (xf / vf - xi).round();
        if u < 1.0 {
            // x/v − ξ only shrinks as v grows
            break;
        }
        let resid = (-xi).mul_add(vf, xf - u * vf) / vf;
        if resid.abs() <= tol {
            pts.push((u as u64, v));
        }
    }
    pts.sort_unstable();
    Ok(pts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftSearch {
    pub theta: f64,
    pub value: f64,
    pub baseline: f64,
}

/// Grid minimizer of |S(x + θ, 0)| over θ = 0, step, 2·step, … ≤ theta_max.
pub fn shift_search(x: u64, theta_max: f64, grid_step: f64) -> Result<ShiftSearch> {
    if x == 0 {
        return domain("x must be positive");
    }
    let cap = 4.0 * (x as f64).powf(0.25);
    if !(theta_max >= 0.0) || theta_max > cap * (1.0 + 1e-12) {
        return domain(format!("theta_max must lie in [0, 4 x^(1/4) = {cap}], got {theta_max}"));
    }
    if !(grid_step > 0.0) {
        return domain("grid_step must be positive");
    }
    let baseline = s_sum_int(x).abs();
    let mut best = ShiftSearch { theta: 0.0, value: baseline, baseline };
    let steps = (theta_max / grid_step + 1e-9).floor() as u64;
    for i in 1..=steps {
        let theta = i as f64 * grid_step;
        let v = s_sum(x as f64 + theta, 0.0)?.abs();
        if v < best.value {
            best.theta = theta;
            best.value = v;
        }
    }
    Ok(best)
}
