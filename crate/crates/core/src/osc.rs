//! Oscillatory integrals ∫ e^{2πi f(u)} du, the first- and second-derivative bound
//! checks, the integrals I_{p,m} over [N, 2N+1], their stationary-phase leading
//! term, and the smoothed double sums S_N.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;

use crate::dd::CompensatedComplexSum;
use crate::error::{domain, Error, Result};
use crate::quad;
use crate::sawtooth::{t_coeff, SmoothKernel};

/// A real phase function with its derivative.
pub trait Phase {
    fn value(&self, u: f64) -> f64;
    fn slope(&self, u: f64) -> f64;
}

/// Plain closures get a central-difference derivative.
impl<F: Fn(f64) -> f64> Phase for F {
    fn value(&self, u: f64) -> f64 {
        self(u)
    }

    fn slope(&self, u: f64) -> f64 {
        let h = 1e-6 * u.abs().max(1.0);
        (self(u + h) - self(u - h)) / (2.0 * h)
    }
}

/// e^{2πi t}, reducing t mod 1 first.
#[inline]
pub fn cis_turns(t: f64) -> Complex64 {
    let frac = t - t.round();
    Complex64::from_polar(1.0, TAU * frac)
}

/// Upper limit on panels per integral.
pub const MAX_PANELS: usize = 4_000_000;
const MAX_INTERVALS_PER_PANEL: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscResult {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Splits [a, b] into panels no wider than 1/(10·max|f′|) over the panel.
fn panels<P: Phase + ?Sized>(phase: &P, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut lo = a;
    let span = b - a;
    while lo < b {
        let mut w = span;
        let mut s = phase.slope(lo).abs();
        // grow the slope estimate until the panel is consistent with it
        for _ in 0..8 {
            if s > 0.0 {
                w = w.min(1.0 / (10.0 * s));
            }
            let hi = (lo + w).min(b);
            let s_probe = phase.slope(hi).abs().max(phase.slope(0.5 * (lo + hi)).abs());
            if s_probe <= s * 1.25 || s_probe == 0.0 {
                break;
            }
            s = s_probe;
        }
        let hi = if b - (lo + w) < 1e-9 * w { b } else { (lo + w).min(b) };
        out.push((lo, hi));
        if out.len() > MAX_PANELS {
            return Err(Error::Resource(format!("more than {MAX_PANELS} panels on [{a}, {b}]")));
        }
        lo = hi;
    }
    Ok(out)
}

/// ∫_a^b e^{2πi f(u)} du by panel-adaptive Gauss–Kronrod, absolute error ≤ tol
/// or the rounding level of f, whichever is larger.
pub fn osc_integral<P: Phase + ?Sized>(phase: &P, a: f64, b: f64, tol: f64) -> Result<OscResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return domain(format!("need finite a < b, got [{a}, {b}]"));
    }
    if !(tol > 0.0) {
        return domain("tolerance must be positive");
    }
    let panels = panels(phase, a, b)?;
    let span = b - a;
    let mut acc = CompensatedComplexSum::new();
    let mut error = 0.0;
    for &(lo, hi) in &panels {
        // e^{2πif} cannot be resolved below the rounding of f itself
        let size = phase.value(lo).abs().max(phase.value(hi).abs()).max(1.0);
        let noise = 16.0 * f64::EPSILON * TAU * size * (hi - lo);
        let share = (tol * (hi - lo) / span).max(noise);
        let r = quad::integrate(|u| cis_turns(phase.value(u)), lo, hi, share, MAX_INTERVALS_PER_PANEL)?;
        acc.add(r.value);
        error += r.error;
    }
    Ok(OscResult { value: acc.value(), error, panels: panels.len() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub magnitude: f64,
    pub bound: f64,
    pub pass: bool,
}

/// |∫ e^{2πif}| ≤ 4/δ for f′ monotone with f′ ≥ δ > 0 on [a, b]; δ is certified by the caller.
pub fn check_first_derivative_bound<P: Phase + ?Sized>(
    phase: &P,
    a: f64,
    b: f64,
    delta: f64,
    tol: f64,
) -> Result<BoundCheck> {
    if !(delta > 0.0) {
        return domain("delta must be positive");
    }
    let magnitude = osc_integral(phase, a, b, tol)?.value.norm();
    let bound = 4.0 / delta;
    Ok(BoundCheck { magnitude, bound, pass: magnitude <= bound + tol })
}

/// |∫ e^{2πif}| ≤ 12/√A for f″ ≥ A > 0 on [a, b]; A is certified by the caller.
pub fn check_second_derivative_bound<P: Phase + ?Sized>(
    phase: &P,
    a: f64,
    b: f64,
    curvature: f64,
    tol: f64,
) -> Result<BoundCheck> {
    if !(curvature > 0.0) {
        return domain("curvature bound A must be positive");
    }
    let magnitude = osc_integral(phase, a, b, tol)?.value.norm();
    let bound = 12.0 / curvature.sqrt();
    Ok(BoundCheck { magnitude, bound, pass: magnitude <= bound + tol })
}

/// Sign of the linear part of the I_{p,m} phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    /// m·x/u − p·u
    Paper,
    /// m·x/u + p·u, stationary at u* = √(mx/p)
    Stationary,
}

/// One integral I_{p,m} = ∫_N^{2N+1} e^{2πi(m x/u ∓ p u)} du.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscSpec {
    pub m: u64,
    pub p: i64,
    pub n: f64,
    pub x: f64,
    pub sign: PhaseSign,
}

impl OscSpec {
    pub fn interval(&self) -> (f64, f64) {
        (self.n, 2.0 * self.n + 1.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.n > 0.0) || !(self.x > 0.0) || !self.n.is_finite() || !self.x.is_finite() {
            return domain(format!("need N > 0 and x > 0, got N={} x={}", self.n, self.x));
        }
        Ok(())
    }

    /// α₀ = mx/N²
    pub fn alpha0(&self) -> f64 {
        self.m as f64 * self.x / (self.n * self.n)
    }

    /// β₀ = 2mx/N²
    pub fn beta0(&self) -> f64 {
        2.0 * self.alpha0()
    }

    /// u* = √(mx/p) for the stationary convention with m, p > 0.
    pub fn stationary_point(&self) -> Option<f64> {
        (self.sign == PhaseSign::Stationary && self.m > 0 && self.p > 0)
            .then(|| (self.m as f64 * self.x / self.p as f64).sqrt())
    }
}

impl Phase for OscSpec {
    fn value(&self, u: f64) -> f64 {
        let lin = self.p as f64 * u;
        let hyp = self.m as f64 * self.x / u;
        match self.sign {
            PhaseSign::Paper => hyp - lin,
            PhaseSign::Stationary => hyp + lin,
        }
    }

    fn slope(&self, u: f64) -> f64 {
        let hyp = -(self.m as f64) * self.x / (u * u);
        match self.sign {
            PhaseSign::Paper => hyp - self.p as f64,
            PhaseSign::Stationary => hyp + self.p as f64,
        }
    }
}

/// I_{p,m} by quadrature.
pub fn i_pm(spec: &OscSpec, tol: f64) -> Result<Complex64> {
    spec.validate()?;
    let (a, b) = spec.interval();
    Ok(osc_integral(spec, a, b, tol)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryTerm {
    /// e^{iπ/4} (mx)^{1/4} p^{−3/4} e^{4πi√(mpx)} / √2, the leading stationary-phase term.
    pub main: Complex64,
    /// The same expression without the 1/√2 from φ″(u*) = 2p^{3/2}/(mx)^{1/2}.
    pub unnormalized: Complex64,
    pub valid: bool,
}

/// Leading stationary-phase term of I_{p,m}, valid when u* lies in [N, 2N+1].
///
/// The phase at u* is 2√(mpx) and φ″(u*) = 2p^{3/2}(mx)^{−1/2}, so the term is
/// e^{iπ/4} e^{2πi·2√(mpx)} / √φ″(u*).
pub fn i_pm_stationary(spec: &OscSpec) -> Result<StationaryTerm> {
    spec.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    let (a, b) = spec.interval();
    let Some(u_star) = spec.stationary_point().filter(|u| (a..=b).contains(u)) else {
        return Ok(StationaryTerm { main: zero, unnormalized: zero, valid: false });
    };
    debug_assert!(u_star > 0.0);
    let mx = spec.m as f64 * spec.x;
    let p = spec.p as f64;
    let rotation = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let unnormalized = rotation * mx.powf(0.25) * p.powf(-0.75) * cis_turns(2.0 * (mx * p).sqrt());
    Ok(StationaryTerm { main: unnormalized * FRAC_1_SQRT_2, unnormalized, valid: true })
}

/// Parameters of the truncated, k-fold smoothed double sum S_N(x, u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SNParams {
    pub x: f64,
    pub u: f64,
    pub n: f64,
    pub delta0: f64,
    pub trunc_m: usize,
    pub k: u32,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SNValue {
    pub value: Complex64,
    /// Bound on the omitted |m| > M terms.
    pub tail_bound: f64,
    pub terms_a: usize,
}

/// Σ_{N<a≤2N} Σ_{1≤|m|≤M} t_m^k g_m e^{2πi m x/(a+u)}.
pub fn s_n_sum(params: &SNParams) -> Result<SNValue> {
    if !(params.delta > 0.0) {
        return domain("Delta must be positive");
    }
    if !(params.n > 0.0) || !(params.x > 0.0) || !(0.0..1.0).contains(&params.u) {
        return domain("need N > 0, x > 0 and u in [0, 1)");
    }
    let kernel = SmoothKernel::new(params.delta0, params.trunc_m)?;
    let weights: Vec<Complex64> = (1..=params.trunc_m as i64)
        .map(|m| kernel.g(m) * t_coeff(m, params.delta).powi(params.k as i32))
        .collect();
    let a_lo = params.n.floor() as u64 + 1;
    let a_hi = (2.0 * params.n).floor() as u64;
    let mut acc = CompensatedComplexSum::new();
    let mut count = 0;
    for a in a_lo..=a_hi {
        let ratio = params.x / (a as f64 + params.u);
        let frac = ratio - ratio.floor();
        for (i, w) in weights.iter().enumerate() {
            let m = (i + 1) as f64;
            let e = cis_turns(m * frac);
            acc.add(*w * e);
            acc.add(w.conj() * e.conj());
        }
        count += 1;
    }
    Ok(SNValue { value: acc.value(), tail_bound: count as f64 * kernel.tail_bound(), terms_a: count })
}
