//! The weight ψ(n), the series Σ ψ(n) e^{2πit√n} / n^{3/4}, and its mean square
//! over [r, r + r^{−1/2}], both by quadrature and through Parseval.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dd::{CompensatedComplexSum, CompensatedSum};
use crate::error::{domain, Result};
use crate::osc::cis_turns;
use crate::quad;
use crate::sawtooth::t_coeff;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiParams {
    pub n: f64,
    pub x: f64,
    pub k: u32,
    pub delta: f64,
}

impl PsiParams {
    /// Largest admissible m: N x^{−1/4} / 2.
    pub fn m_max(&self) -> u64 {
        (0.5 * self.n * self.x.powf(-0.25)).floor().max(0.0) as u64
    }

    /// Weights live on 1 ≤ n ≤ ⌊√x / 4⌋.
    pub fn n_max(&self) -> u64 {
        (self.x.sqrt() / 4.0).floor().max(0.0) as u64
    }

    /// Inclusive p-range mx/4N² ≤ p ≤ mx/N².
    pub fn p_range(&self, m: u64) -> (u64, u64) {
        let top = m as f64 * self.x / (self.n * self.n);
        ((top / 4.0).ceil().max(1.0) as u64, top.floor() as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiWeights {
    params: Option<PsiParams>,
    values: Vec<f64>,
}

impl PsiWeights {
    /// Arbitrary weights, `values[i]` = ψ(i + 1).
    pub fn from_values(values: Vec<f64>) -> Self {
        PsiWeights { params: None, values }
    }

    pub fn params(&self) -> Option<&PsiParams> {
        self.params.as_ref()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64
    }

    /// ψ(n), zero outside the stored range.
    pub fn get(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.values.get(n as usize - 1).copied().unwrap_or(0.0)
    }

    /// (n, ψ(n)/n^{3/4}) for nonzero weights with n ≤ r/4.
    fn coefficients(&self, r: f64) -> Result<Vec<(u64, f64)>> {
        if !(r > 1.0) || !r.is_finite() {
            return domain(format!("r must be finite and > 1, got {r}"));
        }
        let top = (r / 4.0).floor() as u64;
        if self.n_max() < top {
            return domain(format!("weights cover n ≤ {} but r/4 needs n ≤ {top}", self.n_max()));
        }
        Ok((1..=top)
            .filter_map(|n| {
                let w = self.get(n);
                (w != 0.0).then(|| (n, w / (n as f64).powf(0.75)))
            })
            .collect())
    }
}

/// ψ(n) = Σ t_m^k t_p over n = mp with m ≤ N x^{−1/4}/2 and mx/4N² ≤ p ≤ mx/N².
pub fn psi_weights(params: PsiParams) -> Result<PsiWeights> {
    if !(params.n > 0.0) || !(params.x > 0.0) || !(params.delta > 0.0) {
        return domain("need N > 0, x > 0 and Delta > 0");
    }
    let n_max = params.n_max();
    let mut values = vec![0.0; n_max as usize];
    for m in 1..=params.m_max() {
        let tm = t_coeff(m as i64, params.delta).powi(params.k as i32);
        let (p_lo, p_hi) = params.p_range(m);
        for p in p_lo..=p_hi {
            let n = m * p;
            if n > n_max {
                break;
            }
            values[n as usize - 1] += tm * t_coeff(p as i64, params.delta);
        }
    }
    Ok(PsiWeights { params: Some(params), values })
}

/// Σ_{n≤r/4} ψ(n) e^{2πit√n} / n^{3/4}.
pub fn trig_series(t: f64, r: f64, weights: &PsiWeights) -> Result<Complex64> {
    let coeffs = weights.coefficients(r)?;
    Ok(eval_series(t, &coeffs))
}

fn eval_series(t: f64, coeffs: &[(u64, f64)]) -> Complex64 {
    let mut acc = CompensatedComplexSum::new();
    for &(n, c) in coeffs {
        acc.add(c * cis_turns(t * (n as f64).sqrt()));
    }
    acc.value()
}

/// I_r = ∫_r^{r+r^{−1/2}} |Σ ψ(n) e^{2πit√n}/n^{3/4}|² dt by adaptive quadrature.
pub fn i_r_direct(r: f64, weights: &PsiWeights, tol: f64) -> Result<f64> {
    let coeffs = weights.coefficients(r)?;
    if coeffs.is_empty() {
        return Ok(0.0);
    }
    let q = quad::integrate(|t| eval_series(t, &coeffs).norm_sqr(), r, r + r.powf(-0.5), tol, 100_000)?;
    Ok(q.value.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueResult {
    pub r: f64,
    pub direct: f64,
    pub parseval: f64,
    pub a0: Complex64,
    pub s_trunc: u64,
    pub tail_bound: f64,
}

/// ψ₁(z) = Σ_{k≥0} 1/(z+k)² for z > 0.
pub fn trigamma(mut z: f64) -> f64 {
    let mut acc = 0.0;
    while z < 40.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    acc + (1.0 + (0.5 + (1.0 / 6.0 + (-1.0 / 30.0 + (1.0 / 42.0 - w / 30.0) * w) * w) / z) / z) / z
}

struct ParsevalData {
    omega: Vec<f64>,
    d: Vec<Complex64>,
    d_sum: Complex64,
    /// Σ |d_n| ω_n
    moment: f64,
}

fn parseval_data(r: f64, coeffs: &[(u64, f64)]) -> ParsevalData {
    let mut omega = Vec::with_capacity(coeffs.len());
    let mut d = Vec::with_capacity(coeffs.len());
    let mut d_sum = CompensatedComplexSum::new();
    let mut moment = CompensatedSum::new();
    for &(n, c) in coeffs {
        let w = (n as f64 / r).sqrt();
        // e^{2πi U ω} with U = r√r, i.e. e^{2πi r√n}; matches the direct integrand at t = r
        let start = cis_turns(r * (n as f64).sqrt());
        let jump = (cis_turns(w) - 1.0) / Complex64::new(0.0, TAU);
        let dn = c * start * jump;
        omega.push(w);
        d.push(dn);
        d_sum.add(dn);
        moment.add(dn.norm() * w);
    }
    ParsevalData { omega, d, d_sum: d_sum.value(), moment: moment.value() }
}

/// Σ_n d_n / (ω_n − s); |a_s| equals its modulus.
fn a_core(data: &ParsevalData, s: i64) -> Complex64 {
    let mut acc = CompensatedComplexSum::new();
    for (w, dn) in data.omega.iter().zip(&data.d) {
        acc.add(*dn / (w - s as f64));
    }
    acc.value()
}

/// I_r through Parseval on the unit u-interval [r√r, r√r + 1] (u = t√r):
/// I_r = r^{−1/2} Σ_s |a_s|².
///
/// Terms |s| ≤ s_max are summed exactly; beyond that |a_s|² is replaced by its
/// leading part |Σd_n|²/s² (summed in closed form) and `tail_bound` bounds the rest.
pub fn i_r_parseval(r: f64, weights: &PsiWeights, s_max: u64) -> Result<MeanValueResult> {
    if s_max == 0 {
        return domain("s_max must be at least 1");
    }
    let coeffs = weights.coefficients(r)?;
    let data = parseval_data(r, &coeffs);
    if let Some(w) = data.omega.iter().find(|&&w| w > 0.5) {
        return domain(format!("frequency {w} exceeds 1/2"));
    }
    let scale = r.powf(-0.5);
    let a0 = a_core(&data, 0);
    let mut acc = CompensatedSum::new();
    acc.add(a0.norm_sqr());
    for s in 1..=s_max as i64 {
        acc.add(a_core(&data, s).norm_sqr());
        acc.add(a_core(&data, -s).norm_sqr());
    }
    let d2 = data.d_sum.norm_sqr();
    acc.add(2.0 * d2 * trigamma(s_max as f64 + 1.0));
    let h = s_max as f64 - 0.5;
    let e = data.moment;
    let tail = 2.0 * (d2.sqrt() * e / (h * h) + e * e / (3.0 * h * h * h));
    Ok(MeanValueResult {
        r,
        direct: f64::NAN,
        parseval: (acc.value() * scale).max(0.0),
        a0,
        s_trunc: s_max,
        tail_bound: tail * scale,
    })
}

/// Doubles s_max from 16 until the tail bound drops below `target`, then fills in the direct value.
pub fn mean_value(r: f64, weights: &PsiWeights, target: f64, tol: f64) -> Result<MeanValueResult> {
    let mut s = 16;
    let mut res = i_r_parseval(r, weights, s)?;
    while res.tail_bound > target && s < 1 << 22 {
        s *= 2;
        res = i_r_parseval(r, weights, s)?;
    }
    res.direct = i_r_direct(r, weights, tol)?;
    Ok(res)
}

/// Σ_n |ψ(n)| / n^{3/4} over n ≤ r/4, the trivial bound for |a_0|.
pub fn a0_bound(r: f64, weights: &PsiWeights) -> Result<f64> {
    let coeffs = weights.coefficients(r)?;
    Ok(coeffs.iter().map(|&(_, c)| c.abs()).collect::<CompensatedSum>().value())
}

/// min of |series| on an evenly spaced grid over [r, r + r^{−1/2}], next to √(I_r·√r),
/// the root mean square over the unit u-interval.
pub fn grid_minimum(r: f64, weights: &PsiWeights, points: usize, i_r: f64) -> Result<(f64, f64)> {
    let coeffs = weights.coefficients(r)?;
    let len = r.powf(-0.5);
    let n = points.max(2);
    let min = (0..n)
        .map(|i| eval_series(r + len * i as f64 / (n - 1) as f64, &coeffs).norm())
        .fold(f64::INFINITY, f64::min);
    Ok((min, (i_r * r.sqrt()).sqrt()))
}

/// Closed-form |a_s| for a single term c at n₀: |c| n₀^{−3/4} |sin(πω)| / (π|ω − s|).
pub fn single_term_a_abs(r: f64, n0: u64, c: f64, s: i64) -> f64 {
    let w = (n0 as f64 / r).sqrt();
    c.abs() * (n0 as f64).powf(-0.75) * (PI * w).sin().abs() / (PI * (w - s as f64).abs())
}
