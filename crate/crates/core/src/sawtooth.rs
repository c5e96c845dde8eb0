//! The sawtooth ρ(x) = 1/2 − {x}, its box mollification ρ₁, and their Fourier coefficients.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dd::CompensatedSum;
use crate::error::{domain, Result};

/// ρ(x) = 1/2 − {x}; right-continuous, so ρ(n) = 1/2 at integers.
pub fn rho(x: f64) -> f64 {
    0.5 - (x - x.floor())
}

fn check_delta0(delta0: f64) -> Result<()> {
    if delta0 > 0.0 && delta0 < 0.5 {
        Ok(())
    } else {
        domain(format!("delta0 must lie in (0, 1/2), got {delta0}"))
    }
}

/// Signed distance from x to the nearest integer, in [−1/2, 1/2).
pub(crate) fn signed_dist(x: f64) -> f64 {
    x - (x + 0.5).floor()
}

/// ρ₁(x) = (1/2δ₀) ∫_{−δ₀}^{δ₀} ρ(x + u) du in closed form.
///
/// With s the signed distance to the nearest integer, ρ₁ = ρ for |s| ≥ δ₀ and
/// ρ₁ = s(1 − 2δ₀)/(2δ₀) inside the window.
pub fn rho1(x: f64, delta0: f64) -> Result<f64> {
    check_delta0(delta0)?;
    let s = signed_dist(x);
    if s.abs() >= delta0 {
        Ok(rho(x))
    } else {
        Ok(s * (1.0 - 2.0 * delta0) / (2.0 * delta0))
    }
}

/// sin(πz)/(πz) with the removable singularity filled in.
fn sinc_pi(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - (PI * z).powi(2) / 6.0
    } else {
        (PI * z).sin() / (PI * z)
    }
}

/// b_m = 1/(2πim) for m ≠ 0, b_0 = 0.
pub fn fourier_b(m: i64) -> Complex64 {
    if m == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, -1.0 / (TAU * m as f64))
    }
}

/// g_m = sinc(2π|m|δ₀) · b_m, g_0 = 0.
pub fn fourier_g(m: i64, delta0: f64) -> Result<Complex64> {
    check_delta0(delta0)?;
    Ok(fourier_b(m) * sinc_pi(2.0 * m.unsigned_abs() as f64 * delta0))
}

/// t_m = sin(2π|m|Δ)/(2π|m|Δ), t_0 = 1.
pub fn t_coeff(m: i64, delta: f64) -> f64 {
    if m == 0 {
        1.0
    } else {
        sinc_pi(2.0 * m.unsigned_abs() as f64 * delta)
    }
}

/// Truncated Fourier data for ρ₁: g_m for 1 ≤ m ≤ M (g_{−m} is the conjugate).
#[derive(Debug, Clone)]
pub struct SmoothKernel {
    delta0: f64,
    trunc_m: usize,
    g: Vec<Complex64>,
}

impl SmoothKernel {
    pub fn new(delta0: f64, trunc_m: usize) -> Result<Self> {
        check_delta0(delta0)?;
        if trunc_m == 0 {
            return domain("truncation M must be positive");
        }
        let g = (1..=trunc_m as i64).map(|m| fourier_g(m, delta0)).collect::<Result<_>>()?;
        Ok(SmoothKernel { delta0, trunc_m, g })
    }

    /// M = 16·⌈1/δ₀⌉.
    pub fn with_default_truncation(delta0: f64) -> Result<Self> {
        check_delta0(delta0)?;
        Self::new(delta0, 16 * (1.0 / delta0).ceil() as usize)
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn trunc_m(&self) -> usize {
        self.trunc_m
    }

    /// g_m for 1 ≤ |m| ≤ M, zero otherwise.
    pub fn g(&self, m: i64) -> Complex64 {
        let k = m.unsigned_abs() as usize;
        if k == 0 || k > self.trunc_m {
            return Complex64::new(0.0, 0.0);
        }
        if m > 0 {
            self.g[k - 1]
        } else {
            self.g[k - 1].conj()
        }
    }

    /// Rigorous bound on Σ_{|m|>M} |g_m|, from |g_m| ≤ 1/(π²m²δ₀).
    pub fn tail_bound(&self) -> f64 {
        2.0 / (PI * PI * self.trunc_m as f64 * self.delta0)
    }

    /// Σ_{1≤|m|≤M} |g_m|.
    pub fn abs_coeff_sum(&self) -> f64 {
        2.0 * self.g.iter().map(|z| z.norm()).collect::<CompensatedSum>().value()
    }
}

/// Truncated series Σ_{1≤|m|≤M} g_m e^{2πimx} with its tail bound.
pub fn rho1_series(x: f64, kernel: &SmoothKernel) -> (f64, f64) {
    // Conjugate pairs combine to 2 Re(g_m e^{2πimx}); reduce x mod 1 first.
    let frac = x - x.floor();
    let mut acc = CompensatedSum::new();
    for (i, g) in kernel.g.iter().enumerate() {
        let m = (i + 1) as f64;
        let phase = TAU * (m * frac).fract();
        acc.add(2.0 * (g.re * phase.cos() - g.im * phase.sin()));
    }
    (acc.value(), kernel.tail_bound())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_examples() {
        assert_eq!(rho(0.25), 0.25);
        assert_eq!(rho(0.0), 0.5);
        assert_eq!(rho(1.75), -0.25);
        assert_eq!(rho(-0.25), -0.25);
    }

    #[test]
    fn rho1_examples() {
        assert!((rho1(0.3, 0.1).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(rho1(0.3, 0.1).unwrap(), rho(0.3));
        assert_eq!(rho1(0.0, 0.1).unwrap(), 0.0);
        assert!((rho1(0.05, 0.1).unwrap() - 0.2).abs() < 1e-15);
        assert!((rho1(-0.05, 0.1).unwrap() + 0.2).abs() < 1e-15);
    }

    #[test]
    fn rho1_domain() {
        assert!(rho1(0.3, 0.0).is_err());
        assert!(rho1(0.3, 0.5).is_err());
        assert!(fourier_g(1, -0.1).is_err());
        assert!(SmoothKernel::new(0.1, 0).is_err());
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(fourier_b(0), Complex64::new(0.0, 0.0));
        assert!((fourier_b(1).im + 0.15915494309189535).abs() < 1e-16);
        assert_eq!(fourier_b(-1), fourier_b(1).conj());
        assert_eq!(fourier_g(0, 0.3).unwrap(), Complex64::new(0.0, 0.0));
        let g1 = fourier_g(1, 0.25).unwrap();
        assert!((g1 - fourier_b(1) * (2.0 / PI)).norm() < 1e-16);
        assert!((fourier_g(7, 1e-12).unwrap() - fourier_b(7)).norm() < 1e-15);
    }

    #[test]
    fn t_coeff_examples() {
        assert_eq!(t_coeff(0, 0.3), 1.0);
        assert!(t_coeff(1, 0.5).abs() < 1e-15);
        assert!((t_coeff(2, 0.1) - 0.756826728640657).abs() < 1e-14);
        assert_eq!(t_coeff(-2, 0.1), t_coeff(2, 0.1));
    }

    #[test]
    fn series_examples() {
        let k = SmoothKernel::new(0.1, 10_000).unwrap();
        let (v, tail) = rho1_series(0.3, &k);
        assert!((v - 0.2).abs() <= tail);
        let (v0, tail0) = rho1_series(0.0, &k);
        assert!(v0.abs() <= tail0);
        let k3 = SmoothKernel::new(0.1, 1000).unwrap();
        let (vh, tailh) = rho1_series(0.5, &k3);
        assert!(vh.abs() <= tailh);
    }

    #[test]
    fn default_truncation() {
        let k = SmoothKernel::with_default_truncation(0.1).unwrap();
        assert_eq!(k.trunc_m(), 160);
        assert_eq!(k.g(-3), k.g(3).conj());
        assert_eq!(k.g(161), Complex64::new(0.0, 0.0));
    }
}
