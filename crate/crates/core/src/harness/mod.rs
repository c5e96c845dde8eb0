//! Plumbing behind the `divlab` binary: number formatting, range scans, the
//! residual probe, seeded verification suites and the τ-table cache.

pub mod cache;
pub mod scan;
pub mod verify;

use crate::divisor;
use crate::error::{domain, Result};
use crate::shift::s_sum_int;

/// C-style `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside 1e-5 ≤ |v| < 1e12.
pub fn fmt_g12(v: f64) -> String {
    const PREC: i32 = 12;
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (PREC - 1) as usize, v);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PREC).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PREC - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Largest x accepted by the residual probe.
pub const RESIDUAL_X_MAX: u64 = 100_000_000;
/// Level below which a residual family counts as bounded.
pub const RESIDUAL_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualFamily {
    pub c: u8,
    pub sup: f64,
    pub at_x: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub samples: usize,
    pub families: [ResidualFamily; 2],
    /// The unique c with sup ≤ [`RESIDUAL_BOUND`], if exactly one qualifies.
    pub chosen: Option<u8>,
}

/// sup |Δ(x) − c·S(x, 0)| over the samples for c = 1 and c = 2.
pub fn residual_probe(samples: &[u64]) -> Result<ResidualReport> {
    let mut families = [1u8, 2].map(|c| ResidualFamily { c, sup: 0.0, at_x: 0 });
    for &x in samples {
        if x == 0 || x > RESIDUAL_X_MAX {
            return domain(format!("residual samples must lie in [1, {RESIDUAL_X_MAX}], got {x}"));
        }
        let delta = divisor::delta(x)?.delta;
        let s = s_sum_int(x);
        for fam in &mut families {
            let r = (delta - fam.c as f64 * s).abs();
            if r > fam.sup || fam.at_x == 0 {
                fam.sup = r;
                fam.at_x = x;
            }
        }
    }
    let ok: Vec<u8> = families.iter().filter(|f| f.sup <= RESIDUAL_BOUND).map(|f| f.c).collect();
    let chosen = (ok.len() == 1).then(|| ok[0]);
    Ok(ResidualReport { samples: samples.len(), families, chosen })
}

/// Integers 1..=dense plus `per_decade` log-spaced points up to `hi`.
pub fn residual_grid(dense: u64, hi: u64, per_decade: u32) -> Result<Vec<u64>> {
    let mut xs: Vec<u64> = (1..=dense.min(hi)).collect();
    if hi > dense {
        xs.extend(scan::log_samples(dense.max(1), hi, per_decade)?);
    }
    xs.sort_unstable();
    xs.dedup();
    Ok(xs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_formatting() {
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(482.0), "482");
        assert_eq!(fmt_g12(6.039848420877), "6.03984842088");
        assert_eq!(fmt_g12(0.1), "0.1");
        assert_eq!(fmt_g12(-0.25), "-0.25");
        assert_eq!(fmt_g12(1e-5), "1e-05");
        assert_eq!(fmt_g12(0.0001234), "0.0001234");
        assert_eq!(fmt_g12(1e12), "1e+12");
        assert_eq!(fmt_g12(999999999999.0), "999999999999");
        assert_eq!(fmt_g12(27785452445731.613), "2.77854524457e+13");
        assert_eq!(fmt_g12(0.8455686701969343), "0.845568670197");
    }

    #[test]
    fn residual_probe_picks_two() {
        let xs = residual_grid(500, 100_000, 50).unwrap();
        let r = residual_probe(&xs).unwrap();
        assert_eq!(r.chosen, Some(2));
        assert!(r.families[1].sup < 1.0);
        assert!(r.families[0].sup > RESIDUAL_BOUND);
    }

    #[test]
    fn residual_single_sample_matches_columns() {
        let r = residual_probe(&[100]).unwrap();
        let d = divisor::delta(100).unwrap().delta;
        assert_eq!(r.families[0].sup, (d - s_sum_int(100)).abs());
        assert_eq!(r.families[1].sup, (d - 2.0 * s_sum_int(100)).abs());
        assert!(residual_probe(&[0]).is_err());
    }
}
