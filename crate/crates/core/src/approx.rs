//! Dirichlet approximation: one-dimensional by continued fractions, simultaneous
//! two-dimensional by the pigeonhole over fractional-part pairs.

use crate::dd::{two_prod, two_sum, DoubleDouble};
use crate::error::{domain, Error, Result};

/// Largest τ accepted by [`approx_1d`].
pub const TAU_MAX_1D: f64 = 1e15;
/// Largest τ accepted by [`approx_2d`]; the cell grid has about τ entries.
pub const TAU_MAX_2D: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx1d {
    pub a: u64,
    pub q: u64,
    /// |ξ − a/q|
    pub error: f64,
}

fn check_unit(v: f64, name: &str) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        domain(format!("{name} must lie in [0, 1), got {v}"))
    }
}

/// ξ ∈ [0, 1) as an exact dyadic fraction num / 2^k, or None when ξ < 2^-70.
fn dyadic(xi: f64) -> Option<(u128, u128)> {
    if xi < 2f64.powi(-70) {
        return None;
    }
    let bits = xi.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32 - 1075;
    let mant = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    // xi = mant · 2^exp with exp in [-122, -53]
    let k = (-exp) as u32;
    let (mut num, mut den) = (mant as u128, 1u128 << k);
    let tz = num.trailing_zeros().min(k);
    num >>= tz;
    den >>= tz;
    Some((num, den))
}

/// Best continued-fraction convergent a/q with q ≤ τ; then |ξ − a/q| ≤ 1/(qτ).
pub fn approx_1d(xi: f64, tau: f64) -> Result<Approx1d> {
    check_unit(xi, "xi")?;
    if !(tau > 1.0) || tau > TAU_MAX_1D {
        return domain(format!("tau must lie in (1, {TAU_MAX_1D:e}], got {tau}"));
    }
    let Some((mut num, mut den)) = dyadic(xi) else {
        // first nontrivial convergent would have q ≥ 2^70 > τ
        return Ok(Approx1d { a: 0, q: 1, error: xi });
    };
    // convergent recurrences p_k = c_k p_{k-1} + p_{k-2}, same for q
    let (mut p_prev, mut q_prev) = (1u128, 0u128);
    let c0 = num / den;
    let (mut p, mut q) = (c0, 1u128);
    let rem = num - c0 * den;
    num = den;
    den = rem;
    while den != 0 {
        let c = num / den;
        let next_q = c.checked_mul(q).and_then(|v| v.checked_add(q_prev));
        match next_q {
            Some(nq) if (nq as f64) <= tau => {
                let np = c * p + p_prev;
                p_prev = p;
                q_prev = q;
                p = np;
                q = nq;
            }
            _ => break,
        }
        let rem = num - c * den;
        num = den;
        den = rem;
    }
    let (a, q) = (p as u64, q as u64);
    Ok(Approx1d { a, q, error: (xi - a as f64 / q as f64).abs() })
}

/// Output of the two-dimensional pigeonhole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulApprox {
    pub a: u64,
    pub b: u64,
    pub q: u64,
    /// |ξ − a/q|
    pub err_xi: f64,
    /// |η − b/q|
    pub err_eta: f64,
    pub tau: f64,
}

/// (qv − n)² · τ ≤ 1, evaluated with qv formed exactly and the rest in double-double.
fn scaled_error_within(v: f64, q: u64, n: u64, tau: f64) -> bool {
    let (p, e) = two_prod(q as f64, v);
    let (s, t) = two_sum(p, -(n as f64));
    let diff = DoubleDouble::from_f64(s) + DoubleDouble::from_f64(t) + DoubleDouble::from_f64(e);
    let lhs = diff * diff * DoubleDouble::from_f64(tau);
    let slack = lhs - DoubleDouble::from_f64(1.0);
    slack.hi < 0.0 || (slack.hi == 0.0 && slack.lo <= 0.0)
}

impl SimulApprox {
    /// Checks q ≤ (1+√τ)², |ξ − a/q| ≤ 1/(q√τ) and |η − b/q| ≤ 1/(q√τ).
    pub fn satisfies_invariants(&self, xi: f64, eta: f64) -> bool {
        let side = cells_per_side(self.tau);
        // q ≤ L² and L − 1 = ⌊√τ⌋ ≤ √τ imply q ≤ (1 + √τ)²
        let q_ok = self.q >= 1 && self.q <= side * side && ((side - 1) as f64).powi(2) <= self.tau;
        q_ok && scaled_error_within(xi, self.q, self.a, self.tau)
            && scaled_error_within(eta, self.q, self.b, self.tau)
    }
}

/// L = 1 + ⌊√τ⌋, computed exactly.
fn cells_per_side(tau: f64) -> u64 {
    let mut r = tau.sqrt().floor() as u64;
    while (r as f64) * (r as f64) > tau {
        r -= 1;
    }
    while ((r + 1) as f64) * ((r + 1) as f64) <= tau {
        r += 1;
    }
    r + 1
}

/// Boundary guard for cell assignment, in fractional-part units.
const CELL_GUARD: f64 = 1e-12;

fn cell_of(frac: f64, side: u64) -> u64 {
    let y = frac * side as f64;
    let mut c = y.floor() as u64;
    if c >= 1 && (y - c as f64) / side as f64 <= CELL_GUARD {
        c -= 1;
    }
    c.min(side - 1)
}

struct Orbit {
    xi: f64,
    eta: f64,
}

impl Orbit {
    /// (⌊kξ⌋, ⌊kη⌋, {kξ}, {kη})
    fn point(&self, k: u64) -> (u64, u64, f64, f64) {
        let (x, y) = (k as f64 * self.xi, k as f64 * self.eta);
        let (fx, fy) = (x.floor(), y.floor());
        (fx as u64, fy as u64, x - fx, y - fy)
    }
}

/// Simultaneous approximation of (ξ, η) with a common denominator q ≤ (1+√τ)².
///
/// Scans k = 0, 1, …, L² (L = 1 + ⌊√τ⌋) and bins ({kξ}, {kη}) into an L × L grid;
/// the first collision in scan order whose pair passes the exact invariant check wins.
/// Numerators may be zero (e.g. ξ = 0).
pub fn approx_2d(xi: f64, eta: f64, tau: f64) -> Result<SimulApprox> {
    check_unit(xi, "xi")?;
    check_unit(eta, "eta")?;
    if !(tau > 1.0) || tau > TAU_MAX_2D {
        return domain(format!("tau must lie in (1, {TAU_MAX_2D:e}], got {tau}"));
    }
    let side = cells_per_side(tau);
    let orbit = Orbit { xi, eta };
    const EMPTY: u32 = u32::MAX;
    let mut first = vec![EMPTY; (side * side) as usize];
    let build = |k1: u64, k2: u64| {
        let (a1, b1, _, _) = orbit.point(k1);
        let (a2, b2, _, _) = orbit.point(k2);
        let q = k2 - k1;
        let (a, b) = (a1.abs_diff(a2), b1.abs_diff(b2));
        SimulApprox {
            a,
            b,
            q,
            err_xi: (xi - a as f64 / q as f64).abs(),
            err_eta: (eta - b as f64 / q as f64).abs(),
            tau,
        }
    };
    for k in 0..=side * side {
        let (_, _, fx, fy) = orbit.point(k);
        let cell = (cell_of(fx, side) * side + cell_of(fy, side)) as usize;
        let prev = first[cell];
        if prev == EMPTY {
            first[cell] = k as u32;
            continue;
        }
        let cand = build(prev as u64, k);
        if cand.satisfies_invariants(xi, eta) {
            return Ok(cand);
        }
        // Rounding pushed the pair out of bounds; try the other earlier occupants.
        for k1 in prev as u64 + 1..k {
            let (_, _, gx, gy) = orbit.point(k1);
            if (cell_of(gx, side) * side + cell_of(gy, side)) as usize == cell {
                let cand = build(k1, k);
                if cand.satisfies_invariants(xi, eta) {
                    return Ok(cand);
                }
            }
        }
    }
    Err(Error::Resource(format!(
        "no collision passed the exact check over {} points (rounding beyond the cell guard)",
        side * side + 1
    )))
}
