//! Independent oracles shared by the integration tests. None of these call the
//! routine they check.
#![allow(dead_code)]

use num_bigint::BigInt;

/// D(x) by counting (a, b) with ab ≤ x row by row.
pub fn brute_d(x: u64) -> u64 {
    let mut count = 0;
    for a in 1..=x {
        let mut b = 1;
        while a * b <= x {
            count += 1;
            b += 1;
        }
    }
    count
}

/// τ(n) by testing every candidate divisor.
pub fn tau_naive(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
}

/// Prefix sums Σ_{n≤x} τ(n) for x ≤ limit, from a full multiple-marking sieve.
pub fn divisor_prefix(limit: usize) -> Vec<u64> {
    let mut tau = vec![0u32; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            tau[m] += 1;
        }
    }
    let mut acc = 0;
    tau.iter().map(|&t| {
        acc += t as u64;
        acc
    }).collect()
}

/// D at every query point ≤ hi by counting divisor pairs chunk by chunk.
/// `queries` must be sorted.
pub fn divisor_sums_by_sieve(queries: &[u64], hi: u64) -> Vec<u64> {
    const CHUNK: u64 = 1 << 22;
    let mut out = Vec::with_capacity(queries.len());
    let mut qi = 0;
    let mut running = 0u64;
    let mut lo = 1u64;
    let mut counts = vec![0u16; CHUNK as usize];
    while lo <= hi && qi < queries.len() {
        let top = (lo + CHUNK - 1).min(hi);
        counts.iter_mut().for_each(|c| *c = 0);
        let mut d = 1u64;
        while d * d <= top {
            // pairs (d, n/d) with d < n/d count twice, d = n/d once
            let mut n = d * d.max(lo.div_ceil(d));
            while n <= top {
                counts[(n - lo) as usize] += if n == d * d { 1 } else { 2 };
                n += d;
            }
            d += 1;
        }
        for n in lo..=top {
            running += counts[(n - lo) as usize] as u64;
            while qi < queries.len() && queries[qi] == n {
                out.push(running);
                qi += 1;
            }
        }
        lo = top + 1;
    }
    out
}

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// (1/2δ₀)∫_{−δ₀}^{δ₀} (1/2 − {x+u}) du, split at the jumps.
pub fn rho1_oracle(x: f64, delta0: f64) -> f64 {
    let mut cuts = vec![-delta0];
    let mut k = (x - delta0).floor() + 1.0;
    while k < x + delta0 {
        cuts.push(k - x);
        k += 1.0;
    }
    cuts.push(delta0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let level = (x + 0.5 * (w[0] + w[1])).floor();
        total += simpson(&|u: f64| 0.5 - (x + u - level), w[0], w[1], 1e-16);
    }
    total / (2.0 * delta0)
}

/// σ(u) = (1/2δ)∫_{u−δ}^{u+δ} Σ_{a≤√x}(1/2 − {x/(a+α)}) dα, split where x/(a+α) crosses an integer.
pub fn sigma_oracle(x: f64, u: f64, delta: f64) -> f64 {
    let (lo, hi) = (u - delta, u + delta);
    let top = x.sqrt().floor() as u64;
    let mut total = 0.0;
    for a in 1..=top {
        let af = a as f64;
        let (y_hi, y_lo) = (x / (af + lo), x / (af + hi));
        let mut cuts = vec![lo];
        // integer levels b strictly inside (y_lo, y_hi), in increasing α
        let mut b = y_hi.ceil() - 1.0;
        while b > y_lo {
            let alpha = x / b - af;
            if alpha > lo && alpha < hi {
                cuts.push(alpha);
            }
            b -= 1.0;
        }
        cuts.push(hi);
        for w in cuts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let level = (x / (af + 0.5 * (w[0] + w[1]))).floor();
            // x/(a+α) − level cancels down to about ε·x/a
            let tol = (1e-14f64).max(8.0 * f64::EPSILON * y_hi) * (w[1] - w[0]);
            total += simpson(&|al: f64| 0.5 - (x / (af + al) - level), w[0], w[1], tol);
        }
    }
    total / (2.0 * delta)
}

/// Points (u, v) ∈ [1, x]² with (qu + a)v = qx, by testing every pair.
pub fn shifted_pairs_brute(x: u64, a: u64, q: u64) -> Vec<(u64, u64)> {
    let mut pts = Vec::new();
    for u in 1..=x {
        let d = q * u + a;
        if d > q * x {
            break;
        }
        for v in 1..=x {
            let lhs = d * v;
            if lhs == q * x {
                pts.push((u, v));
            }
            if lhs >= q * x {
                break;
            }
        }
    }
    pts
}

/// A finite double as num / 2^shift exactly.
pub fn dyadic(v: f64) -> (BigInt, u32) {
    assert!(v.is_finite() && v >= 0.0);
    if v == 0.0 {
        return (BigInt::from(0), 0);
    }
    let bits = v.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if raw == 0 { (frac, -1074) } else { (frac | (1 << 52), raw - 1075) };
    if exp >= 0 {
        (BigInt::from(mant) << exp as usize, 0)
    } else {
        (BigInt::from(mant), (-exp) as u32)
    }
}

/// q ≤ (1+√τ)², |ξ − a/q| ≤ 1/(q√τ), |η − b/q| ≤ 1/(q√τ), in exact integer arithmetic.
pub fn simul_invariants_exact(xi: f64, eta: f64, tau: f64, a: u64, b: u64, q: u64) -> bool {
    if q == 0 {
        return false;
    }
    let (t, k) = dyadic(tau);
    let one = BigInt::from(1);
    // q − 1 − τ ≤ 2√τ  ⇔  D ≤ 0 or D² ≤ 4τ, with everything scaled by 2^k
    let d = (BigInt::from(q - 1) << k as usize) - &t;
    let q_ok = d <= BigInt::from(0) || &d * &d <= (&t << (k as usize + 2));
    let err_ok = |v: f64, n: u64| {
        let (x, j) = dyadic(v);
        let diff = BigInt::from(q) * x - (BigInt::from(n) << j as usize);
        &diff * &diff * &t <= (&one << (2 * j + k) as usize)
    };
    q_ok && err_ok(xi, a) && err_ok(eta, b)
}
