//! Exact divisor arithmetic: τ(n), segmented τ tables, D(x) by the hyperbola
//! method, the main term x(log x + 2γ − 1) in double-double, and Δ(x).

use std::io::{Read, Write};

use crate::dd::DoubleDouble;
use crate::error::{domain, Error, Result};

/// Euler's constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaConst {
    pub value: DoubleDouble,
}

impl GammaConst {
    /// 0.577215664901532860606512090082402431042...
    pub const DIGITS: &'static str = "0.577215664901532860606512090082";
    pub const VALUE: GammaConst =
        GammaConst { value: DoubleDouble::new(0.5772156649015329, -4.942915152430645e-18) };
}

/// Largest x accepted by [`divisor_sum_exact`].
pub const X_MAX: u64 = 1_000_000_000_000;
/// Largest window accepted by [`tau_sieve`].
pub const SIEVE_WINDOW_MAX: u64 = 100_000_000;

/// ⌊√n⌋ computed exactly.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // wheel over 6k ± 1
    let mut p = 5u64;
    while p.checked_mul(p).is_some_and(|sq| sq <= n) {
        for cand in [p, p + 2] {
            if n.is_multiple_of(cand) {
                let mut e = 0;
                while n.is_multiple_of(cand) {
                    n /= cand;
                    e += 1;
                }
                out.push((cand, e));
            }
        }
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of n in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Number of positive divisors of n.
pub fn tau(n: u64) -> Result<u32> {
    if n == 0 {
        return domain("tau(0) is undefined");
    }
    if n > i64::MAX as u64 {
        return domain(format!("tau argument {n} exceeds 2^63 - 1"));
    }
    Ok(factorize(n).iter().map(|&(_, e)| e + 1).product())
}

/// τ over the contiguous window `[lo, lo + values.len())`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    lo: u64,
    values: Vec<u32>,
}

const TAU1_MAGIC: &[u8; 4] = b"TAU1";

impl TauTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    /// Last n covered (inclusive).
    pub fn hi(&self) -> u64 {
        self.lo + self.values.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// τ(n) for n inside the window.
    pub fn get(&self, n: u64) -> Option<u32> {
        n.checked_sub(self.lo).and_then(|i| self.values.get(i as usize).copied())
    }

    /// Serialize as TAU1: magic, lo (u64 LE), len (u64 LE), then len u32 LE counts.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(TAU1_MAGIC)?;
        w.write_all(&self.lo.to_le_bytes())?;
        w.write_all(&(self.values.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.values.len() * 4);
        for v in &self.values {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|_| Error::Cache("truncated header".into()))?;
        if &magic != TAU1_MAGIC {
            return Err(Error::Cache(format!("bad magic {magic:?}")));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word).map_err(|_| Error::Cache("truncated header".into()))?;
        let lo = u64::from_le_bytes(word);
        r.read_exact(&mut word).map_err(|_| Error::Cache("truncated header".into()))?;
        let len = u64::from_le_bytes(word);
        if lo == 0 || len == 0 || len > SIEVE_WINDOW_MAX + 1 {
            return Err(Error::Cache(format!("implausible header lo={lo} len={len}")));
        }
        let mut raw = vec![0u8; len as usize * 4];
        r.read_exact(&mut raw).map_err(|_| Error::Cache("truncated body".into()))?;
        let values = raw
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::Cache("trailing bytes after body".into()));
        }
        Ok(TauTable { lo, values })
    }
}

/// Segmented divisor-marking sieve: τ(n) for every n in `[lo, hi]`.
///
/// Every d ≤ √hi marks its multiples n = d·k with k ≥ d inside the window,
/// contributing 2 for k > d and 1 for the square k = d.
pub fn tau_sieve(lo: u64, hi: u64) -> Result<TauTable> {
    if lo == 0 || lo > hi {
        return domain(format!("need 1 <= lo <= hi, got lo={lo} hi={hi}"));
    }
    if hi - lo > SIEVE_WINDOW_MAX {
        return Err(Error::Resource(format!(
            "sieve window {} exceeds {SIEVE_WINDOW_MAX}",
            hi - lo
        )));
    }
    if hi > i64::MAX as u64 {
        return domain("sieve bound exceeds 2^63 - 1");
    }
    let len = (hi - lo + 1) as usize;
    let mut values = vec![0u32; len];
    let root = isqrt(hi);
    for d in 1..=root {
        let k_start = d.max(lo.div_ceil(d));
        let mut n = d * k_start;
        if k_start == d {
            values[(n - lo) as usize] += 1;
            n += d;
        }
        while n <= hi {
            values[(n - lo) as usize] += 2;
            n += d;
        }
    }
    Ok(TauTable { lo, values })
}

/// D(x) = Σ_{n≤x} τ(n) = 2 Σ_{a≤√x} ⌊x/a⌋ − ⌊√x⌋², in O(√x).
pub fn divisor_sum_exact(x: u64) -> Result<u64> {
    if x == 0 {
        return domain("divisor_sum_exact needs x >= 1");
    }
    if x > X_MAX {
        return Err(Error::Resource(format!("x = {x} exceeds the 128-bit-safe cap {X_MAX}")));
    }
    let s = isqrt(x);
    let half: u128 = (1..=s).map(|a| (x / a) as u128).sum();
    let d = 2 * half - (s as u128) * (s as u128);
    u64::try_from(d).map_err(|_| Error::Resource("D(x) exceeds u64".into()))
}

/// Lattice points (a, b), a, b ≥ 1, with ab ≤ x, for real x ≥ 1.
///
/// ⌊x/a⌋ = ⌊⌊x⌋/a⌋ for integer a, so this reduces to D(⌊x⌋).
pub fn lattice_count(x: f64) -> Result<u64> {
    if !(x >= 1.0) || !x.is_finite() {
        return domain(format!("lattice_count needs finite x >= 1, got {x}"));
    }
    divisor_sum_exact(x.floor() as u64)
}

/// x(log x + 2γ − 1) in double-double, with its absolute error budget.
pub fn main_term_dd(x: f64) -> Result<(DoubleDouble, f64)> {
    if !(x >= 1.0) || !x.is_finite() {
        return domain(format!("main_term needs finite x >= 1, got {x}"));
    }
    let g = GammaConst::VALUE.value;
    let inner = DoubleDouble::ln_f64(x) + g + g - DoubleDouble::from_f64(1.0);
    let value = DoubleDouble::from_f64(x) * inner;
    // ~2^-100 relative on each of a few dd operations
    let bound = (x * (x.ln().abs() + 2.0)) * 2f64.powi(-98) + f64::MIN_POSITIVE;
    Ok((value, bound))
}

/// x(log x + 2γ − 1), rounded to the nearest double.
pub fn main_term(x: f64) -> Result<f64> {
    main_term_dd(x).map(|(v, _)| v.to_f64())
}

/// One evaluation of the error term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub x: u64,
    pub d: u64,
    pub main: DoubleDouble,
    pub delta: f64,
    pub main_err_bound: f64,
}

/// Δ(x) = D(x) − x(log x + 2γ − 1), with the subtraction done in double-double.
pub fn delta(x: u64) -> Result<ErrorSample> {
    let d = divisor_sum_exact(x)?;
    let (main, main_err_bound) = main_term_dd(x as f64)?;
    let delta = (DoubleDouble::from_u128(d as u128) - main).to_f64();
    Ok(ErrorSample { x, d, main, delta, main_err_bound })
}
