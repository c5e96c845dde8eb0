//! Double-double arithmetic and compensated summation.
//!
//! A [`DoubleDouble`] carries an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand. Only the handful of operations needed
//! for `x (log x + 2γ − 1)` at `x ≤ 10¹²` are provided.

use std::ops::{Add, Mul, Neg, Sub};

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

/// ln 2 split into leading and trailing doubles.
const LN2: DoubleDouble = DoubleDouble::new(std::f64::consts::LN_2, 2.3190468138462996e-17);
/// √2 / 2, the reduction threshold for the mantissa.
const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Exact for every integer below 2¹⁰⁶.
    pub fn from_u128(n: u128) -> Self {
        let hi = n as f64;
        // `hi` rounds n; the remainder fits in the low word exactly.
        let rem = n as i128 - hi as i128;
        let (h, l) = quick_two_sum(hi, rem as f64);
        DoubleDouble { hi: h, lo: l }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let (s, t) = two_sum(self.hi, -p);
        let t = t - e + self.lo;
        let q2 = (s + t) / d;
        let (h, l) = quick_two_sum(q1, q2);
        DoubleDouble { hi: h, lo: l }
    }

    pub fn div(self, d: DoubleDouble) -> Self {
        let q1 = self.hi / d.hi;
        let r = self - d * DoubleDouble::from_f64(q1);
        let q2 = r.hi / d.hi;
        let r = r - d * DoubleDouble::from_f64(q2);
        let q3 = r.hi / d.hi;
        let (h, l) = quick_two_sum(q1, q2);
        DoubleDouble { hi: h, lo: l } + DoubleDouble::from_f64(q3)
    }

    /// Natural logarithm of a positive finite double, accurate to ~1e-31 relative.
    pub fn ln_f64(x: f64) -> Self {
        assert!(x > 0.0 && x.is_finite(), "ln_f64 needs a positive finite argument");
        let (mut mant, mut exp) = frexp(x);
        if mant < SQRT_HALF {
            mant *= 2.0;
            exp -= 1;
        }
        // mant ∈ [√½, √2): ln(mant) = 2 atanh(z), z = (mant − 1)/(mant + 1), |z| < 0.172.
        let num = DoubleDouble::from_f64(mant - 1.0);
        let den = DoubleDouble::from_f64(mant) + DoubleDouble::from_f64(1.0);
        let z = num.div(den);
        let z2 = z * z;
        let mut term = z;
        let mut acc = z;
        let mut k = 1.0;
        while k < 200.0 {
            term = term * z2;
            k += 2.0;
            let piece = term.div_f64(k);
            acc = acc + piece;
            if piece.hi.abs() <= 1e-34 * acc.hi.abs() {
                break;
            }
        }
        let ln_mant = acc * DoubleDouble::from_f64(2.0);
        LN2 * DoubleDouble::from_f64(exp as f64) + ln_mant
    }
}

/// Split a positive normal double into mantissa in [0.5, 1) and exponent.
fn frexp(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    if raw_exp == 0 {
        // subnormal: scale into the normal range first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let mant_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(mant_bits), raw_exp - 1022)
}

impl Add for DoubleDouble {
    type Output = DoubleDouble;
    fn add(self, o: DoubleDouble) -> DoubleDouble {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (h, l) = quick_two_sum(s1, s2);
        DoubleDouble { hi: h, lo: l }
    }
}

impl Neg for DoubleDouble {
    type Output = DoubleDouble;
    fn neg(self) -> DoubleDouble {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = DoubleDouble;
    fn sub(self, o: DoubleDouble) -> DoubleDouble {
        self + (-o)
    }
}

impl Mul for DoubleDouble {
    type Output = DoubleDouble;
    fn mul(self, o: DoubleDouble) -> DoubleDouble {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (h, l) = quick_two_sum(p, e);
        DoubleDouble { hi: h, lo: l }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of complex terms, real and imaginary parts accumulated separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: num_complex::Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_powers_of_two_is_multiple_of_ln2() {
        let l = DoubleDouble::ln_f64(1024.0);
        let expect = LN2 * DoubleDouble::from_f64(10.0);
        assert!((l - expect).to_f64().abs() < 1e-29);
    }

    #[test]
    fn ln_matches_libm_to_double_precision() {
        for &x in &[0.3, 1.0, 1.5, 2.718281828459045, 100.0, 1e12, 3.7e-5] {
            let l = DoubleDouble::ln_f64(x);
            assert!((l.to_f64() - x.ln()).abs() <= 2.0 * f64::EPSILON * x.ln().abs().max(1.0));
        }
    }

    #[test]
    fn ln_ten_against_reference_digits() {
        // ln 10 = 2.302585092994045684017991454684364207601...
        let l = DoubleDouble::ln_f64(10.0);
        assert_eq!(l.hi, 2.302585092994046);
        assert!((l.lo - (-2.1707562233822494e-16)).abs() < 1e-31);
    }

    #[test]
    fn from_u128_is_exact() {
        let n: u128 = (1u128 << 80) + 12345;
        let d = DoubleDouble::from_u128(n);
        assert_eq!(d.hi as i128 + d.lo as i128, n as i128);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }
}
