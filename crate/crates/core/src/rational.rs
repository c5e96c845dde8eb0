use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exact rational with 64-bit numerator and denominator, always gcd-reduced with `den > 0`.
///
/// Arithmetic goes through 128-bit intermediates and fails with [`Error::Overflow`]
/// when the reduced result no longer fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::from_i128(num as i128, den as i128, "new")
    }

    pub fn integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    fn from_i128(num: i128, den: i128, op: &'static str) -> Result<Self> {
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        if g > 1 {
            num /= g;
            den /= g;
        }
        let num = i64::try_from(num).map_err(|_| Error::Overflow(op))?;
        let den = i64::try_from(den).map_err(|_| Error::Overflow(op))?;
        Ok(Rational { num, den })
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, o: Rational) -> Result<Rational> {
        let n = self.num as i128 * o.den as i128 + o.num as i128 * self.den as i128;
        Self::from_i128(n, self.den as i128 * o.den as i128, "add")
    }

    pub fn checked_sub(self, o: Rational) -> Result<Rational> {
        self.checked_add(Rational { num: -o.num, den: o.den })
    }

    pub fn checked_mul(self, o: Rational) -> Result<Rational> {
        Self::from_i128(
            self.num as i128 * o.num as i128,
            self.den as i128 * o.den as i128,
            "mul",
        )
    }

    pub fn checked_div(self, o: Rational) -> Result<Rational> {
        if o.num == 0 {
            return Err(Error::Domain("division by zero rational".into()));
        }
        Self::from_i128(
            self.num as i128 * o.den as i128,
            self.den as i128 * o.num as i128,
            "div",
        )
    }

    /// ⌊self⌋
    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    /// ⌈self⌉
    pub fn ceil(&self) -> i64 {
        -(-self.num).div_euclid(self.den)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p/q` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                Rational::new(p, q)
            }
            None => Ok(Rational::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}
