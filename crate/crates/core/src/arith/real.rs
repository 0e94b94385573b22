use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factorize;

/// Fractional bits carried by [`Real`].
pub const FRAC_BITS: u32 = 96;

/// Binary fixed-point real number: the value is `raw / 2^FRAC_BITS`.
///
/// Addition and subtraction are exact; multiplication rounds to nearest and
/// division truncates, so each operation contributes at most one unit in the
/// last place (2^-96). Logarithms are only offered for integers and
/// rationals, which is all the approximation formulas need.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Real {
    raw: BigInt,
}

fn round_shr(value: BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return value;
    }
    let half = BigInt::one() << (bits - 1);
    (value + half) >> bits
}

/// `round(atanh(1/k) * 2^scale_bits)` for `k >= 3`, `scale_bits <= 126`.
pub(crate) fn atanh_inv_raw(k: u64, scale_bits: u32) -> u128 {
    debug_assert!(k >= 3 && scale_bits <= 126);
    let k = u128::from(k);
    let k2 = k * k;
    let mut term = (1u128 << scale_bits) / k;
    let mut sum = term;
    let mut j: u128 = 1;
    loop {
        term /= k2;
        if term == 0 {
            break;
        }
        sum += term / (2 * j + 1);
        j += 1;
    }
    sum
}

/// `round(ln(p) * 2^scale_bits)` for a prime `p`, via
/// `ln p = ln(p - 1) + 2 atanh(1 / (2p - 1))`.
fn ln_prime_raw(p: u64, scale_bits: u32) -> u128 {
    if p == 2 {
        return 2 * atanh_inv_raw(3, scale_bits);
    }
    ln_int_raw(p - 1, scale_bits) + 2 * atanh_inv_raw(2 * p - 1, scale_bits)
}

fn ln_int_raw(n: u64, scale_bits: u32) -> u128 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| u128::from(e) * ln_prime_raw(p, scale_bits))
        .sum()
}

// ln n < 45 for every u64, so 6 integer bits plus headroom fit in u128.
const LN_SCALE: u32 = 120;

impl Real {
    pub fn zero() -> Self {
        Real { raw: BigInt::zero() }
    }

    pub fn one() -> Self {
        Real {
            raw: BigInt::one() << FRAC_BITS,
        }
    }

    pub fn from_raw(raw: BigInt) -> Self {
        Real { raw }
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Real {
            raw: n.into() << FRAC_BITS,
        }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        let num = r.numer() << FRAC_BITS;
        let den = r.denom();
        // round to nearest: floor((2 num + den) / (2 den))
        let raw = (num * 2u32 + den).div_floor(&(den * 2u32));
        Real { raw }
    }

    /// Natural logarithm of a positive integer.
    pub fn ln_u64(n: u64) -> Self {
        assert!(n >= 1, "ln of zero");
        let raw = ln_int_raw(n, LN_SCALE);
        Real {
            raw: round_shr(BigInt::from(raw), LN_SCALE - FRAC_BITS),
        }
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_ratio(num: u64, den: u64) -> Self {
        Self::ln_u64(num) - Self::ln_u64(den)
    }

    /// Parses a plain decimal literal such as `-0.5772156649`.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let raw: BigInt = ((digits << (FRAC_BITS + 1)) / &scale + 1u32) >> 1;
        Some(Real {
            raw: if neg { -raw } else { raw },
        })
    }

    pub fn abs(&self) -> Self {
        Real { raw: self.raw.abs() }
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        Real {
            raw: (&self.raw << FRAC_BITS).sqrt(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        // split so the integer conversion never saturates
        let int = &self.raw >> FRAC_BITS;
        let frac = &self.raw - (&int << FRAC_BITS);
        int.to_f64().unwrap_or(f64::NAN) + frac.to_f64().unwrap_or(0.0) * 2f64.powi(-(FRAC_BITS as i32))
    }

    /// Decimal rendering rounded to `digits` fractional places.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let mag = self.raw.abs();
        let scaled = round_shr(mag * &scale, FRAC_BITS);
        let (int, frac) = scaled.div_rem(&scale);
        let sign = if self.raw.sign() == Sign::Minus && !scaled.is_zero() {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!(
                "{sign}{int}.{frac:0>width$}",
                frac = frac.to_string(),
                width = digits as usize
            )
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(24))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12) as u32;
        f.write_str(&self.to_decimal(digits))
    }
}

impl From<u64> for Real {
    fn from(n: u64) -> Self {
        Real::from_int(n)
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Self {
        Real::from_int(n)
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.to_f64() == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.to_f64().partial_cmp(other)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let $a = &self.raw;
                let $b = &rhs.raw;
                Real { raw: $body }
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a + b);
forward_binop!(Sub, sub, |a, b| a - b);
forward_binop!(Mul, mul, |a, b| round_shr(a * b, FRAC_BITS));
forward_binop!(Div, div, |a, b| {
    assert!(!b.is_zero(), "division by zero");
    (a << FRAC_BITS) / b
});

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { raw: -self.raw }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { raw: -&self.raw }
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |acc, x| acc + x)
    }
}
