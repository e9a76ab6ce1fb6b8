//! Exact dyadic rationals `p / 2^e`.
//!
//! Every value the comparison-count formulas produce has a power-of-two
//! denominator, so a signed 128-bit numerator paired with a binary exponent
//! evaluates all of them with no rounding. Values are kept canonical (the
//! numerator is odd unless the exponent is zero), which makes `==` and `Hash`
//! structural.
//!
//! Arithmetic is checked: anything that would overflow the numerator or push
//! the exponent past [`MAX_EXPONENT`] returns [`Error::Overflow`]. The operator
//! impls (`+`, `-`, `*`, unary `-`) panic in that case, like integer overflow
//! in debug builds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest exponent a canonical [`Dyadic`] may carry.
pub const MAX_EXPONENT: u32 = 124;

/// A rational number whose denominator is a power of two.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };

    /// Canonical `p / 2^e`.
    ///
    /// Panics if the canonical exponent exceeds [`MAX_EXPONENT`]; use
    /// [`Dyadic::try_new`] for a fallible version.
    pub fn new(p: i128, e: u32) -> Dyadic {
        Self::try_new(p, e).expect("dyadic exponent out of range")
    }

    pub fn try_new(p: i128, e: u32) -> Result<Dyadic> {
        if p == 0 {
            return Ok(Self::ZERO);
        }
        let shift = p.trailing_zeros().min(e);
        let (num, exp) = (p >> shift, e - shift);
        if exp > MAX_EXPONENT {
            return Err(Error::Overflow);
        }
        Ok(Dyadic { num, exp })
    }

    pub const fn from_int(n: i128) -> Dyadic {
        Dyadic { num: n, exp: 0 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    /// Binary exponent `e` of the canonical form `p / 2^e`.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<i128> {
        self.is_integer().then_some(self.num)
    }

    /// `⌊x⌋`, by arithmetic shift.
    pub fn floor(&self) -> i128 {
        self.num >> self.exp
    }

    /// `⌈x⌉`.
    pub fn ceil(&self) -> i128 {
        self.floor() + i128::from(self.frac_bits() != 0)
    }

    /// Numerator of `x - ⌊x⌋` over `2^exp`, in `[0, 2^exp)`.
    fn frac_bits(&self) -> u128 {
        if self.exp == 0 {
            0
        } else {
            (self.num as u128) & ((1u128 << self.exp) - 1)
        }
    }

    /// `x - ⌊x⌋`, in `[0, 1)`.
    pub fn frac(&self) -> Dyadic {
        // frac_bits < 2^exp <= 2^124 fits in i128
        Dyadic::new(self.frac_bits() as i128, self.exp)
    }

    /// Distance to the nearest integer, `min(x - ⌊x⌋, ⌈x⌉ - x)`.
    pub fn zigzag(&self) -> Dyadic {
        if self.exp == 0 {
            return Self::ZERO;
        }
        let r = self.frac_bits();
        let d = r.min((1u128 << self.exp) - r);
        Dyadic::new(d as i128, self.exp)
    }

    pub fn checked_neg(&self) -> Result<Dyadic> {
        let num = self.num.checked_neg().ok_or(Error::Overflow)?;
        Ok(Dyadic { num, exp: self.exp })
    }

    pub fn abs(&self) -> Result<Dyadic> {
        if self.num < 0 {
            self.checked_neg()
        } else {
            Ok(*self)
        }
    }

    /// Numerator rescaled to the exponent `target >= self.exp`.
    fn numerator_at(&self, target: u32) -> Result<i128> {
        debug_assert!(target >= self.exp);
        shl_checked(self.num, target - self.exp)
    }

    pub fn checked_add(&self, rhs: &Dyadic) -> Result<Dyadic> {
        let e = self.exp.max(rhs.exp);
        let a = self.numerator_at(e)?;
        let b = rhs.numerator_at(e)?;
        Dyadic::try_new(a.checked_add(b).ok_or(Error::Overflow)?, e)
    }

    pub fn checked_sub(&self, rhs: &Dyadic) -> Result<Dyadic> {
        let e = self.exp.max(rhs.exp);
        let a = self.numerator_at(e)?;
        let b = rhs.numerator_at(e)?;
        Dyadic::try_new(a.checked_sub(b).ok_or(Error::Overflow)?, e)
    }

    pub fn checked_mul(&self, rhs: &Dyadic) -> Result<Dyadic> {
        let num = self.num.checked_mul(rhs.num).ok_or(Error::Overflow)?;
        Dyadic::try_new(num, self.exp + rhs.exp)
    }

    pub fn checked_mul_int(&self, k: i128) -> Result<Dyadic> {
        let num = self.num.checked_mul(k).ok_or(Error::Overflow)?;
        Dyadic::try_new(num, self.exp)
    }

    /// `x · 2^k`.
    pub fn mul_pow2(&self, k: u32) -> Result<Dyadic> {
        if self.num == 0 {
            return Ok(Self::ZERO);
        }
        if k <= self.exp {
            Ok(Dyadic {
                num: self.num,
                exp: self.exp - k,
            })
        } else {
            let num = shl_checked(self.num, k - self.exp)?;
            Ok(Dyadic { num, exp: 0 })
        }
    }

    /// `x / 2^k`.
    pub fn div_pow2(&self, k: u32) -> Result<Dyadic> {
        let exp = self.exp.checked_add(k).ok_or(Error::Overflow)?;
        Dyadic::try_new(self.num, exp)
    }

    /// Exact form `p/2^e`.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/2^{}", self.num, self.exp)
    }

    /// Exact terminating decimal expansion.
    pub fn to_decimal_string(&self) -> String {
        let mut s = String::new();
        if self.num < 0 {
            s.push('-');
        }
        let mag = self.num.unsigned_abs();
        let int_part = mag >> self.exp;
        s.push_str(&int_part.to_string());
        if self.exp > 0 {
            s.push('.');
            let mask = (1u128 << self.exp) - 1;
            let mut r = mag & mask;
            // r < 2^124, so 10·r stays below 2^128.
            while r != 0 {
                r *= 10;
                let digit = (r >> self.exp) as u8;
                s.push((b'0' + digit) as char);
                r &= mask;
            }
        }
        s
    }
}

fn shl_checked(v: i128, s: u32) -> Result<i128> {
    if v == 0 {
        return Ok(0);
    }
    if s >= 127 {
        return Err(Error::Overflow);
    }
    v.checked_mul(1i128 << s).ok_or(Error::Overflow)
}

/// `⌊lg n⌋`: the largest `k` with `2^k <= n`.
pub fn floor_lg(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroArgument { op: "floor_lg" });
    }
    Ok(63 - n.leading_zeros())
}

/// `⌈lg n⌉`: the smallest `k` with `2^k >= n`.
pub fn ceil_lg(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroArgument { op: "ceil_lg" });
    }
    Ok(if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    })
}

/// `d · Zigzag(n / d)` for an arbitrary positive integer `d`.
///
/// This is always the integer `min(n mod d, d - n mod d)`, even when `n / d`
/// is not dyadic.
pub fn scaled_zigzag(n: u128, d: u128) -> Result<u128> {
    if d == 0 {
        return Err(Error::ZeroArgument {
            op: "scaled_zigzag",
        });
    }
    let r = n % d;
    Ok(r.min(d - r))
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.floor().cmp(&other.floor()).then_with(|| {
            // Both fractional parts are below 2^exp <= 2^124: align without overflow.
            let e = self.exp.max(other.exp);
            let a = self.frac_bits() << (e - self.exp);
            let b = other.frac_bits() << (e - other.exp);
            a.cmp(&b)
        })
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({})", self.to_fraction_string())
    }
}

macro_rules! impl_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Dyadic {
            fn from(v: $t) -> Dyadic {
                Dyadic::from_int(v as i128)
            }
        }
    )*};
}
impl_from_int!(i8, i16, i32, i64, u8, u16, u32, u64);

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        self.checked_add(&rhs)
            .expect("attempt to add with overflow")
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self.checked_sub(&rhs)
            .expect("attempt to subtract with overflow")
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        self.checked_mul(&rhs)
            .expect("attempt to multiply with overflow")
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        self.checked_neg().expect("attempt to negate with overflow")
    }
}

/// Failure to read a dyadic literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid dyadic literal {literal:?}: {reason}")]
pub struct ParseDyadicError {
    pub literal: String,
    pub reason: &'static str,
}

/// Converts the digits after a decimal point into `p/2^e` by repeated doubling.
///
/// Returns `None` unless the fraction terminates in binary within
/// `MAX_EXPONENT` bits.
fn decimal_fraction_to_binary(digits: &str) -> Option<(i128, u32)> {
    let mut ds: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
    let (mut num, mut exp) = (0i128, 0u32);
    while ds.iter().any(|&d| d != 0) {
        if exp == MAX_EXPONENT {
            return None;
        }
        let mut carry = 0;
        for d in ds.iter_mut().rev() {
            let v = *d * 2 + carry;
            *d = v % 10;
            carry = v / 10;
        }
        num = (num << 1) | i128::from(carry);
        exp += 1;
    }
    Some((num, exp))
}

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    /// Accepts `p/2^e`, `p/q` with `q` a power of two, a terminating decimal
    /// with a dyadic value, or a plain integer.
    fn from_str(s: &str) -> std::result::Result<Dyadic, ParseDyadicError> {
        let err = |reason| ParseDyadicError {
            literal: s.to_string(),
            reason,
        };
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| err("bad numerator"))?;
            let q = q.trim();
            let e = if let Some(e) = q.strip_prefix("2^") {
                e.parse::<u32>().map_err(|_| err("bad exponent"))?
            } else {
                let q: u128 = q.parse().map_err(|_| err("bad denominator"))?;
                if q == 0 {
                    return Err(err("zero denominator"));
                }
                if !q.is_power_of_two() {
                    return Err(err("denominator is not a power of two"));
                }
                q.trailing_zeros()
            };
            return Dyadic::try_new(p, e).map_err(|_| err("exponent out of range"));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_s, frac_s) = body.split_once('.').unwrap_or((body, ""));
        if int_s.is_empty() && frac_s.is_empty() {
            return Err(err("empty number"));
        }
        if !int_s
            .bytes()
            .chain(frac_s.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(err("not a number"));
        }
        let int_v: i128 = if int_s.is_empty() {
            0
        } else {
            int_s
                .parse()
                .map_err(|_| err("integer part out of range"))?
        };
        let (frac_num, frac_exp) = decimal_fraction_to_binary(frac_s.trim_end_matches('0'))
            .ok_or_else(|| err("decimal has no finite binary expansion within range"))?;
        let magnitude = int_v
            .checked_mul(1i128 << frac_exp)
            .and_then(|v| v.checked_add(frac_num))
            .ok_or_else(|| err("value out of range"))?;
        let value = if neg { -magnitude } else { magnitude };
        Dyadic::try_new(value, frac_exp).map_err(|_| err("exponent out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: i128, e: u32) -> Dyadic {
        Dyadic::new(p, e)
    }

    #[test]
    fn new_canonicalizes() {
        assert_eq!(d(6, 1), Dyadic::from_int(3));
        assert_eq!(d(6, 1).exponent(), 0);
        let x = d(5, 3);
        assert_eq!((x.numerator(), x.exponent()), (5, 3));
        let z = d(0, 7);
        assert_eq!((z.numerator(), z.exponent()), (0, 0));
        assert_eq!(d(12, 4), d(3, 2));
        assert_eq!(d(-8, 2), Dyadic::from_int(-2));
    }

    #[test]
    fn new_rejects_huge_exponent() {
        assert_eq!(Dyadic::try_new(1, 200), Err(Error::Overflow));
        // cancels back into range
        assert_eq!(Dyadic::try_new(1 << 100, 200).unwrap(), d(1, 100));
    }

    #[test]
    fn zigzag_examples() {
        assert_eq!(d(5, 1).zigzag(), Dyadic::HALF);
        assert_eq!(d(5, 3).zigzag(), d(3, 3));
        assert_eq!(Dyadic::from_int(7).zigzag(), Dyadic::ZERO);
        assert_eq!(d(-1, 2).zigzag(), d(1, 2));
        assert_eq!(d(-7, 3).zigzag(), d(1, 3));
    }

    #[test]
    fn floor_and_ceil_lg() {
        assert_eq!(floor_lg(1), Ok(0));
        assert_eq!(floor_lg(5), Ok(2));
        assert_eq!(floor_lg(1024), Ok(10));
        assert_eq!(floor_lg(u64::MAX), Ok(63));
        assert_eq!(ceil_lg(1), Ok(0));
        assert_eq!(ceil_lg(5), Ok(3));
        assert_eq!(ceil_lg(8), Ok(3));
        assert_eq!(ceil_lg(u64::MAX), Ok(64));
        assert!(matches!(floor_lg(0), Err(Error::ZeroArgument { .. })));
        assert!(matches!(ceil_lg(0), Err(Error::ZeroArgument { .. })));
    }

    #[test]
    fn floor_ceil_frac_of_negatives() {
        let x = d(-5, 2); // -1.25
        assert_eq!(x.floor(), -2);
        assert_eq!(x.ceil(), -1);
        assert_eq!(x.frac(), d(3, 2));
        assert_eq!(Dyadic::from_int(-3).ceil(), -3);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(d(1, 2) + d(1, 2), Dyadic::HALF);
        assert_eq!(d(3, 3) - d(5, 3), d(-1, 2));
        assert_eq!(d(3, 1) * d(3, 2), d(9, 3));
        assert_eq!(d(3, 3).mul_pow2(5).unwrap(), Dyadic::from_int(12));
        assert_eq!(Dyadic::from_int(12).div_pow2(3).unwrap(), d(3, 1));
        assert_eq!(-d(3, 1), d(-3, 1));
    }

    #[test]
    fn overflow_is_reported() {
        let big = Dyadic::from_int(i128::MAX);
        assert_eq!(big.checked_add(&Dyadic::ONE), Err(Error::Overflow));
        assert_eq!(big.mul_pow2(1), Err(Error::Overflow));
        assert_eq!(Dyadic::ONE.mul_pow2(127), Err(Error::Overflow));
        assert_eq!(
            Dyadic::from_int(i128::MIN).checked_neg(),
            Err(Error::Overflow)
        );
        assert_eq!(Dyadic::ONE.div_pow2(125), Err(Error::Overflow));
    }

    #[test]
    fn ordering() {
        assert!(d(5, 3) < d(3, 2));
        assert!(d(13, 2) > d(3, 0));
        assert!(d(-1, 1) < Dyadic::ZERO);
        assert!(d(-3, 2) < d(-5, 3));
        assert!(d(1, 124) > Dyadic::ZERO);
        assert!(Dyadic::from_int(i128::MAX) > d(1, 124));
        assert_eq!(d(7, 3).cmp(&d(7, 3)), Ordering::Equal);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(d(3, 3).to_string(), "0.375");
        assert_eq!(d(-5, 2).to_string(), "-1.25");
        assert_eq!(Dyadic::from_int(42).to_string(), "42");
        assert_eq!(d(-1, 1).to_string(), "-0.5");
        assert_eq!(d(1, 10).to_string(), "0.0009765625");
        assert_eq!(d(5, 3).to_fraction_string(), "5/2^3");
        let tiny = d(1, MAX_EXPONENT).to_string();
        assert_eq!(tiny.len(), 2 + MAX_EXPONENT as usize);
        assert!(tiny.ends_with('5'));
    }

    #[test]
    fn parsing() {
        assert_eq!("3/8".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("5/2^3".parse::<Dyadic>().unwrap(), d(5, 3));
        assert_eq!("0.375".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("-1.25".parse::<Dyadic>().unwrap(), d(-5, 2));
        assert_eq!("7".parse::<Dyadic>().unwrap(), Dyadic::from_int(7));
        assert_eq!(".5".parse::<Dyadic>().unwrap(), Dyadic::HALF);
        assert_eq!("2.500".parse::<Dyadic>().unwrap(), d(5, 1));
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("0.1".parse::<Dyadic>().is_err());
        assert!("1/0".parse::<Dyadic>().is_err());
        assert!("abc".parse::<Dyadic>().is_err());
        assert!("".parse::<Dyadic>().is_err());
        assert!("1/2^999".parse::<Dyadic>().is_err());
    }

    #[test]
    fn scaled_zigzag_matches_dyadic_zigzag() {
        for n in 0..64u128 {
            for k in 0..7u32 {
                let via_dyadic = d(n as i128, k).zigzag().mul_pow2(k).unwrap();
                let direct = scaled_zigzag(n, 1 << k).unwrap();
                assert_eq!(via_dyadic, Dyadic::from_int(direct as i128));
            }
        }
        assert_eq!(scaled_zigzag(1, 6), Ok(1));
        assert!(scaled_zigzag(1, 0).is_err());
    }
}
