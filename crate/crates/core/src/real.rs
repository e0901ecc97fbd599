//! Binary fixed-point reals for reporting logarithms of exact rationals.
//!
//! A [`Real`] is `mant / 2^bits`. Values are produced by truncating series
//! evaluated with guard bits, so the stored value is within a few units in
//! the last place of the true value. Callers that need stable printed digits
//! recompute at a higher precision and compare.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 128;

const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mant: BigInt,
    bits: u32,
}

/// How surplus decimal digits are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Truncate,
    Nearest,
}

/// A value rounded to a fixed number of significant decimal digits:
/// `sign * 0.d1 d2 ... * 10^(exponent + 1)`, i.e. `d1.d2... * 10^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    pub negative: bool,
    pub digits: String,
    pub exponent: i64,
}

impl Decimal {
    /// `d.ddd` followed by `e<exponent>` unless the exponent is zero.
    pub fn scientific(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        let (head, tail) = self.digits.split_at(1);
        let mut s = format!("{sign}{head}");
        if !tail.is_empty() {
            s.push('.');
            s.push_str(tail);
        }
        if self.exponent != 0 {
            s.push_str(&format!("e{}", self.exponent));
        }
        s
    }

    /// Positional notation with no exponent.
    pub fn plain(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        let d = &self.digits;
        let e = self.exponent;
        let body = if e < 0 {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), d)
        } else if (e as usize) + 1 >= d.len() {
            format!("{}{}", d, "0".repeat(e as usize + 1 - d.len()))
        } else {
            let (a, b) = d.split_at(e as usize + 1);
            format!("{a}.{b}")
        };
        format!("{sign}{body}")
    }
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real {
            mant: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        Real {
            mant: BigInt::from(v) << bits,
            bits,
        }
    }

    /// Largest representable value not above `r`.
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let scaled = r.numer() << bits;
        Real {
            mant: scaled.div_floor(r.denom()),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Drops fractional bits (rounding toward negative infinity) or pads
    /// with zeros.
    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits),
            Ordering::Less => self.mant.div_floor(&(BigInt::one() << (self.bits - bits))),
        };
        Real { mant, bits }
    }

    pub fn neg(&self) -> Self {
        Real {
            mant: -&self.mant,
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Real) -> Self {
        let bits = self.bits.max(other.bits);
        Real {
            mant: self.with_bits(bits).mant + other.with_bits(bits).mant,
            bits,
        }
    }

    pub fn sub(&self, other: &Real) -> Self {
        self.add(&other.neg())
    }

    /// Division by a positive integer, rounding toward negative infinity.
    pub fn div_int(&self, d: u64) -> Self {
        assert!(d > 0, "division by zero");
        Real {
            mant: self.mant.div_floor(&BigInt::from(d)),
            bits: self.bits,
        }
    }

    /// The exact rational value of the stored representation.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// `log2(x)` for a positive rational `x`.
    pub fn log2(x: &BigRational, bits: u32) -> Result<Real> {
        if !x.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "log2 of non-positive value {x}"
            )));
        }
        let w = bits + GUARD_BITS;
        // x = 2^e * y with y in [2/3, 4/3), so z = (y - 1)/(y + 1) has |z| <= 1/7.
        let num_bits = x.numer().bits() as i64;
        let den_bits = x.denom().bits() as i64;
        let mut e = num_bits - den_bits;
        let mut y = scale_pow2(x, -e);
        let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
        let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
        while y < two_thirds {
            y *= BigInt::from(2);
            e -= 1;
        }
        while y >= four_thirds {
            y /= BigInt::from(2);
            e += 1;
        }
        let one = BigRational::one();
        let z = (&y - &one) / (&y + &one);
        let ln_y = atanh_fixed(&z, w) << 1u32;
        let ln2 = atanh_fixed(&BigRational::new(BigInt::one(), BigInt::from(3)), w) << 1u32;
        let frac = (ln_y << w).div_floor(&ln2);
        let mant = (BigInt::from(e) << w) + frac;
        Ok(Real { mant, bits: w }.with_bits(bits))
    }

    /// Rounds to `sig` significant decimal digits. Zero is rendered with an
    /// all-zero digit string and exponent zero.
    pub fn to_decimal(&self, sig: usize, mode: Rounding) -> Decimal {
        assert!(sig > 0, "need at least one significant digit");
        let negative = self.mant.is_negative();
        let abs = BigRational::new(self.mant.abs(), BigInt::one() << self.bits);
        if abs.is_zero() {
            return Decimal {
                negative: false,
                digits: "0".repeat(sig),
                exponent: 0,
            };
        }
        let mut exp = estimate_log10(&abs);
        let lo = BigInt::from(10u32).pow(sig as u32 - 1);
        let hi = &lo * 10u32;
        loop {
            let scaled = scale_pow10(&abs, sig as i64 - 1 - exp);
            let n = match mode {
                Rounding::Truncate => scaled.floor().to_integer(),
                Rounding::Nearest => (scaled + BigRational::new(BigInt::one(), BigInt::from(2)))
                    .floor()
                    .to_integer(),
            };
            if n < lo {
                exp -= 1;
            } else if n >= hi {
                exp += 1;
            } else {
                return Decimal {
                    negative,
                    digits: n.to_string(),
                    exponent: exp,
                };
            }
        }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let bits = self.bits.max(other.bits);
        self.with_bits(bits).mant.cmp(&other.with_bits(bits).mant)
    }
}

impl fmt::Display for Real {
    /// Thirty significant digits, rounded to nearest.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(30, Rounding::Nearest).scientific())
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn scale_pow2(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::new(x.numer() << e as u64, x.denom().clone())
    } else {
        BigRational::new(x.numer().clone(), x.denom() << (-e) as u64)
    }
}

fn scale_pow10(x: &BigRational, e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        x * p
    } else {
        x / p
    }
}

fn estimate_log10(x: &BigRational) -> i64 {
    let nb = x.numer().bits() as f64;
    let db = x.denom().bits() as f64;
    ((nb - db) * std::f64::consts::LOG10_2).floor() as i64
}

/// `atanh(z) * 2^w`, truncated toward zero, for `|z| <= 1/3`.
fn atanh_fixed(z: &BigRational, w: u32) -> BigInt {
    if z.is_zero() {
        return BigInt::zero();
    }
    let zf = (z.numer().abs() << w) / z.denom();
    let z2 = (&zf * &zf) >> w;
    let mut pow = zf;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !pow.is_zero() {
        sum += &pow / BigInt::from(k);
        pow = (&pow * &z2) >> w;
        k += 2;
    }
    if z.is_negative() {
        -sum
    } else {
        sum
    }
}
