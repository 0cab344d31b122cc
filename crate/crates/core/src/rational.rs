//! Exact rational helpers: parsing, directed rounding of roots and decimal output.
//!
//! Irrational quantities never enter a correctness path as floats. They are
//! replaced by dyadic rationals rounded in a stated direction, so an inequality
//! proved on the rounded value is also true for the real one.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Bits of precision used for certified roots unless a caller asks otherwise.
pub const DEFAULT_PRECISION_BITS: u32 = 60;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn uint(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q` or an integer literal. Decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::ParseRational(s.to_string());
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| err());
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(parse_int(p)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

fn pow2(bits: u64) -> BigUint {
    BigUint::one() << bits
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("nonnegative")
}

/// Largest dyadic `r / 2^bits` with `(r / 2^bits)^k <= x`. Exact for `k == 1`.
pub fn floor_root(x: &Rational, k: u32, bits: u32) -> Rational {
    assert!(k >= 1, "root degree must be positive");
    assert!(!x.is_negative(), "root of a negative number");
    if k == 1 {
        return x.clone();
    }
    let scale = pow2(u64::from(bits) * u64::from(k));
    let n = (to_biguint(x.numer()) * scale) / to_biguint(x.denom());
    let r = n.nth_root(k);
    Rational::new(BigInt::from(r), BigInt::from(pow2(u64::from(bits))))
}

/// Smallest dyadic `r / 2^bits` with `(r / 2^bits)^k >= x`. Exact for `k == 1`.
pub fn ceil_root(x: &Rational, k: u32, bits: u32) -> Rational {
    assert!(k >= 1, "root degree must be positive");
    assert!(!x.is_negative(), "root of a negative number");
    if k == 1 {
        return x.clone();
    }
    let scale = pow2(u64::from(bits) * u64::from(k));
    let (q, rem) = (to_biguint(x.numer()) * scale).div_rem(&to_biguint(x.denom()));
    let n = if rem.is_zero() { q } else { q + 1u32 };
    let mut r = n.nth_root(k);
    if r.pow(k) < n {
        r += 1u32;
    }
    Rational::new(BigInt::from(r), BigInt::from(pow2(u64::from(bits))))
}

/// `x^(p/q)` for `x >= 0` and `p/q >= 0`, rounded down to a dyadic rational.
pub fn floor_pow(x: &Rational, exponent: &Rational, bits: u32) -> Rational {
    let (p, q) = exponent_parts(exponent);
    floor_root(&num_traits::pow(x.clone(), p), q, bits)
}

/// `x^(p/q)` for `x >= 0` and `p/q >= 0`, rounded up to a dyadic rational.
pub fn ceil_pow(x: &Rational, exponent: &Rational, bits: u32) -> Rational {
    let (p, q) = exponent_parts(exponent);
    ceil_root(&num_traits::pow(x.clone(), p), q, bits)
}

fn exponent_parts(exponent: &Rational) -> (usize, u32) {
    assert!(!exponent.is_negative(), "negative exponent");
    let p = exponent
        .numer()
        .to_usize()
        .expect("exponent numerator too large");
    let q = exponent
        .denom()
        .to_u32()
        .expect("exponent denominator too large");
    (p, q)
}

/// Rounds `x` down onto the grid `2^-bits`.
pub fn floor_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::from(pow2(u64::from(bits)));
    let scaled = (x * Rational::from_integer(scale.clone())).floor();
    Rational::new(scaled.to_integer(), scale)
}

/// Rounds `x` up onto the grid `2^-bits`.
pub fn ceil_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::from(pow2(u64::from(bits)));
    let scaled = (x * Rational::from_integer(scale.clone())).ceil();
    Rational::new(scaled.to_integer(), scale)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn decimal_digits(x: &BigInt) -> i64 {
    x.magnitude().to_str_radix(10).len() as i64
}

/// Plain decimal rendering of `x` rounded half away from zero to `digits`
/// significant digits, e.g. `1.78885438200`.
pub fn to_decimal(x: &Rational, digits: u32) -> String {
    assert!(digits >= 1);
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = i64::from(digits);
    let neg = x.is_negative();
    let mag = x.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= |x| < 10^(e+1)
    let mut e = decimal_digits(mag.numer()) - decimal_digits(mag.denom());
    let pow10 = |k: i64| -> Rational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    };
    while mag < pow10(e) {
        e -= 1;
    }
    while mag >= pow10(e + 1) {
        e += 1;
    }

    let scaled = &mag * pow10(digits - 1 - e);
    let half = frac(1, 2);
    let mut n = (scaled + half).floor().to_integer();
    if decimal_digits(&n) > digits {
        n /= &ten;
        e += 1;
    }
    let s = n.to_str_radix(10);
    let body = if e >= digits - 1 {
        format!("{s}{}", "0".repeat((e - digits + 1) as usize))
    } else if e >= 0 {
        let (int_part, frac_part) = s.split_at((e + 1) as usize);
        format!("{int_part}.{frac_part}")
    } else {
        format!("0.{}{s}", "0".repeat((-e - 1) as usize))
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn l1_norm(v: &[Rational]) -> Rational {
    v.iter()
        .map(|x| x.abs())
        .fold(Rational::zero(), |acc, x| acc + x)
}
