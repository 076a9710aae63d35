//! Exact rational multiples of π.
//!
//! A [`PiRational`] stores only the rational coefficient `p/q`; the value it
//! denotes is `(p/q)·π` radians. Every operation the set kernel needs
//! (addition, dyadic scaling, shifts by `2πk`, rational scaling) stays inside
//! this representation, so endpoint bookkeeping never rounds.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `(num/den)·π`, always in lowest terms with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiRational(BigRational);

impl PiRational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        PiRational(BigRational::new(num.into(), den.into()))
    }

    pub fn integer(k: i64) -> Self {
        PiRational(BigRational::from_integer(k.into()))
    }

    pub fn zero() -> Self {
        PiRational(BigRational::zero())
    }

    pub fn from_coeff(coeff: BigRational) -> Self {
        PiRational(coeff)
    }

    /// The rational coefficient of π.
    pub fn coeff(&self) -> &BigRational {
        &self.0
    }

    pub fn into_coeff(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Multiply by `2^n` for any integer `n`.
    pub fn mul_pow2(&self, n: i64) -> Self {
        PiRational(&self.0 * pow2(n))
    }

    /// Add `2πk`.
    pub fn add_two_pi(&self, k: i64) -> Self {
        PiRational(&self.0 + BigRational::from_integer(BigInt::from(2 * k)))
    }

    /// Add `2π·shift` for a rational shift.
    pub fn add_two_pi_rational(&self, shift: &BigRational) -> Self {
        PiRational(&self.0 + shift * BigRational::from_integer(2.into()))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        PiRational(&self.0 * factor)
    }

    pub fn abs(&self) -> Self {
        PiRational(self.0.abs())
    }

    /// Value in radians.
    pub fn to_f64(&self) -> f64 {
        self.coeff_f64() * std::f64::consts::PI
    }

    pub fn coeff_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }
}

/// `2^n` as an exact rational.
pub fn pow2(n: i64) -> BigRational {
    let p = BigInt::one() << n.unsigned_abs();
    if n >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `d^n` for a rational `d > 0`.
pub fn pow_rational(d: &BigRational, n: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if n >= 0 { d.clone() } else { d.recip() };
    for _ in 0..n.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Largest `m` with `d^m <= x`, for `x > 0` and `d > 1`.
pub fn floor_log(x: &BigRational, d: &BigRational) -> i64 {
    debug_assert!(x.is_positive());
    let est = ratio_to_f64(x).ln() / ratio_to_f64(d).ln();
    let mut m = if est.is_finite() { est.floor() as i64 } else { 0 };
    let mut dm = pow_rational(d, m);
    while &dm > x {
        m -= 1;
        dm /= d;
    }
    loop {
        let next = &dm * d;
        if &next <= x {
            m += 1;
            dm = next;
        } else {
            break;
        }
    }
    m
}

/// Smallest `m` with `x <= d^m`, for `x > 0` and `d > 1`.
pub fn ceil_log(x: &BigRational, d: &BigRational) -> i64 {
    let m = floor_log(x, d);
    if pow_rational(d, m) == *x {
        m
    } else {
        m + 1
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // fall back to a shifted division for huge components
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `cos(πr) + i sin(πr)` with the argument reduced exactly modulo 2.
pub fn exp_i_pi(r: &BigRational) -> num_complex::Complex64 {
    let two = BigRational::from_integer(2.into());
    let q = (r / &two).floor();
    let reduced = r - q * two;
    let theta = ratio_to_f64(&reduced) * std::f64::consts::PI;
    num_complex::Complex64::new(theta.cos(), theta.sin())
}

impl Add for PiRational {
    type Output = PiRational;
    fn add(self, rhs: PiRational) -> PiRational {
        PiRational(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a PiRational> for &'a PiRational {
    type Output = PiRational;
    fn add(self, rhs: &PiRational) -> PiRational {
        PiRational(&self.0 + &rhs.0)
    }
}

impl Sub for PiRational {
    type Output = PiRational;
    fn sub(self, rhs: PiRational) -> PiRational {
        PiRational(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a PiRational> for &'a PiRational {
    type Output = PiRational;
    fn sub(self, rhs: &PiRational) -> PiRational {
        PiRational(&self.0 - &rhs.0)
    }
}

impl Neg for PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational(-self.0)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.numer();
        let d = self.0.denom();
        if n.is_zero() {
            return write!(f, "0");
        }
        let sign = if n.is_negative() { "-" } else { "" };
        let a = n.abs();
        let num = if a.is_one() { String::new() } else { a.to_string() };
        if d.is_one() {
            write!(f, "{sign}{num}π")
        } else {
            write!(f, "{sign}{num}π/{d}")
        }
    }
}

/// Parses `p/q`, `p`, with an optional `pi`/`π` marker (`3/7pi`, `-π/2`).
/// The parsed number is the coefficient of π.
impl FromStr for PiRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let cleaned = s.trim().replace("pi", "").replace(['π', ' '], "");
        let cleaned = match cleaned.as_str() {
            "" => "1".to_string(),
            "-" => "-1".to_string(),
            c if c.starts_with('/') => format!("1{c}"),
            c if c.starts_with("-/") => format!("-1{}", &c[1..]),
            c => c.to_string(),
        };
        parse_rational(&cleaned).map(PiRational)
    }
}

/// Parses `p/q` or `p` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Serde adapters writing a [`BigRational`] as `{"num": .., "den": ..}`.
///
/// Components that fit in `i64` are emitted as JSON numbers, larger ones as
/// decimal strings; both forms are accepted on input.
pub mod exact {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum IntRepr {
        Small(i64),
        Big(String),
    }

    impl IntRepr {
        fn from_big(v: &BigInt) -> Self {
            match v.to_i64() {
                Some(x) => IntRepr::Small(x),
                None => IntRepr::Big(v.to_string()),
            }
        }

        fn into_big<E: serde::de::Error>(self) -> std::result::Result<BigInt, E> {
            match self {
                IntRepr::Small(x) => Ok(x.into()),
                IntRepr::Big(s) => s.parse().map_err(E::custom),
            }
        }
    }

    #[derive(Serialize, Deserialize)]
    struct RatioRepr {
        num: IntRepr,
        den: IntRepr,
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatioRepr {
            num: IntRepr::from_big(r.numer()),
            den: IntRepr::from_big(r.denom()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        use serde::de::Error as _;
        let repr = RatioRepr::deserialize(d)?;
        let num: BigInt = repr.num.into_big()?;
        let den: BigInt = repr.den.into_big()?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

impl Serialize for PiRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        exact::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for PiRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        exact::deserialize(d).map(PiRational)
    }
}

/// `gcd`-reduced check used by tests and debug assertions.
pub fn is_reduced(r: &PiRational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_sign_and_gcd() {
        let x = PiRational::new(6, -8);
        assert_eq!(x, PiRational::new(-3, 4));
        assert!(is_reduced(&x));
        assert_eq!(PiRational::new(0, 5), PiRational::zero());
        assert_eq!(PiRational::zero().denom(), &BigInt::one());
    }

    #[test]
    fn dyadic_scaling_is_exact_far_out() {
        let x = PiRational::new(-32, 7);
        let up = x.mul_pow2(64);
        assert_eq!(up.mul_pow2(-64), x);
        assert_eq!(up.numer(), &(BigInt::from(-32) << 64u32));
    }

    #[test]
    fn parses_pi_forms() {
        assert_eq!("1/2".parse::<PiRational>().unwrap(), PiRational::new(1, 2));
        assert_eq!("-π/7".parse::<PiRational>().unwrap(), PiRational::new(-1, 7));
        assert_eq!("3/7pi".parse::<PiRational>().unwrap(), PiRational::new(3, 7));
        assert_eq!("pi".parse::<PiRational>().unwrap(), PiRational::new(1, 1));
        assert!("1/0".parse::<PiRational>().is_err());
        assert!("x".parse::<PiRational>().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(PiRational::new(-32, 7).to_string(), "-32π/7");
        assert_eq!(PiRational::new(1, 2).to_string(), "π/2");
        assert_eq!(PiRational::new(-4, 1).to_string(), "-4π");
        assert_eq!(PiRational::zero().to_string(), "0");
    }

    #[test]
    fn logs() {
        let two = BigRational::from_integer(2.into());
        let x = BigRational::new(5.into(), 1.into());
        assert_eq!(floor_log(&x, &two), 2);
        assert_eq!(ceil_log(&x, &two), 3);
        let eight = BigRational::from_integer(8.into());
        assert_eq!(floor_log(&eight, &two), 3);
        assert_eq!(ceil_log(&eight, &two), 3);
        let small = BigRational::new(1.into(), 3.into());
        assert_eq!(floor_log(&small, &two), -2);
        let d = BigRational::new(5.into(), 2.into());
        assert_eq!(floor_log(&BigRational::new(25.into(), 4.into()), &d), 2);
    }

    #[test]
    fn exp_i_pi_reduces_exactly() {
        let r = BigRational::new(BigInt::from(10_000_001), BigInt::from(2));
        let z = exp_i_pi(&r);
        assert!((z.re - 0.0).abs() < 1e-15);
        assert!((z.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let x = PiRational::new(-32, 7);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"num":-32,"den":7}"#);
        let big = PiRational::new(1, 1).mul_pow2(80);
        let s = serde_json::to_string(&big).unwrap();
        assert!(s.contains('"'));
        let back: PiRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, big);
    }
}
