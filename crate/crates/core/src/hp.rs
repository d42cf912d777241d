//! Arbitrary-precision complex numbers on top of MPFR floats.
//!
//! A [`Precision`] fixes the target accuracy in decimal digits; all arithmetic
//! is carried out with [`GUARD_DIGITS`] extra digits.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Extra decimal digits carried beyond the requested accuracy.
pub const GUARD_DIGITS: u32 = 15;

/// Default requested accuracy in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Target accuracy of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(DEFAULT_DIGITS)
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision {
            digits: digits.max(1),
        }
    }

    /// Requested accuracy in decimal digits.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Digits actually carried by every float.
    pub fn working_digits(&self) -> u32 {
        self.digits + GUARD_DIGITS
    }

    /// Binary precision of every float.
    pub fn bits(&self) -> u32 {
        (f64::from(self.working_digits()) * LOG2_10).ceil() as u32 + 4
    }

    pub fn float<T>(&self, val: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), val)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    pub fn rational(&self, r: &Rational) -> Float {
        Float::with_val(self.bits(), r)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// `10^exp` at working precision.
    pub fn pow10(&self, exp: i32) -> Float {
        let p = Float::with_val(self.bits(), Float::u_pow_u(10, exp.unsigned_abs()));
        if exp < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// `10^-digits`: the accuracy every public result is held to.
    pub fn tolerance(&self) -> Float {
        self.pow10(-(self.digits as i32))
    }

    /// Convergence threshold for internal iterations, a few digits short of the
    /// working precision.
    pub fn tight(&self) -> Float {
        self.pow10(-((self.working_digits() - 5) as i32))
    }

    pub fn parse(&self, s: &str) -> Result<Float> {
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Float::with_val(self.bits(), parsed))
    }
}

/// Formats a float as a decimal string with `digits` significant digits.
pub fn decimal(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits as usize))
}

/// Number of leading significant digits on which `x` agrees with `reference`,
/// i.e. `-log10 |x - reference| / |reference|`.
pub fn agreeing_digits(x: &Float, reference: &Float) -> f64 {
    let bits = x.prec().max(reference.prec());
    let diff = Float::with_val(bits, x - reference).abs();
    if diff.is_zero() {
        return f64::INFINITY;
    }
    let rel = diff / Float::with_val(bits, reference.abs_ref());
    -rel.log10().to_f64()
}

/// Rounds `x` to `sig` significant decimal digits in the direction `round`.
pub fn round_decimal(x: &Float, sig: usize, round: Round) -> Float {
    if x.is_zero() {
        return x.clone();
    }
    let s = x.to_string_radix_round(10, Some(sig), round);
    // MPFR parsing is exact enough at the source precision for a 10-digit string;
    // nudge by one ulp in the rounding direction to stay on the conservative side.
    let mut out = Float::with_val(x.prec(), Float::parse(&s).expect("mpfr output parses"));
    match round {
        Round::Up => out.next_up(),
        Round::Down => out.next_down(),
        _ => {}
    }
    out
}

/// A complex number with MPFR real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct HpComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for HpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i)",
            decimal(&self.re, 25),
            decimal(&self.im, 25)
        )
    }
}

impl fmt::Display for HpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20) as u32;
        let sign = if self.im.is_sign_negative() { "-" } else { "+" };
        let im = Float::with_val(self.im.prec(), self.im.abs_ref());
        write!(
            f,
            "{} {} {}i",
            decimal(&self.re, digits),
            sign,
            decimal(&im, digits)
        )
    }
}

impl HpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        HpComplex { re, im }
    }

    pub fn zero(prec: &Precision) -> Self {
        HpComplex::new(prec.zero(), prec.zero())
    }

    pub fn one(prec: &Precision) -> Self {
        HpComplex::new(prec.float(1), prec.zero())
    }

    pub fn i(prec: &Precision) -> Self {
        HpComplex::new(prec.zero(), prec.float(1))
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        HpComplex { re, im }
    }

    pub fn imag(im: Float) -> Self {
        let re = Float::new(im.prec());
        HpComplex { re, im }
    }

    pub fn from_f64(prec: &Precision, re: f64, im: f64) -> Self {
        HpComplex::new(prec.float(re), prec.float(im))
    }

    pub fn from_rational(prec: &Precision, re: &Rational) -> Self {
        HpComplex::real(prec.rational(re))
    }

    pub fn parse(prec: &Precision, re: &str, im: &str) -> Result<Self> {
        Ok(HpComplex::new(prec.parse(re)?, prec.parse(im)?))
    }

    /// Binary precision of the parts.
    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Same value with the given binary precision.
    pub fn with_prec(&self, bits: u32) -> Self {
        HpComplex::new(
            Float::with_val(bits, &self.re),
            Float::with_val(bits, &self.im),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn conj(&self) -> Self {
        HpComplex::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        HpComplex::new(-self.im.clone(), self.re.clone())
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        HpComplex::new(
            Float::with_val(p, &self.re * s),
            Float::with_val(p, &self.im * s),
        )
    }

    pub fn scale_int(&self, n: &Integer) -> Self {
        let p = self.prec();
        HpComplex::new(
            Float::with_val(p, &self.re * n),
            Float::with_val(p, &self.im * n),
        )
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let p = self.prec();
        HpComplex::new(
            Float::with_val(p, &self.re * r),
            Float::with_val(p, &self.im * r),
        )
    }

    pub fn add_real(&self, x: &Float) -> Self {
        HpComplex::new(Float::with_val(self.prec(), &self.re + x), self.im.clone())
    }

    pub fn add_imag(&self, y: &Float) -> Self {
        HpComplex::new(self.re.clone(), Float::with_val(self.prec(), &self.im + y))
    }

    /// `1/self`, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        let p = self.prec();
        Some(HpComplex::new(
            Float::with_val(p, &self.re / &n),
            -Float::with_val(p, &self.im / &n),
        ))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let modulus = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        HpComplex::new(c * &modulus, s * modulus)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = HpComplex::real(Float::with_val(self.prec(), 1));
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<'a> Add<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    fn add(self, rhs: &HpComplex) -> HpComplex {
        let p = self.prec().max(rhs.prec());
        HpComplex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    fn sub(self, rhs: &HpComplex) -> HpComplex {
        let p = self.prec().max(rhs.prec());
        HpComplex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    fn mul(self, rhs: &HpComplex) -> HpComplex {
        let p = self.prec().max(rhs.prec());
        let rr = Float::with_val(p, &self.re * &rhs.re);
        let ii = Float::with_val(p, &self.im * &rhs.im);
        let ri = Float::with_val(p, &self.re * &rhs.im);
        let ir = Float::with_val(p, &self.im * &rhs.re);
        HpComplex::new(rr - ii, ri + ir)
    }
}

impl<'a> Div<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    /// Panics on division by an exact zero, like integer division.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &HpComplex) -> HpComplex {
        let inv = rhs.recip().expect("complex division by zero");
        self * &inv
    }
}

impl Neg for &HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<HpComplex> for HpComplex {
            type Output = HpComplex;
            fn $method(self, rhs: HpComplex) -> HpComplex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a HpComplex> for HpComplex {
            type Output = HpComplex;
            fn $method(self, rhs: &HpComplex) -> HpComplex {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<HpComplex> for &'a HpComplex {
            type Output = HpComplex;
            fn $method(self, rhs: HpComplex) -> HpComplex {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bits_cover_guard_digits() {
        let p = Precision::new(60);
        assert_eq!(p.working_digits(), 75);
        assert!(p.bits() as f64 >= 75.0 * LOG2_10);
    }

    #[test]
    fn agreeing_digits_counts_leading_digits() {
        let p = Precision::new(40);
        let a = p.parse("1.234567890123").unwrap();
        let b = p.parse("1.234567890000").unwrap();
        let d = agreeing_digits(&a, &b);
        assert!(d > 10.0 && d < 11.0, "{d}");
        assert_eq!(agreeing_digits(&a, &a), f64::INFINITY);
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let p = Precision::new(50);
        let z = HpComplex::imag(p.pi()).exp();
        let err = (&z + &HpComplex::one(&p)).abs();
        assert!(err < p.tolerance());
    }

    #[test]
    fn division_inverts_multiplication() {
        let p = Precision::new(40);
        let a = HpComplex::from_f64(&p, 1.25, -0.5);
        let b = HpComplex::from_f64(&p, -3.0, 2.0);
        let back = &(&a * &b) / &b;
        assert!((&back - &a).abs() < p.tolerance());
        assert!(HpComplex::zero(&p).recip().is_none());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let p = Precision::new(40);
        let a = HpComplex::from_f64(&p, 0.3, 0.7);
        let mut direct = HpComplex::one(&p);
        for _ in 0..7 {
            direct = &direct * &a;
        }
        assert!((&a.powi(7) - &direct).abs() < p.tolerance());
    }

    #[test]
    fn outward_rounding_brackets_value() {
        let p = Precision::new(40);
        let x = p.pi();
        let up = round_decimal(&x, 10, Round::Up);
        let down = round_decimal(&x, 10, Round::Down);
        assert!(down < x && x < up);
        assert!(Float::with_val(p.bits(), &up - &down) < 1e-8);
    }

    #[test]
    fn decimal_formatting_roundtrips() {
        let p = Precision::new(60);
        let x = p.pi() / 7;
        let s = decimal(&x, 70);
        let back = p.parse(&s).unwrap();
        assert!(Float::with_val(p.bits(), &back - &x).abs() < p.tolerance());
    }
}
