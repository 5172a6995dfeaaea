//! Numeric backends shared by every formula in the crate.
//!
//! Formulas are written against [`Scalar`] so that the same code path runs
//! with exact rationals ([`Rat`]), with `f64`, and with forward-mode dual
//! numbers ([`Dual`]). A dual number `v + d·ε` with `ε² = 0` carries a value
//! together with its directional derivative along a chosen tangent vector:
//!
//! - `(f·g)' = f'g + fg'`
//! - `(1/g)' = -g'/g²`, defined only when the value of `g` is nonzero.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Dual number over the rationals: exact value plus exact directional derivative.
pub type DualRat = Dual<Rat>;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn from_rat(r: &Rat) -> Self;

    fn to_f64(&self) -> f64;

    /// Sign of the (primal) value: -1, 0 or +1.
    fn sign(&self) -> i8;

    fn is_finite(&self) -> bool {
        true
    }

    fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for Rat {
    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Checked division: a zero divisor is reported as a pole.
pub fn try_div<S: Scalar>(num: S, den: S) -> Result<S> {
    if den.sign() == 0 {
        return Err(Error::domain("division by zero (pole)"));
    }
    Ok(num / den)
}

/// Exact rational with the same value as a finite `f64`.
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::domain(format!("{x} is not finite")))
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.25"` or `"1.5e-3"`.
///
/// Decimals are converted through scaled integers, never through `f64`, so
/// `"0.1"` is exactly `1/10`.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let err = |reason| Error::Parse {
        text: text.to_string(),
        reason,
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty input"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num = parse_integer(p.trim()).ok_or_else(|| err("malformed numerator"))?;
        let den = parse_integer(q.trim()).ok_or_else(|| err("malformed denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rat::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| err("malformed exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, unsigned) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("invalid character"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| err("no digits"))?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rat::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rat::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dual<T> {
    pub value: T,
    pub deriv: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(value: T, deriv: T) -> Self {
        Dual { value, deriv }
    }

    pub fn constant(value: T) -> Self {
        Dual {
            value,
            deriv: T::zero(),
        }
    }
}

impl<T: Scalar> PartialOrd for Dual<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.value + rhs.value, self.deriv + rhs.deriv)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.value - rhs.value, self.deriv - rhs.deriv)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let deriv = self.deriv * rhs.value.clone() + self.value.clone() * rhs.deriv;
        Dual::new(self.value * rhs.value, deriv)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let den = rhs.value.clone() * rhs.value.clone();
        let deriv = (self.deriv * rhs.value.clone() - self.value.clone() * rhs.deriv) / den;
        Dual::new(self.value / rhs.value, deriv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.value, -self.deriv)
    }
}

impl<T: Scalar> Zero for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    fn one() -> Self {
        Dual::constant(T::one())
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn from_i64(n: i64) -> Self {
        Dual::constant(T::from_i64(n))
    }

    fn from_rat(r: &Rat) -> Self {
        Dual::constant(T::from_rat(r))
    }

    fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    fn sign(&self) -> i8 {
        self.value.sign()
    }

    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.deriv.is_finite()
    }
}

/// Derivative of `f` at `x` along `direction`, from a single dual pass.
pub fn directional_derivative<T, F>(f: F, x: &[T], direction: &[T]) -> Result<T>
where
    T: Scalar,
    F: Fn(&[Dual<T>]) -> Result<Dual<T>>,
{
    if x.len() != direction.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: direction.len(),
        });
    }
    let seeded: Vec<Dual<T>> = x
        .iter()
        .zip(direction)
        .map(|(v, d)| Dual::new(v.clone(), d.clone()))
        .collect();
    Ok(f(&seeded)?.deriv)
}

/// Gradient of `f` at `x`, one dual pass per coordinate direction.
///
/// With `T = Rat` the partial derivatives are exact.
pub fn gradient<T, F>(f: F, x: &[T]) -> Result<Vec<T>>
where
    T: Scalar,
    F: Fn(&[Dual<T>]) -> Result<Dual<T>>,
{
    (0..x.len())
        .map(|i| {
            let seeded: Vec<Dual<T>> = x
                .iter()
                .enumerate()
                .map(|(j, v)| Dual::new(v.clone(), if i == j { T::one() } else { T::zero() }))
                .collect();
            Ok(f(&seeded)?.deriv)
        })
        .collect()
}
