//! Coefficient fields.
//!
//! Everything in this crate is generic over a [`Field`]. The exact fields are
//! [`Q`] (arbitrary-precision rationals) and [`Cq`] (Gaussian rationals); the
//! float fields `f64` and `Complex<f64>` exist for sampling-based checks only.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers. Denominators are kept positive and coprime.
pub type Q = BigRational;
/// Exact complex numbers with rational real and imaginary parts.
pub type Cq = Complex<Q>;
/// Double precision complex numbers.
pub type C64 = Complex<f64>;

pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for the exact fields.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Absolute value as a float, used for pivot selection and defect norms.
    fn magnitude(&self) -> f64;

    /// Zero test used by elimination routines. Exact fields compare with zero,
    /// float fields use the given absolute tolerance.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}

/// An ordered field that sits inside a matching complex field.
pub trait RealField: Field + PartialOrd {
    type Complex: ComplexField<Real = Self>;

    fn to_f64(&self) -> f64;

    /// Image of a rational number (rounded for floats).
    fn from_q(x: &Q) -> Self;

    /// Square root when it exists in the field (always for floats, only for
    /// perfect squares over the rationals).
    fn try_sqrt(&self) -> Option<Self>;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

pub trait ComplexField: Field {
    type Real: RealField<Complex = Self>;

    fn new(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;

    fn conj(&self) -> Self {
        Self::new(self.re(), -self.im())
    }

    fn i() -> Self {
        Self::new(Self::Real::zero(), Self::Real::one())
    }

    fn from_real(re: Self::Real) -> Self {
        Self::new(re, Self::Real::zero())
    }

    fn norm_sqr(&self) -> Self::Real {
        let (a, b) = (self.re(), self.im());
        a.clone() * a + b.clone() * b
    }
}

impl Field for Q {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Q::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(self).map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

impl RealField for Q {
    type Complex = Cq;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_q(x: &Q) -> Self {
        x.clone()
    }

    fn try_sqrt(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Q::new(n, d))
        } else {
            None
        }
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }
}

impl RealField for f64 {
    type Complex = C64;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_q(x: &Q) -> Self {
        q_to_f64(x)
    }

    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl<R: RealField> Field for Complex<R>
where
    Complex<R>: Display
        + Zero
        + One
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Div<Output = Self>
        + Neg<Output = Self>,
{
    const EXACT: bool = R::EXACT;

    fn from_i64(n: i64) -> Self {
        Complex::new(R::from_i64(n), R::zero())
    }

    fn magnitude(&self) -> f64 {
        self.re.magnitude().hypot(self.im.magnitude())
    }
}

impl ComplexField for Cq {
    type Real = Q;

    fn new(re: Q, im: Q) -> Self {
        Complex::new(re, im)
    }
    fn re(&self) -> Q {
        self.re.clone()
    }
    fn im(&self) -> Q {
        self.im.clone()
    }
}

impl ComplexField for C64 {
    type Real = f64;

    fn new(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
}

/// Shorthand for an exact rational `num/den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::from_ratio(num, den)
}

/// Shorthand for an exact integer.
pub fn qi(n: i64) -> Q {
    Q::from_i64(n)
}

/// Exact complex number `re + i·im` from integers.
pub fn cq(re: i64, im: i64) -> Cq {
    Complex::new(qi(re), qi(im))
}

/// Parses `"p/q"` or `"p"` into a canonical rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Canonical `"p/q"` rendering (`"p"` when the denominator is 1).
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Embeds an exact rational into the float field.
pub fn q_to_f64(x: &Q) -> f64 {
    RealField::to_f64(x)
}

pub fn cq_to_c64(z: &Cq) -> C64 {
    Complex::new(q_to_f64(&z.re), q_to_f64(&z.im))
}

/// Lifts a real field element into its complex companion.
pub fn complexify<R: RealField>(x: &R) -> R::Complex {
    R::Complex::from_real(x.clone())
}
