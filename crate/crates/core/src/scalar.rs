//! Dynamically typed scalars for the I/O boundary.
//!
//! Inside the library everything is statically typed over a [`Field`]; a
//! [`Scalar`] appears where values come from or go to JSON and the arithmetic
//! mode is only known at run time. Exact and float values never mix.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{format_rational, Cq, C64, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(Q),
    Complex(Cq),
    Real(f64),
    ComplexFloat(C64),
}

/// Arithmetic mode of a document or run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Usage(format!("unknown mode {other:?}"))),
        }
    }
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Rational(_) | Scalar::Complex(_) => Mode::Exact,
            Scalar::Real(_) | Scalar::ComplexFloat(_) => Mode::Float,
        }
    }

    fn to_complex_exact(&self) -> Option<Cq> {
        match self {
            Scalar::Rational(x) => Some(Cq::new(x.clone(), Q::zero())),
            Scalar::Complex(z) => Some(z.clone()),
            _ => None,
        }
    }

    fn to_complex_float(&self) -> Option<C64> {
        match self {
            Scalar::Real(x) => Some(C64::new(*x, 0.0)),
            Scalar::ComplexFloat(z) => Some(*z),
            _ => None,
        }
    }

    /// Collapses a complex value with zero imaginary part to a real one.
    fn normalized(self) -> Self {
        match self {
            Scalar::Complex(z) if z.im.is_zero() => Scalar::Rational(z.re),
            Scalar::ComplexFloat(z) if z.im == 0.0 => Scalar::Real(z.re),
            other => other,
        }
    }

    fn binary(
        &self,
        other: &Self,
        op: &str,
        exact: impl Fn(Cq, Cq) -> Cq,
        float: impl Fn(C64, C64) -> C64,
    ) -> Result<Self> {
        if self.mode() != other.mode() {
            return Err(Error::ModeMismatch(format!("{op} of {self:?} and {other:?}")));
        }
        let out = match self.mode() {
            Mode::Exact => Scalar::Complex(exact(
                self.to_complex_exact().expect("exact"),
                other.to_complex_exact().expect("exact"),
            )),
            Mode::Float => Scalar::ComplexFloat(float(
                self.to_complex_float().expect("float"),
                other.to_complex_float().expect("float"),
            )),
        };
        Ok(out.normalized())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, "addition", |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binary(other, "subtraction", |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binary(other, "multiplication", |a, b| a * b, |a, b| a * b)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Complex(z) => z.is_zero(),
            Scalar::Real(x) => *x == 0.0,
            Scalar::ComplexFloat(z) => z.is_zero(),
        }
    }

    /// Human-readable rendering; rationals print canonically as `p/q`.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rational(x) => format_rational(x),
            Scalar::Complex(z) => format!("{} + {}i", format_rational(&z.re), format_rational(&z.im)),
            Scalar::Real(x) => format!("{x:.16e}"),
            Scalar::ComplexFloat(z) => format!("{:.16e} + {:.16e}i", z.re, z.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{cq, q};

    #[test]
    fn exact_arithmetic() {
        let a = Scalar::Rational(q(1, 2));
        let b = Scalar::Complex(cq(0, 1));
        let s = a.add(&b).unwrap();
        assert_eq!(s, Scalar::Complex(Cq::new(q(1, 2), q(1, 1))));
        let p = b.mul(&b).unwrap();
        assert_eq!(p, Scalar::Rational(q(-1, 1)));
    }

    #[test]
    fn mixed_mode_rejected() {
        let a = Scalar::Rational(q(1, 3));
        let b = Scalar::Real(0.5);
        assert!(matches!(a.add(&b), Err(Error::ModeMismatch(_))));
        assert!(matches!(b.mul(&a), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn float_arithmetic() {
        let a = Scalar::Real(1.5);
        let b = Scalar::Real(2.0);
        assert_eq!(a.mul(&b).unwrap(), Scalar::Real(3.0));
        assert!(a.sub(&a).unwrap().is_zero());
    }
}
