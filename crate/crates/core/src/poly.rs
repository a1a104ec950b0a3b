//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{q_to_f64, Field, Q};

/// Largest total degree a [`Poly`] may reach.
pub const DEGREE_CAP: u32 = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_monomial(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i` (1-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        let mut p = Self::zero(nvars);
        p.add_monomial(e, Q::one());
        p
    }

    /// `c · x^exponents`, rejecting degrees above [`DEGREE_CAP`].
    pub fn monomial(exponents: Vec<u32>, c: Q) -> Result<Self> {
        let degree: u32 = exponents.iter().sum();
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCap { degree, cap: DEGREE_CAP });
        }
        let mut p = Self::zero(exponents.len());
        p.add_monomial(exponents, c);
        Ok(p)
    }

    fn add_monomial(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(existing) => existing + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_monomial(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_monomial(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension("polynomials in different variable sets".into()));
        }
        let degree = self.total_degree() + other.total_degree();
        if !self.is_zero() && !other.is_zero() && degree > DEGREE_CAP {
            return Err(Error::DegreeCap { degree, cap: DEGREE_CAP });
        }
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_monomial(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// `∂/∂x_i` for 1-based `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let p = e[i - 1];
            if p == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i - 1] -= 1;
            out.add_monomial(e2, c * Q::from_i64(p as i64));
        }
        out
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(x).fold(Q::one(), |m, (&p, xi)| m * num_traits::pow(xi.clone(), p as usize));
            acc + c * mono
        })
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms.iter().fold(0.0, |acc, (e, c)| {
            let mono: f64 = e.iter().zip(x).map(|(&p, xi)| xi.powi(p as i32)).product();
            acc + q_to_f64(c) * mono
        })
    }
}
