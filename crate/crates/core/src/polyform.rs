//! Differential forms on `Rⁿ` with polynomial coefficients and their exact
//! exterior derivative.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{q_to_f64, Q};
use crate::form::{sort_sign, Form};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Debug)]
pub struct PolyForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<u8>, Poly>,
}

impl PolyForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, terms: BTreeMap::new() }
    }

    /// Constant-coefficient form.
    pub fn from_constant(form: &Form<Q>) -> Self {
        let mut out = Self::zero(form.dim(), form.degree());
        for (idx, c) in form.terms() {
            let key = idx.iter().map(|&i| (i - 1) as u8).collect();
            out.add_term(key, Poly::constant(form.dim(), c.clone()));
        }
        out
    }

    /// `p · e^{idx}` with 1-based indices in any order.
    pub fn monomial(dim: usize, idx: &[usize], p: Poly) -> Result<Self> {
        if p.nvars() != dim {
            return Err(Error::Dimension("coefficient ring does not match the dimension".into()));
        }
        if idx.iter().any(|&i| i == 0 || i > dim) {
            return Err(Error::Dimension(format!("index out of range in {idx:?}")));
        }
        let mut key: Vec<u8> = idx.iter().map(|&i| (i - 1) as u8).collect();
        let mut out = Self::zero(dim, idx.len());
        if let Some(sign) = sort_sign(&mut key) {
            let p = if sign < 0 { p.scale(&Q::from_integer((-1).into())) } else { p };
            out.add_term(key, p);
        }
        Ok(out)
    }

    fn add_term(&mut self, key: Vec<u8>, p: Poly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(existing) => existing.add(&p),
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &[usize]) -> Poly {
        let key: Vec<u8> = idx.iter().map(|&i| (i - 1) as u8).collect();
        self.terms.get(&key).cloned().unwrap_or_else(|| Poly::zero(self.dim))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.dim, self.degree) != (other.dim, other.degree) {
            return Err(Error::Dimension("adding forms of different shape".into()));
        }
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(k.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, p) in &self.terms {
            out.add_term(k.clone(), p.scale(s));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Q::from_integer((-1).into())))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension("wedge of forms in different dimensions".into()));
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                let mut key: Vec<u8> = ka.iter().chain(kb).copied().collect();
                if let Some(sign) = sort_sign(&mut key) {
                    let p = pa.mul(pb)?;
                    let p = if sign < 0 { p.scale(&Q::from_integer((-1).into())) } else { p };
                    out.add_term(key, p);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative `d(p e^I) = Σ_j ∂_j p e^j ∧ e^I`.
    pub fn ext_d(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + 1);
        for (k, p) in &self.terms {
            for j in 0..self.dim {
                let dp = p.partial(j + 1);
                if dp.is_zero() {
                    continue;
                }
                let mut key = Vec::with_capacity(k.len() + 1);
                key.push(j as u8);
                key.extend_from_slice(k);
                if let Some(sign) = sort_sign(&mut key) {
                    let dp = if sign < 0 { dp.scale(&Q::from_integer((-1).into())) } else { dp };
                    out.add_term(key, dp);
                }
            }
        }
        out
    }

    /// Contraction with a polynomial vector field `Σ X_i ∂_i`.
    pub fn interior_field(&self, field: &[Poly]) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::Degree("interior product of a 0-form".into()));
        }
        if field.len() != self.dim {
            return Err(Error::Dimension("vector field has the wrong length".into()));
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (k, p) in &self.terms {
            for (pos, &i) in k.iter().enumerate() {
                let mut rest = k.clone();
                rest.remove(pos);
                let c = p.mul(&field[i as usize])?;
                let c = if pos % 2 == 1 { c.scale(&Q::from_integer((-1).into())) } else { c };
                out.add_term(rest, c);
            }
        }
        Ok(out)
    }

    /// The value of the form at a rational point.
    pub fn at_point(&self, x: &[Q]) -> Form<Q> {
        let terms = self.terms.iter().map(|(k, p)| (k.iter().map(|&i| i as usize + 1).collect(), p.eval(x)));
        Form::from_terms(self.dim, self.degree, terms).expect("keys are valid")
    }

    pub fn at_point_f64(&self, x: &[f64]) -> Form<f64> {
        let terms = self.terms.iter().map(|(k, p)| (k.iter().map(|&i| i as usize + 1).collect(), p.eval_f64(x)));
        Form::from_terms(self.dim, self.degree, terms).expect("keys are valid")
    }
}

/// The position (Euler) vector field `E = Σ x_i ∂_i`.
pub fn euler_field(dim: usize) -> Vec<Poly> {
    (1..=dim).map(|i| Poly::var(dim, i)).collect()
}

/// Converts a rational constant form to floats.
pub fn form_to_f64(f: &Form<Q>) -> Form<f64> {
    f.map_coeffs(q_to_f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::qi;

    #[test]
    fn d_of_x1_dx2() {
        let a = PolyForm::monomial(3, &[2], Poly::var(3, 1)).unwrap();
        let expected = PolyForm::from_constant(&Form::basis(3, &[1, 2]).unwrap());
        assert_eq!(a.ext_d(), expected);
    }

    #[test]
    fn d_of_constant_form_vanishes() {
        let a = PolyForm::from_constant(&Form::basis(4, &[1, 3]).unwrap().scale(&qi(7)));
        assert!(a.ext_d().is_zero());
    }

    #[test]
    fn d_squared_on_a_function() {
        let x = Poly::var(3, 1);
        let y = Poly::var(3, 2);
        let f = PolyForm::monomial(3, &[], x.mul(&y).unwrap().mul(&y).unwrap()).unwrap();
        assert!(!f.ext_d().is_zero());
        assert!(f.ext_d().ext_d().is_zero());
    }

    #[test]
    fn evaluation_at_points() {
        let a = PolyForm::monomial(2, &[2, 1], Poly::var(2, 1)).unwrap();
        let at = a.at_point(&[qi(3), qi(0)]);
        assert_eq!(at.coefficient(&[1, 2]), qi(-3));
    }
}
