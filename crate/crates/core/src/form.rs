//! Alternating multilinear forms with sparse exact coefficients.
//!
//! Basis monomials `e^{i₁…i_k}` are keyed by strictly increasing index tuples.
//! Indices are 1-based at every public entry point, matching the usual
//! `e¹ … e⁷` notation; the internal keys are 0-based.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField};
use crate::matrix::Matrix;

#[derive(Clone, PartialEq)]
pub struct Form<F> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<u8>, F>,
}

/// Sign of the permutation sorting `idx`, or `None` when an index repeats.
pub(crate) fn sort_sign(idx: &mut [u8]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// All strictly increasing `k`-tuples drawn from `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

impl<F: Field> fmt::Debug for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(dim={}, deg={}) {{", self.dim, self.degree)?;
        for (idx, c) in &self.terms {
            let name: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, " ({c})·e^{{{}}}", name.join(","))?;
        }
        write!(f, " }}")
    }
}

impl<F: Field> Form<F> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, terms: BTreeMap::new() }
    }

    /// Degree-0 form with the given value.
    pub fn constant(dim: usize, c: F) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(Vec::new(), c);
        f
    }

    /// Builds a form from `(indices, coefficient)` pairs with 1-based indices
    /// in any order. Indices are sign-normalised; repeated indices drop out.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, F)>,
    {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::Degree(format!("term {idx:?} does not have degree {degree}")));
            }
            if idx.iter().any(|&i| i == 0 || i > dim) {
                return Err(Error::Dimension(format!("index out of range 1..={dim} in {idx:?}")));
            }
            let mut key: Vec<u8> = idx.iter().map(|&i| (i - 1) as u8).collect();
            if let Some(sign) = sort_sign(&mut key) {
                f.add_term(key, if sign < 0 { -c } else { c });
            }
        }
        Ok(f)
    }

    /// The basis monomial `e^{idx}` (1-based indices, any order).
    pub fn basis(dim: usize, idx: &[usize]) -> Result<Self> {
        Self::from_terms(dim, idx.len(), [(idx.to_vec(), F::one())])
    }

    /// The 1-form `Σ cᵢ eⁱ`.
    pub fn one_form(coeffs: &[F]) -> Self {
        let mut f = Self::zero(coeffs.len(), 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(vec![i as u8], c.clone());
        }
        f
    }

    /// The 2-form `Σ_{a<b} m_{ab} e^{ab}` of an antisymmetric matrix.
    pub fn from_antisymmetric(m: &Matrix<F>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("2-form matrix must be square".into()));
        }
        let n = m.rows();
        for a in 0..n {
            for b in 0..n {
                if m[(a, b)] != -m[(b, a)].clone() {
                    return Err(Error::Precondition("2-form matrix is not antisymmetric".into()));
                }
            }
        }
        let mut f = Self::zero(n, 2);
        for a in 0..n {
            for b in a + 1..n {
                f.add_term(vec![a as u8, b as u8], m[(a, b)].clone());
            }
        }
        Ok(f)
    }

    pub(crate) fn add_term(&mut self, key: Vec<u8>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored terms as `(1-based indices, coefficient)` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &F)> + '_ {
        self.terms.iter().map(|(k, c)| (k.iter().map(|&i| i as usize + 1).collect(), c))
    }

    /// Coefficient of `e^{idx}` for 1-based indices in any order.
    pub fn coefficient(&self, idx: &[usize]) -> F {
        if idx.len() != self.degree || idx.iter().any(|&i| i == 0 || i > self.dim) {
            return F::zero();
        }
        let mut key: Vec<u8> = idx.iter().map(|&i| (i - 1) as u8).collect();
        match sort_sign(&mut key) {
            None => F::zero(),
            Some(sign) => {
                let c = self.terms.get(&key).cloned().unwrap_or_else(F::zero);
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::Dimension(format!(
                "forms of shape (dim {}, deg {}) and (dim {}, deg {})",
                self.dim, self.degree, other.dim, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map_coeffs(|c| s.clone() * c.clone())
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Form<G> {
        let mut out = Form::zero(self.dim, self.degree);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    /// Largest coefficient magnitude; the defect norm used by float checks.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Field::magnitude).fold(0.0, f64::max)
    }

    /// Exterior product. Forms whose degrees add up past the dimension give
    /// the zero form of the summed degree.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("wedge of forms on R^{} and R^{}", self.dim, other.dim)));
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if out.degree > self.dim {
            return Ok(out);
        }
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut key: Vec<u8> = ka.iter().chain(kb).copied().collect();
                if let Some(sign) = sort_sign(&mut key) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(key, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `k`-th exterior power `self ∧ … ∧ self`.
    pub fn power(&self, k: usize) -> Result<Self> {
        let mut out = Self::constant(self.dim, F::one());
        for _ in 0..k {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Contraction `ι_v a`, inserting `v` in the first slot.
    pub fn interior(&self, v: &[F]) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::Degree("interior product of a 0-form".into()));
        }
        if v.len() != self.dim {
            return Err(Error::Dimension(format!("vector of length {} against a form on R^{}", v.len(), self.dim)));
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (k, c) in &self.terms {
            for (pos, &i) in k.iter().enumerate() {
                let vi = &v[i as usize];
                if vi.is_zero() {
                    continue;
                }
                let mut rest = k.clone();
                rest.remove(pos);
                let term = c.clone() * vi.clone();
                out.add_term(rest, if pos % 2 == 1 { -term } else { term });
            }
        }
        Ok(out)
    }

    /// Value on `k = degree` vectors: `Σ_I a_I · det(v_b[i_a])`.
    pub fn evaluate(&self, vectors: &[Vec<F>]) -> Result<F> {
        if vectors.len() != self.degree {
            return Err(Error::Degree(format!(
                "a {}-form needs {} vectors, got {}",
                self.degree,
                self.degree,
                vectors.len()
            )));
        }
        if vectors.iter().any(|v| v.len() != self.dim) {
            return Err(Error::Dimension(format!("vectors must have length {}", self.dim)));
        }
        let k = self.degree;
        let mut total = F::zero();
        for (key, c) in &self.terms {
            let minor = Matrix::from_fn(k, k, |a, b| vectors[b][key[a] as usize].clone());
            total = total + c.clone() * minor.det();
        }
        Ok(total)
    }

    /// Pullback along a linear map `L: R^m → R^n` given as an `n×m` matrix.
    pub fn pullback(&self, l: &Matrix<F>) -> Result<Self> {
        if l.rows() != self.dim {
            return Err(Error::Dimension(format!(
                "pullback of a form on R^{} along a map into R^{}",
                self.dim,
                l.rows()
            )));
        }
        let m = l.cols();
        let k = self.degree;
        let mut out = Self::zero(m, k);
        if self.is_zero() {
            return Ok(out);
        }
        let cols = combinations(m, k);
        for (key, c) in &self.terms {
            let rows: Vec<usize> = key.iter().map(|&i| i as usize).collect();
            for target in &cols {
                let tc: Vec<usize> = target.iter().map(|&j| j as usize).collect();
                let minor = l.submatrix(&rows, &tc).det();
                if !minor.is_zero() {
                    out.add_term(target.clone(), c.clone() * minor);
                }
            }
        }
        Ok(out)
    }

    /// Restriction to `span(basis)`, expressed in the coframe dual to `basis`.
    pub fn restrict_to_subspace(&self, basis: &[Vec<F>]) -> Result<Self> {
        let b = Matrix::from_columns(basis)?;
        if b.rows() != self.dim {
            return Err(Error::Dimension(format!("basis vectors must have length {}", self.dim)));
        }
        if b.rank() < basis.len() {
            return Err(Error::Degenerate("restriction basis is linearly dependent".into()));
        }
        self.pullback(&b)
    }

    /// Antisymmetric matrix `ω(e_a, e_b)` of a 2-form.
    pub fn to_matrix(&self) -> Result<Matrix<F>> {
        if self.degree != 2 {
            return Err(Error::Degree("only 2-forms have a matrix".into()));
        }
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (k, c) in &self.terms {
            let (a, b) = (k[0] as usize, k[1] as usize);
            m[(a, b)] = c.clone();
            m[(b, a)] = -c.clone();
        }
        Ok(m)
    }

    /// Coefficient vector of a 1-form.
    pub fn to_vector(&self) -> Result<Vec<F>> {
        if self.degree != 1 {
            return Err(Error::Degree("only 1-forms have a coefficient vector".into()));
        }
        Ok((0..self.dim).map(|i| self.coefficient(&[i + 1])).collect())
    }

    /// Coefficients listed against [`combinations`]`(dim, degree)`.
    pub fn dense_coefficients(&self) -> Vec<F> {
        combinations(self.dim, self.degree)
            .into_iter()
            .map(|k| self.terms.get(&k).cloned().unwrap_or_else(F::zero))
            .collect()
    }

    /// Inverse of [`Form::dense_coefficients`].
    pub fn from_dense(dim: usize, degree: usize, coeffs: &[F]) -> Self {
        let mut f = Self::zero(dim, degree);
        for (k, c) in combinations(dim, degree).into_iter().zip(coeffs) {
            f.add_term(k, c.clone());
        }
        f
    }
}

impl<R: RealField> Form<R> {
    pub fn complexify(&self) -> Form<R::Complex> {
        self.map_coeffs(|c| R::Complex::from_real(c.clone()))
    }
}

impl<C: ComplexField> Form<C> {
    pub fn re(&self) -> Form<C::Real> {
        self.map_coeffs(ComplexField::re)
    }

    pub fn im(&self) -> Form<C::Real> {
        self.map_coeffs(ComplexField::im)
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(ComplexField::conj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{qi, Q};

    fn e(dim: usize, idx: &[usize]) -> Form<Q> {
        Form::basis(dim, idx).unwrap()
    }

    #[test]
    fn wedge_basis_cases() {
        let e12 = e(3, &[1]).wedge(&e(3, &[2])).unwrap();
        assert_eq!(e12, e(3, &[1, 2]));
        assert!(e12.wedge(&e12).unwrap().is_zero());
        assert_eq!(e12.wedge(&e12).unwrap().degree(), 4);
    }

    #[test]
    fn wedge_by_bilinearity() {
        // (e¹+e²) ∧ (e¹−e²) = −e¹∧e² + e²∧e¹ = −2 e¹²
        let a = Form::one_form(&[qi(1), qi(1), qi(0)]);
        let b = Form::one_form(&[qi(1), qi(-1), qi(0)]);
        assert_eq!(a.wedge(&b).unwrap(), e(3, &[1, 2]).scale(&qi(-2)));
    }

    #[test]
    fn wedge_dimension_mismatch() {
        assert!(e(3, &[1]).wedge(&e(4, &[1])).is_err());
    }

    #[test]
    fn sign_normalisation_on_input() {
        let f = Form::from_terms(3, 2, [(vec![2, 1], qi(5))]).unwrap();
        assert_eq!(f.coefficient(&[1, 2]), qi(-5));
        assert_eq!(f.coefficient(&[2, 1]), qi(5));
        let g = Form::from_terms(3, 2, [(vec![1, 1], qi(5))]).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn interior_examples() {
        let e123 = e(7, &[1, 2, 3]);
        let v = |i: usize| crate::matrix::unit_vector::<Q>(7, i - 1);
        assert_eq!(e123.interior(&v(1)).unwrap(), e(7, &[2, 3]));
        assert!(e123.interior(&v(4)).unwrap().is_zero());
        assert_eq!(e123.interior(&v(2)).unwrap(), e(7, &[1, 3]).neg());
        assert!(Form::constant(7, qi(1)).interior(&v(1)).is_err());
    }

    #[test]
    fn interior_matches_evaluation() {
        // ι_v a (w₁,w₂) = a(v,w₁,w₂)
        let a = Form::from_terms(4, 3, [(vec![1, 2, 3], qi(2)), (vec![2, 3, 4], qi(-3))]).unwrap();
        let v = vec![qi(1), qi(2), qi(-1), qi(3)];
        let w1 = vec![qi(0), qi(1), qi(1), qi(2)];
        let w2 = vec![qi(5), qi(0), qi(1), qi(-1)];
        let lhs = a.interior(&v).unwrap().evaluate(&[w1.clone(), w2.clone()]).unwrap();
        let rhs = a.evaluate(&[v, w1, w2]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluate_rejects_bad_arity() {
        let a = e(3, &[1, 2]);
        assert!(a.evaluate(&[vec![qi(1), qi(0), qi(0)]]).is_err());
        assert!(a.evaluate(&[vec![qi(1)], vec![qi(0)]]).is_err());
    }

    #[test]
    fn pullback_scaling() {
        let l = Matrix::diagonal(&[qi(2), qi(3), qi(5)]);
        assert_eq!(e(3, &[1, 2]).pullback(&l).unwrap(), e(3, &[1, 2]).scale(&qi(6)));
        assert!(e(3, &[1, 2]).pullback(&Matrix::identity(4)).is_err());
    }

    #[test]
    fn restriction_examples() {
        let u = |i: usize| crate::matrix::unit_vector::<Q>(4, i - 1);
        assert!(e(4, &[1, 2]).restrict_to_subspace(&[u(3), u(4)]).unwrap().is_zero());
        assert_eq!(e(4, &[1, 2]).restrict_to_subspace(&[u(2), u(1)]).unwrap(), e(2, &[1, 2]).neg());
        assert!(e(4, &[1, 2]).restrict_to_subspace(&[u(1), u(1)]).is_err());
    }

    #[test]
    fn matrix_round_trip_for_two_forms() {
        let w = Form::from_terms(4, 2, [(vec![1, 2], qi(1)), (vec![3, 4], qi(-2))]).unwrap();
        let m = w.to_matrix().unwrap();
        assert!(m.is_antisymmetric());
        assert_eq!(Form::from_antisymmetric(&m).unwrap(), w);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(7, 3).len(), 35);
        assert_eq!(combinations(6, 0), vec![Vec::<u8>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
