//! The G₂ three-form on `R⁷`, its cross product, the membership test
//! `g*φ = φ`, and adapted frames.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField};
use crate::form::Form;
use crate::matrix::{dot, unit_vector, vec_scale, vec_sub, Matrix};

/// Default float tolerance for admissibility and membership checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// The seven terms of `φ = e¹²³ + e¹⁴⁵ + e¹⁶⁷ + e²⁴⁶ − e²⁵⁷ − e³⁴⁷ − e³⁵⁶`.
pub const PHI_TERMS: [([usize; 3], i64); 7] =
    [([1, 2, 3], 1), ([1, 4, 5], 1), ([1, 6, 7], 1), ([2, 4, 6], 1), ([2, 5, 7], -1), ([3, 4, 7], -1), ([3, 5, 6], -1)];

pub fn phi<F: Field>() -> Form<F> {
    Form::from_terms(7, 3, PHI_TERMS.iter().map(|(idx, c)| (idx.to_vec(), F::from_i64(*c)))).expect("φ is well formed")
}

fn check_len<F>(v: &[F], what: &str) -> Result<()> {
    if v.len() != 7 {
        return Err(Error::Dimension(format!("{what} must have length 7, got {}", v.len())));
    }
    Ok(())
}

/// The cross product, characterised by `(u×v)·w = φ(u,v,w)`.
pub fn cross<F: Field>(u: &[F], v: &[F]) -> Vec<F> {
    assert!(u.len() == 7 && v.len() == 7, "cross product is defined on R^7");
    let mut out = vec![F::zero(); 7];
    for (idx, c) in PHI_TERMS {
        let [a, b, d] = idx.map(|i| i - 1);
        let c = F::from_i64(c);
        // e^{abd}(u, v, ·) = (u_a v_b − u_b v_a) e^d + cyclic
        for (x, y, z) in [(a, b, d), (b, d, a), (d, a, b)] {
            let m = u[x].clone() * v[y].clone() - u[y].clone() * v[x].clone();
            if !m.is_zero() {
                out[z] = out[z].clone() + c.clone() * m;
            }
        }
    }
    out
}

/// The Euclidean inner product on `R⁷`.
pub fn ambient_metric<F: Field>(u: &[F], v: &[F]) -> F {
    dot(u, v)
}

#[derive(Clone, Debug)]
pub struct G2Verdict<F: Field> {
    pub is_g2: bool,
    /// `g*φ − φ`.
    pub defect: Form<F>,
    pub defect_norm: f64,
    /// Follow-up checks `gᵀg = I` and `det g = 1`, only meaningful when
    /// `is_g2` holds.
    pub orthogonal: bool,
    pub unimodular: bool,
}

/// Decides `g*φ = φ`, exactly over the rationals and within `tol` over floats.
pub fn is_g2<F: RealField>(g: &Matrix<F>, tol: f64) -> Result<G2Verdict<F>> {
    if g.rows() != 7 || g.cols() != 7 {
        return Err(Error::Dimension(format!("expected a 7x7 matrix, got {}x{}", g.rows(), g.cols())));
    }
    let phi = phi::<F>();
    let defect = phi.pullback(g)?.sub(&phi)?;
    let defect_norm = defect.max_abs();
    let ok = |x: f64| if F::EXACT { x == 0.0 } else { x <= tol };
    let is_g2 = if F::EXACT { defect.is_zero() } else { defect_norm <= tol };
    let gram_defect = g.transpose().mul(g).sub(&Matrix::identity(7)).max_abs();
    let det_defect = (g.det() - F::one()).magnitude();
    Ok(G2Verdict { is_g2, defect, defect_norm, orthogonal: ok(gram_defect), unimodular: ok(det_defect) })
}

/// An element `g ∈ G₂` read as a moving frame: `x = g₁` is a point of `S⁶`
/// and `f_k = ½(g_{2k} − i g_{2k+1})` is a unitary frame of its tangent space.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedFrame<F: Field> {
    g: Matrix<F>,
}

impl<F: RealField> AdaptedFrame<F> {
    /// The identity frame based at `e₁`.
    pub fn standard() -> Self {
        Self { g: Matrix::identity(7) }
    }

    /// Wraps a matrix after checking membership in G₂.
    pub fn from_matrix(g: Matrix<F>, tol: f64) -> Result<Self> {
        let v = is_g2(&g, tol)?;
        if !v.is_g2 {
            return Err(Error::Verification(format!("matrix is not in G2 (defect {:.3e})", v.defect_norm)));
        }
        Ok(Self { g })
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.g
    }

    /// Column `g_i`, 1-based.
    pub fn column(&self, i: usize) -> Vec<F> {
        self.g.column(i - 1)
    }

    /// The base point `x = g₁`.
    pub fn point(&self) -> Vec<F> {
        self.column(1)
    }

    /// The real tangent basis `g₂ … g₇`, on which `𝕁` acts as the standard
    /// complex structure `g₂ ↦ g₃, g₄ ↦ g₅, g₆ ↦ g₇`.
    pub fn tangent_basis(&self) -> Vec<Vec<F>> {
        (2..=7).map(|i| self.column(i)).collect()
    }

    /// `f_k = ½(g_{2k} − i g_{2k+1})`, `k = 1, 2, 3`.
    pub fn f(&self, k: usize) -> Vec<F::Complex> {
        let half = F::from_ratio(1, 2);
        self.column(2 * k)
            .into_iter()
            .zip(self.column(2 * k + 1))
            .map(|(a, b)| F::Complex::new(half.clone() * a, -(half.clone() * b)))
            .collect()
    }

    /// The `(1,0)` coframe `θ_k = −(i/2)(g_{2k} + i g_{2k+1})♭` as ambient
    /// complex 1-forms.
    ///
    /// This normalisation satisfies `4 ᵗθ∘θ̄ = g`, `2i ᵗθ∧θ̄ = ι_x φ` and
    /// `Im(8 θ₁∧θ₂∧θ₃) = φ` on `x^⊥`, so it is the pointwise model of the
    /// generators used in [`crate::dga`].
    pub fn theta(&self, k: usize) -> Form<F::Complex> {
        let half = F::from_ratio(1, 2);
        let coeffs: Vec<F::Complex> = self
            .column(2 * k)
            .into_iter()
            .zip(self.column(2 * k + 1))
            // −(i/2)(a + i b) = b/2 − i a/2
            .map(|(a, b)| F::Complex::new(half.clone() * b, -(half.clone() * a)))
            .collect();
        Form::one_form(&coeffs)
    }

    /// New frame with `f'_j = Σ_i f_i h_{ij}`, for `h ∈ SU(3)`. The coframe
    /// transforms as `θ' = h⁻¹ θ`.
    pub fn rotate_su3(&self, h: &Matrix<F::Complex>, tol: f64) -> Result<Self> {
        if h.rows() != 3 || h.cols() != 3 {
            return Err(Error::Dimension("SU(3) element must be 3x3".into()));
        }
        let unitary = h.adjoint().mul(h).sub(&Matrix::identity(3)).max_abs();
        let det = (h.det() - F::Complex::one()).magnitude();
        let bad = if F::EXACT { unitary != 0.0 || det != 0.0 } else { unitary > tol || det > tol };
        if bad {
            return Err(Error::Precondition("frame rotation is not special unitary".into()));
        }
        let fs: Vec<Vec<F::Complex>> = (1..=3).map(|k| self.f(k)).collect();
        let two = F::from_i64(2);
        let mut cols = vec![self.point()];
        for j in 0..3 {
            let fj: Vec<F::Complex> = (0..7)
                .map(|a| (0..3).fold(F::Complex::zero(), |acc, i| acc + fs[i][a].clone() * h[(i, j)].clone()))
                .collect();
            cols.push(fj.iter().map(|z| two.clone() * z.re()).collect());
            cols.push(fj.iter().map(|z| -(two.clone() * z.im())).collect());
        }
        Self::from_matrix(Matrix::from_columns(&cols)?, tol)
    }
}

/// Builds the unique `g ∈ G₂` with `g₁ = u`, `g₂ = v`, `g₄ = w` from an
/// orthonormal triple satisfying `φ(u,v,w) = 0`.
///
/// Remaining columns: `g₃ = u×v`, `g₅ = u×w`, `g₆ = v×w`, `g₇ = w×(u×v)`;
/// on `(e₁,e₂,e₄)` this reproduces the identity.
pub fn adapted_frame<F: RealField>(u: &[F], v: &[F], w: &[F], tol: f64) -> Result<AdaptedFrame<F>> {
    check_len(u, "u")?;
    check_len(v, "v")?;
    check_len(w, "w")?;
    let close = |x: F, target: F| {
        let d = x - target;
        if F::EXACT {
            d.is_zero()
        } else {
            d.magnitude() <= tol
        }
    };
    let vecs = [u, v, w];
    for (i, a) in vecs.iter().enumerate() {
        for (j, b) in vecs.iter().enumerate().skip(i) {
            let target = if i == j { F::one() } else { F::zero() };
            if !close(dot(a, b), target) {
                return Err(Error::Precondition("(u, v, w) is not orthonormal".into()));
            }
        }
    }
    let phi_uvw = dot(&cross(u, v), w);
    if !close(phi_uvw.clone(), F::zero()) {
        return Err(Error::Precondition(format!("φ(u, v, w) = {:?} does not vanish", phi_uvw)));
    }
    let uv = cross(u, v);
    let cols = vec![u.to_vec(), v.to_vec(), uv.clone(), w.to_vec(), cross(u, w), cross(v, w), cross(w, &uv)];
    AdaptedFrame::from_matrix(Matrix::from_columns(&cols)?, tol)
}

/// Householder reflection exchanging the unit vectors `a` and `b`.
fn reflection<F: RealField>(a: &[F], b: &[F]) -> Matrix<F> {
    let n = a.len();
    let w = vec_sub(b, a);
    let ww = dot(&w, &w);
    if ww.is_zero() {
        return Matrix::identity(n);
    }
    let two_over = F::from_i64(2) / ww;
    Matrix::from_fn(n, n, |r, c| {
        let delta = if r == c { F::one() } else { F::zero() };
        delta - two_over.clone() * w[r].clone() * w[c].clone()
    })
}

/// A deterministic adapted frame at the unit vector `u`.
///
/// Only reflections and cross products are used, so a rational point gets a
/// rational frame.
pub fn adapted_frame_at<F: RealField>(u: &[F], tol: f64) -> Result<AdaptedFrame<F>> {
    check_len(u, "u")?;
    let sign_away = |x: &F| if x.is_positive() { -F::one() } else { F::one() };
    let e1 = unit_vector::<F>(7, 0);
    let h1 = reflection(&vec_scale(&sign_away(&u[0]), &e1), u);
    let v = h1.column(1);
    let c = cross(u, &v);
    // c' = H₁ c is orthogonal to e₁ and e₂
    let c_prime = h1.transpose().mul_vec(&c);
    let e3 = unit_vector::<F>(7, 2);
    let h3 = reflection(&vec_scale(&sign_away(&c_prime[2]), &e3), &c_prime);
    let q = h1.mul(&h3);
    let w = q.column(3);
    adapted_frame(u, &v, &w, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{qi, Q};

    fn e(i: usize) -> Vec<Q> {
        unit_vector(7, i - 1)
    }

    #[test]
    fn phi_has_seven_unit_terms() {
        let p = phi::<Q>();
        assert_eq!(p.len(), 7);
        assert!(p.terms().all(|(_, c)| *c == qi(1) || *c == qi(-1)));
        assert_eq!(p.coefficient(&[2, 5, 7]), qi(-1));
    }

    #[test]
    fn cross_product_examples() {
        assert_eq!(cross(&e(1), &e(2)), e(3));
        assert!(cross(&e(5), &e(5)).iter().all(Zero::is_zero));
        let neg_e2: Vec<Q> = e(2).iter().map(|x| -x.clone()).collect();
        assert_eq!(cross(&e(1), &cross(&e(1), &e(2))), neg_e2);
    }

    #[test]
    fn cross_matches_phi() {
        let p = phi::<Q>();
        for i in 1..=7 {
            for j in 1..=7 {
                let c = cross(&e(i), &e(j));
                for k in 1..=7 {
                    assert_eq!(c[k - 1], p.evaluate(&[e(i), e(j), e(k)]).unwrap());
                }
            }
        }
    }

    #[test]
    fn is_g2_examples() {
        assert!(is_g2(&Matrix::<Q>::identity(7), 0.0).unwrap().is_g2);
        let mut flip = Matrix::<Q>::identity(7);
        flip[(0, 0)] = qi(-1);
        flip[(1, 1)] = qi(-1);
        let v = is_g2(&flip, 0.0).unwrap();
        assert!(!v.is_g2);
        // the e¹⁶⁷, e¹⁴⁵, e²⁴⁶, e²⁵⁷ terms flip sign
        assert_eq!(v.defect.len(), 4);
        assert!(is_g2(&Matrix::<Q>::identity(6), 0.0).is_err());
    }

    #[test]
    fn adapted_frame_standard_triple_is_identity() {
        let f = adapted_frame(&e(1), &e(2), &e(4), 0.0).unwrap();
        assert_eq!(f.matrix(), &Matrix::identity(7));
    }

    #[test]
    fn adapted_frame_rejects_bad_triples() {
        assert!(matches!(adapted_frame(&e(1), &e(2), &e(3), 0.0), Err(Error::Precondition(_))));
        let two_e4: Vec<Q> = e(4).iter().map(|x| x.clone() * qi(2)).collect();
        assert!(adapted_frame(&e(1), &e(2), &two_e4, 0.0).is_err());
    }

    #[test]
    fn adapted_frame_swapped_pair() {
        let f = adapted_frame(&e(2), &e(1), &e(4), 0.0).unwrap();
        let neg_e3: Vec<Q> = e(3).iter().map(|x| -x.clone()).collect();
        assert_eq!(f.column(3), neg_e3);
    }

    #[test]
    fn frame_at_rational_point_is_exact() {
        // (2,3,6)/7 padded
        let u = vec![Q::from_ratio(2, 7), qi(0), Q::from_ratio(3, 7), qi(0), qi(0), Q::from_ratio(6, 7), qi(0)];
        let f = adapted_frame_at(&u, 0.0).unwrap();
        assert_eq!(f.point(), u);
        let v = is_g2(f.matrix(), 0.0).unwrap();
        assert!(v.is_g2 && v.orthogonal && v.unimodular);
    }

    #[test]
    fn frame_at_float_point() {
        let u: Vec<f64> = {
            let raw = [0.3, -0.1, 0.5, 0.2, -0.7, 0.1, 0.2];
            let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            raw.iter().map(|x| x / n).collect()
        };
        let f = adapted_frame_at(&u, DEFAULT_TOL).unwrap();
        assert!(is_g2(f.matrix(), DEFAULT_TOL).unwrap().defect_norm < 1e-12);
    }
}
