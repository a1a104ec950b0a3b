//! Pointwise invariants of an almost symplectic 6-manifold: the primitive
//! decomposition `dω = λ∧ω + π` and the elliptic-definite test.

use rayon::prelude::*;
use serde::Serialize;

use crate::compat::{omega_index, IndexPair, LinearComplexStructure};
use crate::error::{Error, Result};
use crate::field::{Field, RealField};
use crate::form::Form;
use crate::g2::{adapted_frame_at, AdaptedFrame, DEFAULT_TOL};
use crate::matrix::{unit_vector, Matrix};
use crate::sampling::{sample_rng, Sample};
use crate::sphere::{omega_at, phi_horizontal, upsilon_at, TangentFrame};
use crate::threeform::{classify_3form, RecoveredJ, ThreeFormType};

#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveDecomposition<F: Field> {
    pub lambda: Form<F>,
    pub pi: Form<F>,
}

fn check_pair<F: Field>(omega: &Form<F>, domega: &Form<F>) -> Result<()> {
    if omega.dim() != 6 || omega.degree() != 2 {
        return Err(Error::Dimension("ω must be a 2-form on R^6".into()));
    }
    if domega.dim() != 6 || domega.degree() != 3 {
        return Err(Error::Dimension("dω must be a 3-form on R^6".into()));
    }
    Ok(())
}

/// The unique `(λ, π)` with `dω = λ∧ω + π` and `ω∧π = 0`.
///
/// Wedging with `ω` gives `λ∧ω² = ω∧dω`, a square linear system since
/// `λ ↦ λ∧ω²` is an isomorphism `Λ¹ → Λ⁵` for nondegenerate `ω`.
pub fn primitive_decompose<F: RealField>(omega: &Form<F>, domega: &Form<F>) -> Result<PrimitiveDecomposition<F>> {
    check_pair(omega, domega)?;
    let omega2 = omega.power(2)?;
    let cols: Vec<Vec<F>> = (0..6)
        .map(|a| Form::one_form(&unit_vector::<F>(6, a)).wedge(&omega2).map(|f| f.dense_coefficients()))
        .collect::<Result<_>>()?;
    let m = Matrix::from_columns(&cols)?;
    let rhs = omega.wedge(domega)?.dense_coefficients();
    let coeffs = m.solve(&rhs).map_err(|_| Error::Degenerate("ω is degenerate".into()))?;
    let lambda = Form::one_form(&coeffs);
    let pi = domega.sub(&lambda.wedge(omega)?)?;
    Ok(PrimitiveDecomposition { lambda, pi })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticDefiniteReport {
    pub tag: ThreeFormType,
    /// `(p, q)` of `ω` as a `J`-Hermitian form, when `π` is elliptic.
    pub signature: Option<IndexPair>,
    pub elliptic_definite: bool,
    /// The recovered `J` as rows of floats, for reporting.
    #[serde(skip)]
    pub j: Option<Matrix<f64>>,
}

fn signature_for<G: RealField>(omega: &Form<G>, j: &LinearComplexStructure<G>) -> Result<IndexPair> {
    omega_index(omega, j)
}

/// Decomposes `dω`, classifies `π`, recovers `J` oriented by `vol`
/// (default `ω³`), and reads the signature of `ω(·, J·)`.
pub fn elliptic_definite_check<F: RealField>(
    omega: &Form<F>,
    domega: &Form<F>,
    vol: Option<&Form<F>>,
    tol: f64,
) -> Result<EllipticDefiniteReport> {
    let dec = primitive_decompose(omega, domega)?;
    let vol = match vol {
        Some(v) => v.clone(),
        None => omega.power(3)?,
    };
    let class = classify_3form(&dec.pi, &vol, tol)?;
    let (signature, j) = match &class.j {
        None => (None, None),
        Some(RecoveredJ::Exact(j)) => (Some(signature_for(omega, j)?), Some(j.matrix().map(|x| x.to_f64()))),
        Some(RecoveredJ::Float(j)) => {
            let omega_f = omega.map_coeffs(|x| x.to_f64());
            (Some(signature_for(&omega_f, j)?), Some(j.matrix().clone()))
        }
    };
    let elliptic_definite = class.tag == ThreeFormType::Elliptic && signature == Some(IndexPair::new(3, 0));
    Ok(EllipticDefiniteReport { tag: class.tag, signature, elliptic_definite, j })
}

/// The pair `(ω_u, dω_u = 3φ|_{u^⊥})` in the tangent basis of `frame`.
pub fn sphere_pair<F: RealField>(frame: &AdaptedFrame<F>) -> Result<(Form<F>, Form<F>)> {
    let tf = TangentFrame::from_adapted(frame);
    let omega = tf.in_basis(&omega_at(&tf.point))?;
    let domega = tf.in_basis(&phi_horizontal(&tf.point).scale(&F::from_i64(3)))?;
    Ok((omega, domega))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereEllipticSweep {
    pub samples: usize,
    pub seed: u64,
    /// Points where `π` was elliptic with signature `(3,0)`.
    pub definite: usize,
    /// `max(|λ|, |π − 3 Im Υ_u|)` over the points.
    pub max_defect: f64,
    pub pass: bool,
}

/// Runs the elliptic-definite test on `(ω_u, 3φ|_{u^⊥})` at seeded random
/// points of `S⁶`.
pub fn sphere_elliptic_sweep<F: Sample>(samples: usize, seed: u64, tol: f64) -> Result<SphereEllipticSweep> {
    let rows: Vec<(bool, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let u = F::random_unit_vector(&mut rng, 7);
            let frame = adapted_frame_at(&u, DEFAULT_TOL)?;
            sphere_point_check(&frame, tol)
        })
        .collect::<Result<_>>()?;
    let definite = rows.iter().filter(|r| r.0).count();
    let max_defect = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let within = if F::EXACT { max_defect == 0.0 } else { max_defect <= tol };
    Ok(SphereEllipticSweep { samples, seed, definite, max_defect, pass: definite == samples && within })
}

/// `(elliptic definite, defect)` at the base point of `frame`.
pub fn sphere_point_check<F: RealField>(frame: &AdaptedFrame<F>, tol: f64) -> Result<(bool, f64)> {
    let (omega, domega) = sphere_pair(frame)?;
    let dec = primitive_decompose(&omega, &domega)?;
    let tf = TangentFrame::from_adapted(frame);
    let ups = upsilon_at(&tf.point, frame, tol.max(DEFAULT_TOL))?;
    let expected = tf.in_basis(&ups.im().scale(&F::from_i64(3)))?;
    let defect = dec.lambda.max_abs().max(dec.pi.sub(&expected)?.max_abs());
    let report = elliptic_definite_check(&omega, &domega, None, tol)?;
    Ok((report.elliptic_definite, defect))
}
