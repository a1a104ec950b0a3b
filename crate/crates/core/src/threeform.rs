//! Orbit type of a 3-form on a 6-dimensional space, and the complex
//! structure and decomposable complex 3-form of an elliptic one.
//!
//! `K_ρ(v)` is the vector `w` with `ι_w vol = ι_vρ ∧ ρ`, and
//! `λ = tr(K_ρ²)/6`. Then `K_ρ² = λ·I`; `ρ` is split for `λ > 0`, elliptic
//! for `λ < 0` and degenerate for `λ = 0`. In the elliptic case
//! `J = K_ρ/√(−λ)`, oriented to agree with `vol`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::compat::LinearComplexStructure;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField};
use crate::form::Form;
use crate::matrix::{unit_vector, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThreeFormType {
    Split,
    Elliptic,
    Degenerate,
}

impl ThreeFormType {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThreeFormType::Split => "split",
            ThreeFormType::Elliptic => "elliptic",
            ThreeFormType::Degenerate => "degenerate",
        }
    }
}

/// The complex structure of an elliptic form: in the input field when `−λ`
/// has a square root there, otherwise in floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum RecoveredJ<F: Field> {
    Exact(LinearComplexStructure<F>),
    Float(LinearComplexStructure<f64>),
}

#[derive(Clone, Debug)]
pub struct ThreeFormClass<F: Field> {
    pub tag: ThreeFormType,
    /// The discriminant, read against the chosen volume form.
    pub lambda: F,
    pub k: Matrix<F>,
    pub j: Option<RecoveredJ<F>>,
}

fn check_shapes<F: Field>(rho: &Form<F>, vol: &Form<F>) -> Result<F> {
    if rho.dim() != 6 || rho.degree() != 3 {
        return Err(Error::Dimension(format!(
            "expected a 3-form on R^6, got degree {} on R^{}",
            rho.degree(),
            rho.dim()
        )));
    }
    if vol.dim() != 6 || vol.degree() != 6 {
        return Err(Error::Dimension("volume form must be a 6-form on R^6".into()));
    }
    let c = vol.coefficient(&[1, 2, 3, 4, 5, 6]);
    if c.is_zero() {
        return Err(Error::Degenerate("volume form is zero".into()));
    }
    Ok(c)
}

/// `K_ρ` as a matrix.
pub fn k_operator<F: RealField>(rho: &Form<F>, vol: &Form<F>) -> Result<Matrix<F>> {
    let c = check_shapes(rho, vol)?;
    let mut cols = Vec::with_capacity(6);
    for a in 0..6 {
        let alpha = rho.interior(&unit_vector(6, a))?.wedge(rho)?;
        // ι_{e_b} e^{1…6} = (−1)^{b−1} e^{1…b̂…6}
        let w: Vec<F> = (0..6)
            .map(|b| {
                let idx: Vec<usize> = (1..=6).filter(|&i| i != b + 1).collect();
                let sign = if b % 2 == 0 { F::one() } else { -F::one() };
                sign * alpha.coefficient(&idx) / c.clone()
            })
            .collect();
        cols.push(w);
    }
    Matrix::from_columns(&cols)
}

/// Orientation sign of `(v₁, Jv₁, v₂, Jv₂, v₃, Jv₃)` for a greedy
/// `J`-complex basis, together with that basis.
pub fn complex_basis<F: RealField>(j: &Matrix<F>, tol: f64) -> Result<Matrix<F>> {
    let n = j.rows();
    let mut cols: Vec<Vec<F>> = Vec::with_capacity(n);
    for a in 0..n {
        if cols.len() == n {
            break;
        }
        let v = unit_vector::<F>(n, a);
        let jv = j.mul_vec(&v);
        let mut trial = cols.clone();
        trial.push(v);
        trial.push(jv);
        let m = Matrix::from_columns(&trial)?;
        let rank = if F::EXACT { m.rank() } else { m.rank_with_tol(tol) };
        if rank == trial.len() {
            cols = trial;
        }
    }
    if cols.len() != n {
        return Err(Error::Degenerate("could not build a complex basis".into()));
    }
    Matrix::from_columns(&cols)
}

fn orient<F: RealField>(j: Matrix<F>, vol: &Form<F>, tol: f64) -> Result<Matrix<F>> {
    let basis = complex_basis(&j, tol)?;
    let cols: Vec<Vec<F>> = (0..6).map(|c| basis.column(c)).collect();
    let v = vol.evaluate(&cols)?;
    Ok(if v.is_negative() { j.neg() } else { j })
}

/// Classifies `ρ` and, when elliptic, recovers `J`.
///
/// `tol` is used only over floats, to decide `λ = 0` and rank questions.
pub fn classify_3form<F: RealField>(rho: &Form<F>, vol: &Form<F>, tol: f64) -> Result<ThreeFormClass<F>> {
    let k = k_operator(rho, vol)?;
    let lambda = k.mul(&k).trace() / F::from_i64(6);
    let scale = k.max_abs().powi(2).max(1.0);
    let zero = if F::EXACT { lambda.is_zero() } else { lambda.magnitude() <= tol * scale };
    let tag = if zero {
        ThreeFormType::Degenerate
    } else if lambda.is_positive() {
        ThreeFormType::Split
    } else {
        ThreeFormType::Elliptic
    };
    let j = if tag == ThreeFormType::Elliptic {
        Some(match (-lambda.clone()).try_sqrt() {
            Some(root) => {
                let j = orient(k.scale(&(F::one() / root)), vol, tol)?;
                RecoveredJ::Exact(LinearComplexStructure::new(j)?)
            }
            None => {
                let kf = k.map(|x| x.to_f64());
                let root = (-lambda.to_f64()).sqrt();
                let volf = vol.map_coeffs(|x| x.to_f64());
                let j = orient(kf.scale(&(1.0 / root)), &volf, tol.max(1e-12))?;
                RecoveredJ::Float(LinearComplexStructure::new(j)?)
            }
        })
    } else {
        None
    };
    Ok(ThreeFormClass { tag, lambda, k, j })
}

/// The `(1,0)` coframe `η_k = x^{2k−1} + i x^{2k}` in coordinates `x`
/// relative to the complex basis `(v_k, Jv_k)`, as rows of a 3×n matrix.
pub fn holomorphic_coframe<F: RealField>(j: &LinearComplexStructure<F>, tol: f64) -> Result<Matrix<F::Complex>> {
    let n = j.dim();
    let basis = complex_basis(j.matrix(), tol)?;
    let inv = basis.inverse()?.complexify();
    let e = Matrix::from_fn(n / 2, n, |k, a| {
        if a == 2 * k {
            F::Complex::one()
        } else if a == 2 * k + 1 {
            F::Complex::i()
        } else {
            F::Complex::zero()
        }
    });
    Ok(e.mul(&inv))
}

/// The `(3,0)`-form `Υ` with `3 Im Υ = ρ`, for an elliptic `ρ` and its `J`.
///
/// With `ξ_k` the `(1,0)` frame dual to `η`, `Υ = (2i/3)·ρ(ξ₁,ξ₂,ξ₃)·η₁∧η₂∧η₃`.
pub fn recover_upsilon<F: RealField>(
    rho: &Form<F>,
    j: &LinearComplexStructure<F>,
    tol: f64,
) -> Result<Form<F::Complex>> {
    if rho.dim() != 6 || rho.degree() != 3 || j.dim() != 6 {
        return Err(Error::Dimension("expected a 3-form and complex structure on R^6".into()));
    }
    let eta = holomorphic_coframe(j, tol)?;
    let basis = complex_basis(j.matrix(), tol)?.complexify();
    let half = F::Complex::from_ratio(1, 2);
    // ξ_k = ½(v_k − i Jv_k)
    let xi: Vec<Vec<F::Complex>> = (0..3)
        .map(|k| {
            (0..6)
                .map(|a| half.clone() * (basis[(a, 2 * k)].clone() - F::Complex::i() * basis[(a, 2 * k + 1)].clone()))
                .collect()
        })
        .collect();
    let rho_c = rho.complexify();
    let c = rho_c.evaluate(&xi)? * F::Complex::new(F::zero(), F::from_ratio(2, 3));
    let row = |k: usize| Form::one_form(eta.row(k));
    let upsilon = row(0).wedge(&row(1))?.wedge(&row(2))?.scale(&c);
    let defect = upsilon.im().scale(&F::from_i64(3)).sub(rho)?.max_abs();
    let ok = if F::EXACT { defect == 0.0 } else { defect <= tol.max(1e-9) * rho.max_abs().max(1.0) };
    if !ok {
        return Err(Error::Precondition(format!("ρ is not 3 Im of a (3,0)-form for this J (defect {defect:.3e})")));
    }
    Ok(upsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{cq, qi, Cq, Q};
    use crate::g2::phi;
    use crate::sampling::{random_matrix, rng};
    use crate::sphere::{standard_j_matrix, upsilon_at, SpherePoint};

    fn form(terms: &[(&[usize], i64)]) -> Form<Q> {
        Form::from_terms(6, 3, terms.iter().map(|(i, c)| (i.to_vec(), qi(*c)))).unwrap()
    }

    fn vol() -> Form<Q> {
        Form::basis(6, &[1, 2, 3, 4, 5, 6]).unwrap()
    }

    fn split() -> Form<Q> {
        form(&[(&[1, 2, 3], 1), (&[4, 5, 6], 1)])
    }

    fn elliptic() -> Form<Q> {
        form(&[(&[1, 3, 6], 1), (&[1, 4, 5], 1), (&[2, 3, 5], 1), (&[2, 4, 6], -1)])
    }

    #[test]
    fn normal_forms() {
        let s = classify_3form(&split(), &vol(), 0.0).unwrap();
        assert_eq!(s.tag, ThreeFormType::Split);
        assert!(s.lambda > qi(0));
        let e = classify_3form(&elliptic(), &vol(), 0.0).unwrap();
        assert_eq!(e.tag, ThreeFormType::Elliptic);
        assert!(e.lambda < qi(0));
        let d = classify_3form(&form(&[(&[1, 2, 3], 1)]), &vol(), 0.0).unwrap();
        assert_eq!(d.tag, ThreeFormType::Degenerate);
        assert_eq!(d.lambda, qi(0));
        assert!(d.j.is_none());
        assert_eq!(classify_3form(&Form::zero(6, 3), &vol(), 0.0).unwrap().tag, ThreeFormType::Degenerate);
    }

    #[test]
    fn k_squared_is_lambda() {
        for rho in [split(), elliptic()] {
            let c = classify_3form(&rho, &vol(), 0.0).unwrap();
            assert_eq!(c.k.mul(&c.k), Matrix::identity(6).scale(&c.lambda));
        }
    }

    #[test]
    fn elliptic_normal_form_recovers_standard_upsilon() {
        let rho = elliptic().scale(&qi(3));
        let c = classify_3form(&rho, &vol(), 0.0).unwrap();
        let Some(RecoveredJ::Exact(j)) = c.j else { panic!("expected exact J") };
        assert_eq!(j.apply(&unit_vector(6, 0)), unit_vector::<Q>(6, 1));
        let ups = recover_upsilon(&rho, &j, 0.0).unwrap();
        let z = |a: usize| {
            Form::one_form(
                &(0..6)
                    .map(|k| {
                        if k == a {
                            cq(1, 0)
                        } else if k == a + 1 {
                            cq(0, 1)
                        } else {
                            cq(0, 0)
                        }
                    })
                    .collect::<Vec<Cq>>(),
            )
        };
        let expected = z(0).wedge(&z(2)).unwrap().wedge(&z(4)).unwrap();
        assert_eq!(ups, expected);
    }

    #[test]
    fn orientation_follows_volume() {
        let rho = elliptic();
        let neg_vol = vol().neg();
        let a = classify_3form(&rho, &vol(), 0.0).unwrap();
        let b = classify_3form(&rho, &neg_vol, 0.0).unwrap();
        let (Some(RecoveredJ::Exact(ja)), Some(RecoveredJ::Exact(jb))) = (a.j, b.j) else { panic!() };
        assert_eq!(ja.neg(), jb);
    }

    #[test]
    fn non_square_discriminant_falls_back_to_float() {
        // Re of (e¹ + √2 i e²)(e³ + √2 i e⁴)(e⁵ + √2 i e⁶)
        let rho = form(&[(&[1, 3, 5], 1), (&[1, 4, 6], -2), (&[2, 3, 6], -2), (&[2, 4, 5], -2)]);
        let c = classify_3form(&rho, &vol(), 0.0).unwrap();
        assert_eq!(c.tag, ThreeFormType::Elliptic);
        match c.j {
            Some(RecoveredJ::Float(j)) => {
                assert!(j.matrix().mul(j.matrix()).add(&Matrix::identity(6)).max_abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orbit_invariance() {
        let mut r = rng(17);
        for _ in 0..20 {
            let a: Matrix<Q> = random_matrix(&mut r, 6, 6, 2);
            if a.det() == qi(0) {
                continue;
            }
            for (rho, tag) in [(split(), ThreeFormType::Split), (elliptic(), ThreeFormType::Elliptic)] {
                let c = classify_3form(&rho.pullback(&a).unwrap(), &vol(), 0.0).unwrap();
                assert_eq!(c.tag, tag);
            }
        }
    }

    #[test]
    fn homogeneity() {
        let t = Q::new(2.into(), 1.into());
        let rho = elliptic().scale(&qi(3));
        let scaled = rho.scale(&(t.clone() * t.clone() * t.clone()));
        let a = classify_3form(&rho, &vol(), 0.0).unwrap();
        let b = classify_3form(&scaled, &vol(), 0.0).unwrap();
        let (Some(RecoveredJ::Exact(ja)), Some(RecoveredJ::Exact(jb))) = (a.j, b.j) else { panic!() };
        assert_eq!(ja, jb);
        let ua = recover_upsilon(&rho, &ja, 0.0).unwrap();
        let ub = recover_upsilon(&scaled, &jb, 0.0).unwrap();
        assert_eq!(ua.scale(&Cq::new(qi(8), qi(0))), ub);
    }

    #[test]
    fn sphere_primitive_form_at_e1() {
        let u = SpherePoint::<Q>::basis(1);
        let basis: Vec<Vec<Q>> = (1..7).map(|i| unit_vector(7, i)).collect();
        let frame = crate::g2::AdaptedFrame::standard();
        let ups = upsilon_at(&u, &frame, 0.0).unwrap();
        let pi = ups.im().scale(&qi(3)).restrict_to_subspace(&basis).unwrap();
        let c = classify_3form(&pi, &vol(), 0.0).unwrap();
        assert_eq!(c.tag, ThreeFormType::Elliptic);
        let Some(RecoveredJ::Exact(j)) = c.j else { panic!() };
        let jm = standard_j_matrix(u.coords());
        assert_eq!(j.matrix(), &Matrix::from_fn(6, 6, |r, c| jm[(r + 1, c + 1)].clone()));
        let cb: Vec<Vec<Cq>> = basis.iter().map(|v| v.iter().map(crate::field::complexify).collect()).collect();
        assert_eq!(recover_upsilon(&pi, &j, 0.0).unwrap(), ups.restrict_to_subspace(&cb).unwrap());
        let _ = phi::<Q>();
    }
}
