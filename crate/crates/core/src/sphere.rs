//! Pointwise geometry of `S⁶ ⊂ R⁷`: the almost complex structure
//! `𝕁_u v = u × v`, the invariant forms `ω` and `Υ`, and the Nijenhuis
//! tensor in a stereographic chart.
//!
//! Forms on `T_uS⁶ = u^⊥` are represented by ambient forms on `R⁷` that are
//! horizontal (`ι_u α = 0`), so they can be evaluated on tangent vectors
//! directly and restricted to any basis of `u^⊥`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField, Q};
use crate::form::Form;
use crate::g2::{adapted_frame_at, cross, phi, AdaptedFrame, DEFAULT_TOL};
use crate::matrix::{dot, unit_vector, vec_max_abs, Matrix};
use crate::polyform::{euler_field, PolyForm};
use crate::sampling::{sample_rng, Sample};

/// Float points must satisfy `|u·u − 1| < UNIT_TOL`.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint<F: Field> {
    u: Vec<F>,
}

impl<F: RealField> SpherePoint<F> {
    pub fn new(u: Vec<F>) -> Result<Self> {
        if u.len() != 7 {
            return Err(Error::Dimension(format!("a point of S^6 has 7 coordinates, got {}", u.len())));
        }
        let defect = dot(&u, &u) - F::one();
        let ok = if F::EXACT { defect.is_zero() } else { defect.magnitude() < UNIT_TOL };
        if !ok {
            return Err(Error::Precondition("point is not on the unit sphere".into()));
        }
        Ok(Self { u })
    }

    /// The basis vector `e_i`, 1-based.
    pub fn basis(i: usize) -> Self {
        Self { u: unit_vector(7, i - 1) }
    }

    pub fn coords(&self) -> &[F] {
        &self.u
    }

    pub fn is_tangent(&self, v: &[F], tol: f64) -> bool {
        v.len() == 7 && {
            let c = dot(&self.u, v);
            if F::EXACT {
                c.is_zero()
            } else {
                c.magnitude() <= tol
            }
        }
    }

    fn require_tangent(&self, v: &[F], tol: f64) -> Result<()> {
        if self.is_tangent(v, tol) {
            Ok(())
        } else {
            Err(Error::Precondition("vector is not tangent to the sphere at u".into()))
        }
    }
}

/// Six vectors spanning `u^⊥`, optionally with the unitary frame
/// `(f₁, f₂, f₃)` of an adapted frame at `u`.
#[derive(Clone, Debug)]
pub struct TangentFrame<F: RealField> {
    pub point: SpherePoint<F>,
    pub vectors: Vec<Vec<F>>,
    pub complex: Option<[Vec<F::Complex>; 3]>,
}

impl<F: RealField> TangentFrame<F> {
    pub fn new(point: SpherePoint<F>, vectors: Vec<Vec<F>>, tol: f64) -> Result<Self> {
        if vectors.len() != 6 {
            return Err(Error::Dimension(format!("a tangent frame has 6 vectors, got {}", vectors.len())));
        }
        for v in &vectors {
            point.require_tangent(v, tol)?;
        }
        let m = Matrix::from_columns(&vectors)?;
        let rank = if F::EXACT { m.rank() } else { m.rank_with_tol(tol) };
        if rank != 6 {
            return Err(Error::Degenerate("tangent vectors are linearly dependent".into()));
        }
        Ok(Self { point, vectors, complex: None })
    }

    pub fn from_adapted(frame: &AdaptedFrame<F>) -> Self {
        Self {
            point: SpherePoint { u: frame.point() },
            vectors: frame.tangent_basis(),
            complex: Some([frame.f(1), frame.f(2), frame.f(3)]),
        }
    }

    /// A horizontal form written in this basis of `u^⊥`.
    pub fn in_basis(&self, form: &Form<F>) -> Result<Form<F>> {
        form.restrict_to_subspace(&self.vectors)
    }
}

/// `𝕁_u v = u × v`.
pub fn standard_j<F: RealField>(u: &SpherePoint<F>, v: &[F], tol: f64) -> Result<Vec<F>> {
    u.require_tangent(v, tol)?;
    Ok(cross(u.coords(), v))
}

/// The matrix of `v ↦ x × v` on `R⁷`; on `x^⊥` it is `𝕁_x` when `|x| = 1`.
pub fn standard_j_matrix<F: RealField>(x: &[F]) -> Matrix<F> {
    let cols: Vec<Vec<F>> = (0..7).map(|k| cross(x, &unit_vector(7, k))).collect();
    Matrix::from_columns(&cols).expect("seven columns of length seven")
}

/// `ω_u = ι_u φ`, so `ω_u(v, w) = φ(u, v, w)`.
pub fn omega_at<F: RealField>(u: &SpherePoint<F>) -> Form<F> {
    phi::<F>().interior(u.coords()).expect("φ has degree 3")
}

/// The horizontal part `φ − u♭∧ι_uφ`, i.e. `φ` restricted to `u^⊥`.
pub fn phi_horizontal<F: RealField>(u: &SpherePoint<F>) -> Form<F> {
    horizontal_part(&phi::<F>(), u)
}

/// `α − u♭∧ι_uα`.
pub fn horizontal_part<F: RealField>(alpha: &Form<F>, u: &SpherePoint<F>) -> Form<F> {
    let u_flat = Form::one_form(u.coords());
    let vertical = u_flat.wedge(&alpha.interior(u.coords()).expect("positive degree")).expect("same dimension");
    alpha.sub(&vertical).expect("same shape")
}

/// `Υ_u = c·θ₁∧θ₂∧θ₃` for the coframe of `frame`.
pub fn upsilon_with_coefficient<F: RealField>(frame: &AdaptedFrame<F>, c: F) -> Form<F::Complex> {
    let t = frame.theta(1).wedge(&frame.theta(2)).and_then(|x| x.wedge(&frame.theta(3))).expect("same dimension");
    t.scale(&F::Complex::from_real(c))
}

/// `Υ_u = 8 θ₁∧θ₂∧θ₃`, a `(3,0)`-form independent of the adapted frame at `u`.
pub fn upsilon_at<F: RealField>(u: &SpherePoint<F>, frame: &AdaptedFrame<F>, tol: f64) -> Result<Form<F::Complex>> {
    let off = vec_max_abs(&crate::matrix::vec_sub(&frame.point(), u.coords()));
    if (F::EXACT && off != 0.0) || off > tol {
        return Err(Error::Precondition("adapted frame is not based at u".into()));
    }
    Ok(upsilon_with_coefficient(frame, F::from_i64(8)))
}

/// The exact ambient derivative `d(ι_Eφ)`, with `E` the position field.
pub fn d_omega_ambient() -> Form<Q> {
    let omega = PolyForm::from_constant(&phi::<Q>()).interior_field(&euler_field(7)).expect("degree 3");
    omega.ext_d().at_point(&vec![Q::from_i64(0); 7])
}

/// `max |dω − 3 Im Υ_u|` on `u^⊥` at the base point of `frame`.
pub fn d_omega_defect_at<F: RealField>(frame: &AdaptedFrame<F>, d_omega: &Form<Q>, upsilon_coeff: F) -> f64 {
    let u = SpherePoint { u: frame.point() };
    let d_omega = horizontal_part(&d_omega.map_coeffs(F::from_q), &u);
    let im = upsilon_with_coefficient(frame, upsilon_coeff).im();
    d_omega.sub(&im.scale(&F::from_i64(3))).expect("same shape").max_abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DOmegaReport {
    pub max_defect: f64,
    pub samples: usize,
    pub seed: u64,
    pub pass: bool,
}

/// Compares `d(ι_Eφ) = 3φ` with `3 Im Υ_u` on `u^⊥` at seeded random points.
pub fn verify_d_omega_pointwise<F: Sample>(
    samples: usize,
    seed: u64,
    tol: f64,
    upsilon_coeff: F,
) -> Result<DOmegaReport> {
    let d_omega = d_omega_ambient();
    let defects: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let u = F::random_unit_vector(&mut rng, 7);
            let frame = adapted_frame_at(&u, DEFAULT_TOL)?;
            Ok(d_omega_defect_at(&frame, &d_omega, upsilon_coeff.clone()))
        })
        .collect::<Result<_>>()?;
    let max_defect = defects.into_iter().fold(0.0, f64::max);
    let pass = if F::EXACT { max_defect == 0.0 } else { max_defect <= tol };
    Ok(DOmegaReport { max_defect, samples, seed, pass })
}

/// Stereographic chart of `S⁶` from the pole `−c`: `y ∈ R⁶` maps to
/// `((1 − |y|²) c + 2By) / (1 + |y|²)` with `B` an orthonormal basis of `c^⊥`.
#[derive(Clone, Debug)]
pub struct StereoChart {
    center: Vec<f64>,
    basis: Matrix<f64>,
}

impl StereoChart {
    pub fn new(center: &[f64]) -> Result<Self> {
        let p = SpherePoint::new(center.to_vec())?;
        let frame = adapted_frame_at(p.coords(), DEFAULT_TOL)?;
        let basis = Matrix::from_columns(&frame.tangent_basis())?;
        Ok(Self { center: center.to_vec(), basis })
    }

    pub fn to_sphere(&self, y: &[f64]) -> Vec<f64> {
        let r2 = dot(y, y);
        let by = self.basis.mul_vec(y);
        (0..7).map(|k| ((1.0 - r2) * self.center[k] + 2.0 * by[k]) / (1.0 + r2)).collect()
    }

    /// Chart coordinates of `x`; fails at and near the pole.
    pub fn from_sphere(&self, x: &[f64]) -> Result<Vec<f64>> {
        let s = 1.0 + dot(x, &self.center);
        if s < 1e-8 {
            return Err(Error::Degenerate("point is at the pole of the stereographic chart".into()));
        }
        Ok(self.basis.transpose().mul_vec(x).into_iter().map(|v| v / s).collect())
    }

    /// `∂x/∂y` as a 7×6 matrix.
    pub fn jacobian(&self, y: &[f64]) -> Matrix<f64> {
        let r2 = dot(y, y);
        let s = 1.0 + r2;
        let x = self.to_sphere(y);
        Matrix::from_fn(7, 6, |k, i| {
            (-2.0 * y[i] * self.center[k] + 2.0 * self.basis[(k, i)]) / s - x[k] * 2.0 * y[i] / s
        })
    }

    /// Chart representation `dx⁺ J(x) dx` of an ambient endomorphism field.
    pub fn pull_field<J: Fn(&[f64]) -> Matrix<f64> + ?Sized>(&self, j: &J, y: &[f64]) -> Matrix<f64> {
        let dx = self.jacobian(y);
        // the chart is conformal: dxᵀdx = λ² I
        let lambda2 = 4.0 / (1.0 + dot(y, y)).powi(2);
        dx.transpose().mul(&j(&self.to_sphere(y))).mul(&dx).scale(&(1.0 / lambda2))
    }
}

fn directional_derivative<J: Fn(&[f64]) -> Matrix<f64> + ?Sized>(jc: &J, y: &[f64], v: &[f64], h: f64) -> Matrix<f64> {
    let plus: Vec<f64> = y.iter().zip(v).map(|(a, b)| a + h * b).collect();
    let minus: Vec<f64> = y.iter().zip(v).map(|(a, b)| a - h * b).collect();
    jc(&plus).sub(&jc(&minus)).scale(&(0.5 / h))
}

/// `N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]` for a field of
/// endomorphisms on an open set of `Rⁿ`, with `X`, `Y` extended as constant
/// fields and derivatives taken by central differences.
pub fn nijenhuis_flat<J: Fn(&[f64]) -> Matrix<f64> + ?Sized>(
    jc: &J,
    y: &[f64],
    x: &[f64],
    yv: &[f64],
    h: f64,
) -> Vec<f64> {
    let j0 = jc(y);
    let jx = j0.mul_vec(x);
    let jy = j0.mul_vec(yv);
    let d_jx = directional_derivative(jc, y, &jx, h).mul_vec(yv);
    let d_jy = directional_derivative(jc, y, &jy, h).mul_vec(x);
    let d_y = j0.mul_vec(&directional_derivative(jc, y, yv, h).mul_vec(x));
    let d_x = j0.mul_vec(&directional_derivative(jc, y, x, h).mul_vec(yv));
    (0..y.len()).map(|k| d_jx[k] - d_jy[k] + d_y[k] - d_x[k]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NijenhuisValue {
    /// Richardson-extrapolated value as an ambient tangent vector.
    pub value: Vec<f64>,
    pub norm: f64,
    /// `|N_h − N_{h/2}|`, a measure of discretisation error.
    pub step_change: f64,
}

/// Nijenhuis tensor of an ambient almost complex structure field at `u`.
pub fn nijenhuis<J: Fn(&[f64]) -> Matrix<f64> + ?Sized>(
    j_field: &J,
    chart: &StereoChart,
    u: &[f64],
    x: &[f64],
    y: &[f64],
    h: f64,
) -> Result<NijenhuisValue> {
    let point = SpherePoint::new(u.to_vec())?;
    point.require_tangent(x, 1e-9)?;
    point.require_tangent(y, 1e-9)?;
    let y0 = chart.from_sphere(u)?;
    let dx = chart.jacobian(&y0);
    let lambda2 = 4.0 / (1.0 + dot(&y0, &y0)).powi(2);
    let to_chart = |v: &[f64]| -> Vec<f64> { dx.transpose().mul_vec(v).into_iter().map(|c| c / lambda2).collect() };
    let (xc, yc) = (to_chart(x), to_chart(y));
    let jc = |p: &[f64]| chart.pull_field(j_field, p);
    let n_h = nijenhuis_flat(&jc, &y0, &xc, &yc, h);
    let n_half = nijenhuis_flat(&jc, &y0, &xc, &yc, h / 2.0);
    let extrapolated: Vec<f64> = n_h.iter().zip(&n_half).map(|(a, b)| (4.0 * b - a) / 3.0).collect();
    let step_change = n_h.iter().zip(&n_half).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let value = dx.mul_vec(&extrapolated);
    let norm = dot(&value, &value).sqrt();
    Ok(NijenhuisValue { value, norm, step_change })
}

/// Nijenhuis norms of `𝕁` at seeded random `(u, X, Y)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NijenhuisSweep {
    pub triples: usize,
    pub seed: u64,
    pub min_norm: f64,
    /// Largest `|N_h − N_{h/2}| / |N|` over the triples.
    pub max_relative_step_change: f64,
    /// Largest deviation from `−4 𝕁((X × Y)^⊤)`.
    pub max_identity_error: f64,
    pub pass: bool,
}

/// Evaluates `N_𝕁(X, Y)` at `triples` random points in the stereographic
/// chart centred at each point. Passes when every norm is bounded away from
/// zero and changes by less than `rel_tol` under step halving.
pub fn nijenhuis_sweep(triples: usize, seed: u64, h: f64, rel_tol: f64) -> Result<NijenhuisSweep> {
    let field = |x: &[f64]| standard_j_matrix(x);
    let rows: Vec<(f64, f64, f64)> = (0..triples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let u: Vec<f64> = f64::random_unit_vector(&mut rng, 7);
            let x = crate::sampling::random_tangent_vector(&mut rng, &u, 1);
            let y = crate::sampling::random_tangent_vector(&mut rng, &u, 1);
            let chart = StereoChart::new(&u)?;
            let n = nijenhuis(&field, &chart, &u, &x, &y, h)?;
            let xy = cross(&x, &y);
            let c = dot(&xy, &u);
            let tan: Vec<f64> = xy.iter().zip(&u).map(|(a, b)| a - c * b).collect();
            let expected = cross(&u, &tan);
            let err = n.value.iter().zip(&expected).map(|(a, b)| (a + 4.0 * b).abs()).fold(0.0, f64::max);
            Ok((n.norm, n.step_change / n.norm.max(f64::MIN_POSITIVE), err))
        })
        .collect::<Result<_>>()?;
    let min_norm = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let max_relative_step_change = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let max_identity_error = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let pass = triples > 0 && min_norm > 1e-6 && max_relative_step_change < rel_tol;
    Ok(NijenhuisSweep { triples, seed, min_norm, max_relative_step_change, max_identity_error, pass })
}
