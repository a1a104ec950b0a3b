//! First-order invariants of an almost complex structure `J` at a point of
//! `S⁶`, measured against the standard `𝕁` through an adapted frame.
//!
//! With `θ` the `𝕁`-coframe of the frame and `η` a `J`-linear coframe,
//! `θ = rη + sη̄`. From `(r, s)`:
//!
//! ```text
//! P = ᵗr r̄,  Q = ᵗs̄ s,  γ = ½(ᵗr s̄ + ᵗs̄ r),  H = P − Q
//! ω^{2,0} = i(ᵗr s̄ − ᵗs̄ r),  ω^{1,1} = 2i H,  Υ^{3,0} = 8 det r,  Υ^{0,3} = 8 det s
//! residual = det s̄ − det r
//! ```
//!
//! The residual must vanish for an integrable `ω`-compatible `J`; `H` then
//! cannot be definite.
//!
//! Tangent vectors are handled in frame coordinates: `x ∈ R⁶` stands for
//! `Σ x_a g_{a+1}`, so `𝕁` is the standard `J₀` and `ω = e¹² + e³⁴ + e⁵⁶`.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compat::{inertia, standard_omega, IndexPair, LinearComplexStructure};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField};
use crate::form::Form;
use crate::g2::AdaptedFrame;
use crate::matrix::{unit_vector, Matrix};
use crate::sampling::{random_gl, random_matrix, random_su3, sample_rng, Sample};
use crate::sphere::{omega_at, standard_j_matrix, SpherePoint};

pub const FAMILIES: [&str; 3] = ["standard", "minus-standard", "remark1"];

fn negligible<F: Field>(x: f64, tol: f64) -> bool {
    if F::EXACT {
        x == 0.0
    } else {
        x <= tol
    }
}

/// `J₀` on `R²ⁿ` with the given sign on each complex line.
fn signed_standard<F: RealField>(signs: &[i64]) -> Matrix<F> {
    let n = 2 * signs.len();
    Matrix::from_fn(n, n, |r, c| {
        let s = F::from_i64(signs[r / 2]);
        if r / 2 != c / 2 {
            F::zero()
        } else if r % 2 == 1 && c == r - 1 {
            s
        } else if r % 2 == 0 && c == r + 1 {
            -s
        } else {
            F::zero()
        }
    })
}

/// An almost complex structure on `T_uS⁶`, stored as the 7×7 matrix that
/// acts as `J` on `u^⊥` and kills `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateJ<F: RealField> {
    point: SpherePoint<F>,
    j: Matrix<F>,
}

impl<F: RealField> CandidateJ<F> {
    pub fn new(point: SpherePoint<F>, j: Matrix<F>, tol: f64) -> Result<Self> {
        if j.rows() != 7 || j.cols() != 7 {
            return Err(Error::Dimension(format!("J must be 7x7, got {}x{}", j.rows(), j.cols())));
        }
        let u = point.coords();
        let ju = crate::matrix::vec_max_abs(&j.mul_vec(u));
        let utj = crate::matrix::vec_max_abs(&j.transpose().mul_vec(u));
        if !negligible::<F>(ju.max(utj), tol) {
            return Err(Error::Precondition("J does not preserve the tangent space u^⊥".into()));
        }
        let proj = Matrix::from_fn(7, 7, |r, c| {
            let d = if r == c { F::one() } else { F::zero() };
            d - u[r].clone() * u[c].clone()
        });
        let defect = j.mul(&j).add(&proj).max_abs();
        if !negligible::<F>(defect, tol) {
            return Err(Error::Precondition(format!("J² ≠ −I on u^⊥ (defect {defect:.3e})")));
        }
        Ok(Self { point, j })
    }

    /// `𝕁_u`.
    pub fn standard(point: SpherePoint<F>) -> Self {
        let j = standard_j_matrix(point.coords());
        Self { point, j }
    }

    /// `J` from its 6×6 matrix in the frame coordinates of `frame`.
    pub fn from_frame_coords(frame: &AdaptedFrame<F>, j6: &Matrix<F>, tol: f64) -> Result<Self> {
        LinearComplexStructure::new(j6.clone())?;
        let g = Matrix::from_columns(&frame.tangent_basis())?;
        let j = g.mul(j6).mul(&g.transpose());
        Self::new(SpherePoint::new(frame.point())?, j, tol)
    }

    /// One of the named families: `standard` (`𝕁`), `minus-standard`
    /// (`−𝕁`), `remark1` (`𝕁` on the first complex line of the frame, `−𝕁`
    /// on the other two).
    pub fn family(name: &str, frame: &AdaptedFrame<F>) -> Result<Self> {
        let signs: [i64; 3] = match name {
            "standard" => [1, 1, 1],
            "minus-standard" => [-1, -1, -1],
            "remark1" => [1, -1, -1],
            other => {
                return Err(Error::Usage(format!("unknown family {other:?}; expected one of {}", FAMILIES.join(", "))))
            }
        };
        Self::from_frame_coords(frame, &signed_standard(&signs), 0.0)
    }

    pub fn point(&self) -> &SpherePoint<F> {
        &self.point
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.j
    }

    /// `Gᵀ J G` for the tangent basis `G` of `frame`.
    pub fn in_frame(&self, frame: &AdaptedFrame<F>) -> Result<Matrix<F>> {
        let g = Matrix::from_columns(&frame.tangent_basis())?;
        Ok(g.transpose().mul(&self.j).mul(&g))
    }

    /// `+1` when `J` and `𝕁` orient `u^⊥` alike, `−1` otherwise.
    pub fn orientation(&self, tol: f64) -> Result<i8> {
        let vol = omega_at(&self.point).power(3)?;
        let basis = self.complex_basis(tol)?;
        let v = vol.evaluate(&basis)?;
        Ok(if v.is_positive() { 1 } else { -1 })
    }

    /// `(v₁, Jv₁, v₂, Jv₂, v₃, Jv₃)` chosen greedily from the projected
    /// coordinate vectors `e_a − u(u·e_a)` in index order.
    pub fn complex_basis(&self, tol: f64) -> Result<Vec<Vec<F>>> {
        let u = self.point.coords();
        let mut cols: Vec<Vec<F>> = Vec::with_capacity(6);
        for a in 0..7 {
            if cols.len() == 6 {
                break;
            }
            let v: Vec<F> = (0..7)
                .map(|k| {
                    let d = if k == a { F::one() } else { F::zero() };
                    d - u[k].clone() * u[a].clone()
                })
                .collect();
            let jv = self.j.mul_vec(&v);
            let mut trial = cols.clone();
            trial.push(v);
            trial.push(jv);
            let m = Matrix::from_columns(&trial)?;
            let rank = if F::EXACT { m.rank() } else { m.rank_with_tol(tol.max(1e-9)) };
            if rank == trial.len() {
                cols = trial;
            }
        }
        if cols.len() != 6 {
            return Err(Error::Degenerate("no complex basis found for J".into()));
        }
        Ok(cols)
    }
}

/// The `𝕁`-coframe `θ_k = −(i/2)(x^{2k−1} + i x^{2k})` in frame coordinates,
/// as rows of a 3×6 matrix.
pub fn theta_coframe<C: ComplexField>() -> Matrix<C> {
    let half = C::Real::from_ratio(1, 2);
    Matrix::from_fn(3, 6, |k, a| {
        if a == 2 * k {
            C::new(C::Real::zero(), -half.clone())
        } else if a == 2 * k + 1 {
            C::new(half.clone(), C::Real::zero())
        } else {
            C::zero()
        }
    })
}

/// The coframe in which a named family has its textbook `(r, s)`:
/// `θ`, `θ̄`, or `(θ₁, θ̄₂, θ̄₃)`.
pub fn family_coframe<C: ComplexField>(name: &str) -> Result<Matrix<C>> {
    let t = theta_coframe::<C>();
    let conj_rows: [bool; 3] = match name {
        "standard" => [false, false, false],
        "minus-standard" => [true, true, true],
        "remark1" => [false, true, true],
        other => return Err(Error::Usage(format!("unknown family {other:?}"))),
    };
    Ok(Matrix::from_fn(3, 6, |k, a| if conj_rows[k] { t[(k, a)].conj() } else { t[(k, a)].clone() }))
}

fn stack<F: Field>(top: &Matrix<F>, bottom: &Matrix<F>) -> Matrix<F> {
    let mut rows = top.to_rows();
    rows.extend(bottom.to_rows());
    Matrix::from_rows(rows).expect("same width")
}

fn blocks<C: ComplexField>(a: &Matrix<C>, b: &Matrix<C>, c: &Matrix<C>, d: &Matrix<C>) -> Matrix<C> {
    let n = a.rows();
    Matrix::from_fn(2 * n, 2 * n, |r, col| match (r < n, col < n) {
        (true, true) => a[(r, col)].clone(),
        (true, false) => b[(r, col - n)].clone(),
        (false, true) => c[(r - n, col)].clone(),
        (false, false) => d[(r - n, col - n)].clone(),
    })
}

/// `(r, s)` and everything derived from them.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernData<C: ComplexField> {
    pub r: Matrix<C>,
    pub s: Matrix<C>,
    /// The `J`-coframe used, in frame coordinates (absent when built from
    /// `(r, s)` directly).
    pub eta: Option<Matrix<C>>,
    pub p: Matrix<C>,
    pub q: Matrix<C>,
    pub gamma: Matrix<C>,
    pub h: Matrix<C>,
    pub residual: C,
    /// `det [[r, s], [s̄, r̄]]`, a real number.
    pub block_det: C::Real,
}

impl<C: ComplexField> ChernData<C> {
    pub fn from_rs(r: Matrix<C>, s: Matrix<C>) -> Result<Self> {
        if (r.rows(), r.cols(), s.rows(), s.cols()) != (3, 3, 3, 3) {
            return Err(Error::Dimension("r and s must be 3x3".into()));
        }
        let (rb, sb) = (r.conj(), s.conj());
        let p = r.transpose().mul(&rb);
        let q = sb.transpose().mul(&s);
        let half = C::from_ratio(1, 2);
        let gamma = r.transpose().mul(&sb).add(&sb.transpose().mul(&r)).scale(&half);
        let h = p.sub(&q);
        let residual = sb.det() - r.det();
        let block_det = match r.inverse() {
            Ok(r_inv) => (r.det() * rb.sub(&sb.mul(&r_inv).mul(&s)).det()).re(),
            Err(_) => blocks(&r, &s, &sb, &rb).det().re(),
        };
        if block_det.is_zero() {
            return Err(Error::Degenerate("det [[r, s], [s̄, r̄]] vanishes".into()));
        }
        Ok(Self { r, s, eta: None, p, q, gamma, h, residual, block_det })
    }

    /// Sign of the block determinant: `+1` iff `J` has `𝕁`'s orientation.
    pub fn orientation(&self) -> i8 {
        if self.block_det.is_positive() {
            1
        } else {
            -1
        }
    }

    /// The residual divided by `√|block det|`, which removes the modulus of
    /// the gauge `det h`.
    pub fn normalized_residual(&self) -> (f64, f64) {
        let scale = self.block_det.to_f64().abs().sqrt();
        (self.residual.re().to_f64() / scale, self.residual.im().to_f64() / scale)
    }
}

/// Computes `(r, s)` with the default `J`-coframe.
pub fn compute_rs<F: RealField>(
    cand: &CandidateJ<F>,
    frame: &AdaptedFrame<F>,
    tol: f64,
) -> Result<ChernData<F::Complex>> {
    let eta = default_coframe(cand, frame, tol)?;
    compute_rs_with_coframe(cand, frame, &eta, tol)
}

/// `η_k = x^{2k−1} + i x^{2k}` in coordinates relative to the greedy complex
/// basis of `J`, written in frame coordinates.
pub fn default_coframe<F: RealField>(
    cand: &CandidateJ<F>,
    frame: &AdaptedFrame<F>,
    tol: f64,
) -> Result<Matrix<F::Complex>> {
    check_frame(cand, frame, tol)?;
    let g = Matrix::from_columns(&frame.tangent_basis())?;
    let basis: Vec<Vec<F>> = cand.complex_basis(tol)?.iter().map(|v| g.transpose().mul_vec(v)).collect();
    let m = Matrix::from_columns(&basis)?;
    let e = Matrix::from_fn(3, 6, |k, a| {
        if a == 2 * k {
            F::Complex::one()
        } else if a == 2 * k + 1 {
            F::Complex::i()
        } else {
            F::Complex::zero()
        }
    });
    Ok(e.mul(&m.inverse()?.complexify()))
}

fn check_frame<F: RealField>(cand: &CandidateJ<F>, frame: &AdaptedFrame<F>, tol: f64) -> Result<()> {
    let off = crate::matrix::vec_max_abs(&crate::matrix::vec_sub(&frame.point(), cand.point.coords()));
    if !negligible::<F>(off, tol) {
        return Err(Error::Precondition("adapted frame is not based at the point of J".into()));
    }
    Ok(())
}

/// The vectors `ζ_a` of type `(1,0)` with `η_b(ζ_a) = δ_{ab}`, as columns.
/// With `η = A + iB` and `[A; B]⁻¹ = [P Q]`, `ζ = ½(P − iQ)`.
fn dual_vectors<F: RealField>(eta: &Matrix<F::Complex>) -> Result<Matrix<F::Complex>> {
    let real = stack(&eta.real_part(), &eta.imag_part());
    let inv = real.inverse().map_err(|_| Error::Degenerate("η, η̄ do not span the cotangent space".into()))?;
    let half = F::Complex::from_ratio(1, 2);
    Ok(Matrix::from_fn(6, 3, |row, a| {
        F::Complex::new(inv[(row, a)].clone(), -inv[(row, a + 3)].clone()) * half.clone()
    }))
}

/// Computes `(r, s)` from `θ = rη + sη̄` for a given `J`-linear coframe `η`
/// (3×6, frame coordinates).
pub fn compute_rs_with_coframe<F: RealField>(
    cand: &CandidateJ<F>,
    frame: &AdaptedFrame<F>,
    eta: &Matrix<F::Complex>,
    tol: f64,
) -> Result<ChernData<F::Complex>> {
    check_frame(cand, frame, tol)?;
    if eta.rows() != 3 || eta.cols() != 6 {
        return Err(Error::Dimension("η must be 3x6".into()));
    }
    let j6 = cand.in_frame(frame)?.complexify();
    let linear_defect = eta.mul(&j6).sub(&eta.scale(&F::Complex::i())).max_abs();
    if !negligible::<F>(linear_defect, tol) {
        return Err(Error::Precondition(format!("η is not J-linear (defect {linear_defect:.3e})")));
    }
    let zeta = dual_vectors::<F>(eta)?;
    let t = theta_coframe::<F::Complex>();
    let r = t.mul(&zeta);
    let s = t.mul(&zeta.conj());
    let mut data = ChernData::from_rs(r, s)?;
    data.eta = Some(eta.clone());
    Ok(data)
}

/// Matrices of `ω^{2,0}`, `ω^{1,1}`, `ω^{0,2}`: the forms are
/// `Σ A_{ab} η_a∧η_b`, `Σ B_{ab} η_a∧η̄_b`, `Σ Ā_{ab} η̄_a∧η̄_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaTypes<C: ComplexField> {
    pub two_zero: Matrix<C>,
    pub one_one: Matrix<C>,
    pub zero_two: Matrix<C>,
}

pub fn omega_type_components<C: ComplexField>(data: &ChernData<C>) -> OmegaTypes<C> {
    let (r, s) = (&data.r, &data.s);
    let (rb, sb) = (r.conj(), s.conj());
    let two_zero = r.transpose().mul(&sb).sub(&sb.transpose().mul(r)).scale(&C::i());
    let one_one = data.h.scale(&(C::i() * C::from_i64(2)));
    let zero_two = two_zero.conj();
    let _ = rb;
    OmegaTypes { two_zero, one_one, zero_two }
}

fn bilinear_two_form<C: ComplexField>(m: &Matrix<C>, left: &Matrix<C>, right: &Matrix<C>) -> Result<Form<C>> {
    let mut out = Form::zero(left.cols(), 2);
    for a in 0..m.rows() {
        for b in 0..m.cols() {
            if m[(a, b)].is_zero() {
                continue;
            }
            let w = Form::one_form(left.row(a)).wedge(&Form::one_form(right.row(b)))?;
            out = out.add(&w.scale(&m[(a, b)]))?;
        }
    }
    Ok(out)
}

/// `ω` rebuilt from its type components on the coframe `η`, in frame
/// coordinates.
pub fn omega_reconstruction<C: ComplexField>(data: &ChernData<C>) -> Result<Form<C>> {
    let eta = data.eta.as_ref().ok_or_else(|| Error::Precondition("ChernData has no coframe".into()))?;
    let eta_bar = eta.conj();
    let t = omega_type_components(data);
    bilinear_two_form(&t.two_zero, eta, eta)?
        .add(&bilinear_two_form(&t.one_one, eta, &eta_bar)?)?
        .add(&bilinear_two_form(&t.zero_two, &eta_bar, &eta_bar)?)
}

/// The metric as a bilinear form in frame coordinates, rebuilt from
/// `[[4γ, 2(P+Q)], [2ᵗ(P+Q), 4γ̄]]` on `(η, η̄)`.
pub fn metric_reconstruction<C: ComplexField>(data: &ChernData<C>) -> Result<Matrix<C>> {
    let eta = data.eta.as_ref().ok_or_else(|| Error::Precondition("ChernData has no coframe".into()))?;
    let n = stack(eta, &eta.conj());
    let four = C::from_i64(4);
    let two = C::from_i64(2);
    let pq = data.p.add(&data.q);
    let b =
        blocks(&data.gamma.scale(&four), &pq.scale(&two), &pq.transpose().scale(&two), &data.gamma.conj().scale(&four));
    Ok(n.transpose().mul(&b).mul(&n))
}

/// `(8 det r, 8 det s)`, the coefficients of `Υ^{3,0}` and `Υ^{0,3}`.
pub fn upsilon_type_extremes<C: ComplexField>(data: &ChernData<C>) -> (C, C) {
    let eight = C::from_i64(8);
    (eight.clone() * data.r.det(), eight * data.s.det())
}

/// `det s̄ − det r`.
pub fn chern_residual<C: ComplexField>(data: &ChernData<C>) -> C {
    data.residual.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HIndex {
    pub index: IndexPair,
    /// Zero residual together with a definite `H`, which cannot happen for a compatible structure.
    pub contradiction: bool,
}

fn hermitian_inertia<C: ComplexField>(m: &Matrix<C>) -> Result<crate::compat::Inertia> {
    let i = inertia(&m.hermitian_to_real_symmetric())?;
    Ok(crate::compat::Inertia { positive: i.positive / 2, negative: i.negative / 2, zero: i.zero / 2 })
}

/// Signature of the Hermitian matrix `H`.
pub fn index_from_h<C: ComplexField>(data: &ChernData<C>, tol: f64) -> Result<HIndex> {
    let i = hermitian_inertia(&data.h)?;
    if i.zero > 0 {
        return Err(Error::Degenerate("H is degenerate".into()));
    }
    let index = IndexPair::new(i.positive, i.negative);
    let residual_zero = negligible::<C>(data.residual.magnitude(), tol);
    let definite = index.p == 0 || index.q == 0;
    Ok(HIndex { index, contradiction: residual_zero && definite })
}

/// Positive semi-definiteness of a Hermitian matrix.
pub fn is_positive_semidefinite<C: ComplexField>(m: &Matrix<C>) -> Result<bool> {
    Ok(hermitian_inertia(m)?.negative == 0)
}

/// Text of the integrability verdict for a computed instance.
pub fn verdict_line<C: ComplexField>(data: &ChernData<C>, tol: f64) -> String {
    if negligible::<C>(data.residual.magnitude(), tol) {
        match index_from_h(data, tol) {
            Ok(h) => format!("residual zero: passes Chern's necessary condition, index ({},{})", h.index.p, h.index.q),
            Err(_) => "residual zero: passes Chern's necessary condition, H degenerate".into(),
        }
    } else {
        "residual nonzero: first-order obstruction to integrability present".into()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub r_law: bool,
    pub s_law: bool,
    /// `residual' = det(h)·residual`.
    pub residual_law: bool,
    /// Vanishing of the residual is the same before and after.
    pub vanishing_preserved: bool,
    pub pass: bool,
}

/// Recomputes `(r, s)` after `f ↦ f g` and `η ↦ h⁻¹η` and checks
/// `r' = g⁻¹ r h`, `s' = g⁻¹ s h̄`.
pub fn equivariance_check<F: RealField>(
    cand: &CandidateJ<F>,
    frame: &AdaptedFrame<F>,
    eta: &Matrix<F::Complex>,
    g: &Matrix<F::Complex>,
    h: &Matrix<F::Complex>,
    tol: f64,
) -> Result<EquivarianceReport> {
    let before = compute_rs_with_coframe(cand, frame, eta, tol)?;
    let frame2 = frame.rotate_su3(g, tol)?;
    let h_inv = h.inverse().map_err(|_| Error::Precondition("h is not invertible".into()))?;
    // η in the coordinates of the rotated frame
    let g_old = Matrix::from_columns(&frame.tangent_basis())?;
    let g_new = Matrix::from_columns(&frame2.tangent_basis())?;
    let change = g_old.transpose().mul(&g_new).complexify();
    let after = compute_rs_with_coframe(cand, &frame2, &h_inv.mul(eta).mul(&change), tol)?;
    let g_inv = g.inverse()?;
    let close = |a: &Matrix<F::Complex>, b: &Matrix<F::Complex>| negligible::<F>(a.sub(b).max_abs(), tol);
    let r_law = close(&after.r, &g_inv.mul(&before.r).mul(h));
    let s_law = close(&after.s, &g_inv.mul(&before.s).mul(&h.conj()));
    let expected = h.det() * before.residual.clone();
    let residual_law = negligible::<F>((after.residual.clone() - expected).magnitude(), tol);
    let vanishing_preserved =
        negligible::<F>(before.residual.magnitude(), tol) == negligible::<F>(after.residual.magnitude(), tol);
    Ok(EquivarianceReport {
        r_law,
        s_law,
        residual_law,
        vanishing_preserved,
        pass: r_law && s_law && residual_law && vanishing_preserved,
    })
}

/// `(I − X)(I + X)⁻¹`, or `None` when `I + X` is singular.
fn cayley<F: RealField>(x: &Matrix<F>) -> Option<Matrix<F>> {
    let id = Matrix::identity(x.rows());
    let inv = id.add(x).inverse().ok()?;
    Some(id.sub(x).mul(&inv))
}

/// A random `ω`-compatible structure of random `ω`-index, in frame
/// coordinates: a signed `J₀` conjugated by a random symplectic matrix
/// (Cayley transform of a Hamiltonian matrix).
pub fn random_omega_compatible<F: Sample, R: Rng>(rng: &mut R) -> Matrix<F> {
    let signs: Vec<i64> = (0..3).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let j = signed_standard::<F>(&signs);
    let om = standard_omega::<F>(3).to_matrix().expect("2-form");
    loop {
        let a: Matrix<F> = random_matrix(rng, 6, 6, 2);
        let sym = a.add(&a.transpose());
        let x = om.inverse().expect("ω₀ is invertible").mul(&sym);
        if let Some(c) = cayley(&x) {
            if let Ok(ci) = c.inverse() {
                return c.mul(&j).mul(&ci);
            }
        }
    }
}

/// `J` in frame coordinates with prescribed `(r, s)` relative to `θ`:
/// `J = N⁻¹ diag(iI, −iI) N` with `N = [[r, s], [s̄, r̄]]⁻¹ [θ; θ̄]`.
pub fn structure_from_rs<F: RealField>(r: &Matrix<F::Complex>, s: &Matrix<F::Complex>) -> Result<Matrix<F>> {
    Ok(structure_and_coframe_from_rs::<F>(r, s)?.0)
}

/// [`structure_from_rs`] together with the coframe `η` (the first three
/// rows of `N`) in which `θ = rη + sη̄`.
pub fn structure_and_coframe_from_rs<F: RealField>(
    r: &Matrix<F::Complex>,
    s: &Matrix<F::Complex>,
) -> Result<(Matrix<F>, Matrix<F::Complex>)> {
    // θ̄ = r̄η̄ + s̄η gives (r − s r̄⁻¹ s̄) η = θ − s r̄⁻¹ θ̄
    let rb_inv = r.conj().inverse().map_err(|_| Error::Degenerate("r is singular".into()))?;
    let k = s.mul(&rb_inv);
    let schur = r.sub(&k.mul(&s.conj()));
    let schur_inv = schur.inverse().map_err(|_| Error::Degenerate("[[r, s], [s̄, r̄]] is singular".into()))?;
    let t = theta_coframe::<F::Complex>();
    let eta = schur_inv.mul(&t.sub(&k.mul(&t.conj())));
    // η = A + iB is J-linear iff [A; B] J = [−B; A]
    let (a, b) = (eta.real_part(), eta.imag_part());
    let lhs = stack(&a, &b);
    let rhs = stack(&b.neg(), &a);
    let j = lhs.inverse().map_err(|_| Error::Degenerate("η, η̄ do not span the cotangent space".into()))?.mul(&rhs);
    Ok((j, eta))
}

/// A random `ω`-compatible `(r, s)` with zero residual: `s = conj(W r)` for
/// a symmetric `W` with `det W = 1`, so `ᵗr s̄ = ᵗr W r` is symmetric and
/// `det s̄ = det r`. `None` when the draw is degenerate.
pub fn random_residual_free_rs<F: Sample, R: Rng>(rng: &mut R) -> Option<RsPair<F::Complex>> {
    let r = random_gl::<F, R>(rng, 3, 2);
    let a = random_gl::<F, R>(rng, 3, 1);
    let mut diag = || loop {
        let d = F::Complex::new(F::random_scalar(rng, 2), F::random_scalar(rng, 2));
        if d.magnitude() > 1e-3 {
            break if rng.gen_bool(0.5) { F::Complex::one() / d } else { d };
        }
    };
    let (d1, d2) = (diag(), diag());
    let det_a = a.det();
    let denom = d1.clone() * d2.clone() * det_a.clone() * det_a;
    if denom.is_zero() || denom.magnitude() < 1e-9 {
        return None;
    }
    let d3 = F::Complex::one() / denom;
    let w = a.transpose().mul(&Matrix::diagonal(&[d1, d2, d3])).mul(&a);
    let s = w.mul(&r).conj();
    Some((r, s))
}

/// A pair `(r, s)`.
pub type RsPair<C> = (Matrix<C>, Matrix<C>);

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ResidualFreeReport {
    pub trials: usize,
    /// Trials that produced a structure and recomputed its invariants.
    pub valid: usize,
    /// Draws with degenerate `H`, redrawn before counting a trial.
    pub rejected: usize,
    pub index_2_1: usize,
    pub index_1_2: usize,
    pub definite: usize,
    /// Instances where a recomputed identity failed.
    pub failures: usize,
    pub seed: u64,
    pub pass: bool,
}

#[derive(Default)]
struct Tally {
    valid: usize,
    rejected: usize,
    i21: usize,
    i12: usize,
    definite: usize,
    failures: usize,
}

fn residual_free_trial<F: Sample>(seed: u64, index: u64, frame: &AdaptedFrame<F>, tol: f64) -> Tally {
    let mut rng = sample_rng(seed, index);
    let mut t = Tally::default();
    // degenerate H means no complex structure: draw again
    let (j6, eta) = loop {
        if let Some((r, s)) = random_residual_free_rs::<F, _>(&mut rng) {
            if let Ok(pair) = structure_and_coframe_from_rs::<F>(&r, &s) {
                break pair;
            }
        }
        t.rejected += 1;
    };
    let Ok(cand) = CandidateJ::from_frame_coords(frame, &j6, tol) else {
        t.failures += 1;
        return t;
    };
    let Ok(data) = compute_rs_with_coframe(&cand, frame, &eta, tol) else {
        t.failures += 1;
        return t;
    };
    t.valid = 1;
    let compatible = negligible::<F>(omega_type_components(&data).two_zero.max_abs(), tol);
    let residual_zero = negligible::<F>(data.residual.magnitude(), tol);
    let det_p = negligible::<F>((data.p.det() - F::Complex::from_real(data.r.det().norm_sqr())).magnitude(), tol);
    let det_q = negligible::<F>((data.q.det() - F::Complex::from_real(data.s.det().norm_sqr())).magnitude(), tol);
    let q_psd = is_positive_semidefinite(&data.q).unwrap_or(false);
    if !(compatible && residual_zero && det_p && det_q && q_psd) {
        t.failures += 1;
    }
    match index_from_h(&data, tol) {
        Ok(h) if h.index == IndexPair::new(2, 1) => t.i21 = 1,
        Ok(h) if h.index == IndexPair::new(1, 2) => t.i12 = 1,
        Ok(_) => t.definite = 1,
        Err(_) => t.failures += 1,
    }
    t
}

/// Draws `trials` residual-free `ω`-compatible structures at the base point
/// of `frame`, recomputes their invariants and counts `H`-signatures.
pub fn residual_free_sweep<F: Sample>(
    trials: usize,
    seed: u64,
    frame: &AdaptedFrame<F>,
    tol: f64,
) -> ResidualFreeReport {
    let tallies: Vec<Tally> =
        (0..trials).into_par_iter().map(|i| residual_free_trial(seed, i as u64, frame, tol)).collect();
    let mut rep = ResidualFreeReport { trials, seed, ..Default::default() };
    for t in tallies {
        rep.valid += t.valid;
        rep.rejected += t.rejected;
        rep.index_2_1 += t.i21;
        rep.index_1_2 += t.i12;
        rep.definite += t.definite;
        rep.failures += t.failures;
    }
    rep.pass = rep.valid == trials && rep.definite == 0 && rep.failures == 0;
    rep
}

/// Runs [`equivariance_check`] on random compatible structures and random
/// gauges `(g, h) ∈ SU(3) × GL(3, C)`; every other trial uses a
/// residual-free structure.
pub fn equivariance_sweep<F: Sample>(
    trials: usize,
    seed: u64,
    frame: &AdaptedFrame<F>,
    tol: f64,
) -> Result<Vec<EquivarianceReport>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let j6 = if i % 2 == 0 {
                random_omega_compatible::<F, _>(&mut rng)
            } else {
                loop {
                    if let Some((r, s)) = random_residual_free_rs::<F, _>(&mut rng) {
                        if let Ok(j) = structure_from_rs::<F>(&r, &s) {
                            break j;
                        }
                    }
                }
            };
            let cand = CandidateJ::from_frame_coords(frame, &j6, tol)?;
            let eta = default_coframe(&cand, frame, tol)?;
            let g = random_su3::<F, _>(&mut rng);
            let h = random_gl::<F, _>(&mut rng, 3, 2);
            equivariance_check(&cand, frame, &eta, &g, &h, tol)
        })
        .collect()
}

/// Standard basis vector helper used by callers building frames.
pub fn frame_unit<F: RealField>(i: usize) -> Vec<F> {
    unit_vector(6, i)
}
