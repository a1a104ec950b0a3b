//! Linear complex structures on `R²ⁿ` and their compatibility with a
//! symplectic form or a metric.
//!
//! Bilinear forms are matrices with `B_{ab} = B(e_a, e_b)`. The induced
//! metric of `(ω, J)` is `g(v, w) = ω(v, Jw)`, i.e. the matrix `ΩJ`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, RealField, Q};
use crate::form::Form;
use crate::matrix::Matrix;

/// Float tolerance for `J² = −I` and compatibility checks.
pub const FLOAT_TOL: f64 = 1e-10;

fn negligible<F: Field>(x: f64, tol: f64) -> bool {
    if F::EXACT {
        x == 0.0
    } else {
        x <= tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearComplexStructure<F: Field> {
    j: Matrix<F>,
}

impl<F: RealField> LinearComplexStructure<F> {
    pub fn new(j: Matrix<F>) -> Result<Self> {
        if !j.is_square() || !j.rows().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "a complex structure needs an even square matrix, got {}x{}",
                j.rows(),
                j.cols()
            )));
        }
        let defect = j.mul(&j).add(&Matrix::identity(j.rows())).max_abs();
        if !negligible::<F>(defect, FLOAT_TOL) {
            return Err(Error::Precondition(format!("J² ≠ −I (defect {defect:.3e})")));
        }
        Ok(Self { j })
    }

    /// `J₀ e_{2k−1} = e_{2k}`, `J₀ e_{2k} = −e_{2k−1}` on `R²ⁿ`.
    pub fn standard(n: usize) -> Self {
        let j = Matrix::from_fn(2 * n, 2 * n, |r, c| {
            if r % 2 == 1 && c == r - 1 {
                F::one()
            } else if r % 2 == 0 && c == r + 1 {
                -F::one()
            } else {
                F::zero()
            }
        });
        Self { j }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.j
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    pub fn neg(&self) -> Self {
        Self { j: self.j.neg() }
    }

    /// `A J A⁻¹`.
    pub fn conjugate_by(&self, a: &Matrix<F>) -> Result<Self> {
        Ok(Self { j: a.mul(&self.j).mul(&a.inverse()?) })
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.j.mul_vec(v)
    }
}

/// `ω₀ = Σ e^{2k−1} ∧ e^{2k}` on `R²ⁿ`.
pub fn standard_omega<F: Field>(n: usize) -> Form<F> {
    Form::from_terms(2 * n, 2, (1..=n).map(|k| (vec![2 * k - 1, 2 * k], F::one()))).expect("valid indices")
}

/// `(p, q)` with `p + q = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexPair {
    pub p: usize,
    pub q: usize,
}

impl IndexPair {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn swapped(&self) -> Self {
        Self { p: self.q, q: self.p }
    }
}

#[derive(Clone, Debug)]
pub struct InducedMetric<F: Field> {
    pub g: Matrix<F>,
    /// `max |g − gᵀ|`; zero exactly when `(ω, J)` is compatible.
    pub symmetry_defect: f64,
    pub symmetric: bool,
}

fn omega_matrix<F: RealField>(omega: &Form<F>, dim: usize) -> Result<Matrix<F>> {
    if omega.degree() != 2 || omega.dim() != dim {
        return Err(Error::Dimension(format!(
            "expected a 2-form on R^{dim}, got degree {} on R^{}",
            omega.degree(),
            omega.dim()
        )));
    }
    omega.to_matrix()
}

fn require_nondegenerate<F: RealField>(m: &Matrix<F>) -> Result<()> {
    let rank = if F::EXACT { m.rank() } else { m.rank_with_tol(FLOAT_TOL) };
    if rank != m.rows() {
        return Err(Error::Degenerate(format!("form has rank {rank} < {}", m.rows())));
    }
    Ok(())
}

/// `g(v, w) = ω(v, Jw)`.
pub fn induced_metric<F: RealField>(omega: &Form<F>, j: &LinearComplexStructure<F>) -> Result<InducedMetric<F>> {
    let om = omega_matrix(omega, j.dim())?;
    require_nondegenerate(&om)?;
    let g = om.mul(j.matrix());
    let symmetry_defect = g.sub(&g.transpose()).max_abs();
    let symmetric = negligible::<F>(symmetry_defect, FLOAT_TOL);
    Ok(InducedMetric { g, symmetry_defect, symmetric })
}

/// `ω(Jv, Jw) = ω(v, w)`.
pub fn is_compatible_omega<F: RealField>(omega: &Form<F>, j: &LinearComplexStructure<F>) -> Result<bool> {
    let om = omega_matrix(omega, j.dim())?;
    let jm = j.matrix();
    Ok(negligible::<F>(jm.transpose().mul(&om).mul(jm).sub(&om).max_abs(), FLOAT_TOL))
}

/// `g(Jv, Jw) = g(v, w)`.
pub fn is_compatible_metric<F: RealField>(g: &Matrix<F>, j: &LinearComplexStructure<F>) -> Result<bool> {
    if g.rows() != j.dim() || !g.is_square() {
        return Err(Error::Dimension("metric and complex structure have different sizes".into()));
    }
    let jm = j.matrix();
    Ok(negligible::<F>(jm.transpose().mul(g).mul(jm).sub(g).max_abs(), FLOAT_TOL))
}

/// Counts of positive, negative and zero directions of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Sylvester inertia by symmetric Gaussian elimination (congruence
/// diagonalisation); exact over the rationals, no eigenvalues.
pub fn inertia<F: RealField>(g: &Matrix<F>) -> Result<Inertia> {
    if !g.is_square() {
        return Err(Error::Dimension("inertia of a non-square matrix".into()));
    }
    let n = g.rows();
    let scale = g.max_abs().max(1.0);
    let is_zero = |x: &F| if F::EXACT { x.is_zero() } else { x.magnitude() <= FLOAT_TOL * scale };
    if !negligible::<F>(g.sub(&g.transpose()).max_abs(), FLOAT_TOL * scale) {
        return Err(Error::Precondition("inertia needs a symmetric matrix".into()));
    }
    let mut a = g.clone();
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    for k in 0..n {
        let best_diag = (k..n).max_by(|&x, &y| a[(x, x)].magnitude().total_cmp(&a[(y, y)].magnitude())).unwrap();
        if is_zero(&a[(best_diag, best_diag)]) {
            // all remaining diagonal entries vanish: e_i ← e_i + e_j turns an
            // off-diagonal a_ij into the diagonal entry 2a_ij
            let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !is_zero(&a[(i, j)]));
            match off {
                None => {
                    out.zero += n - k;
                    return Ok(out);
                }
                Some((i, j)) => {
                    for c in 0..n {
                        let v = a[(i, c)].clone() + a[(j, c)].clone();
                        a[(i, c)] = v;
                    }
                    for r in 0..n {
                        let v = a[(r, i)].clone() + a[(r, j)].clone();
                        a[(r, i)] = v;
                    }
                    swap_sym(&mut a, k, i);
                }
            }
        } else {
            swap_sym(&mut a, k, best_diag);
        }
        let pivot = a[(k, k)].clone();
        for r in k + 1..n {
            let f = a[(r, k)].clone() / pivot.clone();
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                a[(r, c)] = v;
            }
            for rr in k..n {
                let v = a[(rr, r)].clone() - f.clone() * a[(rr, k)].clone();
                a[(rr, r)] = v;
            }
        }
        if pivot.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
    }
    Ok(out)
}

fn swap_sym<F: Field>(a: &mut Matrix<F>, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for c in 0..n {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

/// `(positive, negative)` counts; degenerate forms are an error.
pub fn inertial_index<F: RealField>(g: &Matrix<F>) -> Result<(usize, usize)> {
    let i = inertia(g)?;
    if i.zero > 0 {
        return Err(Error::Degenerate(format!("symmetric form has {} null directions", i.zero)));
    }
    Ok((i.positive, i.negative))
}

/// The ω-index `(p, q)`: the induced metric has inertial index `(2p, 2q)`.
pub fn omega_index<F: RealField>(omega: &Form<F>, j: &LinearComplexStructure<F>) -> Result<IndexPair> {
    let m = induced_metric(omega, j)?;
    if !m.symmetric {
        return Err(Error::Precondition(format!(
            "(ω, J) is not compatible (symmetry defect {:.3e})",
            m.symmetry_defect
        )));
    }
    let (pos, neg) = inertial_index(&m.g)?;
    if pos % 2 != 0 || neg % 2 != 0 {
        return Err(Error::Verification(format!("odd inertial index ({pos}, {neg}) for a compatible pair")));
    }
    Ok(IndexPair::new(pos / 2, neg / 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityDims {
    pub n: usize,
    /// Complex structures near `J₀`: `{X : XJ₀ + J₀X = 0}`.
    pub total: usize,
    /// Additionally `XᵀΩ₀J₀ + J₀ᵀΩ₀X = 0`.
    pub omega_compatible: usize,
    /// Additionally `XᵀJ₀ + J₀ᵀX = 0`.
    pub metric_compatible: usize,
    /// Ranks of the linear maps whose kernels give the three numbers.
    pub ranks: [usize; 3],
    /// Unknowns `(2n)²`.
    pub unknowns: usize,
}

/// Matrix of a linear map on `gl(m)`, acting on row-major `vec(X)`.
fn operator_matrix(m: usize, rows: usize, map: impl Fn(&Matrix<Q>) -> Vec<Q>) -> Matrix<Q> {
    let cols: Vec<Vec<Q>> = (0..m * m)
        .map(|k| {
            let x = Matrix::from_fn(m, m, |r, c| if r * m + c == k { Q::one() } else { Q::zero() });
            map(&x)
        })
        .collect();
    debug_assert!(rows == 0 || cols.iter().all(|c| c.len() == rows));
    Matrix::from_columns(&cols).expect("uniform columns")
}

fn flatten(ms: &[Matrix<Q>]) -> Vec<Q> {
    ms.iter().flat_map(|m| m.entries().cloned().collect::<Vec<_>>()).collect()
}

/// Dimensions of the spaces of complex structures on `R²ⁿ` near `J₀`: all,
/// `ω₀`-compatible and `g₀`-compatible, as kernel dimensions of the
/// linearised defining equations.
pub fn compatibility_space_dims(n: usize) -> Result<CompatibilityDims> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let m = 2 * n;
    let j0 = LinearComplexStructure::<Q>::standard(n).matrix().clone();
    let om = standard_omega::<Q>(n).to_matrix()?;
    let g0 = Matrix::<Q>::identity(m);
    let anti = |x: &Matrix<Q>| x.mul(&j0).add(&j0.mul(x));
    let preserve = |x: &Matrix<Q>, b: &Matrix<Q>| x.transpose().mul(b).mul(&j0).add(&j0.transpose().mul(b).mul(x));
    let total = operator_matrix(m, m * m, |x| flatten(&[anti(x)]));
    let omega = operator_matrix(m, 2 * m * m, |x| flatten(&[anti(x), preserve(x, &om)]));
    let metric = operator_matrix(m, 2 * m * m, |x| flatten(&[anti(x), preserve(x, &g0)]));
    let ranks = [total.rank(), omega.rank(), metric.rank()];
    let unknowns = m * m;
    Ok(CompatibilityDims {
        n,
        total: unknowns - ranks[0],
        omega_compatible: unknowns - ranks[1],
        metric_compatible: unknowns - ranks[2],
        ranks,
        unknowns,
    })
}
