//! Seeded random points, vectors and matrices, exact or floating.
//!
//! All generators draw from a ChaCha stream seeded with an explicit `u64`.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::field::{ComplexField, Field, RealField, Q};
use crate::matrix::{dot, Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-sample stream, so sweeps give the same answer however they are split.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Fields that know how to draw their own random data.
pub trait Sample: RealField {
    /// A small random scalar: an integer in `[-bound, bound]` over the
    /// rationals, a standard normal over floats.
    fn random_scalar<R: Rng>(rng: &mut R, bound: i64) -> Self;

    /// A random point of the unit sphere in `Rⁿ`.
    ///
    /// Exact points come from integer vectors whose squared norm is a perfect
    /// square, divided by that norm.
    fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Self>;
}

impl Sample for Q {
    fn random_scalar<R: Rng>(rng: &mut R, bound: i64) -> Self {
        Q::from_integer(rng.gen_range(-bound..=bound).into())
    }

    fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Self> {
        loop {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..=9)).collect();
            let norm2: i64 = v.iter().map(|x| x * x).sum();
            if norm2 == 0 {
                continue;
            }
            let r = (norm2 as f64).sqrt().round() as i64;
            if r * r == norm2 {
                return v.into_iter().map(|x| Q::new(x.into(), r.into())).collect();
            }
        }
    }
}

impl Sample for f64 {
    fn random_scalar<R: Rng>(rng: &mut R, _bound: i64) -> Self {
        rng.sample(StandardNormal)
    }

    fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Self> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }
}

pub fn random_vector<F: Sample, R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<F> {
    (0..n).map(|_| F::random_scalar(rng, bound)).collect()
}

/// A random vector orthogonal to the unit vector `u`.
pub fn random_tangent_vector<F: Sample, R: Rng>(rng: &mut R, u: &[F], bound: i64) -> Vec<F> {
    let v: Vec<F> = random_vector(rng, u.len(), bound);
    let c = dot(&v, u);
    v.iter().zip(u).map(|(a, b)| a.clone() - c.clone() * b.clone()).collect()
}

pub fn random_matrix<F: Sample, R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix<F> {
    let entries: Vec<F> = (0..rows * cols).map(|_| F::random_scalar(rng, bound)).collect();
    Matrix::from_fn(rows, cols, |r, c| entries[r * cols + c].clone())
}

pub fn random_complex_matrix<F: Sample, R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<F::Complex> {
    let entries: Vec<F::Complex> =
        (0..n * n).map(|_| F::Complex::new(F::random_scalar(rng, bound), F::random_scalar(rng, bound))).collect();
    Matrix::from_fn(n, n, |r, c| entries[r * n + c].clone())
}

/// A random element of SU(3), exact over the Gaussian rationals.
///
/// Cayley transform `(I − A)(I + A)⁻¹` of a skew-Hermitian `A`, followed by a
/// diagonal phase fixing the determinant.
pub fn random_su3<F: Sample, R: Rng>(rng: &mut R) -> Matrix<F::Complex> {
    let b = random_complex_matrix::<F, R>(rng, 3, 2);
    let a = b.sub(&b.adjoint());
    let id = Matrix::<F::Complex>::identity(3);
    let inv = id.add(&a).inverse().expect("I + A is invertible for skew-Hermitian A");
    let u = id.sub(&a).mul(&inv);
    let phase = u.det().conj();
    let fix = Matrix::diagonal(&[F::Complex::one(), F::Complex::one(), phase]);
    u.mul(&fix)
}

/// A random invertible complex matrix.
pub fn random_gl<F: Sample, R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<F::Complex> {
    loop {
        let m = random_complex_matrix::<F, R>(rng, n, bound);
        let det = m.det();
        if !det.is_zero() && det.magnitude() > 1e-6 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cq;

    #[test]
    fn exact_unit_vectors() {
        let mut r = rng(7);
        for _ in 0..20 {
            let u: Vec<Q> = Q::random_unit_vector(&mut r, 7);
            assert_eq!(dot(&u, &u), Q::one());
        }
    }

    #[test]
    fn exact_su3() {
        let mut r = rng(11);
        for _ in 0..10 {
            let u = random_su3::<Q, _>(&mut r);
            assert!(u.adjoint().mul(&u).sub(&Matrix::identity(3)).is_zero());
            assert_eq!(u.det(), Cq::one());
        }
    }

    #[test]
    fn float_su3_and_tangent() {
        let mut r = rng(3);
        let u = random_su3::<f64, _>(&mut r);
        assert!(u.adjoint().mul(&u).sub(&Matrix::identity(3)).max_abs() < 1e-12);
        let p: Vec<f64> = f64::random_unit_vector(&mut r, 7);
        let v = random_tangent_vector(&mut r, &p, 3);
        assert!(dot(&v, &p).abs() < 1e-12);
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<f64> = f64::random_unit_vector(&mut sample_rng(5, 2), 7);
        let b: Vec<f64> = f64::random_unit_vector(&mut sample_rng(5, 2), 7);
        let c: Vec<f64> = f64::random_unit_vector(&mut sample_rng(5, 3), 7);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
