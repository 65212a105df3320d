//! Seeded random generators for operators, vectors and group elements.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hermitian::{spectral_oracle, CMatrix, CVector, HermitianOperator, I};

pub type SampleRng = ChaCha8Rng;

/// Fixed seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 20_090_304;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng>(r: &mut R) -> Complex64 {
    Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

pub fn random_matrix<R: Rng>(n: usize, r: &mut R) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian_complex(r))
}

/// GUE-like Hermitian sample.
pub fn random_hermitian<R: Rng>(n: usize, r: &mut R) -> HermitianOperator {
    let m = random_matrix(n, r);
    HermitianOperator::symmetrized(m)
}

pub fn random_vector<R: Rng>(n: usize, r: &mut R) -> CVector {
    CVector::from_fn(n, |_, _| gaussian_complex(r))
}

pub fn random_unit_vector<R: Rng>(n: usize, r: &mut R) -> CVector {
    let v = random_vector(n, r);
    let norm = v.norm();
    v.unscale(norm)
}

/// `exp(-i H)` for Hermitian `H`, built from the spectral oracle.
pub fn unitary_from_hermitian(h: &HermitianOperator) -> CMatrix {
    let spec = spectral_oracle(h);
    let n = h.dim();
    let mut u = CMatrix::zeros(n, n);
    for p in &spec.pairs {
        let phase = (-I * p.value).exp();
        u += (&p.vector * p.vector.adjoint()) * phase;
    }
    u
}

/// Unitary obtained by exponentiating a random anti-Hermitian matrix.
pub fn random_unitary<R: Rng>(n: usize, r: &mut R) -> CMatrix {
    unitary_from_hermitian(&random_hermitian(n, r).scale(std::f64::consts::PI))
}

/// Random invertible matrix with condition number bounded by construction:
/// `U diag(s) V` with singular values in `[0.2, 2]`.
pub fn random_invertible<R: Rng>(n: usize, r: &mut R) -> CMatrix {
    let u = random_unitary(n, r);
    let v = random_unitary(n, r);
    let s = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(r.gen_range(0.2..2.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    u * s * v
}

/// Random density operator of rank exactly `k`.
pub fn random_density_of_rank<R: Rng>(n: usize, k: usize, r: &mut R) -> HermitianOperator {
    let mut acc = HermitianOperator::zeros(n);
    let basis = random_unitary(n, r);
    let mut weights: Vec<f64> = (0..k).map(|_| r.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for (j, w) in weights.iter().enumerate() {
        let col = basis.column(j).into_owned();
        acc = acc.add(&HermitianOperator::outer(&col).scale(*w));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_unitary_is_unitary() {
        let mut r = rng(1);
        for n in 2..5 {
            let u = random_unitary(n, &mut r);
            assert!((u.adjoint() * &u - CMatrix::identity(n, n)).norm() < 1e-12);
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a = random_hermitian(3, &mut rng(5));
        let b = random_hermitian(3, &mut rng(5));
        assert_eq!(a, b);
    }
}
