//! Seeded random unitaries, states and test matrices.
//!
//! Every generator takes an explicit RNG. [`rng_for`] derives independent
//! streams from `(seed, index)` so Monte Carlo loops stay reproducible
//! regardless of evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::matrix::{ComplexMatrix, StateVector, C64};

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex normal: `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_matrix(n, rng).hermitian_part()
}

/// Haar-distributed unitary: Gram–Schmidt QR of a complex Ginibre matrix.
///
/// Gram–Schmidt leaves the triangular factor with a real positive diagonal,
/// which is the normalization that makes `Q` exactly Haar.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(d, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v: Vec<C64> = (0..d).map(|i| g[(i, j)]).collect();
        // two passes keep the columns orthonormal to machine precision
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Haar-random `d×d` unitary determined by `seed`.
pub fn haar_random_unitary(d: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(d, &mut rng_for(seed, 0))
}

/// Uniformly random unit vector in `C^dim`.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v = StateVector::new((0..dim).map(|_| complex_gaussian(rng)).collect());
    v.normalized().expect("gaussian vector is non-zero almost surely")
}

/// Mixture of `components` Haar-random pure states with flat-Dirichlet weights.
pub fn random_mixed_state<R: Rng + ?Sized>(dim: usize, components: usize, rng: &mut R) -> ComplexMatrix {
    let weights: Vec<f64> = (0..components).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for w in weights {
        let psi = random_state(dim, rng);
        rho = &rho + &psi.projector().scale_real(w / total);
    }
    rho
}
