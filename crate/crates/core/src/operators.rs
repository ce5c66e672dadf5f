//! Tensor structure on `H ⊗ H` and the canonical operators that live there.
//!
//! Product-basis index convention: `|i⟩ ⊗ |j⟩ ↦ i·d + j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector, C64, ONE, ZERO};

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

fn check_bipartite(a: &ComplexMatrix, d: usize) -> Result<()> {
    if d == 0 || a.rows() != d * d || a.cols() != d * d {
        return Err(Error::Dimension(format!(
            "expected a {0}x{0} operator on C^{d} ⊗ C^{d}, got {1}x{2}",
            d * d,
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Transpose on the second tensor factor in the computational basis.
pub fn partial_transpose(a: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    check_bipartite(a, d)?;
    Ok(ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, k) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        a[(i * d + l, j * d + k)]
    }))
}

/// Which tensor factor to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    First,
    Second,
}

/// Trace out one factor of a `d²×d²` operator, leaving a `d×d` one.
pub fn partial_trace(a: &ComplexMatrix, d: usize, traced: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(a, d)?;
    Ok(match traced {
        Subsystem::First => {
            ComplexMatrix::from_fn(d, d, |k, l| (0..d).map(|i| a[(i * d + k, i * d + l)]).sum())
        }
        Subsystem::Second => {
            ComplexMatrix::from_fn(d, d, |i, j| (0..d).map(|k| a[(i * d + k, j * d + k)]).sum())
        }
    })
}

/// `W₁₂`: the unitary with `W(x ⊗ y) = y ⊗ x`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, k) = (row / d, row % d);
        if col == k * d + i {
            ONE
        } else {
            ZERO
        }
    })
}

/// `(Π_sym, Π_asym) = ((I + W)/2, (I − W)/2)`.
pub fn sym_asym_projectors(d: usize) -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(d * d);
    let w = swap_operator(d);
    ((&id + &w).scale_real(0.5), (&id - &w).scale_real(0.5))
}

/// `|Φ+⟩ = d^{-1/2} Σ_j |e_j⟩ ⊗ |e_j⟩`.
pub fn max_entangled_state(d: usize) -> StateVector {
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    StateVector::new((0..d * d).map(|idx| if idx / d == idx % d { amp } else { ZERO }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::hermitian_eigensystem;
    use crate::random::{random_hermitian, random_matrix, rng_for};

    #[test]
    fn identity_kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_with_zero() {
        let a = random_matrix(2, &mut rng_for(1, 0));
        let z = ComplexMatrix::zeros(3, 3);
        let k = tensor_product(&a, &z);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.frobenius_norm(), 0.0);
    }

    #[test]
    fn kron_index_formula() {
        let mut rng = rng_for(7, 0);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(2, &mut rng);
        let k = tensor_product(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for kk in 0..2 {
                    for l in 0..2 {
                        assert_eq!(k[(2 * i + kk, 2 * j + l)], a[(i, j)] * b[(kk, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = rng_for(8, 0);
        let (a, b, c, e) =
            (random_matrix(2, &mut rng), random_matrix(3, &mut rng), random_matrix(2, &mut rng), random_matrix(3, &mut rng));
        let lhs = &tensor_product(&a, &b) * &tensor_product(&c, &e);
        let rhs = tensor_product(&(&a * &c), &(&b * &e));
        assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn swap_action_d2() {
        let w = swap_operator(2);
        let e0 = StateVector::basis(2, 0);
        let e1 = StateVector::basis(2, 1);
        assert_eq!(w.mul_vec(&e0.kron(&e1)), e1.kron(&e0));
    }

    #[test]
    fn swap_trace_square_and_spectrum() {
        for d in [2, 3, 5] {
            let w = swap_operator(d);
            assert_eq!(w.trace(), C64::new(d as f64, 0.0));
            assert_eq!(&w * &w, ComplexMatrix::identity(d * d));
            let eig = hermitian_eigensystem(&w).unwrap();
            let plus = eig.values.iter().filter(|&&x| (x - 1.0).abs() < 1e-9).count();
            let minus = eig.values.iter().filter(|&&x| (x + 1.0).abs() < 1e-9).count();
            assert_eq!(plus, d * (d + 1) / 2);
            assert_eq!(minus, d * (d - 1) / 2);
        }
    }

    #[test]
    fn projector_traces_and_orthogonality() {
        for (d, ts, ta) in [(2, 3.0, 1.0), (3, 6.0, 3.0), (5, 15.0, 10.0)] {
            let (ps, pa) = sym_asym_projectors(d);
            assert!((ps.trace().re - ts).abs() < 1e-12);
            assert!((pa.trace().re - ta).abs() < 1e-12);
            assert!((&ps * &pa).frobenius_norm() < 1e-12);
            assert!((&ps * &ps).distance(&ps) < 1e-12);
            assert!((&pa * &pa).distance(&pa) < 1e-12);
            assert!((&ps + &pa).distance(&ComplexMatrix::identity(d * d)) < 1e-12);
            assert!((&ps - &pa).distance(&swap_operator(d)) < 1e-12);
        }
    }

    #[test]
    fn phi_plus_basics() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = StateVector::from_real(&[r, 0.0, 0.0, r]);
        assert!((max_entangled_state(2).inner(&expect) - ONE).norm() < 1e-15);
        for d in [2, 3, 5] {
            let phi = max_entangled_state(d);
            assert!((phi.norm() - 1.0).abs() < 1e-14);
            assert!((swap_operator(d).expectation(&phi) - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_of_swap_is_scaled_phi_plus() {
        for d in [2, 3, 5] {
            let pt = partial_transpose(&swap_operator(d), d).unwrap();
            let target = max_entangled_state(d).projector().scale_real(d as f64);
            assert!(pt.distance(&target) < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_identity_and_involution() {
        assert_eq!(partial_transpose(&ComplexMatrix::identity(9), 3).unwrap(), ComplexMatrix::identity(9));
        let mut rng = rng_for(3, 0);
        let a = random_hermitian(9, &mut rng);
        let twice = partial_transpose(&partial_transpose(&a, 3).unwrap(), 3).unwrap();
        assert_eq!(twice, a);
        assert!((partial_transpose(&a, 3).unwrap().trace() - a.trace()).norm() < 1e-12);
    }

    #[test]
    fn bad_dimensions_rejected() {
        let a = ComplexMatrix::identity(5);
        assert!(partial_transpose(&a, 2).is_err());
        assert!(partial_trace(&a, 2, Subsystem::First).is_err());
    }

    #[test]
    fn partial_trace_of_phi_plus_is_maximally_mixed() {
        for d in [2, 3, 4] {
            let rho = max_entangled_state(d).projector();
            for s in [Subsystem::First, Subsystem::Second] {
                let red = partial_trace(&rho, d, s).unwrap();
                assert!(red.distance(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64)) < 1e-14);
            }
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = rng_for(11, 0);
        let x = random_matrix(3, &mut rng);
        let y = random_matrix(3, &mut rng);
        let xy = tensor_product(&x, &y);
        let second = partial_trace(&xy, 3, Subsystem::Second).unwrap();
        assert!(second.distance(&x.scale(y.trace())) < 1e-12);
        let first = partial_trace(&xy, 3, Subsystem::First).unwrap();
        assert!(first.distance(&y.scale(x.trace())) < 1e-12);
    }
}
