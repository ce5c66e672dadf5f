//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation that annihilates
//! it. Sweeps stop once the off-diagonal Frobenius mass drops below
//! `1e-12·‖A‖_F`.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};

pub const MAX_SWEEPS: usize = 100;
pub const OFF_DIAGONAL_TARGET: f64 = 1e-12;
/// Hermiticity tolerance for solver input, relative to `max(1, ‖A‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.values[k] * v[(j, k)].conj()).sum()
        })
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

pub fn hermitian_eigensystem(a: &ComplexMatrix) -> Result<Eigensystem> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("eigensystem of a {}x{} matrix", a.rows(), a.cols())));
    }
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }

    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = OFF_DIAGONAL_TARGET * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        let residual = off_diagonal_norm(&m);
        if residual > target {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS, residual });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Eigensystem { values, vectors })
}

/// Apply `M ← J† M J`, `V ← V J` with `J` chosen to zero `M[p][q]`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // phase removal: D = diag(1, e^{-iφ}) on (p, q) makes the pivot real
    let phase = (apq / mag).conj();

    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = D R with R = [[c, s], [-s, c]]
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = phase * (-s);
    let j_qq = phase * c;

    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * j_pp + mkq * j_qp;
        m[(k, q)] = mkp * j_pq + mkq * j_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = j_pp.conj() * mpk + j_qp.conj() * mqk;
        m[(q, k)] = j_pq.conj() * mpk + j_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;

    #[test]
    fn diagonal_input_sorted_descending() {
        let a = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let eig = hermitian_eigensystem(&a).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]);
        let eig = hermitian_eigensystem(&x).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] + 1.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let top = eig.vectors.column(0);
        let bottom = eig.vectors.column(1);
        // up to a global phase
        assert!((top.inner(&crate::matrix::StateVector::from_real(&[r, r])).norm() - 1.0).abs() < 1e-12);
        assert!((bottom.inner(&crate::matrix::StateVector::from_real(&[r, -r])).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_y_complex_pivot() {
        let y = ComplexMatrix::from_rows(&[vec![ZERO, C64::new(0.0, -1.0)], vec![C64::new(0.0, 1.0), ZERO]]);
        let eig = hermitian_eigensystem(&y).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().distance(&y) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]);
        assert!(matches!(hermitian_eigensystem(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn zero_matrix() {
        let eig = hermitian_eigensystem(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
    }
}
