//! Conical 2-design certification.
//!
//! A POVM is a conical 2-design when
//! `Σ_α E_α ⊗ E_α = k_s Π_sym + k_a Π_asym` with `k_s > k_a ≥ 0`.
//! The coefficients are read off by projecting onto the two subspaces; the
//! Frobenius residual of the fit decides the verdict.

use serde::{Deserialize, Serialize};

use crate::designs::Povm;
use crate::eigen::hermitian_eigensystem;
use crate::matrix::ComplexMatrix;
use crate::operators::{sym_asym_projectors, tensor_product};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Result of fitting `Σ E⊗E` to `k_s Π_sym + k_a Π_asym`.
///
/// `k_plus`/`k_minus` use the halved convention `(k_s ± k_a)/2`, so that
/// `N = k_plus·I + k_minus·W₁₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignCertificate {
    pub k_s: f64,
    pub k_a: f64,
    pub k_plus: f64,
    pub k_minus: f64,
    pub design_residual: f64,
    pub povm_residual: f64,
    pub is_conical_design: bool,
    pub is_projective_design: bool,
}

impl DesignCertificate {
    /// Assemble a certificate from raw numbers, applying the verdict rules.
    pub fn from_parts(k_s: f64, k_a: f64, design_residual: f64, povm_residual: f64, tol: f64) -> Self {
        let is_conical_design = design_residual <= tol && k_s - k_a > tol && k_a >= -tol;
        DesignCertificate {
            k_s,
            k_a,
            k_plus: (k_s + k_a) / 2.0,
            k_minus: (k_s - k_a) / 2.0,
            design_residual,
            povm_residual,
            is_conical_design,
            is_projective_design: is_conical_design && k_a.abs() <= tol,
        }
    }

    /// `k_s ± k_a` without the factor one half.
    pub fn unhalved_k_pm(&self) -> (f64, f64) {
        (self.k_s + self.k_a, self.k_s - self.k_a)
    }
}

/// `N = Σ_α E_α ⊗ E_α`.
pub fn design_sum(p: &Povm) -> ComplexMatrix {
    let d = p.dim();
    let mut n = ComplexMatrix::zeros(d * d, d * d);
    for e in p.elements() {
        n = &n + &tensor_product(e, e);
    }
    n
}

pub fn certify(p: &Povm, tol: f64) -> DesignCertificate {
    let d = p.dim();
    let n = design_sum(p);
    let (sym, asym) = sym_asym_projectors(d);
    let df = d as f64;
    let k_s = 2.0 * n.trace_product(&sym).re / (df * (df + 1.0));
    let k_a = 2.0 * n.trace_product(&asym).re / (df * (df - 1.0));
    let fit = &sym.scale_real(k_s) + &asym.scale_real(k_a);
    DesignCertificate::from_parts(k_s, k_a, n.distance(&fit), p.completeness_residual(), tol)
}

/// Numerical rank of each element: eigenvalues above `tol·‖E‖_F`.
pub fn rank_profile(p: &Povm, tol: f64) -> Vec<usize> {
    p.elements()
        .iter()
        .map(|e| {
            let cutoff = tol * e.frobenius_norm();
            hermitian_eigensystem(e)
                .map(|eig| eig.values.iter().filter(|&&x| x > cutoff).count())
                .unwrap_or(0)
        })
        .collect()
}
