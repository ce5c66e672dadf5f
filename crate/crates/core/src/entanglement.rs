//! Pure bipartite states, outcome probabilities of product measurements,
//! and concurrence computed two ways: from the reduced state, and from the
//! norm of the probability vector of a conical 2-design.
//!
//! For a conical design with coefficients `k_s`, `k_a` and a state with
//! Schmidt coefficients `λ_r`,
//!
//! ```text
//! ‖p‖² = (k_s² + k_a²)/2 + (k_s² − k_a²)/2 · Σ_r λ_r⁴
//! C    = 2 √((k_s² − ‖p‖²) / (k_s² − k_a²))
//! ```
//!
//! and the second line agrees with `√(2 − 2 Tr ρ²)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{DesignCertificate, DEFAULT_TOL};
use crate::designs::Povm;
use crate::eigen::hermitian_eigensystem;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector, C64};
use crate::random::{haar_unitary, random_state, rng_for};

/// Normalization tolerance for [`BipartiteState`].
pub const NORM_TOL: f64 = 1e-10;

/// `|Ψ⟩ = Σ_ij M_ij |e_i⟩ ⊗ |e_j⟩` on `C^d ⊗ C^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct BipartiteState {
    coefficients: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    dim: usize,
    coefficients: ComplexMatrix,
}

impl From<BipartiteState> for StateRepr {
    fn from(s: BipartiteState) -> Self {
        StateRepr { dim: s.dim(), coefficients: s.coefficients }
    }
}

impl TryFrom<StateRepr> for BipartiteState {
    type Error = Error;

    fn try_from(r: StateRepr) -> Result<Self> {
        let s = BipartiteState::new(r.coefficients)?;
        if s.dim() != r.dim {
            return Err(Error::Dimension(format!("declared dim {} but coefficients are {}x{}", r.dim, s.dim(), s.dim())));
        }
        Ok(s)
    }
}

impl BipartiteState {
    pub fn new(coefficients: ComplexMatrix) -> Result<Self> {
        if !coefficients.is_square() {
            return Err(Error::Dimension(format!(
                "coefficient matrix must be square, got {}x{}",
                coefficients.rows(),
                coefficients.cols()
            )));
        }
        let norm_sq = coefficients.frobenius_norm().powi(2);
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state is not normalized (squared norm {norm_sq:.12})")));
        }
        Ok(BipartiteState { coefficients })
    }

    /// Reshape a `d²`-component vector, index `i·d + j` ↦ `M[i][j]`.
    pub fn from_vector(v: &StateVector) -> Result<Self> {
        let d = (v.dim() as f64).sqrt().round() as usize;
        if d * d != v.dim() {
            return Err(Error::Dimension(format!("{} amplitudes do not form a d x d state", v.dim())));
        }
        Self::new(ComplexMatrix::from_vec(d, d, v.amplitudes().to_vec())?)
    }

    pub fn product(a: &StateVector, b: &StateVector) -> Result<Self> {
        Self::from_vector(&a.kron(b))
    }

    pub fn max_entangled(d: usize) -> Self {
        Self::new(ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt())).expect("normalized")
    }

    /// Haar-uniform random pure state on `C^d ⊗ C^d`.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        Self::from_vector(&random_state(d * d, rng)).expect("random state is normalized")
    }

    pub fn dim(&self) -> usize {
        self.coefficients.rows()
    }

    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.coefficients
    }

    pub fn to_vector(&self) -> StateVector {
        StateVector::new(self.coefficients.entries().to_vec())
    }

    /// `(U ⊗ V)|Ψ⟩`, i.e. `M ↦ U M Vᵀ`.
    pub fn apply_local(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Self {
        BipartiteState { coefficients: &(u * &self.coefficients) * &v.transpose() }
    }

    /// Reduced state of the first factor, `M M†`.
    pub fn reduced_density(&self) -> ComplexMatrix {
        &self.coefficients * &self.coefficients.adjoint()
    }

    /// `Tr ρ²` of either reduced state.
    pub fn purity(&self) -> f64 {
        let rho = self.reduced_density();
        rho.trace_product(&rho).re
    }
}

/// Schmidt coefficients, descending; `λ_r²` are the eigenvalues of `M M†`.
pub fn schmidt_coefficients(s: &BipartiteState) -> Vec<f64> {
    let eig = hermitian_eigensystem(&s.reduced_density()).expect("M M† is Hermitian");
    eig.values.iter().map(|&x| x.max(0.0).sqrt()).collect()
}

/// `p_{αβ} = ⟨Ψ|E_α ⊗ E_β|Ψ⟩` and the Euclidean norm of the table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub m: usize,
    pub values: Vec<Vec<f64>>,
    pub norm: f64,
}

impl ProbabilityTable {
    pub fn total(&self) -> f64 {
        self.values.iter().flatten().sum()
    }
}

pub fn probability_vector(p: &Povm, s: &BipartiteState) -> Result<ProbabilityTable> {
    if p.dim() != s.dim() {
        return Err(Error::Dimension(format!("POVM acts on C^{} but the state lives on C^{1} ⊗ C^{1}", p.dim(), s.dim())));
    }
    let m = s.coefficients();
    let m_adj = m.adjoint();
    // ⟨Ψ|A⊗B|Ψ⟩ = Tr(M† A M Bᵀ) = Σ_jl (M† A M)_jl B_jl
    let sandwiched: Vec<ComplexMatrix> = p.elements().iter().map(|e| &(&m_adj * e) * m).collect();
    let values: Vec<Vec<f64>> = sandwiched
        .iter()
        .map(|x| {
            p.elements()
                .iter()
                .map(|b| x.entries().iter().zip(b.entries()).map(|(a, b)| a * b).sum::<C64>().re)
                .collect()
        })
        .collect();
    let norm = values.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    Ok(ProbabilityTable { m: p.len(), values, norm })
}

/// `‖p‖` predicted from Schmidt data for a conical design with `(k_s, k_a)`.
pub fn pnorm_from_schmidt(k_s: f64, k_a: f64, lambdas: &[f64]) -> f64 {
    let quartic: f64 = lambdas.iter().map(|l| l.powi(4)).sum();
    let sq = (k_s * k_s + k_a * k_a) / 2.0 + (k_s * k_s - k_a * k_a) / 2.0 * quartic;
    sq.sqrt()
}

/// `C = √(2 − 2 Tr ρ²)` from the reduced state.
pub fn concurrence_oracle(s: &BipartiteState) -> f64 {
    (2.0 - 2.0 * s.purity()).max(0.0).sqrt()
}

/// Concurrence from the probability norm of a conical design.
pub fn design_concurrence(cert: &DesignCertificate, pnorm: f64) -> Result<f64> {
    design_concurrence_with_tol(cert, pnorm, DEFAULT_TOL)
}

pub fn design_concurrence_with_tol(cert: &DesignCertificate, pnorm: f64, tol: f64) -> Result<f64> {
    if !cert.is_conical_design {
        return Err(Error::NotADesign(format!(
            "certificate has residual {:.3e}, k_s = {}, k_a = {}",
            cert.design_residual, cert.k_s, cert.k_a
        )));
    }
    let (k_s, k_a) = (cert.k_s, cert.k_a);
    if pnorm > k_s + tol {
        return Err(Error::Inconsistent(format!("probability norm {pnorm} exceeds k_s = {k_s}")));
    }
    let radicand = (k_s * k_s - pnorm * pnorm) / (k_s * k_s - k_a * k_a);
    if radicand < -tol {
        return Err(Error::Inconsistent(format!("negative radicand {radicand:.3e}")));
    }
    Ok(2.0 * radicand.max(0.0).sqrt())
}

/// `‖p‖` on `(U_i ⊗ V_i)|Ψ⟩` for `trials` Haar-random pairs.
///
/// Trial `i` draws from stream `i` of `seed`, so the result does not depend
/// on evaluation order.
pub fn local_unitary_orbit_norms(p: &Povm, s: &BipartiteState, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let d = s.dim();
    (0..trials as u64)
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let u = haar_unitary(d, &mut rng);
            let v = haar_unitary(d, &mut rng);
            probability_vector(p, &s.apply_local(&u, &v)).map(|t| t.norm)
        })
        .collect()
}

/// `max − min` of a sample.
pub fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    if xs.is_empty() {
        0.0
    } else {
        max - min
    }
}
