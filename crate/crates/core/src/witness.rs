//! Entanglement witnesses built from a conical 2-design.
//!
//! With `k± = (k_s ± k_a)/2` the design operator and its partial transpose
//! are fixed by the certificate alone:
//!
//! ```text
//! N    = k+ I + k− W₁₂
//! N^PT = k+ I + d k− |Φ+⟩⟨Φ+|
//! ```
//!
//! For a Hermitian `A`, `s±` are the extremes of `⟨Ψ|A|Ψ⟩` over product
//! states and `e±` over all pure states. `N` detects entanglement from below
//! (`e⁻ < s⁻`), `N^PT` from above (`e⁺ > s⁺`). The literature also writes
//! these extremes as `c^s_±` (product) and `c_±` (all states).

use serde::{Deserialize, Serialize};

use crate::certify::DesignCertificate;
use crate::eigen::hermitian_eigensystem;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector, C64};
use crate::operators::{max_entangled_state, partial_trace, swap_operator, sym_asym_projectors, Subsystem};
use crate::random::{random_state, rng_for};

/// Detection thresholds must be exceeded by this much; equality never flags.
pub const DETECTION_MARGIN: f64 = 1e-12;

/// Density operator on a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(r: DensityMatrix) -> Self {
        r.matrix
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        DensityMatrix::new(m)
    }
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("density matrix must be square, got {}x{}", matrix.rows(), matrix.cols())));
        }
        if !matrix.is_hermitian(1e-10) {
            return Err(Error::InvalidState(format!("density matrix is not Hermitian ({:.3e})", matrix.hermiticity_defect())));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidState(format!("density matrix has trace {tr}")));
        }
        if !matrix.is_psd(1e-9) {
            return Err(Error::InvalidState("density matrix is not positive semi-definite".into()));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn pure(v: &StateVector) -> Result<Self> {
        Self::new(v.normalized()?.projector())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr(ρA)`, real part.
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        self.matrix.trace_product(a).re
    }
}

/// `N`, `N^PT` and the two witnesses `N − s⁻_N I` and `s⁺_{N^PT} I − N^PT`.
#[derive(Clone, Debug)]
pub struct WitnessOperators {
    pub n: ComplexMatrix,
    pub npt: ComplexMatrix,
    pub below: ComplexMatrix,
    pub above: ComplexMatrix,
}

fn require_design(cert: &DesignCertificate) -> Result<()> {
    if cert.is_conical_design {
        Ok(())
    } else {
        Err(Error::NotADesign(format!(
            "witnesses need a conical 2-design certificate (residual {:.3e}, k_s = {}, k_a = {})",
            cert.design_residual, cert.k_s, cert.k_a
        )))
    }
}

pub fn witness_operators(cert: &DesignCertificate, d: usize) -> Result<WitnessOperators> {
    require_design(cert)?;
    let id = ComplexMatrix::identity(d * d);
    let w = swap_operator(d);
    let phi = max_entangled_state(d).projector();
    let (kp, km) = (cert.k_plus, cert.k_minus);
    Ok(WitnessOperators {
        n: &id.scale_real(kp) + &w.scale_real(km),
        npt: &id.scale_real(kp) + &phi.scale_real(d as f64 * km),
        below: w.scale_real(km),
        above: (&id - &phi.scale_real(d as f64)).scale_real(km),
    })
}

/// Product-state (`s`) and all-state (`e`) extremes for `N` and `N^PT`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBounds {
    pub s_minus_n: f64,
    pub s_plus_n: f64,
    pub e_minus_n: f64,
    pub e_plus_n: f64,
    pub s_minus_npt: f64,
    pub s_plus_npt: f64,
    pub e_minus_npt: f64,
    pub e_plus_npt: f64,
}

pub fn analytic_bounds(cert: &DesignCertificate, d: usize) -> Result<AnalyticBounds> {
    require_design(cert)?;
    let (kp, km) = (cert.k_plus, cert.k_minus);
    Ok(AnalyticBounds {
        s_minus_n: kp,
        s_plus_n: kp + km,
        e_minus_n: kp - km,
        e_plus_n: kp + km,
        s_minus_npt: kp,
        s_plus_npt: kp + km,
        e_minus_npt: kp,
        e_plus_npt: kp + d as f64 * km,
    })
}

/// Analytic bounds plus see-saw estimates of the product-state extremes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    #[serde(rename = "s_minus_N")]
    pub s_minus_n: f64,
    #[serde(rename = "s_plus_N")]
    pub s_plus_n: f64,
    #[serde(rename = "e_minus_N")]
    pub e_minus_n: f64,
    #[serde(rename = "e_plus_N")]
    pub e_plus_n: f64,
    #[serde(rename = "s_minus_NPT")]
    pub s_minus_npt: f64,
    #[serde(rename = "s_plus_NPT")]
    pub s_plus_npt: f64,
    #[serde(rename = "e_minus_NPT")]
    pub e_minus_npt: f64,
    #[serde(rename = "e_plus_NPT")]
    pub e_plus_npt: f64,
    #[serde(rename = "numeric_s_minus_N")]
    pub numeric_s_minus_n: f64,
    #[serde(rename = "numeric_s_plus_N")]
    pub numeric_s_plus_n: f64,
    #[serde(rename = "numeric_s_minus_NPT")]
    pub numeric_s_minus_npt: f64,
    #[serde(rename = "numeric_s_plus_NPT")]
    pub numeric_s_plus_npt: f64,
}

impl WitnessReport {
    pub fn analytic(&self) -> AnalyticBounds {
        AnalyticBounds {
            s_minus_n: self.s_minus_n,
            s_plus_n: self.s_plus_n,
            e_minus_n: self.e_minus_n,
            e_plus_n: self.e_plus_n,
            s_minus_npt: self.s_minus_npt,
            s_plus_npt: self.s_plus_npt,
            e_minus_npt: self.e_minus_npt,
            e_plus_npt: self.e_plus_npt,
        }
    }
}

/// Budget for [`seesaw_extremal_product`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        SeesawConfig { restarts: 32, iters: 200, seed: 0 }
    }
}

/// Stop alternating once the objective improves by less than this.
pub const SEESAW_CONVERGENCE: f64 = 1e-12;

pub fn witness_report(cert: &DesignCertificate, d: usize, cfg: SeesawConfig) -> Result<WitnessReport> {
    let b = analytic_bounds(cert, d)?;
    let ops = witness_operators(cert, d)?;
    let (n_min, n_max) = seesaw_extremal_product(&ops.n, d, cfg.restarts, cfg.iters, cfg.seed)?;
    let (npt_min, npt_max) = seesaw_extremal_product(&ops.npt, d, cfg.restarts, cfg.iters, cfg.seed)?;
    Ok(WitnessReport {
        s_minus_n: b.s_minus_n,
        s_plus_n: b.s_plus_n,
        e_minus_n: b.e_minus_n,
        e_plus_n: b.e_plus_n,
        s_minus_npt: b.s_minus_npt,
        s_plus_npt: b.s_plus_npt,
        e_minus_npt: b.e_minus_npt,
        e_plus_npt: b.e_plus_npt,
        numeric_s_minus_n: n_min,
        numeric_s_plus_n: n_max,
        numeric_s_minus_npt: npt_min,
        numeric_s_plus_npt: npt_max,
    })
}

/// `⟨φ|A|φ⟩` on the second factor: the `d×d` operator `(I ⊗ ⟨φ|) A (I ⊗ |φ⟩)`.
fn contract_second(a: &ComplexMatrix, phi: &StateVector, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, k| {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..d {
            for l in 0..d {
                acc += phi[j].conj() * a[(i * d + j, k * d + l)] * phi[l];
            }
        }
        acc
    })
}

/// `(⟨ψ| ⊗ I) A (|ψ⟩ ⊗ I)`.
fn contract_first(a: &ComplexMatrix, psi: &StateVector, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |j, l| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                acc += psi[i].conj() * a[(i * d + j, k * d + l)] * psi[k];
            }
        }
        acc
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Min,
    Max,
}

/// Extremal eigenpair of a reduced operator; the restricted problem is solved exactly.
fn extremal_vector(b: &ComplexMatrix, dir: Direction) -> Result<(f64, StateVector)> {
    let eig = hermitian_eigensystem(&b.hermitian_part())?;
    let idx = match dir {
        Direction::Max => 0,
        Direction::Min => eig.values.len() - 1,
    };
    Ok((eig.values[idx], eig.vectors.column(idx)))
}

fn seesaw_run(a: &ComplexMatrix, d: usize, iters: usize, dir: Direction, seed: u64, stream: u64) -> Result<f64> {
    let mut rng = rng_for(seed, stream);
    let mut phi = random_state(d, &mut rng);
    let mut best = match dir {
        Direction::Max => f64::NEG_INFINITY,
        Direction::Min => f64::INFINITY,
    };
    for _ in 0..iters {
        let (_, psi) = extremal_vector(&contract_second(a, &phi, d), dir)?;
        let (value, next_phi) = extremal_vector(&contract_first(a, &psi, d), dir)?;
        phi = next_phi;
        let improvement = match dir {
            Direction::Max => value - best,
            Direction::Min => best - value,
        };
        best = value;
        if improvement < SEESAW_CONVERGENCE {
            break;
        }
    }
    Ok(best)
}

/// Minimum and maximum of `⟨ψ⊗φ|A|ψ⊗φ⟩` over product states, by alternating
/// extremal-eigenvector updates from `restarts` random starts.
///
/// Restart `r` uses stream `r` of `seed`; results are reduced by min/max so
/// they do not depend on evaluation order.
pub fn seesaw_extremal_product(
    a: &ComplexMatrix,
    d: usize,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if a.rows() != d * d || a.cols() != d * d {
        return Err(Error::Dimension(format!("expected a {0}x{0} operator, got {1}x{2}", d * d, a.rows(), a.cols())));
    }
    let defect = a.hermiticity_defect();
    if defect > 1e-10 * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    if restarts == 0 || iters == 0 {
        return Err(Error::InvalidParameter("see-saw needs at least one restart and one iteration".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in 0..restarts as u64 {
        // even streams minimize, odd streams maximize
        lo = lo.min(seesaw_run(a, d, iters, Direction::Min, seed, 2 * r)?);
        hi = hi.max(seesaw_run(a, d, iters, Direction::Max, seed, 2 * r + 1)?);
    }
    Ok((lo, hi))
}

/// Smallest and largest eigenvalue: the extremes over all pure states.
pub fn extremal_pure(a: &ComplexMatrix) -> Result<(f64, f64)> {
    let eig = hermitian_eigensystem(a)?;
    Ok((eig.min(), eig.max()))
}

fn check_state_dim(rho: &DensityMatrix, d: usize) -> Result<()> {
    if rho.dim() != d * d {
        return Err(Error::Dimension(format!("state is {0}x{0}, expected {1}x{1}", rho.dim(), d * d)));
    }
    Ok(())
}

/// Outcome of the two linear criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearDetection {
    /// `Tr(ρN) < s⁻_N`
    pub below: bool,
    /// `Tr(ρN^PT) > s⁺_{N^PT}`
    pub above: bool,
}

impl LinearDetection {
    pub fn any(&self) -> bool {
        self.below || self.above
    }
}

pub fn detect_linear(rho: &DensityMatrix, cert: &DesignCertificate, d: usize) -> Result<LinearDetection> {
    check_state_dim(rho, d)?;
    let ops = witness_operators(cert, d)?;
    let b = analytic_bounds(cert, d)?;
    Ok(LinearDetection {
        below: rho.expectation(&ops.n) < b.s_minus_n - DETECTION_MARGIN,
        above: rho.expectation(&ops.npt) > b.s_plus_npt + DETECTION_MARGIN,
    })
}

/// Both sides of the quadratic criterion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticCriterion {
    /// `|Tr(N(ρ − ρ₁⊗ρ₂))|`
    pub lhs_n: f64,
    /// `|Tr(N^PT(ρ − ρ₁⊗ρ₂))|`
    pub lhs_npt: f64,
    /// `k−·√((1 − Tr ρ₁²)(1 − Tr ρ₂²))`
    pub bound: f64,
}

impl QuadraticCriterion {
    pub fn lhs(&self) -> f64 {
        self.lhs_n.max(self.lhs_npt)
    }

    pub fn detected(&self) -> bool {
        self.lhs() > self.bound + DETECTION_MARGIN
    }
}

pub fn quadratic_criterion(rho: &DensityMatrix, cert: &DesignCertificate, d: usize) -> Result<QuadraticCriterion> {
    check_state_dim(rho, d)?;
    let ops = witness_operators(cert, d)?;
    let r1 = partial_trace(rho.matrix(), d, Subsystem::Second)?;
    let r2 = partial_trace(rho.matrix(), d, Subsystem::First)?;
    let product = crate::operators::tensor_product(&r1, &r2);
    let diff = rho.matrix() - &product;
    let p1 = r1.trace_product(&r1).re;
    let p2 = r2.trace_product(&r2).re;
    Ok(QuadraticCriterion {
        lhs_n: diff.trace_product(&ops.n).re.abs(),
        lhs_npt: diff.trace_product(&ops.npt).re.abs(),
        bound: cert.k_minus * ((1.0 - p1).max(0.0) * (1.0 - p2).max(0.0)).sqrt(),
    })
}

pub fn detect_quadratic(rho: &DensityMatrix, cert: &DesignCertificate, d: usize) -> Result<bool> {
    Ok(quadratic_criterion(rho, cert, d)?.detected())
}

/// `ρ_W = 2(1−p)/(d(d+1)) Π_sym + 2p/(d(d−1)) Π_asym`; entangled for `p > 1/2`.
pub fn werner_state(d: usize, p: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter("Werner states need d >= 2".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("Werner parameter must lie in [0, 1]; got {p}")));
    }
    let df = d as f64;
    let (sym, asym) = sym_asym_projectors(d);
    let rho = &sym.scale_real(2.0 * (1.0 - p) / (df * (df + 1.0))) + &asym.scale_real(2.0 * p / (df * (df - 1.0)));
    DensityMatrix::new(rho)
}

/// One row of a Werner-state scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerRow {
    pub p: f64,
    pub tr_rho_n: f64,
    pub below: bool,
    pub quadratic_lhs: f64,
    pub quadratic_bound: f64,
    pub detected: bool,
}

/// Evaluate both criteria on `ρ_W(p)` for `p = 0, step, 2·step, …, 1`.
///
/// `1/step` must be an integer so the grid hits both endpoints exactly.
pub fn werner_scan(d: usize, cert: &DesignCertificate, step: f64) -> Result<Vec<WernerRow>> {
    let count = (1.0 / step).round();
    if !(step > 0.0) || !(count >= 1.0) || (count * step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("step must divide 1 evenly; got {step}")));
    }
    let ops = witness_operators(cert, d)?;
    let count = count as usize;
    (0..=count)
        .map(|i| {
            let p = i as f64 / count as f64;
            let rho = werner_state(d, p)?;
            let q = quadratic_criterion(&rho, cert, d)?;
            Ok(WernerRow {
                p,
                tr_rho_n: rho.expectation(&ops.n),
                below: detect_linear(&rho, cert, d)?.below,
                quadratic_lhs: q.lhs(),
                quadratic_bound: q.bound,
                detected: q.detected(),
            })
        })
        .collect()
}
