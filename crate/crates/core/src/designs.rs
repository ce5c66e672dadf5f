//! Concrete POVMs: full MUB sets, Weyl–Heisenberg SICs, their depolarized
//! (arbitrary-rank) versions, and a single-basis negative control.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector, C64, ZERO};

/// Element-wise Hermiticity tolerance for a valid POVM.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Smallest-eigenvalue tolerance for a valid POVM.
pub const PSD_TOL: f64 = 1e-9;
/// Frobenius tolerance on `Σ E_α − I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Largest prime accepted by [`mub_full_set`].
pub const MAX_MUB_PRIME: usize = 13;

/// Ordered list of PSD operators on `C^d` summing to the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PovmRepr", into = "PovmRepr")]
pub struct Povm {
    dim: usize,
    label: String,
    elements: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct PovmRepr {
    dim: usize,
    label: String,
    elements: Vec<ComplexMatrix>,
}

impl From<Povm> for PovmRepr {
    fn from(p: Povm) -> Self {
        PovmRepr { dim: p.dim, label: p.label, elements: p.elements }
    }
}

impl TryFrom<PovmRepr> for Povm {
    type Error = Error;

    fn try_from(r: PovmRepr) -> Result<Self> {
        let p = Povm::new(r.label, r.elements)?;
        if p.dim != r.dim {
            return Err(Error::InvalidPovm(format!("declared dim {} but elements are {}x{}", r.dim, p.dim, p.dim)));
        }
        Ok(p)
    }
}

impl Povm {
    /// Validate and wrap a list of elements.
    pub fn new(label: impl Into<String>, elements: Vec<ComplexMatrix>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let d = first.rows();
        for (idx, e) in elements.iter().enumerate() {
            if e.rows() != d || e.cols() != d {
                return Err(Error::InvalidPovm(format!(
                    "element {idx} is {}x{}, expected {d}x{d}",
                    e.rows(),
                    e.cols()
                )));
            }
            if !e.is_hermitian(HERMITIAN_TOL) {
                return Err(Error::InvalidPovm(format!(
                    "element {idx} is not Hermitian (defect {:.3e})",
                    e.hermiticity_defect()
                )));
            }
            if !e.is_psd(PSD_TOL) {
                return Err(Error::InvalidPovm(format!("element {idx} is not positive semi-definite")));
            }
        }
        let p = Povm { dim: d, label: label.into(), elements };
        let residual = p.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {residual:.3e}")));
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `‖Σ E_α − I‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.elements {
            sum = &sum + e;
        }
        sum.distance(&ComplexMatrix::identity(self.dim))
    }

    /// Same elements in the order given by `order` (a permutation of indices).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter("order is not a permutation".into()));
            }
        }
        if order.len() != self.len() {
            return Err(Error::InvalidParameter("order is not a permutation".into()));
        }
        Ok(Povm {
            dim: self.dim,
            label: self.label.clone(),
            elements: order.iter().map(|&i| self.elements[i].clone()).collect(),
        })
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

fn phase(numerator: usize, d: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (numerator % d) as f64 / d as f64)
}

/// The `d + 1` mutually unbiased bases for prime `d`, each as a list of vectors.
pub fn mub_bases(d: usize) -> Result<Vec<Vec<StateVector>>> {
    if !is_prime(d) || d > MAX_MUB_PRIME {
        return Err(Error::InvalidParameter(format!(
            "full MUB sets are built for prime d with 2 <= d <= {MAX_MUB_PRIME}; got d = {d}"
        )));
    }
    let computational: Vec<StateVector> = (0..d).map(|j| StateVector::basis(d, j)).collect();
    if d == 2 {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let i = C64::new(0.0, r);
        let re = C64::new(r, 0.0);
        return Ok(vec![
            computational,
            vec![StateVector::from_real(&[r, r]), StateVector::from_real(&[r, -r])],
            vec![StateVector::new(vec![re, i]), StateVector::new(vec![re, -i])],
        ]);
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut bases = vec![computational];
    for b in 0..d {
        let basis = (0..d)
            .map(|m| StateVector::new((0..d).map(|j| phase(b * j * j + m * j, d) * amp).collect()))
            .collect();
        bases.push(basis);
    }
    Ok(bases)
}

/// Full set of `d + 1` MUBs for prime `d ≤ 13`, elements `Π/(d+1)`.
pub fn mub_full_set(d: usize) -> Result<Povm> {
    let weight = 1.0 / (d as f64 + 1.0);
    let elements = mub_bases(d)?
        .iter()
        .flatten()
        .map(|v| v.projector().scale_real(weight))
        .collect();
    Povm::new(format!("mub(d={d})"), elements)
}

/// Cyclic shift `X|j⟩ = |j+1⟩`.
pub fn shift_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { C64::new(1.0, 0.0) } else { ZERO })
}

/// Clock `Z = diag(ω^j)`, `ω = e^{2πi/d}`.
pub fn clock_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| if i == j { phase(j, d) } else { ZERO })
}

/// Standard fiducial for `d ∈ {2, 3}`.
pub fn standard_fiducial(d: usize) -> Result<StateVector> {
    match d {
        2 => {
            // Bloch vector (1,1,1)/√3
            let cos_theta = 1.0 / 3f64.sqrt();
            let c = ((1.0 + cos_theta) / 2.0).sqrt();
            let s = ((1.0 - cos_theta) / 2.0).sqrt();
            Ok(StateVector::new(vec![C64::new(c, 0.0), C64::from_polar(s, PI / 4.0)]))
        }
        3 => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            Ok(StateVector::from_real(&[0.0, r, -r]))
        }
        _ => Err(Error::InvalidParameter(format!(
            "no built-in SIC for d = {d}; supply a fiducial and use sic_from_fiducial"
        ))),
    }
}

/// Built-in SIC POVM for `d ∈ {2, 3}`.
pub fn sic_povm(d: usize) -> Result<Povm> {
    let mut p = sic_from_fiducial(&standard_fiducial(d)?)?;
    p.label = format!("sic(d={d})");
    Ok(p)
}

/// Largest deviation of `|⟨ψ_i|ψ_j⟩|²` from `1/(d+1)` over pairs `i ≠ j`.
pub fn equiangularity_residual(vectors: &[StateVector]) -> f64 {
    let d = vectors.first().map_or(1, StateVector::dim);
    let target = 1.0 / (d as f64 + 1.0);
    let mut worst = 0.0f64;
    for (i, u) in vectors.iter().enumerate() {
        for v in &vectors[i + 1..] {
            worst = worst.max((u.inner(v).norm_sqr() - target).abs());
        }
    }
    worst
}

/// Tolerance for [`sic_from_fiducial`] on both completeness and equiangularity.
pub const SIC_TOL: f64 = 1e-8;

/// Weyl–Heisenberg orbit `{X^j Z^k |ψ⟩⟨ψ| Z^{-k} X^{-j} / d}`.
pub fn sic_from_fiducial(fiducial: &StateVector) -> Result<Povm> {
    let d = fiducial.dim();
    if d < 2 {
        return Err(Error::InvalidParameter("fiducial dimension must be at least 2".into()));
    }
    if !fiducial.is_normalized(1e-10) {
        return Err(Error::InvalidState(format!("fiducial has norm {:.12}", fiducial.norm())));
    }
    let x = shift_operator(d);
    let z = clock_operator(d);
    let mut orbit = Vec::with_capacity(d * d);
    let mut xj = ComplexMatrix::identity(d);
    for _ in 0..d {
        let mut op = xj.clone();
        for _ in 0..d {
            orbit.push(op.mul_vec(fiducial));
            op = &op * &z;
        }
        xj = &x * &xj;
    }

    let weight = 1.0 / d as f64;
    let elements: Vec<ComplexMatrix> = orbit.iter().map(|v| v.projector().scale_real(weight)).collect();
    let mut sum = ComplexMatrix::zeros(d, d);
    for e in &elements {
        sum = &sum + e;
    }
    let completeness = sum.distance(&ComplexMatrix::identity(d));
    let angles = equiangularity_residual(&orbit);
    if completeness > SIC_TOL || angles > SIC_TOL {
        return Err(Error::InvalidPovm(format!(
            "Weyl-Heisenberg orbit is not a SIC: equiangularity residual {angles:.3e}, completeness residual {completeness:.3e}"
        )));
    }
    Povm::new(format!("sic-fiducial(d={d})"), elements)
}

/// Smear every element toward the identity:
/// `E'_α = t·E_α + (1 − t)·Tr(E_α)·I/d`.
pub fn depolarize(p: &Povm, t: f64) -> Result<Povm> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidParameter(format!("depolarizing parameter must lie in (0, 1]; got {t}")));
    }
    let d = p.dim();
    let id = ComplexMatrix::identity(d);
    let elements = p
        .elements()
        .iter()
        .map(|e| &e.scale_real(t) + &id.scale_real((1.0 - t) * e.trace().re / d as f64))
        .collect();
    Povm::new(format!("{}-depol(t={t})", p.label()), elements)
}

/// Projective measurement in the computational basis.
pub fn basis_povm(d: usize) -> Result<Povm> {
    if d < 2 {
        return Err(Error::InvalidParameter("basis POVM needs d >= 2".into()));
    }
    Povm::new(format!("basis(d={d})"), (0..d).map(|j| StateVector::basis(d, j).projector()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn mub_counts_and_overlaps() {
        for d in [2, 3, 5, 7, 11, 13] {
            let bases = mub_bases(d).unwrap();
            assert_eq!(bases.len(), d + 1);
            for (a, ba) in bases.iter().enumerate() {
                for (i, u) in ba.iter().enumerate() {
                    for (j, v) in ba.iter().enumerate() {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!((u.inner(v).norm_sqr() - expect).abs() < 1e-10);
                    }
                    for bb in &bases[a + 1..] {
                        for v in bb {
                            assert!((u.inner(v).norm_sqr() - 1.0 / d as f64).abs() < 1e-10);
                        }
                    }
                }
            }
            assert_eq!(mub_full_set(d).unwrap().len(), d * (d + 1));
        }
    }

    #[test]
    fn mub_rejects_composite_and_large() {
        for d in [0, 1, 4, 6, 9, 17] {
            let err = mub_full_set(d).unwrap_err().to_string();
            assert!(err.contains("prime"), "{err}");
        }
    }

    #[test]
    fn sic_overlaps() {
        for d in [2, 3] {
            let f = standard_fiducial(d).unwrap();
            let p = sic_povm(d).unwrap();
            assert_eq!(p.len(), d * d);
            let projectors: Vec<ComplexMatrix> = p.elements().iter().map(|e| e.scale_real(d as f64)).collect();
            for (i, a) in projectors.iter().enumerate() {
                for b in &projectors[i + 1..] {
                    // Tr(Π_i Π_j) = |⟨ψ_i|ψ_j⟩|²
                    assert!((a.trace_product(b).re - 1.0 / (d as f64 + 1.0)).abs() < 1e-10);
                }
            }
            assert!(f.is_normalized(1e-14));
        }
    }

    #[test]
    fn unsupported_sic_dimension_points_to_fiducial_route() {
        let err = sic_povm(4).unwrap_err().to_string();
        assert!(err.contains("sic_from_fiducial"), "{err}");
    }

    #[test]
    fn bad_fiducial_reports_residual() {
        let err = sic_from_fiducial(&StateVector::basis(2, 0)).unwrap_err().to_string();
        assert!(err.contains("equiangularity residual"), "{err}");
        assert!(sic_from_fiducial(&StateVector::from_real(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn depolarize_identity_at_one() {
        let p = sic_povm(2).unwrap();
        assert_eq!(depolarize(&p, 1.0).unwrap().elements(), p.elements());
    }

    #[test]
    fn depolarize_range() {
        let p = sic_povm(2).unwrap();
        for t in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(depolarize(&p, t).is_err());
        }
        for t in [0.01, 0.5, 0.99] {
            assert!(depolarize(&p, t).unwrap().completeness_residual() < 1e-14);
        }
    }

    #[test]
    fn basis_povm_d2() {
        let p = basis_povm(2).unwrap();
        assert_eq!(p.elements()[0], ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
        assert_eq!(p.elements()[1], ComplexMatrix::from_real_diagonal(&[0.0, 1.0]));
        assert_eq!(p.completeness_residual(), 0.0);
    }

    #[test]
    fn povm_validation() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(Povm::new("ok", vec![half.clone(), half.clone()]).is_ok());
        assert!(Povm::new("short", vec![half.clone()]).is_err());
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        let rest = ComplexMatrix::from_real_diagonal(&[-0.5, 1.5]);
        assert!(Povm::new("neg", vec![neg, rest]).is_err());
        assert!(Povm::new("empty", vec![]).is_err());
    }

    #[test]
    fn povm_json_round_trip_and_validation() {
        let p = mub_full_set(3).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: Povm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"dim":2,"label":"x","elements":[{"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[0,0]]}]}"#;
        assert!(serde_json::from_str::<Povm>(bad).is_err());
    }
}
