//! Density matrices, ensembles and entropy functionals. All entropies are in
//! bits.

use crate::error::{validation, Error, Result};
use crate::linops::{commutator_norm, hermitian_eig, ComplexMatrix, C64, HERMITIAN_TOL, PSD_CLIP};

/// Tolerance for unit trace and for probability vectors summing to one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Unit-trace positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(validation(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(validation("density matrix has non-finite entries"));
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORMALIZATION_TOL || tr.im.abs() > NORMALIZATION_TOL {
            return Err(validation(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.eigenvalues[0] < -PSD_CLIP {
            return Err(Error::NegativeEigenvalue(eig.eigenvalues[0]));
        }
        Ok(Self { matrix })
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector is normalized first.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(validation("state vector must be non-zero and finite"));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&unit))
    }

    /// Pure state from real amplitudes.
    pub fn pure_real(psi: &[f64]) -> Result<Self> {
        let v: Vec<C64> = psi.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::pure(&v)
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            matrix: ComplexMatrix::unit(dim, k, k),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn from_diag(values: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(values))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues, ascending, with floating-point negatives clipped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(&self.matrix)?
            .eigenvalues
            .into_iter()
            .map(|l| l.max(0.0))
            .collect())
    }

    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(self)
    }

    /// `U ρ U^†` for a unitary (or isometry) `U`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.cols(),
            });
        }
        Self::new(u.sandwich(&self.matrix))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }
}

/// Preparation `{p_i, ρ_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.is_empty() {
            return Err(validation("ensemble must have at least one member"));
        }
        if probs.len() != states.len() {
            return Err(validation(format!(
                "{} priors for {} states",
                probs.len(),
                states.len()
            )));
        }
        check_distribution(&probs)?;
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        Ok(Self { probs, states })
    }

    /// Equal priors over pure states.
    pub fn uniform_pure(vectors: &[Vec<C64>]) -> Result<Self> {
        let n = vectors.len();
        let states = vectors
            .iter()
            .map(|v| DensityMatrix::pure(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vec![1.0 / n as f64; n], states)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.probs.iter().copied().zip(&self.states)
    }
}

pub(crate) fn check_distribution(p: &[f64]) -> Result<()> {
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(validation(format!(
            "probability {x} is negative or non-finite"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(validation(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// `ρ = Σ p_i ρ_i`
pub fn average_state(e: &Ensemble) -> Result<DensityMatrix> {
    let dim = e.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (p, s) in e.iter() {
        acc = &acc + &s.matrix().scale(p);
    }
    DensityMatrix::new(acc)
}

/// `-Σ x log₂ x` with `0 log 0 = 0`; non-positive entries contribute nothing.
pub(crate) fn entropy_of_values(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

/// `S(ρ) = -Tr ρ log₂ ρ`
pub fn von_neumann_entropy(r: &DensityMatrix) -> Result<f64> {
    let s = entropy_of_values(r.spectrum()?);
    Ok(s.clamp(0.0, (r.dim() as f64).log2()))
}

/// Holevo quantity `χ = S(Σ p_i ρ_i) - Σ p_i S(ρ_i)`.
pub fn holevo_chi(e: &Ensemble) -> Result<f64> {
    let avg = von_neumann_entropy(&average_state(e)?)?;
    let mut mean = 0.0;
    for (p, s) in e.iter() {
        mean += p * von_neumann_entropy(s)?;
    }
    Ok((avg - mean).clamp(0.0, (e.dim() as f64).log2()))
}

/// `H(p) = -Σ p_i log₂ p_i`
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    Ok(entropy_of_values(p.iter().copied()))
}

/// True iff every pair of states commutes within `tol` (max-entry norm).
pub fn ensemble_commutes(e: &Ensemble, tol: f64) -> bool {
    let s = e.states();
    (0..s.len())
        .all(|i| (i + 1..s.len()).all(|j| commutator_norm(s[i].matrix(), s[j].matrix()) <= tol))
}
