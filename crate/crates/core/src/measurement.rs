//! Measurements and what they do to states.
//!
//! Outcome probabilities use the trace rule `p(j|ρ) = Tr(E_j ρ)`. A general
//! POVM is realized through its Naimark dilation: the isometry
//! `V = Σ_j √E_j ⊗ |j⟩` followed by a projective measurement of the record
//! register. The post-measurement state of a general POVM is therefore the
//! block-diagonal `σ' = Σ_j √E_j ρ √E_j ⊗ |j⟩⟨j|` on system ⊗ record, whose
//! entropy never drops below `S(ρ)`.

use crate::error::{validation, Error, Result};
use crate::linops::{
    partial_trace_second, psd_function, sum_matrices, tensor_product, ComplexMatrix, C64,
    HERMITIAN_TOL,
};
use crate::quantum::{
    entropy_of_values, von_neumann_entropy, DensityMatrix, Ensemble, NORMALIZATION_TOL,
};

/// Tolerance for completeness `Σ E_j = I` and projector orthogonality.
pub const COMPLETENESS_TOL: f64 = 1e-8;
/// Probabilities in `[-PROB_CLIP, 0)` are floating noise and clipped to zero.
pub const PROB_CLIP: f64 = 1e-12;
/// `ΔS` below `-DELTA_S_TOL` indicates a bug rather than rounding.
pub const DELTA_S_TOL: f64 = 1e-9;

/// Positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    projective: bool,
}

impl Povm {
    /// Validates the elements and records whether they are orthogonal
    /// projectors.
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(validation("measurement needs at least one element"));
        }
        let dim = elements[0].rows();
        for (j, e) in elements.iter().enumerate() {
            if !e.is_square() || e.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.rows().max(e.cols()),
                });
            }
            if !e.is_finite() {
                return Err(validation(format!("element {j} has non-finite entries")));
            }
            let herm = e.hermiticity_error();
            if herm > HERMITIAN_TOL {
                return Err(Error::NotHermitian(herm));
            }
            // Also rejects eigenvalues below the clip threshold.
            psd_function(e, |l| l, false).map_err(|err| match err {
                Error::NegativeEigenvalue(l) => {
                    validation(format!("element {j} has negative eigenvalue {l:e}"))
                }
                other => other,
            })?;
        }
        let total = sum_matrices(elements.iter()).expect("non-empty");
        let dev = total.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > COMPLETENESS_TOL {
            return Err(validation(format!(
                "elements do not resolve the identity (max deviation {dev:e})"
            )));
        }
        let projective = is_projective_family(&elements);
        Ok(Self {
            elements,
            projective,
        })
    }

    /// Like [`Povm::new`] but fails with `NotProjective` unless the elements
    /// are orthogonal projectors.
    pub fn projective(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let p = Self::new(elements)?;
        if !p.projective {
            return Err(Error::NotProjective);
        }
        Ok(p)
    }

    /// Rank-one projective measurement onto the columns of a unitary.
    pub fn from_basis(u: &ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(validation("basis matrix must be square"));
        }
        Self::new(
            (0..u.cols())
                .map(|k| ComplexMatrix::projector(&u.column(k)))
                .collect(),
        )
    }

    /// Projective measurement onto orthonormal vectors spanning the space.
    pub fn from_vectors(vectors: &[Vec<C64>]) -> Result<Self> {
        Self::new(
            vectors
                .iter()
                .map(|v| ComplexMatrix::projector(v))
                .collect(),
        )
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            elements: (0..dim).map(|k| ComplexMatrix::unit(dim, k, k)).collect(),
            projective: true,
        }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    /// `p(j) = Tr(E_j ρ)`, clipped at zero.
    pub fn outcome_distribution(&self, r: &DensityMatrix) -> Result<Vec<f64>> {
        check_dims(self.dim(), r.dim())?;
        Ok(self
            .elements
            .iter()
            .map(|e| trace_product(e, r.matrix()).max(0.0))
            .collect())
    }
}

fn is_projective_family(elements: &[ComplexMatrix]) -> bool {
    for (j, a) in elements.iter().enumerate() {
        for (k, b) in elements.iter().enumerate().skip(j) {
            let prod = a * b;
            let target = if j == k {
                a.clone()
            } else {
                ComplexMatrix::zeros(a.rows(), a.cols())
            };
            if prod.max_abs_diff(&target) > COMPLETENESS_TOL {
                return false;
            }
        }
    }
    true
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Re Tr(a b)` without forming the product.
fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s.re
}

/// Joint distribution of preparation `i` and outcome `j`, row-major
/// `n × m`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    n: usize,
    m: usize,
    values: Vec<f64>,
}

impl JointDistribution {
    /// Clips entries in `[-1e-12, 0)` to zero and checks normalization.
    pub fn new(n: usize, m: usize, mut values: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 || values.len() != n * m {
            return Err(validation(format!(
                "joint distribution needs {n}x{m} entries, got {}",
                values.len()
            )));
        }
        for v in values.iter_mut() {
            if !v.is_finite() || *v < -PROB_CLIP {
                return Err(validation(format!(
                    "joint probability {v} is negative or non-finite"
                )));
            }
            *v = v.max(0.0);
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(validation(format!("joint probabilities sum to {total}")));
        }
        Ok(Self { n, m, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(validation("ragged joint distribution"));
        }
        Self::new(rows.len(), m, rows.concat())
    }

    pub fn preparations(&self) -> usize {
        self.n
    }

    pub fn outcomes(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    /// Marginal over outcomes: `p(i)`.
    pub fn preparation_marginal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Marginal over preparations: `q(j)`.
    pub fn outcome_marginal(&self) -> Vec<f64> {
        (0..self.m)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn h_a(&self) -> f64 {
        entropy_of_values(self.preparation_marginal())
    }

    pub fn h_b(&self) -> f64 {
        entropy_of_values(self.outcome_marginal())
    }

    pub fn h_ab(&self) -> f64 {
        entropy_of_values(self.values.iter().copied())
    }

    /// `H(A|B) = Σ_j q(j) H(A | B = j)`
    pub fn conditional_entropy_a_given_b(&self) -> f64 {
        let q = self.outcome_marginal();
        let mut h = 0.0;
        for (j, &qj) in q.iter().enumerate() {
            if qj <= 0.0 {
                continue;
            }
            h += qj * entropy_of_values((0..self.n).map(|i| self.get(i, j) / qj));
        }
        h
    }
}

/// `p(i, j) = p_i Tr(E_j ρ_i)`
pub fn joint_distribution(e: &Ensemble, v: &Povm) -> Result<JointDistribution> {
    check_dims(v.dim(), e.dim())?;
    let mut values = Vec::with_capacity(e.len() * v.len());
    for (p, s) in e.iter() {
        for el in v.elements() {
            values.push(p * trace_product(el, s.matrix()));
        }
    }
    let joint = JointDistribution::new(e.len(), v.len(), values)?;
    for (i, (&got, &want)) in joint
        .preparation_marginal()
        .iter()
        .zip(e.probs())
        .enumerate()
    {
        if (got - want).abs() > NORMALIZATION_TOL {
            return Err(validation(format!(
                "row {i} of the joint distribution sums to {got}, prior is {want}"
            )));
        }
    }
    Ok(joint)
}

/// `I(A:B) = Σ p(i,j) log₂ [p(i,j) / (p(i) q(j))]`, clipped at zero.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let p = j.preparation_marginal();
    let q = j.outcome_marginal();
    let mut info = 0.0;
    for (a, pa) in p.iter().enumerate() {
        for (b, qb) in q.iter().enumerate() {
            let pab = j.get(a, b);
            if pab > 0.0 {
                info += pab * (pab / (pa * qb)).log2();
            }
        }
    }
    info.max(0.0)
}

/// Naimark dilation of a POVM.
#[derive(Clone, Debug)]
pub struct NaimarkDilation {
    /// `(d·m) × d` isometry `Σ_j √E_j ⊗ |j⟩`.
    pub isometry: ComplexMatrix,
    /// `{I_d ⊗ |j⟩⟨j|}` on the dilated space.
    pub projective: Povm,
    /// Record dimension `m`.
    pub record_dim: usize,
}

impl NaimarkDilation {
    /// `V ρ V^†`
    pub fn embed(&self, r: &DensityMatrix) -> Result<DensityMatrix> {
        r.conjugate(&self.isometry)
    }
}

pub fn naimark_dilation(v: &Povm) -> Result<NaimarkDilation> {
    let d = v.dim();
    let m = v.len();
    let mut isometry = ComplexMatrix::zeros(d * m, d);
    for (j, e) in v.elements().iter().enumerate() {
        let root = psd_function(e, f64::sqrt, false)?;
        for a in 0..d {
            for b in 0..d {
                isometry[(a * m + j, b)] = root[(a, b)];
            }
        }
    }
    let vtv = &isometry.adjoint() * &isometry;
    let dev = vtv.max_abs_diff(&ComplexMatrix::identity(d));
    if dev > 1e-9 {
        return Err(validation(format!(
            "dilation is not an isometry (deviation {dev:e})"
        )));
    }
    Ok(NaimarkDilation {
        isometry,
        projective: record_projectors(d, m),
        record_dim: m,
    })
}

fn record_projectors(d: usize, m: usize) -> Povm {
    let id = ComplexMatrix::identity(d);
    Povm {
        elements: (0..m)
            .map(|j| tensor_product(&id, &ComplexMatrix::unit(m, j, j)))
            .collect(),
        projective: true,
    }
}

/// Post-measurement state.
///
/// Projective: `σ = Σ_j P_j ρ P_j` on the original space. General POVM:
/// `σ' = Σ_j √E_j ρ √E_j ⊗ |j⟩⟨j|` on system ⊗ record (dimension `d·m`).
pub fn post_measurement_state(r: &DensityMatrix, v: &Povm) -> Result<DensityMatrix> {
    check_dims(v.dim(), r.dim())?;
    if v.is_projective() {
        let d = r.dim();
        let mut sigma = ComplexMatrix::zeros(d, d);
        for p in v.elements() {
            sigma = &sigma + &p.sandwich(r.matrix());
        }
        return DensityMatrix::new(sigma.hermitian_part());
    }
    let m = v.len();
    let d = r.dim();
    let mut sigma = ComplexMatrix::zeros(d * m, d * m);
    for (j, e) in v.elements().iter().enumerate() {
        let root = psd_function(e, f64::sqrt, false)?;
        let block = root.sandwich(r.matrix());
        sigma = &sigma + &tensor_product(&block, &ComplexMatrix::unit(m, j, j));
    }
    DensityMatrix::new(sigma.hermitian_part())
}

/// `ΔS = S(σ) - S(ρ)` for the post-measurement state above, clipped at zero.
/// A raw value below `-1e-9` is reported as a numerical failure.
pub fn delta_s(r: &DensityMatrix, v: &Povm) -> Result<f64> {
    let sigma = post_measurement_state(r, v)?;
    let raw = von_neumann_entropy(&sigma)? - von_neumann_entropy(r)?;
    if raw < -DELTA_S_TOL {
        return Err(Error::NumericalFailure(format!(
            "measurement decreased entropy by {:e}",
            -raw
        )));
    }
    Ok(raw.max(0.0))
}

/// Demon's joint system/memory state `σ^{PM} = Σ_m P_m ρ P_m ⊗ |m⟩⟨m|`.
pub fn demon_record_state(r: &DensityMatrix, v: &Povm) -> Result<DensityMatrix> {
    if !v.is_projective() {
        return Err(Error::NotProjective);
    }
    check_dims(v.dim(), r.dim())?;
    let m = v.len();
    let d = r.dim();
    let mut joint = ComplexMatrix::zeros(d * m, d * m);
    for (k, p) in v.elements().iter().enumerate() {
        joint = &joint + &tensor_product(&p.sandwich(r.matrix()), &ComplexMatrix::unit(m, k, k));
    }
    DensityMatrix::new(joint.hermitian_part())
}

/// Memory reset after a projective measurement.
#[derive(Clone, Debug)]
pub struct DemonReset {
    /// `U = Σ_m P_m ⊗ Shift^{-m}`
    pub unitary: ComplexMatrix,
    /// `U σ^{PM} U^†`, equal to `σ ⊗ |0⟩⟨0|`.
    pub after: DensityMatrix,
}

/// Cyclic shift `|k⟩ ↦ |k + s mod m⟩`.
fn cyclic_shift(m: usize, s: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m, m);
    for k in 0..m {
        out[((k + s) % m, k)] = C64::new(1.0, 0.0);
    }
    out
}

/// Builds the controlled shift that returns the memory to `|0⟩` using the
/// perfect system/memory correlation, and applies it.
pub fn demon_reset(joint: &DensityMatrix, v: &Povm) -> Result<DemonReset> {
    if !v.is_projective() {
        return Err(Error::NotProjective);
    }
    let d = v.dim();
    let m = v.len();
    check_dims(d * m, joint.dim())?;

    let flags: Vec<ComplexMatrix> = v
        .elements()
        .iter()
        .enumerate()
        .map(|(k, p)| tensor_product(p, &ComplexMatrix::unit(m, k, k)))
        .collect();
    let mut blocked = ComplexMatrix::zeros(d * m, d * m);
    for f in &flags {
        blocked = &blocked + &f.sandwich(joint.matrix());
    }
    let deviation = blocked.max_abs_diff(joint.matrix());
    if deviation > 1e-9 {
        return Err(Error::BlockFormViolation(deviation));
    }

    let mut unitary = ComplexMatrix::zeros(d * m, d * m);
    for (k, p) in v.elements().iter().enumerate() {
        unitary = &unitary + &tensor_product(p, &cyclic_shift(m, (m - k) % m));
    }
    let after = DensityMatrix::new(unitary.sandwich(joint.matrix()).hermitian_part())?;
    Ok(DemonReset { unitary, after })
}

/// System marginal of a `d·m` system ⊗ memory state.
pub fn system_marginal(joint: &DensityMatrix, d: usize, m: usize) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_second(joint.matrix(), d, m)?)
}

/// Shared by the thermodynamic and bounds modules: the post-measurement
/// state together with the (possibly dilated) pre-measurement state living on
/// the same space, so `ΔS = S(σ) - S(ρ_embedded)`.
pub(crate) fn measured_pair(r: &DensityMatrix, v: &Povm) -> Result<(DensityMatrix, DensityMatrix)> {
    if v.is_projective() {
        Ok((post_measurement_state(r, v)?, r.clone()))
    } else {
        let dil = naimark_dilation(v)?;
        let embedded = dil.embed(r)?;
        Ok((post_measurement_state(r, v)?, embedded))
    }
}
