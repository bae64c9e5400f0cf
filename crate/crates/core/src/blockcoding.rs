//! Collective measurements on blocks of `m` letters.
//!
//! [`block_scan`] builds the `n^m`-member sequence ensemble, measures it with
//! the pretty good (square-root) measurement and reports information and
//! measurement entropy per letter against the single-letter Holevo quantity.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linops::{psd_function, ComplexMatrix};
use crate::measurement::{delta_s, joint_distribution, mutual_information, Povm};
use crate::quantum::{average_state, holevo_chi, DensityMatrix, Ensemble};

/// Size limits for sequence ensembles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockBudget {
    /// Largest allowed `d^m`.
    pub max_dim: usize,
    /// Largest allowed `n^m`.
    pub max_sequences: usize,
}

impl Default for BlockBudget {
    fn default() -> Self {
        Self {
            max_dim: 32,
            max_sequences: 4096,
        }
    }
}

impl BlockBudget {
    pub fn check(&self, e: &Ensemble, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::Validation("block length must be at least 1".into()));
        }
        let exp = u32::try_from(m).unwrap_or(u32::MAX);
        let dim = e.dim().checked_pow(exp).filter(|&d| d <= self.max_dim);
        if dim.is_none() {
            return Err(Error::BudgetExceeded(format!(
                "block dimension {}^{m} exceeds {}",
                e.dim(),
                self.max_dim
            )));
        }
        let seqs = e
            .len()
            .checked_pow(exp)
            .filter(|&s| s <= self.max_sequences);
        if seqs.is_none() {
            return Err(Error::BudgetExceeded(format!(
                "{}^{m} sequences exceed {}",
                e.len(),
                self.max_sequences
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub m: usize,
    /// `I(A^m : B) / m`
    pub per_letter_info: f64,
    /// `ΔS_m / m`
    pub per_letter_delta_s: f64,
    /// Single-letter Holevo quantity.
    pub chi: f64,
    /// Holevo quantity of the block ensemble (`m·χ` by additivity).
    pub block_chi: f64,
    pub sequence_count: usize,
    pub pgm_projective: bool,
}

impl BlockReport {
    /// Slack of the thermodynamic bound on the whole block,
    /// `m·χ + ΔS_m - I(A^m:B)`.
    pub fn block_thermo_slack(&self) -> f64 {
        let m = self.m as f64;
        self.block_chi + m * self.per_letter_delta_s - m * self.per_letter_info
    }
}

pub fn sequence_ensemble(e: &Ensemble, m: usize) -> Result<Ensemble> {
    sequence_ensemble_with_budget(e, m, &BlockBudget::default())
}

/// All `n^m` sequences `(i_1 … i_m)` with prior `Π p_{i_k}` and state
/// `ρ_{i_1} ⊗ … ⊗ ρ_{i_m}`, in lexicographic order.
pub fn sequence_ensemble_with_budget(
    e: &Ensemble,
    m: usize,
    budget: &BlockBudget,
) -> Result<Ensemble> {
    budget.check(e, m)?;
    let mut probs = e.probs().to_vec();
    let mut states = e.states().to_vec();
    for _ in 1..m {
        let mut next_p = Vec::with_capacity(probs.len() * e.len());
        let mut next_s = Vec::with_capacity(states.len() * e.len());
        for (p, s) in probs.iter().zip(&states) {
            for (q, t) in e.iter() {
                next_p.push(p * q);
                next_s.push(s.tensor(t));
            }
        }
        probs = next_p;
        states = next_s;
    }
    // Products of normalized priors drift from 1 by rounding only.
    let total: f64 = probs.iter().sum();
    let probs = probs.into_iter().map(|p| p / total).collect();
    Ensemble::new(probs, states)
}

/// Square-root measurement `E_s = ρ^{-1/2} p_s ρ_s ρ^{-1/2}`, with the
/// projector onto the kernel of `ρ` appended when `ρ` is rank deficient.
pub fn pretty_good_measurement(e: &Ensemble) -> Result<Povm> {
    let rho = average_state(e)?;
    let inv_sqrt = psd_function(rho.matrix(), |l| 1.0 / l.sqrt(), true)?;
    let support = psd_function(rho.matrix(), |_| 1.0, true)?;
    let mut elements: Vec<ComplexMatrix> = e
        .iter()
        .map(|(p, s)| inv_sqrt.sandwich(&s.matrix().scale(p)).hermitian_part())
        .collect();
    let kernel = &ComplexMatrix::identity(e.dim()) - &support;
    if kernel.trace().re > 0.5 {
        elements.push(kernel.hermitian_part());
    }
    Povm::new(elements)
}

fn block_report(e: &Ensemble, chi: f64, m: usize, budget: &BlockBudget) -> Result<BlockReport> {
    let seq = sequence_ensemble_with_budget(e, m, budget)?;
    let pgm = pretty_good_measurement(&seq)?;
    let info = mutual_information(&joint_distribution(&seq, &pgm)?);
    let rho_m: DensityMatrix = average_state(&seq)?;
    let ds = delta_s(&rho_m, &pgm)?;
    let mf = m as f64;
    Ok(BlockReport {
        m,
        per_letter_info: info / mf,
        per_letter_delta_s: ds / mf,
        chi,
        block_chi: holevo_chi(&seq)?,
        sequence_count: seq.len(),
        pgm_projective: pgm.is_projective(),
    })
}

pub fn block_scan(e: &Ensemble, m_max: usize) -> Result<Vec<BlockReport>> {
    block_scan_with_budget(e, m_max, &BlockBudget::default())
}

/// Reports for `m = 1 ..= m_max`; the budget is checked for `m_max` before
/// any work starts.
pub fn block_scan_with_budget(
    e: &Ensemble,
    m_max: usize,
    budget: &BlockBudget,
) -> Result<Vec<BlockReport>> {
    budget.check(e, m_max)?;
    let chi = holevo_chi(e)?;
    (1..=m_max)
        .into_par_iter()
        .map(|m| block_report(e, chi, m, budget))
        .collect()
}
