//! Work ledger for the measurement-driven gas cycle
//! `{p_i, ρ_i} → σ → ρ → {p_i, ρ_i}`.
//!
//! Work is per molecule in bits (`kT ln 2 = 1`) and the vessel volume is
//! normalized to 1. Every entry is computed from isothermal volume ratios of
//! ideal-gas components, never from the entropy formulas directly, so the
//! entropy identities are an independent cross-check.

use std::fmt;

use crate::error::{Error, Result};
use crate::linops::hermitian_eig;
use crate::measurement::{joint_distribution, measured_pair, naimark_dilation, Povm};
use crate::quantum::{average_state, holevo_chi, DensityMatrix, Ensemble};

/// Positive net work above this is a second-law violation.
pub const SECOND_LAW_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Extraction,
    SigmaCompression,
    IsentropicTransform,
    RhoExpansion,
    RhoCompression,
    EnsembleRecompression,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::Extraction => "extraction",
            Stage::SigmaCompression => "sigma_compression",
            Stage::IsentropicTransform => "isentropic_transform",
            Stage::RhoExpansion => "rho_expansion",
            Stage::RhoCompression => "rho_compression",
            Stage::EnsembleRecompression => "ensemble_recompression",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub stage: Stage,
    pub description: String,
    /// Positive: extracted from the bath. Negative: consumed.
    pub work_bits: f64,
}

impl LedgerEntry {
    fn new(stage: Stage, description: impl Into<String>, work_bits: f64) -> Self {
        Self {
            stage,
            description: description.into(),
            work_bits,
        }
    }

    fn isentropic(description: impl Into<String>) -> Self {
        Self::new(Stage::IsentropicTransform, description, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleLedger {
    pub entries: Vec<LedgerEntry>,
    pub net_bits: f64,
    pub i_ab: f64,
    pub chi: f64,
    pub delta_s: f64,
}

impl CycleLedger {
    pub fn second_law_ok(&self) -> bool {
        self.net_bits <= SECOND_LAW_TOL
    }
}

/// Total work of a list of entries.
pub fn stage_total(entries: &[LedgerEntry]) -> f64 {
    entries.iter().map(|e| e.work_bits).sum()
}

/// Work (bits) for a fraction of the molecules expanding isothermally from
/// `v_initial` to `v_final`: `fraction · log₂(v_final / v_initial)`.
pub fn work_isothermal(fraction: f64, v_initial: f64, v_final: f64) -> Result<f64> {
    for v in [v_initial, v_final] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::NonPositiveVolume(v));
        }
    }
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Validation(format!(
            "molecule fraction {fraction} outside [0, 1]"
        )));
    }
    Ok(fraction * (v_final / v_initial).log2())
}

/// Sum of isothermal terms, skipping empty components.
fn sum_work(terms: impl IntoIterator<Item = (f64, f64, f64)>) -> Result<f64> {
    let mut w = 0.0;
    for (fraction, v0, v1) in terms {
        if fraction > 0.0 && v0 > 0.0 {
            w += work_isothermal(fraction.min(1.0), v0, v1)?;
        }
    }
    Ok(w)
}

/// Membrane work extraction, `W_ext = H(A) - H(A|B) = I(A:B)`.
///
/// The first entry is the hypothetical direct path that separates the
/// preparations themselves; each component with prior `p_i` expands from
/// `p_i V` to `V`. The second removes the work still available after the
/// measuring membranes stop: within each outcome compartment `j` the
/// preparation components occupy `p(i|j)` of the compartment.
pub fn extraction_stage(e: &Ensemble, v: &Povm) -> Result<Vec<LedgerEntry>> {
    let joint = if v.is_projective() {
        joint_distribution(e, v)?
    } else {
        let dil = naimark_dilation(v)?;
        let embedded = Ensemble::new(
            e.probs().to_vec(),
            e.states()
                .iter()
                .map(|s| dil.embed(s))
                .collect::<Result<Vec<_>>>()?,
        )?;
        joint_distribution(&embedded, &dil.projective)?
    };
    let direct = sum_work(e.probs().iter().map(|&p| (p, p, 1.0)))?;
    let q = joint.outcome_marginal();
    let mut residual_terms = Vec::new();
    for (j, &qj) in q.iter().enumerate() {
        if qj <= 0.0 {
            continue;
        }
        for i in 0..joint.preparations() {
            let pij = joint.get(i, j);
            residual_terms.push((pij, pij / qj, 1.0));
        }
    }
    let residual = sum_work(residual_terms)?;
    Ok(vec![
        LedgerEntry::new(
            Stage::Extraction,
            "separate preparations with preparation-selective membranes: +H(A)",
            direct,
        ),
        LedgerEntry::new(
            Stage::Extraction,
            "work left in the membrane compartments, not extracted: -H(A|B)",
            -residual,
        ),
    ])
}

fn clipped_spectrum(r: &DensityMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(r.matrix())?
        .eigenvalues
        .into_iter()
        .map(|l| l.clamp(0.0, 1.0))
        .collect())
}

/// `σ → ρ` costs `S(σ) - S(ρ)`: compress each eigencomponent of `σ` into its
/// share of the vessel, rotate isentropically onto the eigenbasis of `ρ`,
/// and re-expand.
pub fn sigma_to_rho_stage(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<Vec<LedgerEntry>> {
    if sigma.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: rho.dim(),
        });
    }
    let c = clipped_spectrum(sigma)?;
    let lambda = clipped_spectrum(rho)?;
    let compress = sum_work(c.iter().map(|&cj| (cj, 1.0, cj)))?;
    let expand = sum_work(lambda.iter().map(|&l| (l, l, 1.0)))?;
    Ok(vec![
        LedgerEntry::new(
            Stage::SigmaCompression,
            "attach an empty vessel and sort the measured components with membranes",
            0.0,
        ),
        LedgerEntry::new(
            Stage::SigmaCompression,
            "compress each eigencomponent c_j of sigma into c_j V: -S(sigma)",
            compress,
        ),
        LedgerEntry::isentropic("rotate onto the eigenbasis of rho"),
        LedgerEntry::new(
            Stage::RhoExpansion,
            "expand the eigencomponents lambda_k of rho over V: +S(rho)",
            expand,
        ),
    ])
}

/// Reversible return `ρ → {p_i, ρ_i}`, costing `χ`.
pub fn rho_to_initial_stage(e: &Ensemble) -> Result<Vec<LedgerEntry>> {
    let rho = average_state(e)?;
    let lambda = clipped_spectrum(&rho)?;
    let compress = sum_work(lambda.iter().map(|&l| (l, 1.0, l)))?;
    let mut terms = Vec::new();
    for (p, s) in e.iter() {
        for mu in clipped_spectrum(s)? {
            terms.push((p * mu, p * mu, p));
        }
    }
    let expand = sum_work(terms)?;
    Ok(vec![
        LedgerEntry::new(
            Stage::RhoCompression,
            "compress the eigencomponents lambda_k of rho into lambda_k V: -S(rho)",
            compress,
        ),
        LedgerEntry::isentropic("rotate the eigencomponents onto the eigenbases of the rho_i"),
        LedgerEntry::new(
            Stage::EnsembleRecompression,
            "mix each rho_i's eigencomponents within its p_i V: +sum p_i S(rho_i)",
            expand,
        ),
    ])
}

/// Full cycle ledger without enforcing the second law.
pub fn cycle_ledger(e: &Ensemble, v: &Povm) -> Result<CycleLedger> {
    let rho = average_state(e)?;
    let (sigma, rho_embedded) = measured_pair(&rho, v)?;
    let extraction = extraction_stage(e, v)?;
    let middle = sigma_to_rho_stage(&sigma, &rho_embedded)?;
    let back = rho_to_initial_stage(e)?;

    let i_ab = stage_total(&extraction);
    let delta_s = -stage_total(&middle);
    let chi = holevo_chi(e)?;
    let entries: Vec<LedgerEntry> = extraction.into_iter().chain(middle).chain(back).collect();
    let net_bits = stage_total(&entries);
    Ok(CycleLedger {
        entries,
        net_bits,
        i_ab,
        chi,
        delta_s,
    })
}

/// Runs the cycle and fails with `SecondLawViolation` if it nets positive
/// work.
pub fn run_cycle(e: &Ensemble, v: &Povm) -> Result<CycleLedger> {
    let ledger = cycle_ledger(e, v)?;
    if !ledger.second_law_ok() {
        return Err(Error::SecondLawViolation(ledger.net_bits));
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{mutual_information, post_measurement_state};
    use crate::quantum::von_neumann_entropy;

    const S_RHO_STAR: f64 = 0.6008760366928562;
    const H2_075: f64 = 0.8112781244591328;

    fn e_star() -> Ensemble {
        Ensemble::new(
            vec![0.5, 0.5],
            vec![
                DensityMatrix::basis(2, 0),
                DensityMatrix::pure_real(&[1.0, 1.0]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn orthogonal() -> Ensemble {
        Ensemble::new(
            vec![0.5, 0.5],
            vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)],
        )
        .unwrap()
    }

    fn helstrom() -> Povm {
        let [a, b] =
            crate::bounds::bloch_measurement(std::f64::consts::FRAC_PI_4, std::f64::consts::PI);
        Povm::new(vec![a, b]).unwrap()
    }

    #[test]
    fn isothermal_examples() {
        assert_eq!(work_isothermal(1.0, 0.5, 1.0).unwrap(), 1.0);
        assert_eq!(work_isothermal(0.5, 1.0, 1.0).unwrap(), 0.0);
        assert!((work_isothermal(0.25, 0.25, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(work_isothermal(0.5, 1.0, 0.5).unwrap() < 0.0);
        assert!(matches!(
            work_isothermal(0.5, 0.0, 1.0),
            Err(Error::NonPositiveVolume(_))
        ));
        assert!(matches!(
            work_isothermal(0.5, 1.0, -1.0),
            Err(Error::NonPositiveVolume(_))
        ));
        assert!(work_isothermal(1.5, 1.0, 2.0).is_err());
    }

    #[test]
    fn extraction_examples() {
        let ex = extraction_stage(&orthogonal(), &Povm::computational(2)).unwrap();
        assert!((stage_total(&ex) - 1.0).abs() < 1e-12);
        assert!(ex[1].work_bits.abs() < 1e-15);

        let ex = extraction_stage(&e_star(), &Povm::computational(2)).unwrap();
        assert!((stage_total(&ex) - (H2_075 - 0.5)).abs() < 1e-12);
        assert!((stage_total(&ex) - 0.311278).abs() < 1e-5);

        let single = Ensemble::new(vec![1.0], vec![DensityMatrix::maximally_mixed(2)]).unwrap();
        assert!(
            stage_total(&extraction_stage(&single, &Povm::computational(2)).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn sigma_to_rho_examples() {
        let rho = average_state(&e_star()).unwrap();
        assert!(stage_total(&sigma_to_rho_stage(&rho, &rho).unwrap()).abs() < 1e-12);

        let sigma = DensityMatrix::from_diag(&[0.75, 0.25]).unwrap();
        let t = stage_total(&sigma_to_rho_stage(&sigma, &rho).unwrap());
        assert!((t + (H2_075 - S_RHO_STAR)).abs() < 1e-12);
        assert!((t + 0.210402).abs() < 1e-4);

        let t = stage_total(
            &sigma_to_rho_stage(
                &DensityMatrix::maximally_mixed(3),
                &DensityMatrix::basis(3, 1),
            )
            .unwrap(),
        );
        assert!((t + 3f64.log2()).abs() < 1e-12);

        assert!(sigma_to_rho_stage(&DensityMatrix::maximally_mixed(3), &rho).is_err());
    }

    #[test]
    fn rho_to_initial_examples() {
        let t = stage_total(&rho_to_initial_stage(&e_star()).unwrap());
        assert!((t + S_RHO_STAR).abs() < 1e-5);

        let one = Ensemble::new(
            vec![1.0],
            vec![DensityMatrix::from_diag(&[0.3, 0.7]).unwrap()],
        )
        .unwrap();
        assert!(stage_total(&rho_to_initial_stage(&one).unwrap()).abs() < 1e-12);

        assert!((stage_total(&rho_to_initial_stage(&orthogonal()).unwrap()) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cycle_examples() {
        let c = run_cycle(&orthogonal(), &Povm::computational(2)).unwrap();
        assert!(c.net_bits.abs() < 1e-12);

        let c = run_cycle(&e_star(), &Povm::computational(2)).unwrap();
        assert!((c.net_bits + 0.5).abs() < 1e-4);
        assert!((c.net_bits - (c.i_ab - c.delta_s - c.chi)).abs() < 1e-9);

        let c = run_cycle(&e_star(), &helstrom()).unwrap();
        assert!((c.net_bits + S_RHO_STAR).abs() < 1e-4);
        assert!(c.second_law_ok());
    }

    #[test]
    fn ledger_matches_entropy_expressions() {
        let e = e_star();
        let v = Povm::computational(2);
        let rho = average_state(&e).unwrap();
        let sigma = post_measurement_state(&rho, &v).unwrap();
        let c = cycle_ledger(&e, &v).unwrap();
        let info = mutual_information(&joint_distribution(&e, &v).unwrap());
        assert!((c.i_ab - info).abs() < 1e-12);
        let ds = von_neumann_entropy(&sigma).unwrap() - von_neumann_entropy(&rho).unwrap();
        assert!((c.delta_s - ds).abs() < 1e-12);
        assert!((c.net_bits - stage_total(&c.entries)).abs() < 1e-15);
        assert!(c
            .entries
            .iter()
            .filter(|e| e.stage == Stage::IsentropicTransform)
            .all(|e| e.work_bits == 0.0));
    }

    #[test]
    fn cycle_with_general_povm() {
        let half = crate::linops::ComplexMatrix::identity(2).scale(0.5);
        let coin = Povm::new(vec![half.clone(), half]).unwrap();
        let c = run_cycle(&e_star(), &coin).unwrap();
        // no information, one bit of record entropy
        assert!(c.i_ab.abs() < 1e-12);
        assert!((c.delta_s - 1.0).abs() < 1e-10);
        assert!((c.net_bits + 1.0 + S_RHO_STAR).abs() < 1e-10);
    }
}
