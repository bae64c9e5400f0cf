//! Holevo bound versus the thermodynamic bound, accessible-information
//! maximization, and random problem instances.
//!
//! For an ensemble `{p_i, ρ_i}` measured with a POVM, [`evaluate_bounds`]
//! reports the mutual information `I`, the Holevo quantity `χ` and the
//! measurement entropy gain `ΔS`, and checks both `I ≤ χ` and `I ≤ χ + ΔS`.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::error::{validation, Error, Result};
use crate::linops::{exp_i_hermitian, psd_function, ComplexMatrix, C64};
use crate::measurement::{delta_s, joint_distribution, mutual_information, Povm};
use crate::quantum::{average_state, entropy_of_values, holevo_chi, DensityMatrix, Ensemble};

/// Slack tolerance used when deciding whether a bound holds.
pub const BOUND_TOL: f64 = 1e-9;

pub const DEFAULT_SEED: u64 = 0x5EED_2005;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub accessible_info: f64,
    pub chi: f64,
    pub delta_s: f64,
    pub holevo_satisfied: bool,
    pub thermo_satisfied: bool,
    /// `χ + ΔS - I`
    pub thermo_slack: f64,
    /// `χ - I`
    pub holevo_slack: f64,
}

impl BoundReport {
    fn from_parts(accessible_info: f64, chi: f64, delta_s: f64) -> Self {
        let holevo_slack = chi - accessible_info;
        let thermo_slack = holevo_slack + delta_s;
        Self {
            accessible_info,
            chi,
            delta_s,
            holevo_satisfied: holevo_slack >= -BOUND_TOL,
            thermo_satisfied: thermo_slack >= -BOUND_TOL,
            thermo_slack,
            holevo_slack,
        }
    }

    /// Right-hand side of the thermodynamic bound, `χ + ΔS`.
    pub fn thermo_bound(&self) -> f64 {
        self.chi + self.delta_s
    }
}

pub fn evaluate_bounds(e: &Ensemble, v: &Povm) -> Result<BoundReport> {
    let info = mutual_information(&joint_distribution(e, v)?);
    let chi = holevo_chi(e)?;
    let ds = delta_s(&average_state(e)?, v)?;
    Ok(BoundReport::from_parts(info, chi, ds))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Sweep of rank-one projective qubit measurements over Bloch angles.
    QubitGrid,
    /// Coordinate ascent over unitaries on the dilated space.
    RandomRestartAscent,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::QubitGrid => "qubit_grid",
            Method::RandomRestartAscent => "random_restart_ascent",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "qubit_grid" | "grid" => Ok(Method::QubitGrid),
            "random_restart_ascent" | "ascent" => Ok(Method::RandomRestartAscent),
            _ => Err(validation(format!("unknown optimizer method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    pub grid_points: usize,
    pub restarts: usize,
    /// Maximum number of coordinate sweeps per restart.
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub seed: u64,
    /// Outcome count for the ascent; `None` means `max(n_states, dim)`.
    pub outcomes: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::QubitGrid,
            grid_points: 100,
            restarts: 8,
            max_iterations: 200,
            convergence_tol: 1e-7,
            seed: DEFAULT_SEED,
            outcomes: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(validation("grid_points must be at least 2"));
        }
        if self.restarts < 1 {
            return Err(validation("restarts must be at least 1"));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(validation("convergence_tol must be positive"));
        }
        if self.outcomes.is_some_and(|m| m < 1) {
            return Err(validation("outcomes must be at least 1"));
        }
        Ok(())
    }
}

/// Mutual information for raw elements, skipping POVM validation. Used as
/// the optimizer objective.
fn information_for(e: &Ensemble, elements: &[ComplexMatrix]) -> f64 {
    let n = e.len();
    let m = elements.len();
    let mut joint = vec![0.0; n * m];
    for (i, (p, s)) in e.iter().enumerate() {
        let r = s.matrix();
        let d = r.rows();
        for (j, el) in elements.iter().enumerate() {
            let mut tr = 0.0;
            for a in 0..d {
                for b in 0..d {
                    tr += (el[(a, b)] * r[(b, a)]).re;
                }
            }
            joint[i * m + j] = (p * tr).max(0.0);
        }
    }
    let pa: Vec<f64> = (0..n)
        .map(|i| joint[i * m..(i + 1) * m].iter().sum())
        .collect();
    let qb: Vec<f64> = (0..m)
        .map(|j| (0..n).map(|i| joint[i * m + j]).sum())
        .collect();
    let info = entropy_of_values(pa) + entropy_of_values(qb) - entropy_of_values(joint);
    info.max(0.0)
}

/// Rank-one projectors `|n⟩⟨n|`, `|n⊥⟩⟨n⊥|` for Bloch angles `(θ, φ)`.
pub fn bloch_measurement(theta: f64, phi: f64) -> [ComplexMatrix; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let up = [C64::new(c, 0.0), C64::from_polar(s, phi)];
    let down = [-C64::from_polar(s, -phi), C64::new(c, 0.0)];
    [
        ComplexMatrix::projector(&up),
        ComplexMatrix::projector(&down),
    ]
}

/// Maximizes the mutual information over measurements. The result is a
/// lower bound on the accessible information.
pub fn maximize_accessible_information(
    e: &Ensemble,
    cfg: &OptimizerConfig,
) -> Result<(Povm, BoundReport)> {
    cfg.validate()?;
    let povm = match cfg.method {
        Method::QubitGrid => qubit_grid(e, cfg)?,
        Method::RandomRestartAscent => restart_ascent(e, cfg)?,
    };
    let report = evaluate_bounds(e, &povm)?;
    Ok((povm, report))
}

fn qubit_grid(e: &Ensemble, cfg: &OptimizerConfig) -> Result<Povm> {
    if e.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            dim: e.dim(),
            reason: "qubit_grid needs a two-dimensional ensemble",
        });
    }
    let g = cfg.grid_points;
    let values: Vec<f64> = (0..g * g)
        .into_par_iter()
        .map(|idx| {
            let (theta, phi) = grid_angles(idx, g);
            information_for(e, &bloch_measurement(theta, phi))
        })
        .collect();
    let best = first_argmax(&values);
    let (theta, phi) = grid_angles(best, g);
    Povm::new(bloch_measurement(theta, phi).to_vec())
}

/// Row-major grid: θ = π a/g outer, φ = 2π b/g inner.
fn grid_angles(idx: usize, g: usize) -> (f64, f64) {
    let (a, b) = (idx / g, idx % g);
    (
        std::f64::consts::PI * a as f64 / g as f64,
        2.0 * std::f64::consts::PI * b as f64 / g as f64,
    )
}

/// Index of the maximum; ties go to the first occurrence.
fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Unitary `exp(iH)` on `D = d·m` dimensions from `D²` real parameters:
/// the diagonal of `H` followed by real/imaginary parts of its upper triangle.
fn generator_unitary(params: &[f64], big: usize) -> Result<ComplexMatrix> {
    let mut h = ComplexMatrix::zeros(big, big);
    let mut k = 0;
    for i in 0..big {
        h[(i, i)] = C64::new(params[k], 0.0);
        k += 1;
    }
    for i in 0..big {
        for j in i + 1..big {
            let z = C64::new(params[k], params[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    exp_i_hermitian(&h)
}

/// `E_j = V^† (I ⊗ |j⟩⟨j|) V` with `V = U (I_d ⊗ |0⟩)`.
fn elements_from_unitary(u: &ComplexMatrix, d: usize, m: usize) -> Vec<ComplexMatrix> {
    (0..m)
        .map(|j| {
            ComplexMatrix::from_fn(d, d, |a, b| {
                (0..d)
                    .map(|s| u[(s * m + j, a * m)].conj() * u[(s * m + j, b * m)])
                    .sum()
            })
        })
        .collect()
}

struct AscentResult {
    value: f64,
    params: Vec<f64>,
}

fn restart_ascent(e: &Ensemble, cfg: &OptimizerConfig) -> Result<Povm> {
    let d = e.dim();
    let m = cfg.outcomes.unwrap_or_else(|| e.len().max(d));
    let big = d * m;
    let n_params = big * big;

    let objective = |params: &[f64]| -> Result<f64> {
        let u = generator_unitary(params, big)?;
        Ok(information_for(e, &elements_from_unitary(&u, d, m)))
    };

    let runs: Vec<Result<AscentResult>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, r as u64));
            let mut params: Vec<f64> = (0..n_params)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let mut value = objective(&params)?;
            let mut step = 0.25;
            for _ in 0..cfg.max_iterations {
                let start = value;
                for k in 0..n_params {
                    for delta in [step, -step] {
                        let old = params[k];
                        params[k] = old + delta;
                        let trial = objective(&params)?;
                        if trial > value {
                            value = trial;
                            break;
                        }
                        params[k] = old;
                    }
                }
                if value - start < cfg.convergence_tol {
                    step *= 0.5;
                    if step < 1e-6 {
                        break;
                    }
                }
            }
            Ok(AscentResult { value, params })
        })
        .collect();

    let mut best: Option<AscentResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("restarts >= 1");
    let u = generator_unitary(&best.params, big)?;
    let elements = elements_from_unitary(&u, d, m)
        .into_iter()
        .map(|el| el.hermitian_part())
        .collect();
    Povm::new(elements)
}

/// SplitMix64 finalizer of `seed + index·golden`; used to derive independent
/// per-restart and per-trial seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateKind {
    Pure,
    Mixed,
    Commuting,
}

impl StateKind {
    pub const ALL: [StateKind; 3] = [StateKind::Pure, StateKind::Mixed, StateKind::Commuting];

    pub fn name(self) -> &'static str {
        match self {
            StateKind::Pure => "pure",
            StateKind::Mixed => "mixed",
            StateKind::Commuting => "commuting",
        }
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pure" => Ok(StateKind::Pure),
            "mixed" => Ok(StateKind::Mixed),
            "commuting" => Ok(StateKind::Commuting),
            _ => Err(validation(format!("unknown state kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasurementKind {
    /// Column blocks of a Haar unitary; needs `m ≤ dim`.
    Projective,
    /// Random PSD elements normalized to resolve the identity.
    General,
    /// Rank-one projectors onto the shared eigenbasis of a commuting
    /// ensemble (`dim` outcomes).
    SharedEigenbasis,
}

impl MeasurementKind {
    pub fn name(self) -> &'static str {
        match self {
            MeasurementKind::Projective => "projective",
            MeasurementKind::General => "general",
            MeasurementKind::SharedEigenbasis => "eigenbasis",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceParams {
    pub dim: usize,
    pub n_states: usize,
    pub m_outcomes: usize,
    pub kind: StateKind,
    pub measurement: MeasurementKind,
}

/// Deterministic random ensemble and measurement.
pub fn random_instance(params: &InstanceParams, seed: u64) -> Result<(Ensemble, Povm)> {
    let &InstanceParams {
        dim,
        n_states,
        m_outcomes,
        kind,
        measurement,
    } = params;
    if dim < 2 || n_states < 1 || m_outcomes < 2 {
        return Err(validation(
            "random instances need dim >= 2, n_states >= 1, m_outcomes >= 2",
        ));
    }
    if measurement == MeasurementKind::Projective && m_outcomes > dim {
        return Err(validation(format!(
            "a projective measurement on dimension {dim} has at most {dim} outcomes"
        )));
    }
    if measurement == MeasurementKind::SharedEigenbasis && kind != StateKind::Commuting {
        return Err(validation(
            "shared-eigenbasis measurements need a commuting ensemble",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let priors = flat_simplex(&mut rng, n_states);

    let shared = (kind == StateKind::Commuting).then(|| haar_unitary(&mut rng, dim));
    let mut states = Vec::with_capacity(n_states);
    for _ in 0..n_states {
        let m = match kind {
            StateKind::Pure => {
                let psi = gaussian_vector(&mut rng, dim);
                let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
                ComplexMatrix::projector(&unit)
            }
            StateKind::Mixed => {
                let g = gaussian_matrix(&mut rng, dim, dim);
                let w = &g * &g.adjoint();
                w.scale(1.0 / w.trace().re)
            }
            StateKind::Commuting => {
                let lambda = flat_simplex(&mut rng, dim);
                shared
                    .as_ref()
                    .expect("commuting")
                    .sandwich(&ComplexMatrix::from_diag(&lambda))
            }
        };
        states.push(DensityMatrix::new(m.hermitian_part())?);
    }
    let ensemble = Ensemble::new(priors, states)?;

    let povm = match measurement {
        MeasurementKind::Projective => random_projective(&mut rng, dim, m_outcomes)?,
        MeasurementKind::General => random_general(&mut rng, dim, m_outcomes)?,
        MeasurementKind::SharedEigenbasis => Povm::from_basis(shared.as_ref().expect("commuting"))?,
    };
    Ok((ensemble, povm))
}

/// Uniform sample from the probability simplex (normalized exponentials).
fn flat_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = x.iter().sum();
    x.into_iter().map(|v| v / total).collect()
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = gaussian_vector(rng, rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| data[i * cols + j])
}

/// Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix (positive
/// `R` diagonal, which is what makes the distribution Haar).
pub fn haar_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

fn random_projective(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> Result<Povm> {
    let u = haar_unitary(rng, dim);
    // m - 1 distinct cut points in 1..dim give m non-empty contiguous blocks
    let mut cuts: Vec<usize> = (1..dim).collect();
    for i in 0..cuts.len() {
        let j = rng.random_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut cuts: Vec<usize> = cuts.into_iter().take(m - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(dim);
    let elements = bounds
        .windows(2)
        .map(|w| {
            let mut p = ComplexMatrix::zeros(dim, dim);
            for k in w[0]..w[1] {
                p = &p + &ComplexMatrix::projector(&u.column(k));
            }
            p
        })
        .collect();
    Povm::new(elements)
}

fn random_general(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> Result<Povm> {
    let raw: Vec<ComplexMatrix> = (0..m)
        .map(|_| {
            let g = gaussian_matrix(rng, dim, dim);
            &g * &g.adjoint()
        })
        .collect();
    let total = raw.iter().skip(1).fold(raw[0].clone(), |acc, a| &acc + a);
    let inv_sqrt = psd_function(&total, |l| 1.0 / l.sqrt(), true)?;
    Povm::new(
        raw.iter()
            .map(|a| inv_sqrt.sandwich(a).hermitian_part())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ensemble_commutes;

    const S_RHO_STAR: f64 = 0.6008760366928562;
    // 1 - h₂((1 + sin θ)/2), cos θ = 1/√2
    const HELSTROM_INFO: f64 = 0.39912396330714384;

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

    #[test]
    fn bounds_classical_case() {
        let r = evaluate_bounds(&orthogonal(), &Povm::computational(2)).unwrap();
        assert!((r.accessible_info - 1.0).abs() < 1e-12);
        assert!((r.chi - 1.0).abs() < 1e-12);
        assert!(r.delta_s.abs() < 1e-12);
        assert!(r.holevo_slack.abs() < 1e-12 && r.thermo_slack.abs() < 1e-12);
        assert!(r.holevo_satisfied && r.thermo_satisfied);
    }

    #[test]
    fn bounds_e_star_computational() {
        let r = evaluate_bounds(&e_star(), &Povm::computational(2)).unwrap();
        assert!((r.accessible_info - 0.311278).abs() < 1e-5);
        assert!((r.chi - 0.600876).abs() < 1e-5);
        assert!((r.delta_s - 0.210402).abs() < 1e-5);
        assert!((r.holevo_slack - 0.289598).abs() < 1e-5);
        assert!((r.thermo_slack - 0.5).abs() < 1e-5);
        assert!((r.thermo_slack - r.holevo_slack - r.delta_s).abs() < 1e-12);
    }

    #[test]
    fn bounds_e_star_helstrom() {
        let [a, b] = bloch_measurement(std::f64::consts::FRAC_PI_4, std::f64::consts::PI);
        let r = evaluate_bounds(&e_star(), &Povm::new(vec![a, b]).unwrap()).unwrap();
        assert!((r.accessible_info - 0.399124).abs() < 1e-5);
        assert!((r.delta_s - 0.399124).abs() < 1e-5);
        assert!((r.thermo_bound() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grid_finds_helstrom_optimum() {
        let (povm, r) =
            maximize_accessible_information(&e_star(), &OptimizerConfig::default()).unwrap();
        assert!((r.accessible_info - HELSTROM_INFO).abs() < 1e-4);
        assert!((r.chi - S_RHO_STAR).abs() < 1e-5);
        assert!(povm.is_projective());
    }

    #[test]
    fn ascent_finds_helstrom_optimum() {
        let cfg = OptimizerConfig {
            method: Method::RandomRestartAscent,
            restarts: 4,
            ..OptimizerConfig::default()
        };
        let (_, r) = maximize_accessible_information(&e_star(), &cfg).unwrap();
        assert!(
            (r.accessible_info - HELSTROM_INFO).abs() < 1e-4,
            "{}",
            r.accessible_info
        );
        assert!(r.accessible_info <= r.chi + 1e-9);
        let again = maximize_accessible_information(&e_star(), &cfg).unwrap().1;
        assert_eq!(again.accessible_info.to_bits(), r.accessible_info.to_bits());
    }

    #[test]
    fn optimizer_trivial_cases() {
        let plus = DensityMatrix::pure_real(&[1.0, 1.0]).unwrap();
        let same = Ensemble::new(vec![0.5, 0.5], vec![plus.clone(), plus]).unwrap();
        let (_, r) = maximize_accessible_information(&same, &OptimizerConfig::default()).unwrap();
        assert!(r.accessible_info.abs() < 1e-12);

        let (povm, r) =
            maximize_accessible_information(&orthogonal(), &OptimizerConfig::default()).unwrap();
        assert!((r.accessible_info - 1.0).abs() < 1e-12);
        // θ = 0 is the first grid point and the common eigenbasis
        assert!(povm.elements()[0].max_abs_diff(&ComplexMatrix::unit(2, 0, 0)) < 1e-12);
    }

    #[test]
    fn grid_rejects_qutrits() {
        let e = Ensemble::new(vec![1.0], vec![DensityMatrix::maximally_mixed(3)]).unwrap();
        assert!(matches!(
            maximize_accessible_information(&e, &OptimizerConfig::default()),
            Err(Error::UnsupportedDimension { dim: 3, .. })
        ));
    }

    #[test]
    fn grid_argmax_ignores_global_phase() {
        let phased = Ensemble::uniform_pure(&[
            vec![C64::from_polar(1.0, 0.7), C64::new(0.0, 0.0)],
            vec![C64::from_polar(1.0, -1.3), C64::from_polar(1.0, -1.3)],
        ])
        .unwrap();
        let a = maximize_accessible_information(&e_star(), &OptimizerConfig::default()).unwrap();
        let b = maximize_accessible_information(&phased, &OptimizerConfig::default()).unwrap();
        assert_eq!(a.0.elements(), b.0.elements());
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            grid_points: 1,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            restarts: 0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            convergence_tol: 0.0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!(
            "random-restart-ascent".parse::<Method>().unwrap(),
            Method::RandomRestartAscent
        );
        assert!("simplex".parse::<Method>().is_err());
    }

    #[test]
    fn random_instances() {
        let params = InstanceParams {
            dim: 3,
            n_states: 3,
            m_outcomes: 3,
            kind: StateKind::Commuting,
            measurement: MeasurementKind::General,
        };
        let (e, v) = random_instance(&params, 1).unwrap();
        assert!(ensemble_commutes(&e, 1e-9));
        let total = v
            .elements()
            .iter()
            .skip(1)
            .fold(v.elements()[0].clone(), |a, b| &a + b);
        assert!(total.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-8);

        let p = InstanceParams {
            dim: 2,
            n_states: 2,
            m_outcomes: 2,
            kind: StateKind::Pure,
            measurement: MeasurementKind::Projective,
        };
        let a = random_instance(&p, 42).unwrap();
        let b = random_instance(&p, 42).unwrap();
        assert_eq!(a, b);
        let bits = |e: &Ensemble| -> Vec<u64> {
            e.states()
                .iter()
                .flat_map(|s| {
                    s.matrix()
                        .as_slice()
                        .iter()
                        .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                })
                .collect()
        };
        assert_eq!(bits(&a.0), bits(&b.0));
        assert!(a.1.is_projective());

        let too_many = InstanceParams { m_outcomes: 3, ..p };
        assert!(random_instance(&too_many, 0).is_err());
        let wrong = InstanceParams {
            measurement: MeasurementKind::SharedEigenbasis,
            ..p
        };
        assert!(random_instance(&wrong, 0).is_err());
    }

    #[test]
    fn eigenbasis_instances_saturate() {
        let p = InstanceParams {
            dim: 4,
            n_states: 3,
            m_outcomes: 4,
            kind: StateKind::Commuting,
            measurement: MeasurementKind::SharedEigenbasis,
        };
        let (e, v) = random_instance(&p, 9).unwrap();
        let r = evaluate_bounds(&e, &v).unwrap();
        assert!(r.holevo_slack.abs() < 1e-9 && r.delta_s < 1e-9);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = haar_unitary(&mut rng, 5);
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
    }
}
