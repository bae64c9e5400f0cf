//! Randomized verification of both bounds and of the cycle ledger.
//!
//! Trial `k` draws its own parameters and instance from `mix_seed(seed, k)`,
//! so a run is reproducible regardless of how trials are spread over
//! threads.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    evaluate_bounds, mix_seed, random_instance, BoundReport, InstanceParams, MeasurementKind,
    StateKind, DEFAULT_SEED,
};
use crate::error::{validation, Result};
use crate::quantum::ensemble_commutes;
use crate::thermo::{cycle_ledger, SECOND_LAW_TOL};

/// `ΔS` above this counts as a strictly positive measurement entropy gain.
pub const POSITIVE_DELTA_S: f64 = 1e-6;
/// Commutator tolerance used to classify an ensemble as commuting.
pub const COMMUTING_TOL: f64 = 1e-9;

pub const CSV_HEADER: &str = "trial,seed,dim,n_states,m_outcomes,kind,measurement,commuting,\
accessible_info,chi,delta_s,holevo_slack,thermo_slack,cycle_net";

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub kinds: Vec<StateKind>,
    pub max_states: usize,
    pub max_outcomes: usize,
    /// `Some(1)` runs serially; `None` uses the global thread pool.
    pub threads: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            dims: vec![2, 3, 4],
            seed: DEFAULT_SEED,
            kinds: StateKind::ALL.to_vec(),
            max_states: 4,
            max_outcomes: 6,
            threads: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(validation("trials must be at least 1"));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(validation("dimensions must be at least 2"));
        }
        if self.kinds.is_empty() {
            return Err(validation("at least one state kind is required"));
        }
        if self.max_states < 1 || self.max_outcomes < 2 {
            return Err(validation("need max_states >= 1 and max_outcomes >= 2"));
        }
        if self.threads == Some(0) {
            return Err(validation("threads must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub params: InstanceParams,
    pub commuting: bool,
    pub report: BoundReport,
    pub cycle_net: f64,
}

impl TrialRecord {
    pub fn second_law_ok(&self) -> bool {
        self.cycle_net <= SECOND_LAW_TOL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSummary {
    pub trials: usize,
    pub holevo_violations: usize,
    pub thermo_violations: usize,
    pub second_law_violations: usize,
    pub min_holevo_slack: f64,
    pub mean_holevo_slack: f64,
    pub min_thermo_slack: f64,
    pub mean_thermo_slack: f64,
    /// Fraction of all trials with `ΔS > 1e-6`.
    pub positive_delta_s_fraction: f64,
    pub noncommuting_trials: usize,
    /// Fraction of non-commuting trials with `ΔS > 1e-6`.
    pub noncommuting_positive_delta_s_fraction: f64,
}

impl SuiteSummary {
    pub fn violations(&self) -> usize {
        self.holevo_violations + self.thermo_violations + self.second_law_violations
    }

    pub fn from_records(records: &[TrialRecord]) -> Self {
        let n = records.len();
        let nf = n.max(1) as f64;
        let noncommuting: Vec<&TrialRecord> = records.iter().filter(|r| !r.commuting).collect();
        let positive = |r: &TrialRecord| r.report.delta_s > POSITIVE_DELTA_S;
        Self {
            trials: n,
            holevo_violations: records
                .iter()
                .filter(|r| !r.report.holevo_satisfied)
                .count(),
            thermo_violations: records
                .iter()
                .filter(|r| !r.report.thermo_satisfied)
                .count(),
            second_law_violations: records.iter().filter(|r| !r.second_law_ok()).count(),
            min_holevo_slack: records
                .iter()
                .map(|r| r.report.holevo_slack)
                .fold(f64::INFINITY, f64::min),
            mean_holevo_slack: records.iter().map(|r| r.report.holevo_slack).sum::<f64>() / nf,
            min_thermo_slack: records
                .iter()
                .map(|r| r.report.thermo_slack)
                .fold(f64::INFINITY, f64::min),
            mean_thermo_slack: records.iter().map(|r| r.report.thermo_slack).sum::<f64>() / nf,
            positive_delta_s_fraction: records.iter().filter(|r| positive(r)).count() as f64 / nf,
            noncommuting_trials: noncommuting.len(),
            noncommuting_positive_delta_s_fraction: noncommuting
                .iter()
                .filter(|r| positive(r))
                .count() as f64
                / noncommuting.len().max(1) as f64,
        }
    }
}

/// Instance parameters for one trial, drawn from the trial seed.
pub fn trial_params(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> InstanceParams {
    let dim = cfg.dims[rng.random_range(0..cfg.dims.len())];
    let kind = cfg.kinds[rng.random_range(0..cfg.kinds.len())];
    let n_states = rng.random_range(1..=cfg.max_states);
    let choices: &[MeasurementKind] = if kind == StateKind::Commuting {
        &[
            MeasurementKind::Projective,
            MeasurementKind::General,
            MeasurementKind::SharedEigenbasis,
        ]
    } else {
        &[MeasurementKind::Projective, MeasurementKind::General]
    };
    let measurement = choices[rng.random_range(0..choices.len())];
    let m_outcomes = match measurement {
        MeasurementKind::Projective => rng.random_range(2..=dim.min(cfg.max_outcomes)),
        MeasurementKind::General => rng.random_range(2..=cfg.max_outcomes),
        MeasurementKind::SharedEigenbasis => dim,
    };
    InstanceParams {
        dim,
        n_states,
        m_outcomes,
        kind,
        measurement,
    }
}

pub fn run_trial(cfg: &SuiteConfig, index: usize) -> Result<TrialRecord> {
    let seed = mix_seed(cfg.seed, index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = trial_params(cfg, &mut rng);
    let instance_seed = rng.random::<u64>();
    let (ensemble, povm) = random_instance(&params, instance_seed)?;
    let report = evaluate_bounds(&ensemble, &povm)?;
    let ledger = cycle_ledger(&ensemble, &povm)?;
    Ok(TrialRecord {
        index,
        seed,
        params,
        commuting: ensemble_commutes(&ensemble, COMMUTING_TOL),
        report,
        cycle_net: ledger.net_bits,
    })
}

/// Runs every trial; records come back in trial order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let run = || -> Result<Vec<TrialRecord>> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|k| run_trial(cfg, k))
            .collect()
    };
    match cfg.threads {
        Some(1) => (0..cfg.trials).map(|k| run_trial(cfg, k)).collect(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| validation(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// `%.9g`-style formatting: nine significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

pub fn write_csv(records: &[TrialRecord], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let p = &r.params;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            r.seed,
            p.dim,
            p.n_states,
            p.m_outcomes,
            p.kind.name(),
            p.measurement.name(),
            r.commuting,
            fmt_sig(r.report.accessible_info),
            fmt_sig(r.report.chi),
            fmt_sig(r.report.delta_s),
            fmt_sig(r.report.holevo_slack),
            fmt_sig(r.report.thermo_slack),
            fmt_sig(r.cycle_net),
        )?;
    }
    Ok(())
}
