//! Acceptance suite.
//!
//! Runs every criterion at its stated tolerance and prints one `PASS`/`FAIL`
//! line each. Exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use thermobound::blockcoding::block_scan;
use thermobound::bounds::{
    evaluate_bounds, haar_unitary, maximize_accessible_information, mix_seed, random_instance,
    InstanceParams, MeasurementKind, Method, OptimizerConfig, StateKind, DEFAULT_SEED,
};
use thermobound::cli::{cmd_suite, SuiteArgs, EXIT_OK};
use thermobound::linops::ComplexMatrix;
use thermobound::measurement::{
    demon_record_state, demon_reset, joint_distribution, mutual_information, naimark_dilation,
    post_measurement_state, Povm,
};
use thermobound::quantum::{average_state, holevo_chi, von_neumann_entropy, DensityMatrix};
use thermobound::suite::{run_suite, SuiteConfig, SuiteSummary};
use thermobound::thermo::{
    cycle_ledger, extraction_stage, rho_to_initial_stage, sigma_to_rho_stage, stage_total,
};
use thermobound::Ensemble;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

/// Scalar oracle values, computed independently in double precision.
const ORACLE_OPT_INFO: f64 = 0.39912396330714384;
const ORACLE_CHI: f64 = 0.6008760366928562;

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn h2(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

fn e_star() -> Ensemble {
    Ensemble::new(
        vec![0.5, 0.5],
        vec![
            DensityMatrix::pure_real(&[1.0, 0.0]).unwrap(),
            DensityMatrix::pure_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap(),
        ],
    )
    .unwrap()
}

fn entropy(r: &DensityMatrix) -> f64 {
    von_neumann_entropy(r).unwrap()
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn random_params(rng: &mut ChaCha8Rng, kinds: &[StateKind], n_max: usize) -> InstanceParams {
    let dim = rng.random_range(2..=4);
    let kind = kinds[rng.random_range(0..kinds.len())];
    let measurement = if rng.random_bool(0.5) {
        MeasurementKind::Projective
    } else {
        MeasurementKind::General
    };
    let m_outcomes = match measurement {
        MeasurementKind::Projective => rng.random_range(2..=dim),
        _ => rng.random_range(2..=6),
    };
    InstanceParams {
        dim,
        n_states: rng.random_range(1..=n_max),
        m_outcomes,
        kind,
        measurement,
    }
}

fn default_suite_summary() -> (SuiteSummary, Duration) {
    let start = Instant::now();
    let records = run_suite(&SuiteConfig::default()).expect("suite runs");
    (SuiteSummary::from_records(&records), start.elapsed())
}

fn thermodynamic_bound(s: &SuiteSummary, elapsed: Duration) -> Outcome {
    let pass = s.trials == 1000 && s.thermo_violations == 0 && within(elapsed, 60);
    Outcome::new(
        pass,
        format!(
            "{} trials, {} violations, min slack {:.3e}, {:.2?}",
            s.trials, s.thermo_violations, s.min_thermo_slack, elapsed
        ),
    )
}

fn holevo_bound(s: &SuiteSummary) -> Outcome {
    let frac = s.noncommuting_positive_delta_s_fraction;
    let pass = s.holevo_violations == 0 && s.noncommuting_trials > 0 && frac >= 0.5;
    Outcome::new(
        pass,
        format!(
            "{} violations, min slack {:.3e}, dS > 1e-6 in {:.1}% of {} non-commuting",
            s.holevo_violations,
            s.min_holevo_slack,
            100.0 * frac,
            s.noncommuting_trials
        ),
    )
}

fn classical_saturation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(DEFAULT_SEED, 3));
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..200 {
        let dim = rng.random_range(2..=4);
        let params = InstanceParams {
            dim,
            n_states: rng.random_range(1..=4),
            m_outcomes: dim,
            kind: StateKind::Commuting,
            measurement: MeasurementKind::SharedEigenbasis,
        };
        let (e, v) = random_instance(&params, rng.random()).unwrap();
        let r = evaluate_bounds(&e, &v).unwrap();
        let net = cycle_ledger(&e, &v).unwrap().net_bits;
        let gap = (r.accessible_info - r.chi)
            .abs()
            .max(r.delta_s)
            .max(net.abs());
        worst = worst.max(gap);
        if gap > TOL {
            failures += 1;
        }
    }
    Outcome::new(
        failures == 0,
        format!("200 instances, {failures} failures, worst |I-chi|, dS, |net| = {worst:.3e}"),
    )
}

fn two_pure_state_optimum() -> Outcome {
    let closed_form = 1.0 - h2((1.0 + (PI / 4.0).sin()) / 2.0);
    let oracle_ok = (closed_form - ORACLE_OPT_INFO).abs() < 1e-12;
    let start = Instant::now();
    let (_, grid) =
        maximize_accessible_information(&e_star(), &OptimizerConfig::default()).unwrap();
    let (_, ascent) = maximize_accessible_information(
        &e_star(),
        &OptimizerConfig {
            method: Method::RandomRestartAscent,
            ..OptimizerConfig::default()
        },
    )
    .unwrap();
    let elapsed = start.elapsed();
    let info_err = (grid.accessible_info - closed_form)
        .abs()
        .max((ascent.accessible_info - closed_form).abs());
    let chi_err = (grid.chi - ORACLE_CHI).abs();
    let pass = oracle_ok && info_err <= 1e-4 && chi_err <= 1e-5 && within(elapsed, 5);
    Outcome::new(
        pass,
        format!(
            "I grid {:.9} ascent {:.9} (closed form {closed_form:.9}), chi {:.9}, {elapsed:.2?}",
            grid.accessible_info, ascent.accessible_info, grid.chi
        ),
    )
}

fn delta_s_nonnegative() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(DEFAULT_SEED, 5));
    let mut min_ds = f64::INFINITY;
    let (mut projective, mut dilated) = (0, 0);
    for _ in 0..1000 {
        let mut params = random_params(&mut rng, &[StateKind::Pure, StateKind::Mixed], 1);
        params.n_states = 1;
        let (e, v) = random_instance(&params, rng.random()).unwrap();
        let r = &e.states()[0];
        let sigma = post_measurement_state(r, &v).unwrap();
        min_ds = min_ds.min(entropy(&sigma) - entropy(r));
        if v.is_projective() {
            projective += 1;
        } else {
            dilated += 1;
        }
    }
    Outcome::new(
        min_ds >= -TOL,
        format!("{projective} projective, {dilated} dilated, min dS {min_ds:.3e}"),
    )
}

fn ledger_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(DEFAULT_SEED, 6));
    let kinds = StateKind::ALL;
    let mut worst: f64 = 0.0;
    let mut max_net = f64::NEG_INFINITY;
    for _ in 0..200 {
        let params = random_params(&mut rng, &kinds, 4);
        let (e, v) = random_instance(&params, rng.random()).unwrap();

        let joint = joint_distribution(&e, &v).unwrap();
        let info = mutual_information(&joint);
        let rho = average_state(&e).unwrap();
        let sigma = post_measurement_state(&rho, &v).unwrap();
        let (s_rho, s_sigma) = (entropy(&rho), entropy(&sigma));
        let mean_s: f64 = e.iter().map(|(p, s)| p * entropy(s)).sum();
        let chi = holevo_chi(&e).unwrap();

        let ext = extraction_stage(&e, &v).unwrap();
        // For a general POVM σ lives on the dilated space.
        let rho_on_sigma_space = if v.is_projective() {
            rho.clone()
        } else {
            naimark_dilation(&v).unwrap().embed(&rho).unwrap()
        };
        let mid = sigma_to_rho_stage(&sigma, &rho_on_sigma_space).unwrap();
        let back = rho_to_initial_stage(&e).unwrap();
        let ledger = cycle_ledger(&e, &v).unwrap();

        let errors = [
            ext[0].work_bits - joint.h_a(),
            ext[1].work_bits + joint.conditional_entropy_a_given_b(),
            stage_total(&ext) - info,
            mid[1].work_bits + s_sigma,
            mid[3].work_bits - s_rho,
            stage_total(&mid) + (s_sigma - s_rho),
            back[0].work_bits + s_rho,
            back[2].work_bits - mean_s,
            stage_total(&back) + chi,
            ledger.net_bits - (info - (s_sigma - s_rho) - chi),
        ];
        for err in errors {
            worst = worst.max(err.abs());
        }
        max_net = max_net.max(ledger.net_bits);
    }
    Outcome::new(
        worst <= TOL && max_net <= TOL,
        format!("200 instances, worst stage mismatch {worst:.3e}, max net {max_net:.3e}"),
    )
}

fn demon_reset_reversible() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(DEFAULT_SEED, 7));
    let (mut unit_err, mut map_err, mut ent_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let dim = rng.random_range(2..=4);
        let params = InstanceParams {
            dim,
            n_states: 1,
            m_outcomes: dim,
            kind: StateKind::Mixed,
            measurement: MeasurementKind::Projective,
        };
        let (e, _) = random_instance(&params, rng.random()).unwrap();
        let basis = haar_unitary(&mut rng, dim);
        let v = Povm::from_basis(&basis).unwrap();
        let r = &e.states()[0];

        let joint = demon_record_state(r, &v).unwrap();
        let reset = demon_reset(&joint, &v).unwrap();
        let u = &reset.unitary;
        let eye = ComplexMatrix::identity(u.rows());
        unit_err = unit_err
            .max((&(&u.adjoint() * u) - &eye).max_abs())
            .max((&(u * &u.adjoint()) - &eye).max_abs());

        let sigma = post_measurement_state(r, &v).unwrap();
        let target = sigma.tensor(&DensityMatrix::basis(dim, 0));
        map_err = map_err.max(reset.after.matrix().max_abs_diff(target.matrix()));
        ent_err = ent_err.max((entropy(&reset.after) - entropy(&joint)).abs());
    }
    Outcome::new(
        unit_err <= TOL && map_err <= TOL && ent_err <= TOL,
        format!("unitarity {unit_err:.3e}, mapping {map_err:.3e}, entropy {ent_err:.3e}"),
    )
}

fn block_scan_trend() -> Outcome {
    let start = Instant::now();
    let reports = block_scan(&e_star(), 4).unwrap();
    let elapsed = start.elapsed();
    let mut pass = reports.len() == 4 && within(elapsed, 120);
    for r in &reports {
        println!(
            "    m = {}  I/m = {:.9}  dS_m/m = {:.9}  chi = {:.9}  block slack = {:.3e}",
            r.m,
            r.per_letter_info,
            r.per_letter_delta_s,
            r.chi,
            r.block_thermo_slack()
        );
        pass &= r.per_letter_info <= r.chi + TOL && r.block_thermo_slack() >= -TOL;
    }
    Outcome::new(pass, format!("m = 1..4, {elapsed:.2?}"))
}

fn suite_csv(dir: &std::path::Path, name: &str, threads: Option<usize>) -> Vec<u8> {
    let path = dir.join(name);
    let args = SuiteArgs {
        trials: 1000,
        dims: "2-4".into(),
        kinds: "pure,mixed,commuting".into(),
        seed: DEFAULT_SEED,
        threads,
        csv: Some(path.clone()),
    };
    let out = cmd_suite(&args).expect("suite command runs");
    assert_eq!(out.exit_code, EXIT_OK);
    std::fs::read(path).expect("CSV written")
}

fn deterministic_csv() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let first = suite_csv(dir.path(), "a.csv", None);
    let second = suite_csv(dir.path(), "b.csv", None);
    let serial = suite_csv(dir.path(), "serial.csv", Some(1));
    let three = suite_csv(dir.path(), "three.csv", Some(3));
    let pass = !first.is_empty() && first == second && first == serial && first == three;
    Outcome::new(
        pass,
        format!(
            "{} bytes; repeat, serial and 3-thread runs identical: {pass}",
            first.len()
        ),
    )
}

fn main() -> ExitCode {
    let (summary, elapsed) = default_suite_summary();
    let criteria: Vec<Criterion> = vec![
        (
            "thermodynamic bound holds on 1000 random instances",
            Box::new({
                let s = summary.clone();
                move || thermodynamic_bound(&s, elapsed)
            }),
        ),
        (
            "Holevo bound holds and is the tighter bound",
            Box::new(move || holevo_bound(&summary)),
        ),
        (
            "commuting ensembles saturate both bounds",
            Box::new(classical_saturation),
        ),
        ("two-pure-state optimum", Box::new(two_pure_state_optimum)),
        (
            "measurement never lowers entropy",
            Box::new(delta_s_nonnegative),
        ),
        (
            "cycle ledger matches entropies",
            Box::new(ledger_cross_check),
        ),
        (
            "demon reset is reversible",
            Box::new(demon_reset_reversible),
        ),
        (
            "block scan of the two-pure-state ensemble",
            Box::new(block_scan_trend),
        ),
        ("suite CSV is deterministic", Box::new(deterministic_csv)),
    ];

    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {name}: {}", k + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
