//! Command-line front end.
//!
//! Each command validates its whole input, renders its output into a buffer
//! and only then writes it, so a failing command prints nothing but the
//! diagnostic.
//!
//! Exit codes: 0 success, 2 invalid input, 3 bound or second-law violation,
//! 4 unsupported option, 5 block budget exceeded.

pub mod spec;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::blockcoding::block_scan;
use crate::bounds::{
    evaluate_bounds, maximize_accessible_information, Method, OptimizerConfig, StateKind,
    DEFAULT_SEED,
};
use crate::error::Error;
use crate::measurement::joint_distribution;
use crate::suite::{fmt_sig, run_suite, write_csv, SuiteConfig, SuiteSummary};
use crate::thermo::cycle_ledger;

use spec::{parse_dims, Problem, ProblemSpec, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

pub const BOUNDS_CSV_HEADER: &str =
    "accessible_info,chi,delta_s,holevo_slack,thermo_slack,holevo_satisfied,thermo_satisfied";
pub const CYCLE_CSV_HEADER: &str = "step,stage,work_bits,description";
pub const PGM_CSV_HEADER: &str = "m,per_letter_info,per_letter_delta_s,chi";

const ABOUT: &str = "Accessible information, the Holevo bound and the thermodynamic \
(second-law) bound for quantum ensembles.";

const LONG_ABOUT: &str = "Accessible information, the Holevo bound and the thermodynamic \
(second-law) bound for quantum ensembles.

All information and work values are in bits. One bit of work is kT ln 2, so the \
temperature never appears. Problems are JSON files with complex entries written \
as [re, im] pairs.

Exit codes: 0 success, 2 invalid input, 3 bound or second-law violation, \
4 unsupported option, 5 block budget exceeded.";

#[derive(Debug, Parser)]
#[command(name = "thermobound", version, about = ABOUT, long_about = LONG_ABOUT)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// I(A:B), chi and delta_S for an ensemble and a measurement.
    Bounds(BoundsArgs),
    /// Search for the measurement with the most mutual information.
    Optimize(OptimizeArgs),
    /// Work ledger of the measurement cycle and the second-law check.
    Cycle(CycleArgs),
    /// Square-root measurement on blocks of m letters (CSV on stdout).
    Pgm(PgmArgs),
    /// Randomized check of both bounds and of the cycle ledger.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Problem file (must include a measurement).
    #[arg(long)]
    pub spec: PathBuf,
    /// Also write a one-row CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// qubit_grid or random_restart_ascent.
    #[arg(long, default_value = "qubit_grid")]
    pub method: String,
    /// Grid points per Bloch angle.
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    /// Coordinate sweeps per restart.
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
    /// Measurement outcomes for the ascent (default: max of states and dimension).
    #[arg(long)]
    pub outcomes: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the ensemble with the best measurement as a problem file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Also write the ledger as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PgmArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub max_m: usize,
    /// Also write the table to a file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Dimensions to sample from, e.g. 2-4 or 2,3.
    #[arg(long, default_value = "2-4")]
    pub dims: String,
    /// Comma-separated state kinds: pure, mixed, commuting.
    #[arg(long, default_value = "pure,mixed,commuting")]
    pub kinds: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (1 = serial; default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Per-trial CSV output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Spec {
        path: String,
        #[source]
        source: SpecError,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{0}")]
    Violation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec { .. } | CliError::Io { .. } | CliError::Validation(_) => {
                EXIT_VALIDATION
            }
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            Error::UnsupportedDimension { .. } => CliError::Unsupported(e.to_string()),
            Error::SecondLawViolation(_) => CliError::Violation(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Output of a command that ran to completion. A non-zero `exit_code` means
/// the computation finished but found a violation.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            exit_code: EXIT_OK,
        }
    }
}

/// Runs a parsed command, writing to `out` and `err`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Cycle(a) => cmd_cycle(a),
        Command::Pgm(a) => cmd_pgm(a),
        Command::Suite(a) => cmd_suite(a),
    };
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.stdout.as_bytes());
            let _ = out.flush();
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_problem(path: &Path) -> Result<Problem, CliError> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    ProblemSpec::from_slice(&bytes)
        .and_then(|s| s.decode())
        .map_err(|source| CliError::Spec {
            path: shown,
            source,
        })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn require_measurement(p: &Problem, path: &Path) -> Result<crate::Povm, CliError> {
    p.measurement.clone().ok_or_else(|| {
        CliError::Validation(format!(
            "{}: this command needs a \"measurement\" section",
            path.display()
        ))
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn describe(p: &Problem) -> String {
    let e = &p.ensemble;
    match &p.measurement {
        Some(v) => format!(
            "ensemble: {} states in dimension {}; measurement: {} outcomes ({})\n",
            e.len(),
            e.dim(),
            v.len(),
            if v.is_projective() {
                "projective"
            } else {
                "general POVM"
            }
        ),
        None => format!("ensemble: {} states in dimension {}\n", e.len(), e.dim()),
    }
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<Outcome, CliError> {
    let problem = load_problem(&args.spec)?;
    let v = require_measurement(&problem, &args.spec)?;
    let e = &problem.ensemble;
    let r = evaluate_bounds(e, &v)?;
    let joint = joint_distribution(e, &v)?;

    let mut s = describe(&problem);
    s.push_str("\njoint distribution p(i,j)\n");
    let _ = write!(s, "{:<12}", "");
    for l in &problem.outcome_labels {
        let _ = write!(s, "{l:>14}");
    }
    s.push('\n');
    for (i, l) in problem.preparation_labels.iter().enumerate() {
        let _ = write!(s, "{l:<12}");
        for j in 0..joint.outcomes() {
            let _ = write!(s, "{:>14}", fmt_sig(joint.get(i, j)));
        }
        s.push('\n');
    }
    s.push('\n');
    let rows = [
        ("I(A:B)", r.accessible_info),
        ("chi", r.chi),
        ("delta_S", r.delta_s),
        ("chi + delta_S", r.thermo_bound()),
        ("holevo slack", r.holevo_slack),
        ("thermo slack", r.thermo_slack),
    ];
    let _ = writeln!(s, "{:<16}{:>16}", "quantity", "bits");
    for (name, value) in rows {
        let _ = writeln!(s, "{name:<16}{:>16}", fmt_sig(value));
    }
    let _ = writeln!(
        s,
        "\nHolevo bound         I <= chi            {}",
        pass(r.holevo_satisfied)
    );
    let _ = writeln!(
        s,
        "thermodynamic bound  I <= chi + delta_S  {}",
        pass(r.thermo_satisfied)
    );

    if let Some(path) = &args.csv {
        let csv = format!(
            "{BOUNDS_CSV_HEADER}\n{},{},{},{},{},{},{}\n",
            fmt_sig(r.accessible_info),
            fmt_sig(r.chi),
            fmt_sig(r.delta_s),
            fmt_sig(r.holevo_slack),
            fmt_sig(r.thermo_slack),
            r.holevo_satisfied,
            r.thermo_satisfied
        );
        write_file(path, &csv)?;
    }
    let code = if r.holevo_satisfied && r.thermo_satisfied {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Outcome {
        stdout: s,
        exit_code: code,
    })
}

pub fn cmd_optimize(args: &OptimizeArgs) -> Result<Outcome, CliError> {
    let method: Method = args
        .method
        .parse()
        .map_err(|_| CliError::Unsupported(format!("optimizer method {:?}", args.method)))?;
    let cfg = OptimizerConfig {
        method,
        grid_points: args.grid,
        restarts: args.restarts,
        max_iterations: args.max_iterations,
        seed: args.seed,
        outcomes: args.outcomes,
        ..OptimizerConfig::default()
    };
    cfg.validate()?;
    let problem = load_problem(&args.spec)?;
    let e = &problem.ensemble;
    let (best, r) = maximize_accessible_information(e, &cfg)?;

    let mut s = describe(&problem);
    let _ = writeln!(s, "method: {} (seed {})", method.name(), args.seed);
    let _ = writeln!(
        s,
        "best I(A:B)     {:>16}  (lower bound on the accessible information)",
        fmt_sig(r.accessible_info)
    );
    let _ = writeln!(s, "chi             {:>16}", fmt_sig(r.chi));
    let _ = writeln!(s, "delta_S         {:>16}", fmt_sig(r.delta_s));
    let _ = writeln!(
        s,
        "measurement: {} elements ({})",
        best.len(),
        if best.is_projective() {
            "projective"
        } else {
            "general POVM"
        }
    );
    for (j, el) in best.elements().iter().enumerate() {
        let _ = writeln!(s, "E{}:", j + 1);
        for a in 0..el.rows() {
            s.push_str("   ");
            for b in 0..el.cols() {
                let z = el[(a, b)];
                let _ = write!(s, " {:>+.6}{:+.6}i", z.re, z.im);
            }
            s.push('\n');
        }
    }
    if let Some(path) = &args.out {
        let mut out = ProblemSpec::from_problem(e, Some(&best));
        out.labels = Some(spec::Labels {
            preparations: problem.preparation_labels.clone(),
            outcomes: Vec::new(),
        });
        write_file(path, &(out.to_json_pretty() + "\n"))?;
    }
    Ok(Outcome::ok(s))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn cmd_cycle(args: &CycleArgs) -> Result<Outcome, CliError> {
    let problem = load_problem(&args.spec)?;
    let v = require_measurement(&problem, &args.spec)?;
    let ledger = cycle_ledger(&problem.ensemble, &v)?;

    let mut s = describe(&problem);
    let _ = writeln!(
        s,
        "\n{:<4} {:<24} {:>14}  description",
        "step", "stage", "work (bits)"
    );
    for (k, entry) in ledger.entries.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:<4} {:<24} {:>14}  {}",
            k + 1,
            entry.stage.label(),
            fmt_sig(entry.work_bits),
            entry.description
        );
    }
    let _ = writeln!(s, "\nI(A:B)   {:>16}", fmt_sig(ledger.i_ab));
    let _ = writeln!(s, "delta_S  {:>16}", fmt_sig(ledger.delta_s));
    let _ = writeln!(s, "chi      {:>16}", fmt_sig(ledger.chi));
    let _ = writeln!(
        s,
        "net      {:>16}  (= I - delta_S - chi)",
        fmt_sig(ledger.net_bits)
    );
    let ok = ledger.second_law_ok();
    let _ = writeln!(
        s,
        "{}",
        if ok {
            "SECOND-LAW OK"
        } else {
            "SECOND-LAW VIOLATED"
        }
    );

    if let Some(path) = &args.csv {
        let mut csv = format!("{CYCLE_CSV_HEADER}\n");
        for (k, entry) in ledger.entries.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                k + 1,
                entry.stage.label(),
                fmt_sig(entry.work_bits),
                csv_field(&entry.description)
            );
        }
        write_file(path, &csv)?;
    }
    Ok(Outcome {
        stdout: s,
        exit_code: if ok { EXIT_OK } else { EXIT_VIOLATION },
    })
}

pub fn cmd_pgm(args: &PgmArgs) -> Result<Outcome, CliError> {
    let problem = load_problem(&args.spec)?;
    let reports = block_scan(&problem.ensemble, args.max_m)?;
    let mut csv = format!("{PGM_CSV_HEADER}\n");
    for r in &reports {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            r.m,
            fmt_sig(r.per_letter_info),
            fmt_sig(r.per_letter_delta_s),
            fmt_sig(r.chi)
        );
    }
    if let Some(path) = &args.csv {
        write_file(path, &csv)?;
    }
    Ok(Outcome::ok(csv))
}

fn parse_kinds(s: &str) -> Result<Vec<StateKind>, CliError> {
    s.split(',')
        .map(|k| {
            k.parse::<StateKind>()
                .map_err(|e| CliError::Validation(e.to_string()))
        })
        .collect()
}

pub fn cmd_suite(args: &SuiteArgs) -> Result<Outcome, CliError> {
    let cfg = SuiteConfig {
        trials: args.trials,
        dims: parse_dims(&args.dims).map_err(CliError::Validation)?,
        seed: args.seed,
        kinds: parse_kinds(&args.kinds)?,
        threads: args.threads,
        ..SuiteConfig::default()
    };
    cfg.validate()?;
    let records = run_suite(&cfg)?;
    let summary = SuiteSummary::from_records(&records);

    let mut s = String::new();
    let _ = writeln!(s, "trials                          {}", summary.trials);
    let _ = writeln!(s, "seed                            {}", cfg.seed);
    let _ = writeln!(
        s,
        "Holevo bound violations         {}",
        summary.holevo_violations
    );
    let _ = writeln!(
        s,
        "thermodynamic bound violations  {}",
        summary.thermo_violations
    );
    let _ = writeln!(
        s,
        "second-law violations (cycle)   {}",
        summary.second_law_violations
    );
    let _ = writeln!(
        s,
        "min holevo slack                {}",
        fmt_sig(summary.min_holevo_slack)
    );
    let _ = writeln!(
        s,
        "mean holevo slack               {}",
        fmt_sig(summary.mean_holevo_slack)
    );
    let _ = writeln!(
        s,
        "min thermo slack                {}",
        fmt_sig(summary.min_thermo_slack)
    );
    let _ = writeln!(
        s,
        "mean thermo slack               {}",
        fmt_sig(summary.mean_thermo_slack)
    );
    let _ = writeln!(
        s,
        "fraction with delta_S > 1e-6    {}",
        fmt_sig(summary.positive_delta_s_fraction)
    );
    let _ = writeln!(
        s,
        "  among non-commuting ({:>4})    {}",
        summary.noncommuting_trials,
        fmt_sig(summary.noncommuting_positive_delta_s_fraction)
    );

    if let Some(path) = &args.csv {
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).expect("writing to memory");
        let text = String::from_utf8(buf).expect("CSV is UTF-8");
        write_file(path, &text)?;
    }
    let code = if summary.violations() == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Outcome {
        stdout: s,
        exit_code: code,
    })
}
