//! JSON problem files.
//!
//! ```json
//! {
//!   "ensemble": {
//!     "priors": [0.5, 0.5],
//!     "states": [
//!       [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
//!       [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]
//!     ]
//!   },
//!   "measurement": { "elements": [ ... same encoding ... ] },
//!   "labels": { "preparations": ["0", "+"], "outcomes": ["e0", "e1"] }
//! }
//! ```
//!
//! Every complex entry is a `[re, im]` pair and matrices are lists of rows.
//! `measurement` and `labels` are optional.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::linops::{ComplexMatrix, C64};
use crate::measurement::Povm;
use crate::quantum::{DensityMatrix, Ensemble};

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub ensemble: EnsembleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Labels>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub priors: Vec<f64>,
    pub states: Vec<MatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    pub elements: Vec<MatrixSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Labels {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub preparations: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outcomes: Vec<String>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{what}: {source}")]
    Invalid {
        what: String,
        #[source]
        source: Error,
    },

    #[error("labels: {0}")]
    Labels(String),
}

impl SpecError {
    fn invalid(what: impl Into<String>) -> impl FnOnce(Error) -> SpecError {
        let what = what.into();
        move |source| SpecError::Invalid { what, source }
    }
}

/// A fully validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub ensemble: Ensemble,
    pub measurement: Option<Povm>,
    pub preparation_labels: Vec<String>,
    pub outcome_labels: Vec<String>,
}

pub fn decode_matrix(m: &MatrixSpec) -> Result<ComplexMatrix, Error> {
    ComplexMatrix::from_rows(
        m.iter()
            .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect(),
    )
}

pub fn encode_matrix(m: &ComplexMatrix) -> MatrixSpec {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self, SpecError> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite values serialize")
    }

    pub fn from_problem(e: &Ensemble, v: Option<&Povm>) -> Self {
        Self {
            ensemble: EnsembleSpec {
                priors: e.probs().to_vec(),
                states: e
                    .states()
                    .iter()
                    .map(|s| encode_matrix(s.matrix()))
                    .collect(),
            },
            measurement: v.map(|v| MeasurementSpec {
                elements: v.elements().iter().map(encode_matrix).collect(),
            }),
            labels: None,
        }
    }

    /// Largest matrix side length mentioned anywhere in the file.
    pub fn max_declared_dim(&self) -> usize {
        let states = self.ensemble.states.iter();
        let elements = self.measurement.iter().flat_map(|m| m.elements.iter());
        states.chain(elements).map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn ensemble(&self) -> Result<Ensemble, SpecError> {
        let states = self
            .ensemble
            .states
            .iter()
            .enumerate()
            .map(|(i, m)| {
                decode_matrix(m)
                    .and_then(DensityMatrix::new)
                    .map_err(SpecError::invalid(format!("ensemble.states[{i}]")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ensemble::new(self.ensemble.priors.clone(), states).map_err(SpecError::invalid("ensemble"))
    }

    pub fn measurement(&self) -> Result<Option<Povm>, SpecError> {
        let Some(spec) = &self.measurement else {
            return Ok(None);
        };
        let elements = spec
            .elements
            .iter()
            .enumerate()
            .map(|(j, m)| {
                decode_matrix(m).map_err(SpecError::invalid(format!("measurement.elements[{j}]")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Povm::new(elements)
            .map(Some)
            .map_err(SpecError::invalid("measurement"))
    }

    /// Validates the whole file: ensemble, measurement, dimension agreement
    /// and label counts.
    pub fn decode(&self) -> Result<Problem, SpecError> {
        let ensemble = self.ensemble()?;
        let measurement = self.measurement()?;
        if let Some(v) = &measurement {
            if v.dim() != ensemble.dim() {
                return Err(SpecError::Invalid {
                    what: "measurement".into(),
                    source: Error::DimensionMismatch {
                        expected: ensemble.dim(),
                        found: v.dim(),
                    },
                });
            }
        }
        let labels = self.labels.clone().unwrap_or_default();
        let preparation_labels = if labels.preparations.is_empty() {
            (1..=ensemble.len()).map(|i| format!("rho{i}")).collect()
        } else if labels.preparations.len() == ensemble.len() {
            labels.preparations
        } else {
            return Err(SpecError::Labels(format!(
                "{} preparation labels for {} states",
                labels.preparations.len(),
                ensemble.len()
            )));
        };
        let n_out = measurement.as_ref().map_or(0, Povm::len);
        let outcome_labels = if labels.outcomes.is_empty() {
            (1..=n_out).map(|j| format!("E{j}")).collect()
        } else if labels.outcomes.len() == n_out {
            labels.outcomes
        } else {
            return Err(SpecError::Labels(format!(
                "{} outcome labels for {n_out} measurement elements",
                labels.outcomes.len()
            )));
        };
        Ok(Problem {
            ensemble,
            measurement,
            preparation_labels,
            outcome_labels,
        })
    }
}

/// Inclusive dimension list: `"3"`, `"2-4"` or `"2,4"`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    let mut dims = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(format!("empty entry in dimension list {s:?}"));
        }
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad dimension {lo:?}"))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad dimension {hi:?}"))?;
            if lo > hi {
                return Err(format!("empty range {part:?}"));
            }
            if hi - lo > 64 {
                return Err(format!("range {part:?} is too wide"));
            }
            dims.extend(lo..=hi);
        } else {
            dims.push(
                part.parse()
                    .map_err(|_| format!("bad dimension {part:?}"))?,
            );
        }
    }
    if let Some(d) = dims.iter().find(|&&d| !(2..=16).contains(&d)) {
        return Err(format!("dimension {d} outside 2..=16"));
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_STAR: &str = r#"{
        "ensemble": {
            "priors": [0.5, 0.5],
            "states": [
                [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
                [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]
            ]
        },
        "measurement": {
            "elements": [
                [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
                [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
            ]
        },
        "labels": {"preparations": ["zero", "plus"]}
    }"#;

    #[test]
    fn decodes_e_star() {
        let p = ProblemSpec::from_json(E_STAR).unwrap().decode().unwrap();
        assert_eq!(p.ensemble.len(), 2);
        assert!(p.measurement.as_ref().unwrap().is_projective());
        assert_eq!(p.preparation_labels, ["zero", "plus"]);
        assert_eq!(p.outcome_labels, ["E1", "E2"]);
    }

    #[test]
    fn round_trips_through_json() {
        let spec = ProblemSpec::from_json(E_STAR).unwrap();
        let again = ProblemSpec::from_json(&spec.to_json_pretty()).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            ProblemSpec::from_json("{"),
            Err(SpecError::Json(_))
        ));
        assert!(matches!(
            ProblemSpec::from_json(r#"{"ensemble": {"priors": [1], "states": []}, "extra": 1}"#),
            Err(SpecError::Json(_))
        ));
        let ragged = r#"{"ensemble": {"priors": [1], "states": [[[[1,0],[0,0]], [[0,0]]]]}}"#;
        assert!(matches!(
            ProblemSpec::from_json(ragged).unwrap().decode(),
            Err(SpecError::Invalid { .. })
        ));
        let bad_trace =
            r#"{"ensemble": {"priors": [1], "states": [[[[1,0],[0,0]], [[0,0],[1,0]]]]}}"#;
        assert!(ProblemSpec::from_json(bad_trace).unwrap().decode().is_err());
        let mismatch = r#"{"ensemble": {"priors": [1], "states": [[[[1,0],[0,0]], [[0,0],[0,0]]]]},
            "measurement": {"elements": [[[[1,0]]]]}}"#;
        assert!(ProblemSpec::from_json(mismatch).unwrap().decode().is_err());
        let labels = r#"{"ensemble": {"priors": [1], "states": [[[[1,0]]]]}, "labels": {"preparations": ["a","b"]}}"#;
        assert!(matches!(
            ProblemSpec::from_json(labels).unwrap().decode(),
            Err(SpecError::Labels(_))
        ));
    }

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("2-4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_dims("2, 4").unwrap(), vec![2, 4]);
        assert_eq!(parse_dims("3").unwrap(), vec![3]);
        for bad in ["", "1", "4-2", "x", "2-", "2,,3", "2-99999999999"] {
            assert!(parse_dims(bad).is_err(), "{bad:?}");
        }
    }
}
