//! Scenario files: TOML documents describing a game.
//!
//! ```toml
//! budget = 100            # or [[constraints]] tables with a1, a2, b
//!
//! [player1]
//! utility = "s1"
//! distortion = "s1 - s2"
//! delta = 1               # or { kind = "beta", alpha = 2, beta = 2 }
//!
//! [player2]
//! utility = "s2"
//! distortion = "s2 - s1"
//! delta = 1
//!
//! [disagreement]          # optional, defaults to payoffs = [0, 0]
//! payoffs = [0, 0]        # or threats = [t1, t2]
//!
//! [solver]                # optional overrides
//! grid_resolution = 400
//! ```

use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::analysis::{DeltaDistribution, DistributionError};
use crate::geometry::LinearConstraint;
use crate::model::{
    validate_game, validate_template, Disagreement, GameDescription, GameSpec, GameTemplate, IssueCode,
    OutcomeDescription, PlayerDescription, ValidationIssue,
};
use crate::solver::SolverOptions;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ValidationIssue>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    budget: Option<f64>,
    constraints: Option<Vec<RawConstraint>>,
    player1: RawPlayer,
    player2: RawPlayer,
    disagreement: Option<RawDisagreement>,
    solver: Option<RawSolver>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    a1: f64,
    a2: f64,
    b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlayer {
    utility: String,
    distortion: String,
    delta: Option<toml::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisagreement {
    payoffs: Option<[f64; 2]>,
    threats: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    grid_resolution: Option<usize>,
    refinement_tolerance: Option<f64>,
    max_refinement_steps: Option<usize>,
    affine_fast_path: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawDistribution {
    Point { value: f64 },
    Uniform { low: f64, high: f64 },
    TruncatedGaussian { mu: f64, sigma: f64 },
    Beta { alpha: f64, beta: f64 },
}

impl From<RawDistribution> for DeltaDistribution {
    fn from(raw: RawDistribution) -> Self {
        match raw {
            RawDistribution::Point { value } => DeltaDistribution::Point(value),
            RawDistribution::Uniform { low, high } => DeltaDistribution::Uniform { low, high },
            RawDistribution::TruncatedGaussian { mu, sigma } => DeltaDistribution::TruncatedGaussian { mu, sigma },
            RawDistribution::Beta { alpha, beta } => DeltaDistribution::Beta { alpha, beta },
        }
    }
}

/// A parsed scenario. Deltas may be numbers, distributions, or absent.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub description: GameDescription,
    pub deltas: [Option<DeltaDistribution>; 2],
    pub solver: SolverOptions,
}

fn parse_delta(value: Option<toml::Value>, path: &str) -> Result<Option<DeltaDistribution>, ScenarioError> {
    match value {
        None => Ok(None),
        Some(toml::Value::Integer(i)) => Ok(Some(DeltaDistribution::Point(i as f64))),
        Some(toml::Value::Float(f)) => Ok(Some(DeltaDistribution::Point(f))),
        Some(v @ toml::Value::Table(_)) => v
            .try_into::<RawDistribution>()
            .map(|d| Some(d.into()))
            .map_err(|e| ScenarioError::Parse(format!("{path}: {}", e.message()))),
        Some(other) => Err(ScenarioError::Parse(format!(
            "{path}: expected a number or a distribution table, found {}",
            other.type_str()
        ))),
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string().trim_end().into()))?;
        let outcome_space = match (raw.budget, raw.constraints) {
            (Some(_), Some(_)) => {
                return Err(ScenarioError::Parse(
                    "mutually exclusive keys: `budget` and `constraints` are both present".into(),
                ))
            }
            (None, None) => return Err(ScenarioError::Parse("missing key: one of `budget` or `constraints`".into())),
            (Some(m), None) => OutcomeDescription::Budget(m),
            (None, Some(cs)) => {
                OutcomeDescription::Constraints(cs.into_iter().map(|c| LinearConstraint::new(c.a1, c.a2, c.b)).collect())
            }
        };
        let disagreement = match raw.disagreement {
            None => Disagreement::Payoffs([0.0, 0.0]),
            Some(RawDisagreement {
                payoffs: Some(d),
                threats: None,
            }) => Disagreement::Payoffs(d),
            Some(RawDisagreement {
                payoffs: None,
                threats: Some(t),
            }) => Disagreement::Threats(t),
            Some(RawDisagreement {
                payoffs: Some(_),
                threats: Some(_),
            }) => {
                return Err(ScenarioError::Parse(
                    "mutually exclusive keys: `disagreement.payoffs` and `disagreement.threats` are both present".into(),
                ))
            }
            Some(_) => {
                return Err(ScenarioError::Parse(
                    "missing key: `disagreement` needs `payoffs` or `threats`".into(),
                ))
            }
        };
        let deltas = [
            parse_delta(raw.player1.delta, "player1.delta")?,
            parse_delta(raw.player2.delta, "player2.delta")?,
        ];
        let point = |d: &Option<DeltaDistribution>| match d {
            Some(DeltaDistribution::Point(v)) => Some(*v),
            _ => None,
        };
        let description = GameDescription {
            players: [
                PlayerDescription {
                    utility: raw.player1.utility,
                    distortion: raw.player1.distortion,
                    delta: point(&deltas[0]),
                },
                PlayerDescription {
                    utility: raw.player2.utility,
                    distortion: raw.player2.distortion,
                    delta: point(&deltas[1]),
                },
            ],
            outcome_space,
            disagreement,
        };
        let mut solver = SolverOptions::default();
        if let Some(s) = raw.solver {
            solver.grid_resolution = s.grid_resolution.unwrap_or(solver.grid_resolution);
            solver.refinement_tolerance = s.refinement_tolerance.or(solver.refinement_tolerance);
            solver.max_refinement_steps = s.max_refinement_steps.unwrap_or(solver.max_refinement_steps);
            solver.affine_fast_path = s.affine_fast_path.unwrap_or(solver.affine_fast_path);
        }
        solver
            .validate()
            .map_err(|e| ScenarioError::Parse(format!("solver: {e}")))?;
        Ok(Scenario {
            description,
            deltas,
            solver,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The game with both deltas fixed. A distribution other than a point
    /// mass is reported as a missing delta.
    pub fn game(&self) -> Result<GameSpec, ScenarioError> {
        let mut issues = Vec::new();
        for (i, d) in self.deltas.iter().enumerate() {
            if let Some(dist) = d.filter(|d| !matches!(d, DeltaDistribution::Point(_))) {
                issues.push(ValidationIssue {
                    code: IssueCode::MissingDelta,
                    path: format!("player{}.delta", i + 1),
                    message: format!("{} distribution given where a fixed delta is needed", dist.kind()),
                });
            }
        }
        if !issues.is_empty() {
            return Err(ScenarioError::Invalid(issues));
        }
        validate_game(&self.description).map_err(ScenarioError::Invalid)
    }

    /// The game with deltas left open; scenario deltas are ignored.
    pub fn template(&self) -> Result<GameTemplate, ScenarioError> {
        validate_template(&self.description).map_err(ScenarioError::Invalid)
    }

    /// Delta distributions for sampling. Absent deltas are an error.
    pub fn distributions(&self) -> Result<[DeltaDistribution; 2], ScenarioError> {
        let mut issues = Vec::new();
        let mut out = [DeltaDistribution::Point(1.0); 2];
        for (i, d) in self.deltas.iter().enumerate() {
            let path = format!("player{}.delta", i + 1);
            match d {
                None => issues.push(ValidationIssue {
                    code: IssueCode::MissingDelta,
                    path,
                    message: "missing delta".into(),
                }),
                Some(dist) => match dist.validate() {
                    Ok(()) => out[i] = *dist,
                    Err(DistributionError(msg)) => issues.push(ValidationIssue {
                        code: IssueCode::DeltaOutOfRange,
                        path,
                        message: msg,
                    }),
                },
            }
        }
        if issues.is_empty() {
            Ok(out)
        } else {
            Err(ScenarioError::Invalid(issues))
        }
    }
}
