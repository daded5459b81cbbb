//! Players, games and the rationality-weighted payoff `δ·U + (1 − δ)·D`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{Affine, EvalError, ParseError, ValueExpr};
use crate::geometry::{FeasiblePolygon, GeometryError, LinearConstraint, Point};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("delta out of range: {0} is not in [0, 1]")]
    DeltaOutOfRange(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid game: {}", format_issues(.0))]
    Invalid(Vec<ValidationIssue>),
}

fn format_issues(issues: &[ValidationIssue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn check_delta(delta: f64) -> Result<f64, ModelError> {
    if (0.0..=1.0).contains(&delta) {
        Ok(delta)
    } else {
        Err(ModelError::DeltaOutOfRange(delta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerSpec {
    rational_value: ValueExpr,
    distortion_value: ValueExpr,
    delta: f64,
}

impl PlayerSpec {
    pub fn new(rational_value: ValueExpr, distortion_value: ValueExpr, delta: f64) -> Result<Self, ModelError> {
        Ok(PlayerSpec {
            rational_value,
            distortion_value,
            delta: check_delta(delta)?,
        })
    }

    pub fn rational_value(&self) -> &ValueExpr {
        &self.rational_value
    }

    pub fn distortion_value(&self) -> &ValueExpr {
        &self.distortion_value
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self, ModelError> {
        Self::new(self.rational_value.clone(), self.distortion_value.clone(), delta)
    }

    pub fn payoff(&self, s1: f64, s2: f64) -> Result<f64, EvalError> {
        let u = self.rational_value.eval(s1, s2)?;
        let d = self.distortion_value.eval(s1, s2)?;
        Ok(compose(self.delta, u, d))
    }

    /// `(U, D)` at an allocation.
    pub fn components(&self, s1: f64, s2: f64) -> Result<(f64, f64), EvalError> {
        Ok((self.rational_value.eval(s1, s2)?, self.distortion_value.eval(s1, s2)?))
    }

    /// Structural affine form of the composed payoff.
    pub fn affine_payoff(&self) -> Option<Affine> {
        let u = self.rational_value.affine()?;
        let d = self.distortion_value.affine()?;
        Some(u.scale(self.delta).plus(d.scale(1.0 - self.delta)))
    }
}

pub fn compose(delta: f64, rational: f64, distortion: f64) -> f64 {
    delta * rational + (1.0 - delta) * distortion
}

pub fn payoff(player: &PlayerSpec, s1: f64, s2: f64) -> Result<f64, EvalError> {
    player.payoff(s1, s2)
}

/// How the disagreement point is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Disagreement {
    /// Disagreement payoffs `(d1, d2)` given directly.
    Payoffs([f64; 2]),
    /// Threat allocation `(t1, t2)`; payoffs follow from the payoff functions.
    Threats([f64; 2]),
}

/// A game with the rationality indices left open.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTemplate {
    rational: [ValueExpr; 2],
    distortion: [ValueExpr; 2],
    outcome_space: FeasiblePolygon,
    disagreement: Disagreement,
}

impl GameTemplate {
    pub fn outcome_space(&self) -> &FeasiblePolygon {
        &self.outcome_space
    }

    pub fn disagreement(&self) -> Disagreement {
        self.disagreement
    }

    pub fn with_deltas(&self, delta1: f64, delta2: f64) -> Result<GameSpec, ModelError> {
        let [u1, u2] = self.rational.clone();
        let [d1, d2] = self.distortion.clone();
        Ok(GameSpec {
            players: [PlayerSpec::new(u1, d1, delta1)?, PlayerSpec::new(u2, d2, delta2)?],
            outcome_space: self.outcome_space.clone(),
            disagreement: self.disagreement,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    players: [PlayerSpec; 2],
    outcome_space: FeasiblePolygon,
    disagreement: Disagreement,
}

impl GameSpec {
    pub fn new(
        player1: PlayerSpec,
        player2: PlayerSpec,
        outcome_space: FeasiblePolygon,
        disagreement: Disagreement,
    ) -> Result<Self, ModelError> {
        let game = GameSpec {
            players: [player1, player2],
            outcome_space,
            disagreement,
        };
        let issues = game.threat_issues();
        if issues.is_empty() {
            Ok(game)
        } else {
            Err(ModelError::Invalid(issues))
        }
    }

    /// Two players splitting `budget`, each with `U_i = s_i` and jealousy
    /// distortion `D_i = s_i − s_j`; disagreement pays `(0, 0)`.
    pub fn profit_split(budget: f64, delta1: f64, delta2: f64) -> Result<Self, ModelError> {
        let u1 = ValueExpr::parse("s1").expect("literal");
        let u2 = ValueExpr::parse("s2").expect("literal");
        let d1 = ValueExpr::parse("s1 - s2").expect("literal");
        let d2 = ValueExpr::parse("s2 - s1").expect("literal");
        Self::new(
            PlayerSpec::new(u1, d1, delta1)?,
            PlayerSpec::new(u2, d2, delta2)?,
            FeasiblePolygon::budget(budget)?,
            Disagreement::Payoffs([0.0, 0.0]),
        )
    }

    pub fn player(&self, index: usize) -> &PlayerSpec {
        &self.players[index]
    }

    pub fn players(&self) -> &[PlayerSpec; 2] {
        &self.players
    }

    pub fn deltas(&self) -> [f64; 2] {
        [self.players[0].delta, self.players[1].delta]
    }

    pub fn outcome_space(&self) -> &FeasiblePolygon {
        &self.outcome_space
    }

    pub fn disagreement(&self) -> Disagreement {
        self.disagreement
    }

    pub fn template(&self) -> GameTemplate {
        GameTemplate {
            rational: self.players.clone().map(|p| p.rational_value),
            distortion: self.players.clone().map(|p| p.distortion_value),
            outcome_space: self.outcome_space.clone(),
            disagreement: self.disagreement,
        }
    }

    pub fn with_deltas(&self, delta1: f64, delta2: f64) -> Result<Self, ModelError> {
        self.template().with_deltas(delta1, delta2)
    }

    pub fn with_disagreement(&self, disagreement: Disagreement) -> Result<Self, ModelError> {
        let [p1, p2] = self.players.clone();
        Self::new(p1, p2, self.outcome_space.clone(), disagreement)
    }

    /// Same game with the players' roles exchanged: player order swapped,
    /// `s1`/`s2` swapped in every expression and in the outcome space.
    pub fn swapped(&self) -> Self {
        let swap = |p: &PlayerSpec| PlayerSpec {
            rational_value: swap_vars(&p.rational_value),
            distortion_value: swap_vars(&p.distortion_value),
            delta: p.delta,
        };
        let disagreement = match self.disagreement {
            Disagreement::Payoffs([a, b]) => Disagreement::Payoffs([b, a]),
            Disagreement::Threats([a, b]) => Disagreement::Threats([b, a]),
        };
        GameSpec {
            players: [swap(&self.players[1]), swap(&self.players[0])],
            outcome_space: self.outcome_space.transposed(),
            disagreement,
        }
    }

    pub fn payoffs(&self, s1: f64, s2: f64) -> Result<[f64; 2], EvalError> {
        Ok([self.players[0].payoff(s1, s2)?, self.players[1].payoff(s1, s2)?])
    }

    /// Disagreement payoffs, mapping a threat allocation through the payoff functions.
    pub fn disagreement_payoffs(&self) -> Result<[f64; 2], EvalError> {
        match self.disagreement {
            Disagreement::Payoffs(d) => Ok(d),
            Disagreement::Threats([t1, t2]) => self.payoffs(t1, t2),
        }
    }

    pub fn threat_allocation(&self) -> Option<Point> {
        match self.disagreement {
            Disagreement::Threats(t) => Some(t),
            Disagreement::Payoffs(_) => None,
        }
    }

    /// Affine forms of both composed payoffs, when the expressions are affine
    /// by structure and agree with direct evaluation at 20 pseudo-random
    /// feasible points to within `1e-9` relative.
    pub fn affine_payoffs(&self) -> Option<[Affine; 2]> {
        let forms = [self.players[0].affine_payoff()?, self.players[1].affine_payoff()?];
        let vertices = self.outcome_space.vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_aff1e);
        for _ in 0..20 {
            let weights: Vec<f64> = vertices.iter().map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = weights.iter().sum();
            let mut p = [0.0; 2];
            for (v, w) in vertices.iter().zip(&weights) {
                p[0] += v[0] * w / total;
                p[1] += v[1] * w / total;
            }
            for (form, player) in forms.iter().zip(&self.players) {
                let direct = player.payoff(p[0], p[1]).ok()?;
                let via = form.eval(p[0], p[1]);
                if (direct - via).abs() > 1e-9 * direct.abs().max(1.0) {
                    return None;
                }
            }
        }
        Some(forms)
    }

    fn threat_issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        match self.disagreement {
            Disagreement::Threats(t) => {
                if !(t[0].is_finite() && t[1].is_finite()) || !self.outcome_space.contains(t) {
                    issues.push(ValidationIssue::new(
                        IssueCode::ThreatOutsideOutcomeSpace,
                        "disagreement.threats",
                        format!("threat outside outcome space: ({}, {})", t[0], t[1]),
                    ));
                } else if let Err(e) = self.payoffs(t[0], t[1]) {
                    issues.push(ValidationIssue::new(
                        IssueCode::NotEvaluable,
                        "disagreement.threats",
                        format!("payoffs at the threat allocation: {e}"),
                    ));
                }
            }
            Disagreement::Payoffs(d) => {
                if !(d[0].is_finite() && d[1].is_finite()) {
                    issues.push(ValidationIssue::new(
                        IssueCode::NonFinite,
                        "disagreement.payoffs",
                        "disagreement payoffs must be finite".to_string(),
                    ));
                }
            }
        }
        issues
    }
}

fn swap_vars(e: &ValueExpr) -> ValueExpr {
    use crate::expr::Var;
    match e {
        ValueExpr::Const(c) => ValueExpr::Const(*c),
        ValueExpr::Var(Var::S1) => ValueExpr::Var(Var::S2),
        ValueExpr::Var(Var::S2) => ValueExpr::Var(Var::S1),
        ValueExpr::Neg(x) => ValueExpr::Neg(Box::new(swap_vars(x))),
        ValueExpr::Binary(op, a, b) => ValueExpr::Binary(*op, Box::new(swap_vars(a)), Box::new(swap_vars(b))),
        ValueExpr::Pow(x, n) => ValueExpr::Pow(Box::new(swap_vars(x)), *n),
        ValueExpr::Call(f, args) => ValueExpr::Call(*f, args.iter().map(swap_vars).collect()),
    }
}

/// Machine-readable validation failure codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IssueCode {
    DeltaOutOfRange,
    MissingDelta,
    UnparseableExpression,
    EmptyOutcomeSpace,
    UnboundedOutcomeSpace,
    ThreatOutsideOutcomeSpace,
    NotEvaluable,
    NonFinite,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::DeltaOutOfRange => "delta_out_of_range",
            IssueCode::MissingDelta => "missing_delta",
            IssueCode::UnparseableExpression => "unparseable_expression",
            IssueCode::EmptyOutcomeSpace => "empty_outcome_space",
            IssueCode::UnboundedOutcomeSpace => "unbounded_outcome_space",
            IssueCode::ThreatOutsideOutcomeSpace => "threat_outside_outcome_space",
            IssueCode::NotEvaluable => "not_evaluable",
            IssueCode::NonFinite => "non_finite",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationIssue {
    pub code: IssueCode,
    /// Dotted path of the offending field, e.g. `player1.delta`.
    pub path: String,
    pub message: String,
}

impl ValidationIssue {
    fn new(code: IssueCode, path: impl Into<String>, message: String) -> Self {
        ValidationIssue {
            code,
            path: path.into(),
            message,
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.code.as_str(), self.path, self.message)
    }
}

/// Unvalidated game description, as read from text.
#[derive(Debug, Clone, PartialEq)]
pub struct GameDescription {
    pub players: [PlayerDescription; 2],
    pub outcome_space: OutcomeDescription,
    pub disagreement: Disagreement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerDescription {
    pub utility: String,
    pub distortion: String,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeDescription {
    Budget(f64),
    Constraints(Vec<LinearConstraint>),
}

impl GameDescription {
    /// The two-player profit split over `budget` with jealousy distortions.
    pub fn profit_split(budget: f64, delta1: f64, delta2: f64) -> Self {
        GameDescription {
            players: [
                PlayerDescription {
                    utility: "s1".into(),
                    distortion: "s1 - s2".into(),
                    delta: Some(delta1),
                },
                PlayerDescription {
                    utility: "s2".into(),
                    distortion: "s2 - s1".into(),
                    delta: Some(delta2),
                },
            ],
            outcome_space: OutcomeDescription::Budget(budget),
            disagreement: Disagreement::Payoffs([0.0, 0.0]),
        }
    }
}

fn parse_field(text: &str, path: String, issues: &mut Vec<ValidationIssue>) -> Option<ValueExpr> {
    match ValueExpr::parse(text) {
        Ok(e) => Some(e),
        Err(e) => {
            let e: ParseError = e;
            issues.push(ValidationIssue::new(IssueCode::UnparseableExpression, path, e.to_string()));
            None
        }
    }
}

/// Validates everything except the rationality indices.
pub fn validate_template(desc: &GameDescription) -> Result<GameTemplate, Vec<ValidationIssue>> {
    let mut issues = Vec::new();
    let mut rational = Vec::new();
    let mut distortion = Vec::new();
    for (i, p) in desc.players.iter().enumerate() {
        let prefix = format!("player{}", i + 1);
        rational.push(parse_field(&p.utility, format!("{prefix}.utility"), &mut issues));
        distortion.push(parse_field(&p.distortion, format!("{prefix}.distortion"), &mut issues));
    }
    let constraints = match &desc.outcome_space {
        OutcomeDescription::Budget(m) => vec![
            LinearConstraint::new(-1.0, 0.0, 0.0),
            LinearConstraint::new(0.0, -1.0, 0.0),
            LinearConstraint::new(1.0, 1.0, *m),
        ],
        OutcomeDescription::Constraints(c) => c.clone(),
    };
    let path = match desc.outcome_space {
        OutcomeDescription::Budget(_) => "budget",
        OutcomeDescription::Constraints(_) => "constraints",
    };
    let polygon = match FeasiblePolygon::new(constraints) {
        Ok(p) => Some(p),
        Err(e) => {
            let code = match e {
                GeometryError::Empty => IssueCode::EmptyOutcomeSpace,
                GeometryError::Unbounded => IssueCode::UnboundedOutcomeSpace,
                _ => IssueCode::NonFinite,
            };
            issues.push(ValidationIssue::new(code, path, e.to_string()));
            None
        }
    };
    let (Some(polygon), [Some(u1), Some(u2)], [Some(d1), Some(d2)]) = (
        polygon,
        <[Option<ValueExpr>; 2]>::try_from(rational).expect("two players"),
        <[Option<ValueExpr>; 2]>::try_from(distortion).expect("two players"),
    ) else {
        return Err(issues);
    };
    let template = GameTemplate {
        rational: [u1, u2],
        distortion: [d1, d2],
        outcome_space: polygon,
        disagreement: desc.disagreement,
    };
    // payoff() evaluates both U and D, so any δ probes evaluability
    let probe = template.with_deltas(1.0, 1.0).expect("unit deltas are valid");
    issues.extend(probe.threat_issues());
    if issues.is_empty() {
        Ok(template)
    } else {
        Err(issues)
    }
}

/// Validates a full description, reporting every violated invariant.
pub fn validate_game(desc: &GameDescription) -> Result<GameSpec, Vec<ValidationIssue>> {
    let mut issues = Vec::new();
    let mut deltas = [0.0; 2];
    for (i, p) in desc.players.iter().enumerate() {
        let path = format!("player{}.delta", i + 1);
        match p.delta {
            None => issues.push(ValidationIssue::new(
                IssueCode::MissingDelta,
                path,
                "missing delta".to_string(),
            )),
            Some(d) if !(0.0..=1.0).contains(&d) => issues.push(ValidationIssue::new(
                IssueCode::DeltaOutOfRange,
                path,
                format!("delta out of range: {d} is not in [0, 1]"),
            )),
            Some(d) => deltas[i] = d,
        }
    }
    match validate_template(desc) {
        Ok(template) if issues.is_empty() => Ok(template
            .with_deltas(deltas[0], deltas[1])
            .expect("deltas already checked")),
        Ok(_) => Err(issues),
        Err(more) => {
            issues.extend(more);
            Err(issues)
        }
    }
}
