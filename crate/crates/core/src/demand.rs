//! The four-stage demand game: threats, announcement, demands, payoffs.

use rayon::prelude::*;

use crate::expr::EvalError;
use crate::geometry::{dominance_region, Point};
use crate::model::{Disagreement, GameSpec};
use crate::solver::{solve, SolverError, SolverOptions};

/// Demands each player announces on their own payoff scale.
pub fn nash_demands(game: &GameSpec, options: &SolverOptions) -> Result<[f64; 2], SolverError> {
    Ok(solve(game, options)?.p_star)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compatibility {
    pub compatible: bool,
    /// Payoff point satisfying both demands (within ε), when compatible.
    pub witness: Option<Point>,
    /// Allocation realizing the witness.
    pub allocation: Option<Point>,
}

/// Whether some feasible allocation gives `p1 >= q1 − ε` and `p2 >= q2 − ε`.
///
/// With affine payoffs the check is exact: `p2` is maximized over the part of
/// the outcome polygon where `p1 >= q1`. Otherwise a raster of the given
/// resolution is searched.
pub fn demands_compatible(game: &GameSpec, q1: f64, q2: f64, resolution: usize) -> Result<Compatibility, EvalError> {
    let poly = game.outcome_space();
    let eps = poly.tolerance();
    let incompatible = Compatibility {
        compatible: false,
        witness: None,
        allocation: None,
    };

    if let Some(forms) = game.affine_payoffs() {
        let best_p2 = |region: &[Point]| {
            region
                .iter()
                .map(|&s| (s, forms[1].eval(s[0], s[1])))
                .fold(None, |acc: Option<(Point, f64)>, (s, v)| match acc {
                    Some((_, bv)) if bv >= v => acc,
                    _ => Some((s, v)),
                })
        };
        // only p1 is constrained; p2 = -inf keeps the second half-plane vacuous
        let exact = dominance_region(poly.vertices(), &forms, [q1, f64::NEG_INFINITY], 0.0);
        let region = if exact.is_empty() {
            dominance_region(poly.vertices(), &forms, [q1, f64::NEG_INFINITY], eps)
        } else {
            exact
        };
        return Ok(match best_p2(&region) {
            Some((s, v)) if v >= q2 - eps => Compatibility {
                compatible: true,
                witness: Some(game.payoffs(s[0], s[1])?),
                allocation: Some(s),
            },
            _ => incompatible,
        });
    }

    let res = resolution.max(2);
    let (lo, hi) = poly.bounding_box();
    let axis = |k: usize| -> Vec<f64> {
        (0..res)
            .map(|i| if i + 1 == res { hi[k] } else { lo[k] + (hi[k] - lo[k]) * i as f64 / (res - 1) as f64 })
            .collect()
    };
    let (xs, ys) = (axis(0), axis(1));
    let rows: Result<Vec<Option<(Point, Point)>>, EvalError> = xs
        .par_iter()
        .map(|&s1| {
            let mut best: Option<(Point, Point)> = None;
            for &s2 in &ys {
                if !poly.contains([s1, s2]) {
                    continue;
                }
                let p = game.payoffs(s1, s2)?;
                if p[0] >= q1 - eps && p[1] >= q2 - eps && best.is_none_or(|(_, bp)| p[1] > bp[1]) {
                    best = Some(([s1, s2], p));
                }
            }
            Ok(best)
        })
        .collect();
    let best = rows?
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(Point, Point)>, cur| match acc {
            Some((_, bp)) if bp[1] >= cur.1[1] => acc,
            _ => Some(cur),
        });
    Ok(match best {
        Some((s, p)) => Compatibility {
            compatible: true,
            witness: Some(p),
            allocation: Some(s),
        },
        None => incompatible,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemandGameTranscript {
    /// Stage one: threats as given.
    pub threats: Disagreement,
    /// Payoffs if the threats are executed.
    pub threat_payoffs: [f64; 2],
    /// Stage two: threats are announced to the other player.
    pub announced: bool,
    /// Stage three.
    pub demands: [f64; 2],
    /// Stage four.
    pub compatible: bool,
    pub final_payoffs: [f64; 2],
    pub witness: Option<Point>,
}

pub fn run_demand_game(
    game: &GameSpec,
    threats: Disagreement,
    demands: [f64; 2],
    options: &SolverOptions,
) -> Result<DemandGameTranscript, SolverError> {
    options.validate()?;
    let threat_payoffs = match threats {
        Disagreement::Payoffs(d) => d,
        Disagreement::Threats([t1, t2]) => {
            if !game.outcome_space().contains([t1, t2]) {
                return Err(SolverError::Domain(format!(
                    "threat allocation ({t1}, {t2}) lies outside the outcome space"
                )));
            }
            game.payoffs(t1, t2)?
        }
    };
    let check = demands_compatible(game, demands[0], demands[1], options.grid_resolution)?;
    Ok(DemandGameTranscript {
        threats,
        threat_payoffs,
        announced: true,
        demands,
        compatible: check.compatible,
        final_payoffs: if check.compatible { demands } else { threat_payoffs },
        witness: check.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ValueExpr;
    use crate::geometry::FeasiblePolygon;
    use crate::model::PlayerSpec;

    fn split(d1: f64, d2: f64) -> GameSpec {
        GameSpec::profit_split(100.0, d1, d2).unwrap()
    }

    #[test]
    fn demands_from_solver() {
        let opts = SolverOptions::default();
        let d = nash_demands(&split(1.0, 1.0), &opts).unwrap();
        assert!((d[0] - 50.0).abs() < 1e-9 && (d[1] - 50.0).abs() < 1e-9);
        let d = nash_demands(&split(0.25, 0.75), &opts).unwrap();
        assert!((d[0] - 32.5).abs() < 1e-6 && (d[1] - 23.2142857).abs() < 1e-6);
        assert_eq!(nash_demands(&split(0.0, 0.0), &opts).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn compatibility() {
        let g = split(1.0, 1.0);
        let c = demands_compatible(&g, 50.0, 50.0, 400).unwrap();
        assert!(c.compatible);
        let w = c.witness.unwrap();
        assert!((w[0] - 50.0).abs() < 1e-9 && (w[1] - 50.0).abs() < 1e-9);
        assert!(!demands_compatible(&g, 60.0, 60.0, 400).unwrap().compatible);
        assert!(demands_compatible(&g, 30.0, 40.0, 400).unwrap().compatible);
        assert!(!demands_compatible(&g, 120.0, -50.0, 400).unwrap().compatible);
    }

    #[test]
    fn protocol_outcomes() {
        let g = split(1.0, 1.0);
        let opts = SolverOptions::default();
        let zero = Disagreement::Payoffs([0.0, 0.0]);
        let t = run_demand_game(&g, zero, [50.0, 50.0], &opts).unwrap();
        assert!(t.compatible && t.announced);
        assert_eq!(t.final_payoffs, [50.0, 50.0]);
        let t = run_demand_game(&g, zero, [60.0, 60.0], &opts).unwrap();
        assert!(!t.compatible);
        assert_eq!(t.final_payoffs, [0.0, 0.0]);
        let t = run_demand_game(&g, zero, [30.0, 40.0], &opts).unwrap();
        assert_eq!(t.final_payoffs, [30.0, 40.0]);
    }

    #[test]
    fn executed_threats_use_payoffs() {
        let g = split(0.5, 0.8);
        let opts = SolverOptions::default();
        let t = run_demand_game(&g, Disagreement::Threats([10.0, 30.0]), [90.0, 90.0], &opts).unwrap();
        assert!(!t.compatible);
        assert_eq!(t.final_payoffs, g.payoffs(10.0, 30.0).unwrap());
        assert!(run_demand_game(&g, Disagreement::Threats([90.0, 30.0]), [1.0, 1.0], &opts).is_err());
    }

    #[test]
    fn raster_compatibility_for_nonlinear_payoffs() {
        let p1 = PlayerSpec::new(ValueExpr::parse("abs(s1)").unwrap(), ValueExpr::parse("s1").unwrap(), 1.0).unwrap();
        let p2 = PlayerSpec::new(ValueExpr::parse("s2").unwrap(), ValueExpr::parse("s2").unwrap(), 1.0).unwrap();
        let g = GameSpec::new(p1, p2, FeasiblePolygon::budget(100.0).unwrap(), Disagreement::Payoffs([0.0, 0.0]))
            .unwrap();
        assert!(g.affine_payoffs().is_none());
        assert!(demands_compatible(&g, 30.0, 40.0, 101).unwrap().compatible);
        assert!(!demands_compatible(&g, 60.0, 60.0, 101).unwrap().compatible);
    }
}
