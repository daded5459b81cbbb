use rayon::prelude::*;

use crate::geometry::bargaining_area;
use crate::model::{GameTemplate, ModelError};
use crate::solver::{solve, Solution, SolverOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub deltas: [f64; 2],
    /// Failed rows keep the error message; the sweep carries on.
    pub outcome: Result<Solution, String>,
    pub bargaining_area: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn solve_row(template: &GameTemplate, deltas: [f64; 2], options: &SolverOptions) -> SweepRow {
    let game = match template.with_deltas(deltas[0], deltas[1]) {
        Ok(g) => g,
        Err(e) => {
            return SweepRow {
                deltas,
                outcome: Err(e.to_string()),
                bargaining_area: None,
            }
        }
    };
    let outcome = solve(&game, options).map_err(|e| e.to_string());
    let bargaining_area = bargaining_area(&game, options.grid_resolution).ok().map(|(a, _)| a);
    SweepRow {
        deltas,
        outcome,
        bargaining_area,
    }
}

/// One solve plus bargaining-set area per `(δ1, δ2)` pair, rows ordered
/// lexicographically by `(δ1, δ2)`.
pub fn sweep_grid(
    template: &GameTemplate,
    deltas1: &[f64],
    deltas2: &[f64],
    options: &SolverOptions,
) -> Result<SweepTable, ModelError> {
    for &d in deltas1.iter().chain(deltas2) {
        if !(0.0..=1.0).contains(&d) {
            return Err(ModelError::DeltaOutOfRange(d));
        }
    }
    let (a, b) = (sorted(deltas1), sorted(deltas2));
    let pairs: Vec<[f64; 2]> = a.iter().flat_map(|&x| b.iter().map(move |&y| [x, y])).collect();
    let rows = pairs.par_iter().map(|&p| solve_row(template, p, options)).collect();
    Ok(SweepTable { rows })
}

/// Constant-rationality sweep: `δ1 = δ2 = δ̄` per row.
pub fn sweep_constant(template: &GameTemplate, deltas: &[f64], options: &SolverOptions) -> Result<SweepTable, ModelError> {
    for &d in deltas {
        if !(0.0..=1.0).contains(&d) {
            return Err(ModelError::DeltaOutOfRange(d));
        }
    }
    let rows = sorted(deltas)
        .par_iter()
        .map(|&d| solve_row(template, [d, d], options))
        .collect();
    Ok(SweepTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GameSpec;
    use crate::solver::Status;

    fn template() -> GameTemplate {
        GameSpec::profit_split(100.0, 1.0, 1.0).unwrap().template()
    }

    #[test]
    fn single_cells() {
        let opts = SolverOptions::default();
        let t = sweep_grid(&template(), &[1.0], &[1.0], &opts).unwrap();
        assert_eq!(t.rows.len(), 1);
        let s = t.rows[0].outcome.as_ref().unwrap().s_star.unwrap();
        assert!((s[0] - 50.0).abs() < 1e-9 && (s[1] - 50.0).abs() < 1e-9);

        let t = sweep_grid(&template(), &[0.5], &[0.5], &opts).unwrap();
        let row = &t.rows[0];
        let p = row.outcome.as_ref().unwrap().p_star;
        assert!((p[0] - 25.0).abs() < 1e-9 && (p[1] - 25.0).abs() < 1e-9);
        assert!((row.bargaining_area.unwrap() - 1250.0).abs() < 1e-6);

        let t = sweep_grid(&template(), &[0.0], &[0.0], &opts).unwrap();
        assert_eq!(t.rows[0].outcome.as_ref().unwrap().status, Status::Degenerate);
        assert_eq!(t.rows[0].bargaining_area, Some(0.0));
    }

    #[test]
    fn ordering_is_lexicographic() {
        let t = sweep_grid(&template(), &[1.0, 0.0, 0.5], &[0.5, 0.0], &SolverOptions::default()).unwrap();
        let keys: Vec<[f64; 2]> = t.rows.iter().map(|r| r.deltas).collect();
        assert_eq!(
            keys,
            vec![[0.0, 0.0], [0.0, 0.5], [0.5, 0.0], [0.5, 0.5], [1.0, 0.0], [1.0, 0.5]]
        );
        assert!(sweep_grid(&template(), &[1.1], &[0.5], &SolverOptions::default()).is_err());
    }

    #[test]
    fn constant_sweep() {
        let t = sweep_constant(&template(), &[0.0, 0.5, 1.0], &SolverOptions::default()).unwrap();
        let p: Vec<[f64; 2]> = t.rows.iter().map(|r| r.outcome.as_ref().unwrap().p_star).collect();
        assert_eq!(p[0], [0.0, 0.0]);
        assert!((p[1][0] - 25.0).abs() < 1e-9 && (p[1][1] - 25.0).abs() < 1e-9);
        assert!((p[2][0] - 50.0).abs() < 1e-9);
        assert_eq!(t.rows[0].outcome.as_ref().unwrap().status, Status::Degenerate);
    }
}
