use crate::model::GameSpec;
use crate::solver::{solve, Solution, SolverError, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerWelfare {
    pub behavioral_payoff: f64,
    pub rational_value: f64,
    pub distortion_value: f64,
    /// `|p − (δU + (1 − δ)D)| / max(|p|, 1)`.
    pub decomposition_residual: f64,
    /// Rational value at the fully rational benchmark minus rational value here.
    pub welfare_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WelfareReport {
    pub deltas: [f64; 2],
    /// Allocation the report is evaluated at: the solution, or the threat
    /// allocation when bargaining broke down.
    pub allocation: [f64; 2],
    pub players: [PlayerWelfare; 2],
    pub benchmark: Solution,
}

/// Splits behavior from well-being at `sol`, against the same game solved
/// with both indices set to 1.
pub fn welfare_report(game: &GameSpec, sol: &Solution, options: &SolverOptions) -> Result<WelfareReport, SolverError> {
    let s = sol
        .s_star
        .ok_or(SolverError::NotApplicable("solution has no allocation to evaluate"))?;
    let benchmark = solve(&game.with_deltas(1.0, 1.0).expect("unit indices are valid"), options)?;
    let bench_s = benchmark
        .s_star
        .ok_or(SolverError::NotApplicable("benchmark has no allocation"))?;
    let mut players = [PlayerWelfare {
        behavioral_payoff: 0.0,
        rational_value: 0.0,
        distortion_value: 0.0,
        decomposition_residual: 0.0,
        welfare_gap: 0.0,
    }; 2];
    for (i, player) in game.players().iter().enumerate() {
        let p = player.payoff(s[0], s[1])?;
        let (u, d) = player.components(s[0], s[1])?;
        let (bench_u, _) = player.components(bench_s[0], bench_s[1])?;
        let delta = player.delta();
        players[i] = PlayerWelfare {
            behavioral_payoff: p,
            rational_value: u,
            distortion_value: d,
            decomposition_residual: (p - (delta * u + (1.0 - delta) * d)).abs() / p.abs().max(1.0),
            welfare_gap: bench_u - u,
        };
    }
    Ok(WelfareReport {
        deltas: game.deltas(),
        allocation: s,
        players,
        benchmark,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(d1: f64, d2: f64) -> WelfareReport {
        let g = GameSpec::profit_split(100.0, d1, d2).unwrap();
        let opts = SolverOptions::default();
        let sol = solve(&g, &opts).unwrap();
        welfare_report(&g, &sol, &opts).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-6
    }

    #[test]
    fn fully_rational_has_no_gap() {
        let r = report(1.0, 1.0);
        for w in r.players {
            assert!(close(w.behavioral_payoff, w.rational_value));
            assert!(close(w.welfare_gap, 0.0));
            assert!(w.decomposition_residual <= 1e-9);
        }
    }

    #[test]
    fn asymmetric_indices() {
        let r = report(0.25, 0.75);
        let [a, b] = r.players;
        assert!(close(a.rational_value, 61.4285714) && close(b.rational_value, 38.5714286));
        assert!(close(a.behavioral_payoff, 32.5) && close(b.behavioral_payoff, 23.2142857));
        assert!(close(a.welfare_gap, -11.4285714) && close(b.welfare_gap, 11.4285714));
    }

    #[test]
    fn zero_indices_lose_everything() {
        let r = report(0.0, 0.0);
        let [a, b] = r.players;
        assert_eq!([a.rational_value, b.rational_value], [0.0, 0.0]);
        assert!(close(a.welfare_gap, 50.0) && close(b.welfare_gap, 50.0));
    }
}
