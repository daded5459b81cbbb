//! Property checks shared by the proptest suite and the acceptance runner.
//! Each returns `Err` with a description of the first violation.

use super::{affine_game, affine_text, close, expr};
use delta_nash::geometry::{efficient_frontier, FeasiblePolygon};
use delta_nash::model::{Disagreement, GameSpec, PlayerSpec};
use delta_nash::solver::{solve, Solution, SolverOptions, Status};

#[derive(Debug, Clone)]
pub struct RandomGame {
    pub u: [[f64; 3]; 2],
    pub d: [[f64; 3]; 2],
    pub deltas: [f64; 2],
    /// Allocation whose payoffs become the disagreement point.
    pub threat: [f64; 2],
}

impl RandomGame {
    pub fn game(&self) -> GameSpec {
        let at = affine_game(self.u, self.d, self.deltas, Disagreement::Payoffs([0.0, 0.0]));
        let d = at.payoffs(self.threat[0], self.threat[1]).unwrap();
        at.with_disagreement(Disagreement::Payoffs(d)).unwrap()
    }
}

pub fn residual(game: &GameSpec, sol: &Solution) -> f64 {
    let (Some(u), Some(d)) = (sol.u_star, sol.d_vals) else {
        return 0.0;
    };
    (0..2)
        .map(|i| {
            let delta = game.player(i).delta();
            (sol.p_star[i] - (delta * u[i] + (1.0 - delta) * d[i])).abs() / sol.p_star[i].abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Rescaling each player's U, D and disagreement payoff by `a·x + b`, `a > 0`,
/// leaves the maximizing allocation in place.
pub fn affine_invariance(g: &RandomGame, a: [f64; 2], b: [f64; 2]) -> Result<(), String> {
    let game = g.game();
    let d = game.disagreement_payoffs().unwrap();
    let rescale = |i: usize, c: [f64; 3]| format!("{:?} * ({}) + {:?}", a[i], affine_text(c), b[i]);
    let player = |i: usize| PlayerSpec::new(expr(&rescale(i, g.u[i])), expr(&rescale(i, g.d[i])), g.deltas[i]).unwrap();
    let scaled = GameSpec::new(
        player(0),
        player(1),
        game.outcome_space().clone(),
        Disagreement::Payoffs([a[0] * d[0] + b[0], a[1] * d[1] + b[1]]),
    )
    .unwrap();
    let opts = SolverOptions::default();
    let (x, y) = (solve(&game, &opts).unwrap(), solve(&scaled, &opts).unwrap());
    if x.status != y.status {
        return Err(format!("status {} became {} for {g:?}", x.status, y.status));
    }
    if x.status == Status::Agreement {
        let (sx, sy) = (x.s_star.unwrap(), y.s_star.unwrap());
        if !(close(sx[0], sy[0], 1e-6) && close(sx[1], sy[1], 1e-6)) {
            return Err(format!("s* moved from {sx:?} to {sy:?} for {g:?}"));
        }
    }
    Ok(())
}

/// Swapping players (and coordinates) swaps the solution.
pub fn player_symmetry(g: &RandomGame) -> Result<(), String> {
    let game = g.game();
    let opts = SolverOptions::default();
    let (x, y) = (solve(&game, &opts).unwrap(), solve(&game.swapped(), &opts).unwrap());
    if x.status != y.status {
        return Err(format!("status {} became {} for {g:?}", x.status, y.status));
    }
    if x.status == Status::Agreement {
        let (sx, sy) = (x.s_star.unwrap(), y.s_star.unwrap());
        let ok = close(sx[0], sy[1], 1e-6)
            && close(sx[1], sy[0], 1e-6)
            && close(x.p_star[0], y.p_star[1], 1e-6)
            && close(x.p_star[1], y.p_star[0], 1e-6);
        if !ok {
            return Err(format!("{sx:?} vs swapped {sy:?} for {g:?}"));
        }
    }
    Ok(())
}

pub fn decomposition(g: &RandomGame) -> Result<(), String> {
    let game = g.game();
    let sol = solve(&game, &SolverOptions::default()).unwrap();
    match residual(&game, &sol) {
        r if r <= 1e-9 => Ok(()),
        r => Err(format!("residual {r:e} for {g:?}")),
    }
}

/// The solver's Nash product is at least the best of a 2001-point walk along
/// the efficient frontier, restricted to points dominating the disagreement.
pub fn frontier_dominance(g: &RandomGame) -> Result<(), String> {
    let game = g.game();
    let frontier = efficient_frontier(&FeasiblePolygon::budget(100.0).unwrap(), 2001).unwrap();
    let dis = game.disagreement_payoffs().unwrap();
    let best = frontier
        .iter()
        .filter_map(|s| {
            let p = game.payoffs(s[0], s[1]).unwrap();
            (p[0] >= dis[0] && p[1] >= dis[1]).then(|| (p[0] - dis[0]) * (p[1] - dis[1]))
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let sol = solve(&game, &SolverOptions::default()).unwrap();
    if best.is_finite() && sol.nash_product < best - 1e-8 * best.abs().max(1.0) {
        return Err(format!("solver {} below frontier {best} for {g:?}", sol.nash_product));
    }
    Ok(())
}

pub const PARSER_CORPUS: &[&str] = &[
    "s1",
    "s2",
    "42",
    "0.5",
    "1e-3",
    "2.5E+2",
    "s1 - s2",
    "s2 - s1",
    "s1 + s2 * 3",
    "(s1 + s2) * 3",
    "s1 - (s2 - 1)",
    "s1 - s2 - 1",
    "s1 / (s2 / 2)",
    "s1 / s2 / 2",
    "-s1",
    "--s1",
    "-(s1 + s2)",
    "-s1^2",
    "(-s1)^2",
    "s1^-1",
    "(s1 + 1)^3",
    "(s1^2)^3",
    "min(s1, 30)",
    "max(s1 - s2, 0) + abs(s2)",
    "min(max(s1, s2), abs(-s1 + 2))",
    "0.25 * s1 + 0.75 * (s1 - s2)",
    "3 * (s1 - 2) / 4 - -s2",
    "  s1*s2  ",
    "abs(s1 - s2)^2 / 100",
];

/// parse(print(parse(t))) == parse(t), and printing is stable.
pub fn parser_round_trip(text: &str) -> Result<(), String> {
    use delta_nash::expr::ValueExpr;
    let tree = ValueExpr::parse(text).map_err(|e| format!("{text}: {e}"))?;
    let printed = tree.to_string();
    let again = ValueExpr::parse(&printed).map_err(|e| format!("{printed}: {e}"))?;
    if again != tree || again.to_string() != printed {
        return Err(format!("{text} printed as {printed} parsed differently"));
    }
    Ok(())
}

/// Coefficients uniform on [−1, 1]; threat uniform on the budget-100 simplex.
pub fn random_game_from(rng: &mut impl rand::Rng) -> RandomGame {
    let mut form = || [rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)];
    let (u, d) = ([form(), form()], [form(), form()]);
    let deltas = [rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0)];
    let s1 = rng.random_range(0.0..100.0);
    let threat = [s1, rng.random_range(0.0..=100.0 - s1)];
    RandomGame { u, d, deltas, threat }
}
