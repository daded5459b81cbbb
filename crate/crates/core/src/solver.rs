//! Nash-product maximization over the feasible dominance region.
//!
//! Affine payoffs take an exact path: the dominance region is clipped from
//! the outcome polygon, and the product, a quadratic along every boundary
//! edge, is maximized in closed form per edge. Anything else is seeded from
//! a raster and refined by a compass search whose poll set includes the
//! polygon's edge directions, so it can slide along active constraints.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{Affine, EvalError};
use crate::geometry::{affine_collapses_to, dominance_region, Point};
use crate::model::GameSpec;

/// Raster sample: outcome and its payoffs.
type Sample = (Point, [f64; 2]);

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub grid_resolution: usize,
    /// Final compass step in outcome units; `None` means `1e-9 · scale`.
    pub refinement_tolerance: Option<f64>,
    pub max_refinement_steps: usize,
    pub affine_fast_path: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_resolution: 400,
            refinement_tolerance: None,
            max_refinement_steps: 200,
            affine_fast_path: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.grid_resolution < 16 {
            return Err(SolverError::InvalidOptions(format!(
                "grid_resolution must be at least 16, got {}",
                self.grid_resolution
            )));
        }
        if let Some(t) = self.refinement_tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(SolverError::InvalidOptions(format!(
                    "refinement_tolerance must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }

    pub fn tolerance_for(&self, game: &GameSpec) -> f64 {
        self.refinement_tolerance
            .unwrap_or_else(|| 1e-9 * game.outcome_space().scale())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("stationarity check not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("optimum lies at a vertex of the outcome space")]
    VertexOptimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Some feasible point strictly improves on the disagreement point.
    Agreement,
    /// No feasible point strictly dominates the disagreement point.
    Disagreement,
    /// The dominance region is the disagreement point itself.
    Degenerate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Agreement => "agreement",
            Status::Disagreement => "disagreement",
            Status::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    AffineEdges,
    RasterCompass,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::AffineEdges => "affine-edges",
            Method::RasterCompass => "raster-compass",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub method: Method,
    pub stationarity_residual: Option<f64>,
    pub refinement_steps: usize,
    pub budget_exhausted: bool,
    /// Exactly one rationality index is zero, yet the bargaining set is more
    /// than the disagreement point (so agreement remains possible).
    pub boundary_claim_mismatch: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub deltas: [f64; 2],
    pub disagreement: [f64; 2],
    /// Unset only for an explicit disagreement point that is not realized.
    pub s_star: Option<Point>,
    pub p_star: [f64; 2],
    pub u_star: Option<[f64; 2]>,
    pub d_vals: Option<[f64; 2]>,
    pub nash_product: f64,
    pub status: Status,
    pub diagnostics: Diagnostics,
}

pub fn nash_product(game: &GameSpec, s1: f64, s2: f64) -> Result<f64, SolverError> {
    let d = game.disagreement_payoffs()?;
    let p = game.payoffs(s1, s2)?;
    Ok((p[0] - d[0]) * (p[1] - d[1]))
}

enum Found {
    Agreement { s: Point, steps: usize, exhausted: bool },
    Degenerate(Point),
    Disagreement,
}

/// Keeps the larger product; near-ties (1e-12 relative) go to the
/// lexicographically smaller allocation.
fn better(cand: (Point, f64), best: Option<(Point, f64)>) -> bool {
    let Some((bs, bv)) = best else { return true };
    let tie = 1e-12 * bv.abs().max(1.0);
    if cand.1 > bv + tie {
        return true;
    }
    if cand.1 < bv - tie {
        return false;
    }
    (cand.0[0], cand.0[1]) < (bs[0], bs[1])
}

fn lexicographic_min(points: &[Point]) -> Option<Point> {
    points
        .iter()
        .copied()
        .min_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])))
}

fn solve_affine(game: &GameSpec, forms: &[Affine; 2], d: [f64; 2]) -> Found {
    let poly = game.outcome_space();
    let eps = poly.tolerance();
    let vertices = poly.vertices();
    let strict = dominance_region(vertices, forms, [d[0] + eps, d[1] + eps], 0.0);
    let exact = dominance_region(vertices, forms, d, 0.0);
    if strict.is_empty() {
        let slack = dominance_region(vertices, forms, d, eps);
        if affine_collapses_to(forms, &slack, d, eps) {
            let s = lexicographic_min(if exact.is_empty() { &slack } else { &exact }).expect("nonempty");
            return Found::Degenerate(s);
        }
        return Found::Disagreement;
    }
    let region = if exact.is_empty() { strict } else { exact };
    let gain = |s: Point| (forms[0].eval(s[0], s[1]) - d[0], forms[1].eval(s[0], s[1]) - d[1]);

    let mut candidates: Vec<Point> = region.clone();
    let n = region.len();
    for i in 0..n {
        let (a, b) = (region[i], region[(i + 1) % n]);
        let (alpha0, beta0) = gain(a);
        let (ga, gb) = gain(b);
        let (alpha1, beta1) = (ga - alpha0, gb - beta0);
        let curvature = alpha1 * beta1;
        if curvature < 0.0 {
            let t = -(alpha1 * beta0 + beta1 * alpha0) / (2.0 * curvature);
            if t > 0.0 && t < 1.0 {
                candidates.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
    }
    let mut best: Option<(Point, f64)> = None;
    for s in candidates {
        let (x, y) = gain(s);
        let cand = (s, x * y);
        if better(cand, best) {
            best = Some(cand);
        }
    }
    let (s, _) = best.expect("region has vertices");
    Found::Agreement {
        s,
        steps: 0,
        exhausted: false,
    }
}

fn raster_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn solve_raster(game: &GameSpec, d: [f64; 2], options: &SolverOptions) -> Result<Found, SolverError> {
    let poly = game.outcome_space();
    let eps = poly.tolerance();
    let res = options.grid_resolution;
    let (lo, hi) = poly.bounding_box();
    let xs = raster_axis(lo[0], hi[0], res);
    let ys = raster_axis(lo[1], hi[1], res);
    let rows: Result<Vec<Vec<Sample>>, EvalError> = xs
        .par_iter()
        .map(|&s1| {
            let mut row = Vec::new();
            for &s2 in &ys {
                if poly.contains([s1, s2]) {
                    row.push(([s1, s2], game.payoffs(s1, s2)?));
                }
            }
            Ok(row)
        })
        .collect();
    let cloud: Vec<Sample> = rows?.into_iter().flatten().collect();

    let strictly = |p: &[f64; 2]| p[0] > d[0] + eps && p[1] > d[1] + eps;
    if !cloud.iter().any(|(_, p)| strictly(p)) {
        let weak: Vec<&Sample> = cloud
            .iter()
            .filter(|(_, p)| p[0] >= d[0] - eps && p[1] >= d[1] - eps)
            .collect();
        let collapsed = !weak.is_empty()
            && weak
                .iter()
                .all(|(_, p)| (p[0] - d[0]).abs() <= eps && (p[1] - d[1]).abs() <= eps);
        return Ok(if collapsed {
            Found::Degenerate(weak[0].0)
        } else {
            Found::Disagreement
        });
    }

    let product = |p: [f64; 2]| (p[0] - d[0]) * (p[1] - d[1]);
    let mut best: Option<(Point, f64)> = None;
    for (s, p) in &cloud {
        if p[0] >= d[0] && p[1] >= d[1] && better((*s, product(*p)), best) {
            best = Some((*s, product(*p)));
        }
    }
    let (mut x, mut fx) = best.expect("a strictly dominating point exists");

    let mut dirs: Vec<Point> = vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    for (a, b) in poly.edges() {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        if len > 0.0 {
            let t = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
            for dir in [t, [-t[0], -t[1]]] {
                if !dirs
                    .iter()
                    .any(|q| (q[0] - dir[0]).abs() < 1e-12 && (q[1] - dir[1]).abs() < 1e-12)
                {
                    dirs.push(dir);
                }
            }
        }
    }

    let tol = options.tolerance_for(game);
    let cell = ((hi[0] - lo[0]) / (res - 1) as f64).max((hi[1] - lo[1]) / (res - 1) as f64);
    let mut step = if cell > 0.0 { cell } else { tol };
    let mut steps = 0;
    let mut exhausted = false;
    while step >= tol {
        if steps >= options.max_refinement_steps {
            exhausted = true;
            break;
        }
        steps += 1;
        let mut move_to: Option<(Point, f64)> = None;
        for dir in &dirs {
            let c = [x[0] + step * dir[0], x[1] + step * dir[1]];
            if !poly.contains(c) {
                continue;
            }
            // singular points are simply not accepted as moves
            let Ok(p) = game.payoffs(c[0], c[1]) else { continue };
            if p[0] < d[0] || p[1] < d[1] {
                continue;
            }
            let v = product(p);
            if v > fx && move_to.is_none_or(|(_, mv)| v > mv) {
                move_to = Some((c, v));
            }
        }
        match move_to {
            Some((c, v)) => {
                x = c;
                fx = v;
            }
            None => step /= 2.0,
        }
    }
    Ok(Found::Agreement { s: x, steps, exhausted })
}

/// Maximizes the Nash product `(p1 − d1)(p2 − d2)` over feasible allocations
/// whose payoffs weakly dominate the disagreement point.
pub fn solve(game: &GameSpec, options: &SolverOptions) -> Result<Solution, SolverError> {
    options.validate()?;
    let d = game.disagreement_payoffs()?;
    let forms = if options.affine_fast_path { game.affine_payoffs() } else { None };
    let (found, method) = match &forms {
        Some(forms) => (solve_affine(game, forms, d), Method::AffineEdges),
        None => (solve_raster(game, d, options)?, Method::RasterCompass),
    };

    let (s_star, status, steps, exhausted) = match found {
        Found::Agreement { s, steps, exhausted } => (Some(s), Status::Agreement, steps, exhausted),
        Found::Degenerate(s) => (Some(s), Status::Degenerate, 0, false),
        Found::Disagreement => (game.threat_allocation(), Status::Disagreement, 0, false),
    };
    let deltas = game.deltas();
    let (p_star, u_star, d_vals) = match s_star {
        Some(s) => {
            let mut u = [0.0; 2];
            let mut dv = [0.0; 2];
            for (i, player) in game.players().iter().enumerate() {
                (u[i], dv[i]) = player.components(s[0], s[1])?;
            }
            (game.payoffs(s[0], s[1])?, Some(u), Some(dv))
        }
        None => (d, None, None),
    };
    let nash_product = (p_star[0] - d[0]) * (p_star[1] - d[1]);
    let mut solution = Solution {
        deltas,
        disagreement: d,
        s_star,
        p_star,
        u_star,
        d_vals,
        nash_product,
        status,
        diagnostics: Diagnostics {
            method,
            stationarity_residual: None,
            refinement_steps: steps,
            budget_exhausted: exhausted,
            boundary_claim_mismatch: (deltas[0] == 0.0) != (deltas[1] == 0.0) && status != Status::Degenerate,
        },
    };
    if forms.is_some() && status == Status::Agreement {
        solution.diagnostics.stationarity_residual = stationarity_residual(game, &solution).ok();
    }
    Ok(solution)
}

/// Closed-form solution of the profit-split game over `budget` with
/// jealousy distortions, valid for `0 < δ1, δ2 <= 1`.
pub fn closed_form_example(delta1: f64, delta2: f64, budget: f64) -> Result<Solution, SolverError> {
    for (name, d) in [("delta1", delta1), ("delta2", delta2)] {
        if !(d > 0.0 && d <= 1.0) {
            return Err(SolverError::Domain(format!("{name} must lie in (0, 1], got {d}")));
        }
    }
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(SolverError::Domain(format!("budget must be positive, got {budget}")));
    }
    let half = budget / 2.0;
    let k = delta1 + delta2 - delta1 * delta2;
    let p1 = half * k / (2.0 - delta2);
    let p2 = half * k / (2.0 - delta1);
    let shared = half * k / ((2.0 - delta1) * (2.0 - delta2));
    let s1 = budget * (1.0 - delta1) / (2.0 - delta1) + shared;
    let s2 = budget * (1.0 - delta2) / (2.0 - delta2) + shared;
    Ok(Solution {
        deltas: [delta1, delta2],
        disagreement: [0.0, 0.0],
        s_star: Some([s1, s2]),
        p_star: [p1, p2],
        u_star: Some([s1, s2]),
        d_vals: Some([s1 - s2, s2 - s1]),
        nash_product: p1 * p2,
        status: Status::Agreement,
        diagnostics: Diagnostics {
            method: Method::ClosedForm,
            stationarity_residual: None,
            refinement_steps: 0,
            budget_exhausted: false,
            boundary_claim_mismatch: false,
        },
    })
}

/// `|d/dt log((p1 − d1)(p2 − d2))|` along the outcome-space edge through
/// `s`, by central difference with step `1e-5 · scale`.
pub fn stationarity_residual_at(game: &GameSpec, s: Point) -> Result<f64, SolverError> {
    let poly = game.outcome_space();
    let h = 1e-5 * poly.scale();
    let on_edge_tol = 1e3 * poly.tolerance();
    let mut edge_dir = None;
    for (a, b) in poly.edges() {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        if len == 0.0 {
            continue;
        }
        let u = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
        let rel = [s[0] - a[0], s[1] - a[1]];
        let along = rel[0] * u[0] + rel[1] * u[1];
        let off = (rel[0] * u[1] - rel[1] * u[0]).abs();
        if off <= on_edge_tol && along >= -on_edge_tol && along <= len + on_edge_tol {
            if along <= h || along >= len - h {
                return Err(SolverError::VertexOptimal);
            }
            edge_dir = Some(u);
            break;
        }
    }
    let u = edge_dir.ok_or(SolverError::NotApplicable("allocation is not on the boundary"))?;
    let log_product = |t: f64| -> Result<f64, SolverError> {
        let v = nash_product(game, s[0] + t * u[0], s[1] + t * u[1])?;
        if v > 0.0 {
            Ok(v.ln())
        } else {
            Err(SolverError::NotApplicable("Nash product is not positive near the allocation"))
        }
    };
    Ok(((log_product(h)? - log_product(-h)?) / (2.0 * h)).abs())
}

pub fn stationarity_residual(game: &GameSpec, sol: &Solution) -> Result<f64, SolverError> {
    if sol.status != Status::Agreement {
        return Err(SolverError::NotApplicable("no agreement"));
    }
    if game.affine_payoffs().is_none() {
        return Err(SolverError::NotApplicable("payoffs are not affine"));
    }
    let s = sol.s_star.ok_or(SolverError::NotApplicable("no allocation"))?;
    stationarity_residual_at(game, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ValueExpr;
    use crate::geometry::FeasiblePolygon;
    use crate::model::{Disagreement, PlayerSpec};

    fn split(d1: f64, d2: f64) -> GameSpec {
        GameSpec::profit_split(100.0, d1, d2).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn product_values() {
        assert_eq!(nash_product(&split(1.0, 1.0), 50.0, 50.0).unwrap(), 2500.0);
        assert_eq!(nash_product(&split(1.0, 1.0), 100.0, 0.0).unwrap(), 0.0);
        assert_eq!(nash_product(&split(0.5, 0.5), 50.0, 50.0).unwrap(), 625.0);
    }

    #[test]
    fn rational_split_is_even() {
        let sol = solve(&split(1.0, 1.0), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Agreement);
        let s = sol.s_star.unwrap();
        assert_close(s[0], 50.0, 1e-9);
        assert_close(s[1], 50.0, 1e-9);
        assert_close(sol.p_star[0], 50.0, 1e-9);
        assert!(sol.diagnostics.stationarity_residual.unwrap() <= 1e-6);
    }

    #[test]
    fn asymmetric_split() {
        let sol = solve(&split(0.25, 0.75), &SolverOptions::default()).unwrap();
        let s = sol.s_star.unwrap();
        assert_close(s[0], 61.4285714, 1e-6);
        assert_close(s[1], 38.5714286, 1e-6);
        assert_close(sol.p_star[0], 32.5, 1e-6);
        assert_close(sol.p_star[1], 23.2142857, 1e-6);
    }

    #[test]
    fn zero_rationality_degenerates() {
        let sol = solve(&split(0.0, 0.0), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Degenerate);
        assert_eq!(sol.p_star, [0.0, 0.0]);
        assert_eq!(sol.s_star, Some([0.0, 0.0]));
        assert!(!sol.diagnostics.boundary_claim_mismatch);
    }

    #[test]
    fn one_sided_zero_still_agrees() {
        let sol = solve(&split(0.0, 1.0), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Agreement);
        assert_close(sol.p_star[0], 50.0, 1e-9);
        assert_close(sol.p_star[1], 25.0, 1e-9);
        assert!(sol.diagnostics.boundary_claim_mismatch);
    }

    #[test]
    fn unreachable_disagreement_point() {
        let g = split(1.0, 1.0)
            .with_disagreement(Disagreement::Payoffs([60.0, 60.0]))
            .unwrap();
        let sol = solve(&g, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Disagreement);
        assert_eq!(sol.s_star, None);
        assert_eq!(sol.p_star, [60.0, 60.0]);
        assert_eq!(sol.nash_product, 0.0);

        let g = split(1.0, 1.0)
            .with_disagreement(Disagreement::Threats([50.0, 50.0]))
            .unwrap();
        // the threat sits on the frontier, so nothing else dominates it
        let sol = solve(&g, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Degenerate);
        assert_eq!(sol.s_star, Some([50.0, 50.0]));

        // a flat edge through d: dominating points exist, none strictly
        let g = split(1.0, 1.0)
            .with_disagreement(Disagreement::Payoffs([0.0, 100.0]))
            .unwrap();
        assert_eq!(solve(&g, &SolverOptions::default()).unwrap().status, Status::Degenerate);
        let g = split(1.0, 1.0)
            .with_disagreement(Disagreement::Payoffs([-10.0, 100.0]))
            .unwrap();
        let sol = solve(&g, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Disagreement);
    }

    #[test]
    fn threat_point_shifts_solution() {
        // d = (20, 10): split the remaining 70 evenly on top of the threats
        let g = split(1.0, 1.0)
            .with_disagreement(Disagreement::Threats([20.0, 10.0]))
            .unwrap();
        let sol = solve(&g, &SolverOptions::default()).unwrap();
        let s = sol.s_star.unwrap();
        assert_close(s[0], 55.0, 1e-9);
        assert_close(s[1], 45.0, 1e-9);
    }

    #[test]
    fn raster_path_matches_affine_path() {
        let opts = SolverOptions {
            affine_fast_path: false,
            ..SolverOptions::default()
        };
        for (a, b) in [(1.0, 1.0), (0.25, 0.75), (0.6, 0.3)] {
            let g = split(a, b);
            let fast = solve(&g, &SolverOptions::default()).unwrap();
            let slow = solve(&g, &opts).unwrap();
            assert_eq!(slow.diagnostics.method, Method::RasterCompass);
            assert!(!slow.diagnostics.budget_exhausted);
            let (x, y) = (fast.s_star.unwrap(), slow.s_star.unwrap());
            assert_close(x[0], y[0], 1e-6);
            assert_close(x[1], y[1], 1e-6);
        }
        let slow = solve(&split(0.0, 0.0), &opts).unwrap();
        assert_eq!(slow.status, Status::Degenerate);
    }

    #[test]
    fn nonlinear_game() {
        // U1 = sqrt-like concave via min, U2 = s2; product maximized inside the budget edge
        let p1 = PlayerSpec::new(
            ValueExpr::parse("min(s1, 30)").unwrap(),
            ValueExpr::parse("s1").unwrap(),
            1.0,
        )
        .unwrap();
        let p2 = PlayerSpec::new(ValueExpr::parse("s2").unwrap(), ValueExpr::parse("s2").unwrap(), 1.0).unwrap();
        let g = GameSpec::new(p1, p2, FeasiblePolygon::budget(100.0).unwrap(), Disagreement::Payoffs([0.0, 0.0]))
            .unwrap();
        let sol = solve(&g, &SolverOptions::default()).unwrap();
        assert_eq!(sol.diagnostics.method, Method::RasterCompass);
        let s = sol.s_star.unwrap();
        // p1 = min(s1,30), p2 = s2 = 100 - s1 → max at s1 = 30 (kink), product 2100
        assert_close(s[0], 30.0, 1e-6);
        assert_close(sol.nash_product, 2100.0, 1e-4);
    }

    #[test]
    fn closed_form_values() {
        let sol = closed_form_example(1.0, 1.0, 100.0).unwrap();
        assert_eq!(sol.p_star, [50.0, 50.0]);
        assert_eq!(sol.s_star, Some([50.0, 50.0]));
        let sol = closed_form_example(0.5, 0.5, 100.0).unwrap();
        assert_close(sol.p_star[0], 25.0, 1e-12);
        assert_close(sol.s_star.unwrap()[0], 50.0, 1e-12);
        let sol = closed_form_example(0.25, 0.75, 100.0).unwrap();
        assert_close(sol.p_star[0], 32.5, 1e-9);
        assert_close(sol.p_star[1], 23.2142857, 1e-7);
        assert_close(sol.s_star.unwrap()[0], 61.4285714, 1e-7);
        assert_close(sol.s_star.unwrap()[1], 38.5714286, 1e-7);
        assert!(matches!(closed_form_example(0.0, 1.0, 100.0), Err(SolverError::Domain(_))));
        assert!(closed_form_example(0.5, 1.2, 100.0).is_err());
        assert!(closed_form_example(0.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn stationarity_checks() {
        let g = split(1.0, 1.0);
        assert!(stationarity_residual_at(&g, [50.0, 50.0]).unwrap() <= 1e-6);
        assert!(stationarity_residual_at(&g, [60.0, 40.0]).unwrap() > 1e-3);
        assert!(matches!(
            stationarity_residual_at(&g, [100.0, 0.0]),
            Err(SolverError::VertexOptimal)
        ));
        assert!(stationarity_residual_at(&g, [20.0, 20.0]).is_err());
        let g = split(0.25, 0.75);
        let cf = closed_form_example(0.25, 0.75, 100.0).unwrap();
        assert!(stationarity_residual(&g, &cf).unwrap() <= 1e-6);
    }

    #[test]
    fn option_validation() {
        let bad = SolverOptions {
            grid_resolution: 8,
            ..SolverOptions::default()
        };
        assert!(solve(&split(1.0, 1.0), &bad).is_err());
        let bad = SolverOptions {
            refinement_tolerance: Some(0.0),
            ..SolverOptions::default()
        };
        assert!(bad.validate().is_err());
    }
}
