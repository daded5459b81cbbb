use rayon::prelude::*;
use thiserror::Error;

use super::polygon::{clip_half_plane, convex_hull, efficient_chain, polygon_area, Point};
use crate::expr::{Affine, EvalError};
use crate::model::GameSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImageError {
    #[error("resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffPoint {
    pub s1: f64,
    pub s2: f64,
    pub p1: f64,
    pub p2: f64,
}

/// Feasible raster points with their payoffs, in row-major order
/// (`s1` index outer, `s2` index inner).
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffPointCloud {
    pub points: Vec<PayoffPoint>,
    pub resolution: usize,
}

fn raster_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Rasterizes the outcome polygon on a `resolution × resolution` grid over
/// its bounding box and attaches both payoffs to every feasible node.
pub fn payoff_image(game: &GameSpec, resolution: usize) -> Result<PayoffPointCloud, ImageError> {
    if resolution < 2 {
        return Err(ImageError::Resolution(resolution));
    }
    let poly = game.outcome_space();
    let (lo, hi) = poly.bounding_box();
    let xs = raster_axis(lo[0], hi[0], resolution);
    let ys = raster_axis(lo[1], hi[1], resolution);
    let rows: Result<Vec<Vec<PayoffPoint>>, EvalError> = xs
        .par_iter()
        .map(|&s1| {
            let mut row = Vec::new();
            for &s2 in &ys {
                if poly.contains([s1, s2]) {
                    let [p1, p2] = game.payoffs(s1, s2)?;
                    row.push(PayoffPoint { s1, s2, p1, p2 });
                }
            }
            Ok(row)
        })
        .collect();
    Ok(PayoffPointCloud {
        points: rows?.into_iter().flatten().collect(),
        resolution,
    })
}

/// Outcome-space region where both affine payoffs are at least `floor - slack`.
pub(crate) fn dominance_region(vertices: &[Point], forms: &[Affine; 2], floor: [f64; 2], slack: f64) -> Vec<Point> {
    let mut region = vertices.to_vec();
    for (form, d) in forms.iter().zip(floor) {
        // c + a·s >= d - slack  <=>  -a·s <= c - d + slack
        region = clip_half_plane(&region, -form.coef_s1, -form.coef_s2, form.constant - d + slack);
    }
    region
}

fn image(forms: &[Affine; 2], s: Point) -> Point {
    [forms[0].eval(s[0], s[1]), forms[1].eval(s[0], s[1])]
}

/// True when the ε-slack dominance region is nonempty and maps entirely
/// onto (a tolerance ball around) the disagreement point.
pub(crate) fn affine_collapses_to(forms: &[Affine; 2], slack_region: &[Point], d: [f64; 2], eps: f64) -> bool {
    let gain = forms
        .iter()
        .fold(1.0_f64, |m, f| m.max(f.coef_s1.abs()).max(f.coef_s2.abs()));
    let tol = 4.0 * eps * gain;
    !slack_region.is_empty()
        && slack_region.iter().all(|&s| {
            let p = image(forms, s);
            (p[0] - d[0]).abs() <= tol && (p[1] - d[1]).abs() <= tol
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargainingSet {
    pub disagreement: [f64; 2],
    /// Raster points weakly dominating the disagreement point.
    pub members: PayoffPointCloud,
    /// Exact payoff-space boundary (counterclockwise); affine payoffs only.
    pub boundary: Option<Vec<Point>>,
    /// Payoff-space area: exact when `boundary` is set, else a counted-cell estimate.
    pub area: f64,
    /// Non-dominated payoff points ordered by increasing `p1`.
    pub pareto_frontier: Vec<Point>,
    pub is_degenerate: bool,
}

impl BargainingSet {
    pub fn is_exact(&self) -> bool {
        self.boundary.is_some()
    }
}

pub fn bargaining_set(game: &GameSpec, resolution: usize) -> Result<BargainingSet, ImageError> {
    let d = game.disagreement_payoffs()?;
    let poly = game.outcome_space();
    let eps = poly.tolerance();
    let cloud = payoff_image(game, resolution)?;
    let members = PayoffPointCloud {
        points: cloud
            .points
            .into_iter()
            .filter(|p| p.p1 >= d[0] - eps && p.p2 >= d[1] - eps)
            .collect(),
        resolution,
    };
    let near_d = |p: Point, tol: f64| (p[0] - d[0]).abs() <= tol && (p[1] - d[1]).abs() <= tol;

    if let Some(forms) = game.affine_payoffs() {
        let exact = dominance_region(poly.vertices(), &forms, d, 0.0);
        let slack = dominance_region(poly.vertices(), &forms, d, eps);
        let is_degenerate = affine_collapses_to(&forms, &slack, d, eps);
        let boundary = convex_hull(
            &exact.iter().map(|&s| image(&forms, s)).collect::<Vec<_>>(),
            eps,
        );
        let area = if is_degenerate { 0.0 } else { polygon_area(&boundary) };
        let pareto_frontier = if is_degenerate {
            vec![d]
        } else {
            efficient_chain(&boundary)
        };
        return Ok(BargainingSet {
            disagreement: d,
            members,
            boundary: Some(boundary),
            area,
            pareto_frontier,
            is_degenerate,
        });
    }

    let is_degenerate =
        !members.points.is_empty() && members.points.iter().all(|p| near_d([p.p1, p.p2], eps));
    let area = if is_degenerate {
        0.0
    } else {
        counted_cell_area(game, d, resolution)?
    };
    let pareto_frontier = raster_frontier(&members.points);
    Ok(BargainingSet {
        disagreement: d,
        members,
        boundary: None,
        area,
        pareto_frontier,
        is_degenerate,
    })
}

/// Bargaining-set area and degeneracy flag. The affine case is exact and
/// skips the raster entirely.
pub fn bargaining_area(game: &GameSpec, resolution: usize) -> Result<(f64, bool), ImageError> {
    if let Some(forms) = game.affine_payoffs() {
        let d = game.disagreement_payoffs()?;
        let poly = game.outcome_space();
        let eps = poly.tolerance();
        let slack = dominance_region(poly.vertices(), &forms, d, eps);
        if affine_collapses_to(&forms, &slack, d, eps) {
            return Ok((0.0, true));
        }
        let exact = dominance_region(poly.vertices(), &forms, d, 0.0);
        let boundary = convex_hull(&exact.iter().map(|&s| image(&forms, s)).collect::<Vec<_>>(), eps);
        return Ok((polygon_area(&boundary), false));
    }
    let set = bargaining_set(game, resolution)?;
    Ok((set.area, set.is_degenerate))
}

fn raster_frontier(points: &[PayoffPoint]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.iter().map(|p| [p.p1, p.p2]).collect();
    pts.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
    let mut frontier: Vec<Point> = Vec::new();
    let mut best_p2 = f64::NEG_INFINITY;
    for p in pts {
        if p[1] > best_p2 {
            best_p2 = p[1];
            frontier.push(p);
        }
    }
    frontier.reverse();
    frontier
}

/// Payoff-space area of the dominance set estimated on `resolution²` cells:
/// each cell whose centre is feasible and dominating contributes its area
/// times the local Jacobian determinant of the payoff map.
pub fn counted_cell_area(game: &GameSpec, d: [f64; 2], resolution: usize) -> Result<f64, ImageError> {
    if resolution < 2 {
        return Err(ImageError::Resolution(resolution));
    }
    let poly = game.outcome_space();
    let eps = poly.tolerance();
    let (lo, hi) = poly.bounding_box();
    let (wx, wy) = ((hi[0] - lo[0]) / resolution as f64, (hi[1] - lo[1]) / resolution as f64);
    let h = 1e-6 * poly.scale();
    let row_sums: Result<Vec<f64>, EvalError> = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let s1 = lo[0] + (i as f64 + 0.5) * wx;
            let mut acc = 0.0;
            for j in 0..resolution {
                let s2 = lo[1] + (j as f64 + 0.5) * wy;
                if !poly.contains([s1, s2]) {
                    continue;
                }
                let p = game.payoffs(s1, s2)?;
                if p[0] < d[0] - eps || p[1] < d[1] - eps {
                    continue;
                }
                let (px, mx) = (game.payoffs(s1 + h, s2)?, game.payoffs(s1 - h, s2)?);
                let (py, my) = (game.payoffs(s1, s2 + h)?, game.payoffs(s1, s2 - h)?);
                let j11 = (px[0] - mx[0]) / (2.0 * h);
                let j21 = (px[1] - mx[1]) / (2.0 * h);
                let j12 = (py[0] - my[0]) / (2.0 * h);
                let j22 = (py[1] - my[1]) / (2.0 * h);
                acc += (j11 * j22 - j12 * j21).abs();
            }
            Ok(acc)
        })
        .collect();
    Ok(row_sums?.into_iter().sum::<f64>() * wx * wy)
}
