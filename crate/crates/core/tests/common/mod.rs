#![allow(dead_code)]

use delta_nash::expr::ValueExpr;
use delta_nash::geometry::FeasiblePolygon;
use delta_nash::model::{Disagreement, GameSpec, PlayerSpec};

/// Profit-split solution written out from the closed-form expressions, valid for
/// `0 < δ1, δ2 <= 1`. Returns `(s1, s2, p1, p2)` over a budget of 100.
pub fn closed_form_split(d1: f64, d2: f64) -> [f64; 4] {
    let k = 50.0 * (d1 + d2 - d1 * d2);
    let p1 = k / (2.0 - d2);
    let p2 = k / (2.0 - d1);
    let s1 = 100.0 * (1.0 - d1) / (2.0 - d1) + k / ((2.0 - d1) * (2.0 - d2));
    let s2 = 100.0 * (1.0 - d2) / (2.0 - d2) + k / ((2.0 - d1) * (2.0 - d2));
    [s1, s2, p1, p2]
}

/// `{0.1, 0.2, …, 1.0}` built by division so 0.3 is the literal 0.3.
pub fn tenths() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 10.0).collect()
}

pub fn expr(text: &str) -> ValueExpr {
    ValueExpr::parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// `c[0]·s1 + c[1]·s2 + c[2]` as source text.
pub fn affine_text(c: [f64; 3]) -> String {
    format!("{:?} * s1 + {:?} * s2 + {:?}", c[0], c[1], c[2])
}

/// Two players with affine U and D over the budget-100 simplex.
pub fn affine_game(u: [[f64; 3]; 2], d: [[f64; 3]; 2], deltas: [f64; 2], dis: Disagreement) -> GameSpec {
    let p = |i: usize| PlayerSpec::new(expr(&affine_text(u[i])), expr(&affine_text(d[i])), deltas[i]).unwrap();
    GameSpec::new(p(0), p(1), FeasiblePolygon::budget(100.0).unwrap(), dis).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub mod checks;
