//! Brute-force check of the profit-split game when one player's index is 0.
//!
//! Enumerates every allocation on a 0.05 grid of the budget-100 simplex,
//! keeps those whose payoffs dominate (0, 0), and reports the largest Nash
//! product next to the solver's answer.
//!
//!     cargo run --release -p delta-nash --example boundary_audit

use delta_nash::model::GameSpec;
use delta_nash::output::fmt_num;
use delta_nash::solver::{solve, SolverOptions};

const STEP: f64 = 0.05;

fn brute_force(d1: f64, d2: f64) -> Option<([f64; 2], [f64; 2], f64)> {
    let n = (100.0 / STEP).round() as usize;
    let mut best: Option<([f64; 2], [f64; 2], f64)> = None;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (s1, s2) = (i as f64 * STEP, j as f64 * STEP);
            // written out by hand so the audit does not lean on the library
            let p1 = d1 * s1 + (1.0 - d1) * (s1 - s2);
            let p2 = d2 * s2 + (1.0 - d2) * (s2 - s1);
            if p1 < 0.0 || p2 < 0.0 {
                continue;
            }
            if best.is_none_or(|(_, _, v)| p1 * p2 > v) {
                best = Some(([s1, s2], [p1, p2], p1 * p2));
            }
        }
    }
    best
}

fn main() {
    println!("delta1,delta2,method,s1,s2,p1,p2,nash_product,status,boundary_claim_mismatch");
    for (d1, d2) in [(0.0, 1.0), (1.0, 0.0), (0.0, 0.5), (0.0, 0.0)] {
        let (s, p, v) = brute_force(d1, d2).expect("the origin always qualifies");
        let row = |v: &[f64]| v.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",");
        println!("{d1},{d2},grid,{},,", row(&[s[0], s[1], p[0], p[1], v]));
        let game = GameSpec::profit_split(100.0, d1, d2).expect("valid indices");
        let sol = solve(&game, &SolverOptions::default()).expect("solvable");
        let s = sol.s_star.unwrap_or([f64::NAN; 2]);
        println!(
            "{d1},{d2},solver,{},{},{}",
            row(&[s[0], s[1], sol.p_star[0], sol.p_star[1], sol.nash_product]),
            sol.status,
            sol.diagnostics.boundary_claim_mismatch
        );
    }
}
