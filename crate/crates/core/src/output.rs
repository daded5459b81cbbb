//! CSV rendering. Numbers use nine significant digits in the style of C's
//! `%.9g`, always with `.` as the decimal point.

use std::fmt::Write;

use crate::analysis::{MonteCarloReport, SweepTable, WelfareReport};
use crate::demand::DemandGameTranscript;
use crate::geometry::BargainingSet;
use crate::solver::Solution;

pub const SOLUTION_HEADER: &str = "delta1,delta2,s1_star,s2_star,p1_star,p2_star,u1_star,u2_star,nash_product,status";
pub const SWEEP_HEADER: &str = "delta1,delta2,s1_star,s2_star,p1_star,p2_star,u1_star,u2_star,bargaining_area,status";
pub const MONTE_CARLO_HEADER: &str = "index,delta1,delta2,s1_star,s2_star,p1_star,p2_star,u1_star,u2_star,status";
pub const SUMMARY_HEADER: &str = "# quantity,count,mean,sd,q05,q25,q50,q75,q95";
pub const BARGAINING_SET_HEADER: &str = "s1,s2,p1,p2";
pub const TRANSCRIPT_HEADER: &str = "t_payoff1,t_payoff2,q1,q2,compatible,final1,final2";
pub const WELFARE_HEADER: &str =
    "player,delta,s1,s2,behavioral_payoff,rational_value,distortion_value,decomposition_residual,welfare_gap";

/// Formats `x` like `%.9g`: nine significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 <= |x| < 1e9`. Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        strip_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa.to_string()), exp.abs())
    }
}

fn strip_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn join(fields: &[String]) -> String {
    fields.join(",")
}

fn solution_fields(sol: &Solution) -> [String; 6] {
    [
        opt(sol.s_star.map(|s| s[0])),
        opt(sol.s_star.map(|s| s[1])),
        fmt_num(sol.p_star[0]),
        fmt_num(sol.p_star[1]),
        opt(sol.u_star.map(|u| u[0])),
        opt(sol.u_star.map(|u| u[1])),
    ]
}

pub fn solution_row(sol: &Solution) -> String {
    let mut fields = vec![fmt_num(sol.deltas[0]), fmt_num(sol.deltas[1])];
    fields.extend(solution_fields(sol));
    fields.push(fmt_num(sol.nash_product));
    fields.push(sol.status.as_str().into());
    join(&fields)
}

pub fn solution_csv(sol: &Solution) -> String {
    format!("{SOLUTION_HEADER}\n{}\n", solution_row(sol))
}

/// Failed rows keep their deltas, leave numbers empty and read `failed`.
pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for row in &table.rows {
        let mut fields = vec![fmt_num(row.deltas[0]), fmt_num(row.deltas[1])];
        match &row.outcome {
            Ok(sol) => {
                fields.extend(solution_fields(sol));
                fields.push(opt(row.bargaining_area));
                fields.push(sol.status.as_str().into());
            }
            Err(_) => {
                fields.extend(std::iter::repeat_n(String::new(), 7));
                fields.push("failed".into());
            }
        }
        out.push_str(&join(&fields));
        out.push('\n');
    }
    out
}

pub fn monte_carlo_csv(report: &MonteCarloReport) -> String {
    let mut out = format!("{MONTE_CARLO_HEADER}\n");
    for row in &report.rows {
        let mut fields = vec![row.index.to_string(), fmt_num(row.deltas[0]), fmt_num(row.deltas[1])];
        match &row.outcome {
            Ok(sol) => {
                fields.extend(solution_fields(sol));
                fields.push(sol.status.as_str().into());
            }
            Err(_) => {
                fields.extend(std::iter::repeat_n(String::new(), 6));
                fields.push("failed".into());
            }
        }
        out.push_str(&join(&fields));
        out.push('\n');
    }
    let _ = writeln!(out, "# sample_count={}", report.sample_count);
    let _ = writeln!(out, "# seed={}", report.seed);
    let _ = writeln!(out, "# failed={}", report.failed);
    let _ = writeln!(out, "# disagreement_rate={}", fmt_num(report.disagreement_rate));
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for (name, s) in &report.summaries {
        let mut fields = vec![format!("# {name}"), s.count.to_string(), fmt_num(s.mean), fmt_num(s.sd)];
        fields.extend(s.quantiles.iter().map(|&q| fmt_num(q)));
        out.push_str(&join(&fields));
        out.push('\n');
    }
    out
}

/// Raster members in row-major order, then `# area=`, `# exact=` and
/// `# degenerate=` lines.
pub fn bargaining_set_csv(set: &BargainingSet) -> String {
    let mut out = format!("{BARGAINING_SET_HEADER}\n");
    for p in &set.members.points {
        let _ = writeln!(out, "{},{},{},{}", fmt_num(p.s1), fmt_num(p.s2), fmt_num(p.p1), fmt_num(p.p2));
    }
    let _ = writeln!(out, "# area={}", fmt_num(set.area));
    let _ = writeln!(out, "# exact={}", set.is_exact());
    let _ = writeln!(out, "# degenerate={}", set.is_degenerate);
    out
}

pub fn transcript_csv(t: &DemandGameTranscript) -> String {
    let fields = [
        fmt_num(t.threat_payoffs[0]),
        fmt_num(t.threat_payoffs[1]),
        fmt_num(t.demands[0]),
        fmt_num(t.demands[1]),
        t.compatible.to_string(),
        fmt_num(t.final_payoffs[0]),
        fmt_num(t.final_payoffs[1]),
    ];
    format!("{TRANSCRIPT_HEADER}\n{}\n", join(&fields))
}

pub fn welfare_csv(report: &WelfareReport) -> String {
    let mut out = format!("{WELFARE_HEADER}\n");
    for (i, w) in report.players.iter().enumerate() {
        let fields = [
            (i + 1).to_string(),
            fmt_num(report.deltas[i]),
            fmt_num(report.allocation[0]),
            fmt_num(report.allocation[1]),
            fmt_num(w.behavioral_payoff),
            fmt_num(w.rational_value),
            fmt_num(w.distortion_value),
            fmt_num(w.decomposition_residual),
            fmt_num(w.welfare_gap),
        ];
        out.push_str(&join(&fields));
        out.push('\n');
    }
    out
}
