use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::distribution::{sample_delta, DeltaDistribution, DistributionError};
use crate::model::GameTemplate;
use crate::solver::{solve, Solution, SolverOptions, Status};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonteCarloError {
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub index: u64,
    pub deltas: [f64; 2],
    pub outcome: Result<Solution, String>,
}

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor n − 1); 0 for a single value.
    pub sd: f64,
    /// At [`QUANTILE_LEVELS`], linear interpolation between order statistics.
    pub quantiles: [f64; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub sample_count: u64,
    pub seed: u64,
    pub rows: Vec<SampleRow>,
    /// Named quantities in fixed order; quantities with no values are omitted.
    pub summaries: Vec<(&'static str, Summary)>,
    pub failed: usize,
    /// Share of successful samples whose status is not agreement.
    pub disagreement_rate: f64,
}

/// Generator for sample `index`: same seed, stream selected by the index.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quantiles = QUANTILE_LEVELS.map(|p| {
        let h = (n - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(n - 1);
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    });
    Some(Summary {
        count: n,
        mean,
        sd,
        quantiles,
    })
}

type Extract = fn(&SampleRow, &Solution) -> Option<f64>;

const QUANTITIES: [(&str, Extract); 8] = [
    ("delta1", |r, _| Some(r.deltas[0])),
    ("delta2", |r, _| Some(r.deltas[1])),
    ("s1_star", |_, s| s.s_star.map(|v| v[0])),
    ("s2_star", |_, s| s.s_star.map(|v| v[1])),
    ("p1_star", |_, s| Some(s.p_star[0])),
    ("p2_star", |_, s| Some(s.p_star[1])),
    ("u1_star", |_, s| s.u_star.map(|v| v[0])),
    ("u2_star", |_, s| s.u_star.map(|v| v[1])),
];

pub fn monte_carlo(
    template: &GameTemplate,
    dist1: &DeltaDistribution,
    dist2: &DeltaDistribution,
    n: u64,
    seed: u64,
    options: &SolverOptions,
) -> Result<MonteCarloReport, MonteCarloError> {
    if n == 0 {
        return Err(MonteCarloError::NoSamples);
    }
    dist1.validate()?;
    dist2.validate()?;

    let rows: Vec<SampleRow> = (0..n)
        .into_par_iter()
        .map(|index| {
            let mut stream = sample_stream(seed, index);
            let d1 = sample_delta(dist1, &mut stream);
            let d2 = sample_delta(dist2, &mut stream);
            let outcome = template
                .with_deltas(d1, d2)
                .map_err(|e| e.to_string())
                .and_then(|g| solve(&g, options).map_err(|e| e.to_string()));
            SampleRow {
                index,
                deltas: [d1, d2],
                outcome,
            }
        })
        .collect();

    let ok: Vec<(&SampleRow, &Solution)> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|s| (r, s)))
        .collect();
    let failed = rows.len() - ok.len();
    let summaries = QUANTITIES
        .iter()
        .filter_map(|(name, f)| {
            let values: Vec<f64> = ok.iter().filter_map(|(r, s)| f(r, s)).collect();
            summarize(&values).map(|s| (*name, s))
        })
        .collect();
    let disagreement_rate = if ok.is_empty() {
        f64::NAN
    } else {
        ok.iter().filter(|(_, s)| s.status != Status::Agreement).count() as f64 / ok.len() as f64
    };

    Ok(MonteCarloReport {
        sample_count: n,
        seed,
        rows,
        summaries,
        failed,
        disagreement_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GameSpec;

    fn template() -> GameTemplate {
        GameSpec::profit_split(100.0, 1.0, 1.0).unwrap().template()
    }

    #[test]
    fn point_masses() {
        let opts = SolverOptions::default();
        let one = DeltaDistribution::Point(1.0);
        let r = monte_carlo(&template(), &one, &one, 10, 3, &opts).unwrap();
        assert_eq!(r.rows.len(), 10);
        for row in &r.rows {
            let p = row.outcome.as_ref().unwrap().p_star;
            assert!((p[0] - 50.0).abs() < 1e-9 && (p[1] - 50.0).abs() < 1e-9);
        }
        for (_, s) in &r.summaries {
            assert!(s.sd < 1e-9);
        }
        assert_eq!(r.disagreement_rate, 0.0);

        let zero = DeltaDistribution::Point(0.0);
        let r = monte_carlo(&template(), &zero, &zero, 5, 3, &opts).unwrap();
        assert_eq!(r.disagreement_rate, 1.0);
        assert_eq!(r.failed, 0);
    }

    #[test]
    fn rejects_bad_input() {
        let opts = SolverOptions::default();
        let one = DeltaDistribution::Point(1.0);
        assert_eq!(monte_carlo(&template(), &one, &one, 0, 0, &opts), Err(MonteCarloError::NoSamples));
        let bad = DeltaDistribution::Uniform { low: 0.5, high: 0.2 };
        assert!(monte_carlo(&template(), &bad, &one, 3, 0, &opts).is_err());
    }

    #[test]
    fn independent_of_thread_count() {
        let opts = SolverOptions::default();
        let b = DeltaDistribution::Beta { alpha: 2.0, beta: 2.0 };
        let base = monte_carlo(&template(), &b, &b, 200, 42, &opts).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = single.install(|| monte_carlo(&template(), &b, &b, 200, 42, &opts).unwrap());
        assert_eq!(base, serial);
        let other = monte_carlo(&template(), &b, &b, 200, 43, &opts).unwrap();
        assert_ne!(base.rows[0].deltas, other.rows[0].deltas);
    }

    #[test]
    fn quantiles_interpolate() {
        let s = summarize(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!(s.mean, 3.0);
        assert!((s.sd - 2.5f64.sqrt()).abs() < 1e-15);
        for (q, want) in s.quantiles.iter().zip([1.2, 2.0, 3.0, 4.0, 4.8]) {
            assert!((q - want).abs() < 1e-12);
        }
        assert_eq!(summarize(&[7.0]).unwrap().quantiles, [7.0; 5]);
        assert!(summarize(&[]).is_none());
    }
}
