use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

/// Distribution of a rationality index, supported on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaDistribution {
    Point(f64),
    Uniform { low: f64, high: f64 },
    /// Gaussian restricted and renormalized to `[0, 1]`.
    TruncatedGaussian { mu: f64, sigma: f64 },
    Beta { alpha: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid delta distribution: {0}")]
pub struct DistributionError(pub String);

impl DeltaDistribution {
    pub fn validate(&self) -> Result<(), DistributionError> {
        let ok = match *self {
            DeltaDistribution::Point(v) => (0.0..=1.0).contains(&v),
            DeltaDistribution::Uniform { low, high } => 0.0 <= low && low <= high && high <= 1.0,
            DeltaDistribution::TruncatedGaussian { mu, sigma } => mu.is_finite() && sigma > 0.0 && sigma.is_finite(),
            DeltaDistribution::Beta { alpha, beta } => {
                alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(DistributionError(format!("{self:?}")))
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DeltaDistribution::Point(_) => "point",
            DeltaDistribution::Uniform { .. } => "uniform",
            DeltaDistribution::TruncatedGaussian { .. } => "truncated_gaussian",
            DeltaDistribution::Beta { .. } => "beta",
        }
    }
}

/// Inverse CDF of `N(mu, sigma)` truncated to `[0, 1]`, evaluated at `u`.
pub fn truncated_gaussian_quantile(mu: f64, sigma: f64, u: f64) -> f64 {
    // Reflect so the mean sits in the lower half; the upper standardized
    // bound is then positive and the CDF difference cannot underflow.
    if mu > 0.5 {
        return 1.0 - truncated_gaussian_quantile(1.0 - mu, sigma, 1.0 - u);
    }
    let std = Normal::standard();
    let lo = std.cdf((0.0 - mu) / sigma);
    let hi = std.cdf((1.0 - mu) / sigma);
    let z = std.inverse_cdf(lo + u * (hi - lo));
    (mu + sigma * z).clamp(0.0, 1.0)
}

/// Draws one index. Every random number comes from `stream`.
pub fn sample_delta<R: RngCore + ?Sized>(dist: &DeltaDistribution, stream: &mut R) -> f64 {
    match *dist {
        DeltaDistribution::Point(v) => v,
        DeltaDistribution::Uniform { low, high } => {
            let u: f64 = stream.random();
            low + (high - low) * u
        }
        DeltaDistribution::TruncatedGaussian { mu, sigma } => {
            let u: f64 = stream.random();
            truncated_gaussian_quantile(mu, sigma, u)
        }
        DeltaDistribution::Beta { alpha, beta } => {
            let x = Gamma::new(alpha, 1.0).expect("validated shape").sample(stream);
            let y = Gamma::new(beta, 1.0).expect("validated shape").sample(stream);
            if x + y > 0.0 {
                (x / (x + y)).clamp(0.0, 1.0)
            } else {
                0.5
            }
        }
    }
}
