//! Monte Carlo uncertainties under Poissonian counting statistics.
//!
//! Sample `i` resamples every count `c` as an independent `Poisson(c)` draw
//! from the ChaCha stream `(seed, i)`. Samples run in parallel and are
//! reduced in index order, so the result does not depend on thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcka::{ResourceCounts, Statistic};

pub const MIN_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub point_estimate: f64,
    pub mean: f64,
    /// Sample standard deviation over accepted resamples.
    pub std: f64,
    pub n_samples: usize,
    /// Resamples on which the statistic was undefined.
    pub rejected: usize,
    pub seed: u64,
}

fn poisson(c: u64, rng: &mut ChaCha8Rng) -> u64 {
    if c == 0 {
        0
    } else {
        Poisson::new(c as f64).expect("positive mean").sample(rng) as u64
    }
}

/// Every count of every batch replaced by a Poisson draw.
pub fn resample(resources: &[ResourceCounts], rng: &mut ChaCha8Rng) -> Vec<ResourceCounts> {
    resources
        .iter()
        .map(|r| ResourceCounts {
            kind: r.kind.clone(),
            copy: r.copy,
            type1: r.type1.map_counts(|c| poisson(c, rng)),
            type2: r.type2.map_counts(|c| poisson(c, rng)),
        })
        .collect()
}

/// Welford accumulator.
#[derive(Clone, Copy, Debug, Default)]
struct Running {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn std(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).sqrt()
        }
    }
}

pub fn poisson_mc(
    resources: &[ResourceCounts],
    statistic: Statistic,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloResult> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_SAMPLES} Monte Carlo samples are required"
        )));
    }
    let tallies: Vec<_> = resources.iter().map(ResourceCounts::tallies).collect();
    let point_estimate = statistic.evaluate(&tallies).ok_or_else(|| {
        Error::MissingSetting(format!("{statistic} is undefined on the observed counts"))
    })?;
    let values: Vec<Option<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let sample = resample(resources, &mut rng);
            let t: Vec<_> = sample.iter().map(ResourceCounts::tallies).collect();
            statistic.evaluate(&t).filter(|v| v.is_finite())
        })
        .collect();
    let mut acc = Running::default();
    for v in values.iter().flatten() {
        acc.push(*v);
    }
    if acc.n == 0 {
        return Err(Error::InvalidArgument(format!(
            "{statistic} is undefined on every resample"
        )));
    }
    Ok(MonteCarloResult {
        point_estimate,
        mean: acc.mean,
        std: acc.std(),
        n_samples,
        rejected: n_samples - acc.n,
        seed,
    })
}
