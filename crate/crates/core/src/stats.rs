//! Compensated sums and sample estimates.

use serde::{Deserialize, Serialize};

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// A sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_moments(sum: f64, sum_sq: f64, samples: u64) -> Estimate {
        if samples == 0 {
            return Estimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples,
            };
        }
        let t = samples as f64;
        let mean = sum / t;
        let stderr = if samples > 1 {
            let var = ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0);
            (var / t).sqrt()
        } else {
            0.0
        };
        Estimate { mean, stderr, samples }
    }

    pub fn from_samples(xs: &[f64]) -> Estimate {
        let sum: Neumaier = xs.iter().copied().collect();
        let sum_sq: Neumaier = xs.iter().map(|x| x * x).collect();
        Estimate::from_moments(sum.value(), sum_sq.value(), xs.len() as u64)
    }

    /// Proportion of successes among `trials`, with the binomial standard error.
    pub fn proportion(successes: u64, trials: u64) -> Estimate {
        if trials == 0 {
            return Estimate::from_moments(0.0, 0.0, 0);
        }
        let t = trials as f64;
        let mean = successes as f64 / t;
        Estimate {
            mean,
            stderr: (mean * (1.0 - mean) / t).sqrt(),
            samples: trials,
        }
    }
}
