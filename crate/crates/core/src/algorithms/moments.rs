//! Monte-Carlo check of the coefficients in `x' = A x + B y` with
//! `B ~ U[0, 2)` and `A = 1 - B`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimates {
    pub samples: u64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub mean_ab: f64,
}

impl MomentEstimates {
    /// Exact values of the five moments.
    pub const TARGET: [f64; 5] = [0.0, 1.0, 1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0];

    pub fn as_array(&self) -> [f64; 5] {
        [self.mean_a, self.mean_b, self.var_a, self.var_b, self.mean_ab]
    }

    /// Largest absolute deviation from [`Self::TARGET`].
    pub fn max_error(&self) -> f64 {
        self.as_array()
            .iter()
            .zip(Self::TARGET)
            .map(|(e, t)| (e - t).abs())
            .fold(0.0, f64::max)
    }
}

/// Estimates the moments from `samples` draws; variances divide by the sample count.
pub fn sample_moments(samples: u64, rng: &mut RngStream) -> Result<MomentEstimates> {
    if samples == 0 {
        return Err(Error::config("need at least one sample"));
    }
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..samples {
        let u = rng.uniform(0.0, 2.0);
        let (a, b) = (1.0 - u, u);
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    let n = samples as f64;
    let (mean_a, mean_b) = (sa / n, sb / n);
    Ok(MomentEstimates {
        samples,
        mean_a,
        mean_b,
        var_a: (saa / n - mean_a * mean_a).max(0.0),
        var_b: (sbb / n - mean_b * mean_b).max(0.0),
        mean_ab: sab / n,
    })
}
