//! Binomial confidence intervals and seeded per-sample RNG streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

/// Two-sided Clopper-Pearson interval for `successes` out of `trials`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialInterval {
    pub low: f64,
    pub high: f64,
}

impl BinomialInterval {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.high - self.low)
    }
}

pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> BinomialInterval {
    assert!(trials > 0, "interval needs at least one trial");
    assert!(successes <= trials);
    assert!(confidence > 0.0 && confidence < 1.0);
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("shape parameters are positive")
            .inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("shape parameters are positive")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    BinomialInterval { low, high }
}

/// The RNG for sample `index` of a run seeded with `seed`. Streams are
/// independent of evaluation order, so samples may be drawn in parallel.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
