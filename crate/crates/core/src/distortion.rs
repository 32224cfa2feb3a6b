//! Monte Carlo estimates of how often an embedding distorts squared norms.
//!
//! A sample `x` fails when `‖embed(x)‖² ∉ (1 - ε, 1 + ε) · ‖x‖²`. Estimates
//! are per instance: the transform is fixed and inputs are drawn from a
//! distribution. The literal "probability over A for fixed x" sweep lives in
//! [`crate::harness::over_a_failure_sweep`].

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::{clopper_pearson, sample_rng};
use crate::transforms::{TransformError, TransformInstance};

pub const CONFIDENCE: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistortionError {
    #[error("sample count must be positive")]
    NoSamples,
    #[error("{name} must lie strictly inside (0, 1), got {value}")]
    OutOfUnitInterval { name: &'static str, value: f64 },
    #[error("sparse_k support size must lie in 1..={d}, got {k}")]
    InvalidSupport { k: usize, d: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("point {index} has length {actual}, expected {expected}")]
    PointLength { index: usize, expected: usize, actual: usize },
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDistribution {
    /// i.i.d. standard normal coordinates.
    Gaussian,
    /// A uniformly random standard basis vector.
    BasisVectors,
    /// `k` distinct random coordinates with N(0,1) values, normalized.
    SparseK { k: usize },
}

impl InputDistribution {
    /// Draws one nonzero input of length `d`.
    pub fn draw(&self, d: usize, rng: &mut impl Rng) -> Vec<f64> {
        loop {
            let x = match *self {
                InputDistribution::Gaussian => (0..d).map(|_| rng.sample(StandardNormal)).collect(),
                InputDistribution::BasisVectors => {
                    let mut x = vec![0.0; d];
                    x[rng.random_range(0..d)] = 1.0;
                    x
                }
                InputDistribution::SparseK { k } => {
                    let mut x = vec![0.0; d];
                    for i in rand::seq::index::sample(rng, d, k) {
                        x[i] = rng.sample(StandardNormal);
                    }
                    let norm = norm_sq(&x).sqrt();
                    if norm > 0.0 {
                        x.iter_mut().for_each(|v| *v /= norm);
                    }
                    x
                }
            };
            if norm_sq(&x) > 0.0 {
                return x;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionParams {
    pub epsilon: f64,
    pub delta: f64,
    pub sample_count: u64,
    pub input: InputDistribution,
    pub seed: u64,
}

impl DistortionParams {
    pub fn validate(&self) -> Result<(), DistortionError> {
        check_open_unit("epsilon", self.epsilon)?;
        check_open_unit("delta", self.delta)?;
        if self.sample_count == 0 {
            return Err(DistortionError::NoSamples);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub failures: u64,
    pub sample_count: u64,
    pub failure_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Half the width of the 95% Clopper-Pearson interval.
    pub half_width: f64,
    pub params: DistortionParams,
}

fn check_open_unit(name: &'static str, value: f64) -> Result<(), DistortionError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(DistortionError::OutOfUnitInterval { name, value })
    }
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Whether `‖y‖² / ‖x‖²` lies in the open interval `(1 - ε, 1 + ε)`.
pub fn squared_norm_preserved(x_norm_sq: f64, y_norm_sq: f64, epsilon: f64) -> bool {
    let ratio = y_norm_sq / x_norm_sq;
    ratio > 1.0 - epsilon && ratio < 1.0 + epsilon
}

/// Whether `instance` preserves the squared norm of the nonzero vector `x`.
pub fn preserves(instance: &TransformInstance, x: &[f64], epsilon: f64) -> Result<bool, TransformError> {
    let y = instance.embed(x)?;
    Ok(squared_norm_preserved(norm_sq(x), norm_sq(&y), epsilon))
}

fn report(failures: u64, params: DistortionParams) -> DistortionReport {
    let ci = clopper_pearson(failures, params.sample_count, CONFIDENCE);
    DistortionReport {
        failures,
        sample_count: params.sample_count,
        failure_rate: failures as f64 / params.sample_count as f64,
        ci_low: ci.low,
        ci_high: ci.high,
        half_width: ci.half_width(),
        params,
    }
}

/// Fraction of sampled inputs whose squared norm the instance fails to preserve.
pub fn estimate_failure_rate(
    instance: &TransformInstance,
    params: &DistortionParams,
) -> Result<DistortionReport, DistortionError> {
    params.validate()?;
    let d = instance.d();
    if let InputDistribution::SparseK { k } = params.input {
        if k == 0 || k > d {
            return Err(DistortionError::InvalidSupport { k, d });
        }
    }
    let failures = (0..params.sample_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(params.seed, i);
            let x = params.input.draw(d, &mut rng);
            preserves(instance, &x, params.epsilon).map(|ok| u64::from(!ok))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(report(failures, *params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub preserved_pairs: u64,
    pub total_pairs: u64,
    /// Pairs with `x = y`, excluded from `preserved_pairs`.
    pub duplicate_pairs: u64,
}

/// Counts pairs whose squared distance is preserved, embedding `z = x - y`.
pub fn check_pairwise(
    dataset: &[Vec<f64>],
    instance: &TransformInstance,
    epsilon: f64,
) -> Result<PairwiseReport, DistortionError> {
    check_open_unit("epsilon", epsilon)?;
    let d = instance.d();
    for (index, x) in dataset.iter().enumerate() {
        if x.len() != d {
            return Err(DistortionError::PointLength {
                index,
                expected: d,
                actual: x.len(),
            });
        }
    }
    let n = dataset.len();
    let mut out = PairwiseReport {
        preserved_pairs: 0,
        total_pairs: (n * n.saturating_sub(1) / 2) as u64,
        duplicate_pairs: 0,
    };
    for i in 0..n {
        for j in i + 1..n {
            let z: Vec<f64> = dataset[i].iter().zip(&dataset[j]).map(|(a, b)| a - b).collect();
            if norm_sq(&z) == 0.0 {
                out.duplicate_pairs += 1;
            } else if preserves(instance, &z, epsilon)? {
                out.preserved_pairs += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTail {
    pub d: usize,
    pub alpha: f64,
    pub sample_count: u64,
    pub exceedances: u64,
    pub empirical_tail: f64,
    /// `2 exp(-d α² / 8)`.
    pub bound: f64,
    pub half_width: f64,
    /// `empirical_tail <= bound + half_width`.
    pub holds: bool,
}

/// Monte Carlo estimate of `P[|‖g‖² - d| >= α d]` for standard normal `g ∈ R^d`,
/// next to the closed-form bound `2 exp(-d α² / 8)`.
pub fn chi_square_tail_check(
    d: usize,
    alpha: f64,
    sample_count: u64,
    seed: u64,
) -> Result<ChiSquareTail, DistortionError> {
    if d == 0 {
        return Err(DistortionError::ZeroDimension);
    }
    check_open_unit("alpha", alpha)?;
    if sample_count == 0 {
        return Err(DistortionError::NoSamples);
    }
    let dim = d as f64;
    let exceedances: u64 = (0..sample_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let sq: f64 = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal).powi(2)).sum();
            u64::from((sq - dim).abs() >= alpha * dim)
        })
        .sum();
    let ci = clopper_pearson(exceedances, sample_count, CONFIDENCE);
    let empirical_tail = exceedances as f64 / sample_count as f64;
    let bound = 2.0 * (-dim * alpha * alpha / 8.0).exp();
    Ok(ChiSquareTail {
        d,
        alpha,
        sample_count,
        exceedances,
        empirical_tail,
        bound,
        half_width: ci.half_width(),
        holds: empirical_tail <= bound + ci.half_width(),
    })
}
