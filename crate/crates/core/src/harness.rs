//! Seeded experiment runner tying sampling, compilation, spectra and distortion
//! together, plus the over-A failure sweep and embedding benchmarks.
//!
//! Every trial derives its seed from `(family, m, d, trial)` alone, so rows
//! are reproducible and independent of scheduling. Rows are emitted in config
//! order: family, then cell, then trial.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuit::CircuitError;
use crate::distortion::{
    estimate_failure_rate, norm_sq, preserves, DistortionError, DistortionParams, InputDistribution,
};
use crate::spectral::{
    column_norm_census, frobenius_ratio, t_param, trace_check, SpectralError, SpectralReport, TraceCheck,
    UniversalConstants,
};
use crate::stats::sample_rng;
use crate::transforms::{kac_default_steps, Family, TransformError, TransformInstance, TransformSpec};

/// Version tag written at the top of `rows.csv` and into `meta.json`.
pub const ROW_SCHEMA: &str = "jlcert-rows/v1";

/// Slack allowed when comparing a gate count against a floating-point bound.
pub const CERT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("input vector must be nonzero")]
    ZeroInput,
    #[error("at least {min} {what} required, got {got}")]
    TooFew { what: &'static str, min: usize, got: usize },
    #[error(
        "certification violation for {family} m={m} d={d} seed={seed}: \
         {op_count} gates < lower bound {ops_lb:.6} (coefficient bound verified: {coeff_ok})"
    )]
    CertificationViolation {
        family: String,
        m: usize,
        d: usize,
        seed: u64,
        op_count: usize,
        ops_lb: f64,
        coeff_ok: bool,
    },
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Distortion(#[from] DistortionError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A family as written in a config file. Kac steps default to
/// `⌈d ln d + m ln(1/δ)⌉` using the config's `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyConfig {
    DenseRademacher,
    SparseKn { sparsity: usize },
    FastJl { q: f64 },
    ToeplitzD,
    Kac {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        steps: Option<usize>,
    },
}

impl FamilyConfig {
    pub fn resolve(&self, m: usize, d: usize, delta: f64) -> Result<Family, TransformError> {
        Ok(match *self {
            FamilyConfig::DenseRademacher => Family::DenseRademacher,
            FamilyConfig::SparseKn { sparsity } => Family::SparseKn { sparsity },
            FamilyConfig::FastJl { q } => Family::FastJl { q },
            FamilyConfig::ToeplitzD => Family::ToeplitzD,
            FamilyConfig::Kac { steps: Some(steps) } => Family::Kac { steps },
            FamilyConfig::Kac { steps: None } => Family::Kac {
                steps: kac_default_steps(d, m, delta)?,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub m: usize,
    pub d: usize,
}

fn default_samples() -> u64 {
    1000
}

fn default_repetitions() -> usize {
    5
}

fn default_input() -> InputDistribution {
    InputDistribution::Gaussian
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub families: Vec<FamilyConfig>,
    pub cells: Vec<Cell>,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub constants: UniversalConstants,
    #[serde(default = "default_samples")]
    pub distortion_samples: u64,
    #[serde(default = "default_input")]
    pub input: InputDistribution,
    #[serde(default = "default_repetitions")]
    pub embed_repetitions: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_owned(),
            source,
        })
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.families.is_empty() || self.cells.is_empty() {
            return bad("families and cells must be non-empty".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        for c in &self.cells {
            if c.m == 0 || c.m > c.d {
                return bad(format!("cell m={} d={} violates 1 <= m <= d", c.m, c.d));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 && self.delta > 0.0 && self.delta < 1.0) {
            return bad("epsilon and delta must lie in (0, 1)".into());
        }
        if self.distortion_samples == 0 {
            return bad("distortion_samples must be positive".into());
        }
        if self.embed_repetitions < 3 {
            return bad("embed_repetitions must be at least 3".into());
        }
        self.constants.validate()?;
        for f in &self.families {
            for c in &self.cells {
                let family = f.resolve(c.m, c.d, self.delta)?;
                TransformSpec::new(family, c.m, c.d, 0).validate()?;
            }
        }
        Ok(())
    }

    /// `t = m ε² / ln(1/δ)` for an output dimension `m`.
    pub fn t_param(&self, m: usize) -> f64 {
        t_param(m, self.epsilon, self.delta)
    }
}

/// A 64-bit value from the SHA-256 of `key`, stable across platforms and releases.
pub fn stable_hash(key: &str) -> u64 {
    let digest = Sha256::digest(key.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// `base_seed + hash(family, m, d, trial)`, wrapping.
pub fn trial_seed(base_seed: u64, family: &FamilyConfig, m: usize, d: usize, trial: usize) -> u64 {
    let family = serde_json::to_string(family).expect("family configs serialize");
    base_seed.wrapping_add(stable_hash(&format!("{family}|{m}|{d}|{trial}")))
}

/// True when `op_count` falls below `ops_lb` beyond round-off.
pub fn violates(op_count: usize, ops_lb: f64) -> bool {
    (op_count as f64) < ops_lb - CERT_TOLERANCE * ops_lb.abs().max(1.0)
}

/// The full lower-bound chain for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub spec: TransformSpec,
    pub scale: f64,
    pub op_count: usize,
    pub coeff_bound_ok: bool,
    pub spectral: SpectralReport,
    pub trace: TraceCheck,
    pub frobenius_ratio: f64,
    pub column_census: usize,
    /// `op_count >= ops_lb` (up to [`CERT_TOLERANCE`]).
    pub consistent: bool,
}

/// sample → compile → coefficient check → realize → spectral chain.
pub fn certify_instance(
    instance: &TransformInstance,
    epsilon: f64,
    delta: f64,
    constants: UniversalConstants,
) -> Result<Certificate, HarnessError> {
    let circuit = instance.compile_circuit();
    let coeff_bound_ok = circuit.check_coeff_bound(1.0)?;
    let b = circuit.realize_matrix();
    let t = t_param(instance.m(), epsilon, delta);
    let spectral = SpectralReport::compute(&b, t, 1.0, constants)?;
    let trace = trace_check(&spectral, epsilon, delta);
    let frobenius_ratio = frobenius_ratio(&spectral, t, &constants)?;
    let column_census = column_norm_census(&b, instance.scale(), epsilon);
    let op_count = circuit.op_count();
    Ok(Certificate {
        spec: *instance.spec(),
        scale: instance.scale(),
        op_count,
        coeff_bound_ok,
        consistent: !violates(op_count, spectral.ops_lb),
        spectral,
        trace,
        frobenius_ratio,
        column_census,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub family: String,
    pub m: usize,
    pub d: usize,
    pub s: f64,
    pub trial: usize,
    pub seed: u64,
    pub op_count: usize,
    pub ops_lb: f64,
    pub det_log_lb: Option<f64>,
    pub l_star: Option<usize>,
    pub trace: f64,
    pub frob_sq: f64,
    pub large_count: usize,
    pub threshold: f64,
    pub t_param: f64,
    pub frobenius_ratio: f64,
    pub column_census: usize,
    pub failure_rate: f64,
    pub failure_half_width: f64,
    pub embed_wall_ns: u64,
}

/// Column excluded from reproducibility comparisons.
pub const TIMING_COLUMN: &str = "embed_wall_ns";

fn run_trial(config: &ExperimentConfig, family: &FamilyConfig, cell: Cell, trial: usize) -> Result<ExperimentRow, HarnessError> {
    let seed = trial_seed(config.base_seed, family, cell.m, cell.d, trial);
    let resolved = family.resolve(cell.m, cell.d, config.delta)?;
    let instance = TransformInstance::sample(TransformSpec::new(resolved, cell.m, cell.d, seed))?;
    let cert = certify_instance(&instance, config.epsilon, config.delta, config.constants)?;
    if !cert.coeff_bound_ok || !cert.consistent {
        return Err(HarnessError::CertificationViolation {
            family: resolved.name().into(),
            m: cell.m,
            d: cell.d,
            seed,
            op_count: cert.op_count,
            ops_lb: cert.spectral.ops_lb,
            coeff_ok: cert.coeff_bound_ok,
        });
    }
    let distortion = estimate_failure_rate(
        &instance,
        &DistortionParams {
            epsilon: config.epsilon,
            delta: config.delta,
            sample_count: config.distortion_samples,
            input: config.input,
            seed: seed ^ stable_hash("inputs"),
        },
    )?;
    let bench = bench_embed(&instance, config.embed_repetitions)?;
    let sp = &cert.spectral;
    Ok(ExperimentRow {
        family: resolved.name().into(),
        m: cell.m,
        d: cell.d,
        s: cert.scale,
        trial,
        seed,
        op_count: cert.op_count,
        ops_lb: sp.ops_lb,
        det_log_lb: sp.det_log_lb,
        l_star: sp.l_star,
        trace: sp.trace,
        frob_sq: sp.frob_sq,
        large_count: sp.large_count,
        threshold: sp.threshold,
        t_param: sp.t_param,
        frobenius_ratio: cert.frobenius_ratio,
        column_census: cert.column_census,
        failure_rate: distortion.failure_rate,
        failure_half_width: distortion.half_width,
        embed_wall_ns: bench.median_ns,
    })
}

/// Computes all rows without touching the filesystem.
pub fn compute_rows(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>, HarnessError> {
    config.validate()?;
    let jobs: Vec<(&FamilyConfig, Cell, usize)> = config
        .families
        .iter()
        .flat_map(|f| {
            config
                .cells
                .iter()
                .flat_map(move |&c| (0..config.trials).map(move |t| (f, c, t)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(f, c, t)| run_trial(config, f, c, t))
        .collect()
}

#[derive(Serialize)]
struct Meta<'a> {
    schema: &'static str,
    code_version: &'static str,
    log_base: &'static str,
    t_param_formula: &'static str,
    constants: &'a UniversalConstants,
    config: &'a ExperimentConfig,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Writes `rows.csv`, `rows.json` and `meta.json` into `dir`.
pub fn write_outputs(config: &ExperimentConfig, rows: &[ExperimentRow], dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let csv_path = dir.join("rows.csv");
    let mut buf = format!("# schema: {ROW_SCHEMA}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for row in rows {
            w.serialize(row).map_err(|source| HarnessError::Csv {
                path: csv_path.clone(),
                source,
            })?;
        }
        w.flush().map_err(io_err(&csv_path))?;
    }
    fs::write(&csv_path, buf).map_err(io_err(&csv_path))?;

    let json_path = dir.join("rows.json");
    let json = serde_json::to_string_pretty(rows).map_err(|source| HarnessError::Json {
        path: json_path.clone(),
        source,
    })?;
    fs::write(&json_path, json + "\n").map_err(io_err(&json_path))?;

    let meta_path = dir.join("meta.json");
    let meta = Meta {
        schema: ROW_SCHEMA,
        code_version: env!("CARGO_PKG_VERSION"),
        log_base: "natural",
        t_param_formula: "m * epsilon^2 / ln(1/delta)",
        constants: &config.constants,
        config,
    };
    let json = serde_json::to_string_pretty(&meta).map_err(|source| HarnessError::Json {
        path: meta_path.clone(),
        source,
    })?;
    fs::write(&meta_path, json + "\n").map_err(io_err(&meta_path))?;
    Ok(())
}

/// Computes every row and persists them under `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>, HarnessError> {
    let rows = compute_rows(config)?;
    write_outputs(config, &rows, &config.output_dir)?;
    Ok(rows)
}

/// Fraction of `instance_count` freshly sampled transforms that fail to
/// preserve the squared norm of the fixed vector `x`. Instance `i` uses seed
/// `seed + i`.
pub fn over_a_failure_sweep(
    family: Family,
    m: usize,
    d: usize,
    x: &[f64],
    epsilon: f64,
    instance_count: usize,
    seed: u64,
) -> Result<f64, HarnessError> {
    if instance_count == 0 {
        return Err(HarnessError::TooFew {
            what: "instances",
            min: 1,
            got: 0,
        });
    }
    if x.len() != d {
        return Err(TransformError::DimensionMismatch {
            expected: d,
            actual: x.len(),
        }
        .into());
    }
    if norm_sq(x) == 0.0 {
        return Err(HarnessError::ZeroInput);
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(HarnessError::Config(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let failures: usize = (0..instance_count)
        .into_par_iter()
        .map(|i| -> Result<usize, HarnessError> {
            let spec = TransformSpec::new(family, m, d, seed.wrapping_add(i as u64));
            let inst = TransformInstance::sample(spec)?;
            Ok(usize::from(!preserves(&inst, x, epsilon)?))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(failures as f64 / instance_count as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchReport {
    pub median_ns: u64,
    pub repetitions: usize,
    /// Gates of the compiled circuit, for ops-vs-time comparison.
    pub ops: usize,
}

/// Median wall-clock time of `embed` on a fixed Gaussian input drawn from the
/// instance seed.
pub fn bench_embed(instance: &TransformInstance, repetitions: usize) -> Result<BenchReport, HarnessError> {
    if repetitions < 3 {
        return Err(HarnessError::TooFew {
            what: "repetitions",
            min: 3,
            got: repetitions,
        });
    }
    let mut rng = sample_rng(instance.seed(), u64::MAX);
    let x: Vec<f64> = (0..instance.d()).map(|_| rng.sample(StandardNormal)).collect();
    let mut times: Vec<u64> = (0..repetitions)
        .map(|_| {
            let start = Instant::now();
            let y = instance.embed(&x);
            let elapsed = start.elapsed();
            std::hint::black_box(y).map(|_| elapsed.as_nanos() as u64)
        })
        .collect::<Result<_, _>>()?;
    times.sort_unstable();
    Ok(BenchReport {
        median_ns: times[repetitions / 2],
        repetitions,
        ops: instance.gate_count(),
    })
}
