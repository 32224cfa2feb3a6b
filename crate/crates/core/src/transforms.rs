//! Seeded JL transform families, their fast embedding routines, and their
//! compilation into circuits with coefficient bound 1.
//!
//! Every family keeps constant-magnitude coefficients inside the matrix and
//! moves normalization into the scale `s`:
//!
//! | family            | matrix `A`                         | scale `s`  |
//! |-------------------|------------------------------------|------------|
//! | `DenseRademacher` | i.i.d. ±1, `m x d`                 | `m`        |
//! | `SparseKn`        | `sparsity` ±1 entries per column   | `sparsity` |
//! | `FastJl`          | `P H D`, P Bernoulli(q) ±1         | `m q d`    |
//! | `ToeplitzD`       | ±1 Toeplitz `T` times ±1 diagonal  | `m`        |
//! | `Kac`             | first `m` rows of a rotation walk  | `m / d`    |
//!
//! A Kac instance with `m = d` is an exact isometry (orthonormal rows, `s = 1`).

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{accumulation_cost, CircuitBuilder, CircuitError, LinearCircuit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("dimensions must be positive, got m={m}, d={d}")]
    ZeroDimension { m: usize, d: usize },
    #[error("output dimension m={m} exceeds input dimension d={d}")]
    OutputExceedsInput { m: usize, d: usize },
    #[error("{family} requires d to be a power of two, got {d} (zero-pad the input)")]
    NotPowerOfTwo { family: &'static str, d: usize },
    #[error("sparsity must lie in 1..={m}, got {sparsity}")]
    InvalidSparsity { sparsity: usize, m: usize },
    #[error("nonzero probability q must lie in (0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("Kac rotations need at least two coordinates, got d={0}")]
    KacTooSmall(usize),
    #[error("delta target must lie in (0, 1), got {0}")]
    InvalidDeltaTarget(f64),
    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A transform family together with its family-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    DenseRademacher,
    SparseKn { sparsity: usize },
    FastJl { q: f64 },
    ToeplitzD,
    Kac { steps: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::DenseRademacher => "dense_rademacher",
            Family::SparseKn { .. } => "sparse_kn",
            Family::FastJl { .. } => "fast_jl",
            Family::ToeplitzD => "toeplitz_d",
            Family::Kac { .. } => "kac",
        }
    }
}

/// Everything needed to re-derive an instance: this is what gets serialized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    #[serde(flatten)]
    pub family: Family,
    pub m: usize,
    pub d: usize,
    pub seed: u64,
}

impl TransformSpec {
    pub fn new(family: Family, m: usize, d: usize, seed: u64) -> Self {
        Self { family, m, d, seed }
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        let (m, d) = (self.m, self.d);
        if m == 0 || d == 0 {
            return Err(TransformError::ZeroDimension { m, d });
        }
        if m > d {
            return Err(TransformError::OutputExceedsInput { m, d });
        }
        match self.family {
            Family::DenseRademacher => {}
            Family::SparseKn { sparsity } => {
                if sparsity == 0 || sparsity > m {
                    return Err(TransformError::InvalidSparsity { sparsity, m });
                }
            }
            Family::FastJl { q } => {
                if !(q > 0.0 && q <= 1.0) {
                    return Err(TransformError::InvalidProbability(q));
                }
                if !d.is_power_of_two() {
                    return Err(TransformError::NotPowerOfTwo { family: "fast_jl", d });
                }
            }
            Family::ToeplitzD => {
                if !d.is_power_of_two() {
                    return Err(TransformError::NotPowerOfTwo { family: "toeplitz_d", d });
                }
            }
            Family::Kac { steps } => {
                if steps > 0 && d < 2 {
                    return Err(TransformError::KacTooSmall(d));
                }
            }
        }
        Ok(())
    }

    /// The output scale `s`; the embedding is `s^{-1/2} A x`.
    pub fn scale(&self) -> f64 {
        let (m, d) = (self.m as f64, self.d as f64);
        match self.family {
            Family::DenseRademacher | Family::ToeplitzD => m,
            Family::SparseKn { sparsity } => sparsity as f64,
            Family::FastJl { q } => m * q * d,
            Family::Kac { .. } => m / d,
        }
    }
}

/// One plane rotation of the Kac walk acting on coordinates `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KacStep {
    pub i: usize,
    pub j: usize,
    pub angle: f64,
}

impl KacStep {
    fn apply(&self, x: &mut [f64]) {
        let (s, c) = self.angle.sin_cos();
        let (a, b) = (x[self.i], x[self.j]);
        x[self.i] = c * a - s * b;
        x[self.j] = s * a + c * b;
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TransformData {
    /// Row-major `m x d` signs.
    Dense { signs: Vec<f64> },
    /// Per column, `(row, sign)` with distinct rows.
    Sparse { columns: Vec<Vec<(usize, f64)>> },
    FastJl {
        diag: Vec<f64>,
        /// Per row of `P`, `(column, sign)` in increasing column order.
        rows: Vec<Vec<(usize, f64)>>,
    },
    Toeplitz {
        /// `T[i][j] = diagonals[i + d - 1 - j]`.
        diagonals: Vec<f64>,
        diag: Vec<f64>,
    },
    Kac { steps: Vec<KacStep> },
}

/// A fully materialized, immutable transform sampled from a seed.
///
/// Serializes as its [`TransformSpec`]; deserializing re-samples the matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TransformSpec", into = "TransformSpec")]
pub struct TransformInstance {
    spec: TransformSpec,
    data: TransformData,
}

impl TryFrom<TransformSpec> for TransformInstance {
    type Error = TransformError;

    fn try_from(spec: TransformSpec) -> Result<Self, Self::Error> {
        TransformInstance::sample(spec)
    }
}

impl From<TransformInstance> for TransformSpec {
    fn from(inst: TransformInstance) -> Self {
        inst.spec
    }
}

fn sign(rng: &mut impl Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

impl TransformInstance {
    pub fn sample(spec: TransformSpec) -> Result<Self, TransformError> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let (m, d) = (spec.m, spec.d);
        let data = match spec.family {
            Family::DenseRademacher => TransformData::Dense {
                signs: (0..m * d).map(|_| sign(&mut rng)).collect(),
            },
            Family::SparseKn { sparsity } => {
                let mut rows: Vec<usize> = (0..m).collect();
                let columns = (0..d)
                    .map(|_| {
                        let (chosen, _) = rows.partial_shuffle(&mut rng, sparsity);
                        let mut col: Vec<(usize, f64)> = chosen.iter().map(|&r| (r, 0.0)).collect();
                        for entry in &mut col {
                            entry.1 = sign(&mut rng);
                        }
                        col
                    })
                    .collect();
                TransformData::Sparse { columns }
            }
            Family::FastJl { q } => {
                let diag = (0..d).map(|_| sign(&mut rng)).collect();
                let rows = (0..m)
                    .map(|_| {
                        (0..d)
                            .filter_map(|j| {
                                let keep = rng.random::<f64>() < q;
                                let s = sign(&mut rng);
                                keep.then_some((j, s))
                            })
                            .collect()
                    })
                    .collect();
                TransformData::FastJl { diag, rows }
            }
            Family::ToeplitzD => TransformData::Toeplitz {
                diagonals: (0..2 * d - 1).map(|_| sign(&mut rng)).collect(),
                diag: (0..d).map(|_| sign(&mut rng)).collect(),
            },
            Family::Kac { steps } => TransformData::Kac {
                steps: (0..steps)
                    .map(|_| {
                        let i = rng.random_range(0..d);
                        let mut j = rng.random_range(0..d - 1);
                        if j >= i {
                            j += 1;
                        }
                        KacStep {
                            i,
                            j,
                            angle: rng.random::<f64>() * TAU,
                        }
                    })
                    .collect(),
            },
        };
        Ok(Self { spec, data })
    }

    pub fn spec(&self) -> &TransformSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn d(&self) -> usize {
        self.spec.d
    }

    pub fn seed(&self) -> u64 {
        self.spec.seed
    }

    pub fn scale(&self) -> f64 {
        self.spec.scale()
    }

    /// The rotation steps of a Kac instance.
    pub fn kac_steps(&self) -> Option<&[KacStep]> {
        match &self.data {
            TransformData::Kac { steps } => Some(steps),
            _ => None,
        }
    }

    /// Applies only the Kac rotations to `x` in place (no truncation or scaling).
    pub fn rotate_in_place(&self, x: &mut [f64]) -> Result<(), TransformError> {
        self.check_len(x)?;
        if let TransformData::Kac { steps } = &self.data {
            steps.iter().for_each(|step| step.apply(x));
        }
        Ok(())
    }

    fn check_len(&self, x: &[f64]) -> Result<(), TransformError> {
        if x.len() != self.spec.d {
            return Err(TransformError::DimensionMismatch {
                expected: self.spec.d,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// `A x` using the family's own fast algorithm, without the scale factor.
    pub fn apply_unscaled(&self, x: &[f64]) -> Result<Vec<f64>, TransformError> {
        self.check_len(x)?;
        let (m, d) = (self.spec.m, self.spec.d);
        let y = match &self.data {
            TransformData::Dense { signs } => signs
                .chunks_exact(d)
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect(),
            TransformData::Sparse { columns } => {
                let mut y = vec![0.0; m];
                for (col, &xj) in columns.iter().zip(x) {
                    for &(r, s) in col {
                        y[r] += s * xj;
                    }
                }
                y
            }
            TransformData::FastJl { diag, rows } => {
                let mut z: Vec<f64> = diag.iter().zip(x).map(|(a, b)| a * b).collect();
                fwht_in_place(&mut z)?;
                rows.iter()
                    .map(|row| row.iter().map(|&(j, s)| s * z[j]).sum())
                    .collect()
            }
            TransformData::Toeplitz { diagonals, diag } => {
                let z: Vec<f64> = diag.iter().zip(x).map(|(a, b)| a * b).collect();
                (0..m)
                    .map(|i| (0..d).map(|j| diagonals[i + d - 1 - j] * z[j]).sum())
                    .collect()
            }
            TransformData::Kac { steps } => {
                let mut z = x.to_vec();
                steps.iter().for_each(|step| step.apply(&mut z));
                z.truncate(m);
                z
            }
        };
        Ok(y)
    }

    /// `s^{-1/2} A x`.
    pub fn embed(&self, x: &[f64]) -> Result<Vec<f64>, TransformError> {
        let factor = self.scale().sqrt().recip();
        let mut y = self.apply_unscaled(x)?;
        y.iter_mut().for_each(|v| *v *= factor);
        Ok(y)
    }

    /// Number of gates [`TransformInstance::compile_circuit`] emits, computed
    /// without building the circuit.
    pub fn gate_count(&self) -> usize {
        let (m, d) = (self.spec.m, self.spec.d);
        let rows_cost = |sizes: &mut dyn Iterator<Item = usize>| {
            let mut empty = false;
            let total: usize = sizes
                .map(|k| {
                    empty |= k == 0;
                    accumulation_cost(k)
                })
                .sum();
            total + usize::from(empty)
        };
        match &self.data {
            TransformData::Dense { .. } => m * accumulation_cost(d),
            TransformData::Sparse { columns } => {
                let mut sizes = vec![0usize; m];
                columns.iter().flatten().for_each(|&(r, _)| sizes[r] += 1);
                rows_cost(&mut sizes.into_iter())
            }
            TransformData::FastJl { rows, .. } => {
                d + d * d.trailing_zeros() as usize + rows_cost(&mut rows.iter().map(Vec::len))
            }
            TransformData::Toeplitz { .. } => d + m * accumulation_cost(d),
            TransformData::Kac { steps } => 2 * steps.len(),
        }
    }

    /// Compiles the instance into a circuit with coefficient bound 1 and the
    /// instance's scale, so that `circuit.evaluate(x) == self.embed(x)`.
    pub fn compile_circuit(&self) -> LinearCircuit {
        let (m, d) = (self.spec.m, self.spec.d);
        let mut b = CircuitBuilder::new(d);
        let inputs: Vec<usize> = (0..d).map(|j| b.input(j)).collect();

        let taps = match &self.data {
            TransformData::Dense { signs } => signs
                .chunks_exact(d)
                .map(|row| {
                    let terms: Vec<(usize, f64)> = inputs.iter().copied().zip(row.iter().copied()).collect();
                    b.accumulate(&terms).expect("d >= 1")
                })
                .collect(),
            TransformData::Sparse { columns } => {
                let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
                for (j, col) in columns.iter().enumerate() {
                    for &(r, s) in col {
                        rows[r].push((inputs[j], s));
                    }
                }
                accumulate_rows(&mut b, &rows, inputs[0])
            }
            TransformData::FastJl { diag, rows } => {
                let mut values: Vec<usize> = inputs.iter().zip(diag).map(|(&v, &s)| b.copy(s, v)).collect();
                hadamard_gates(&mut b, &mut values);
                let rows: Vec<Vec<(usize, f64)>> = rows
                    .iter()
                    .map(|row| row.iter().map(|&(j, s)| (values[j], s)).collect())
                    .collect();
                accumulate_rows(&mut b, &rows, inputs[0])
            }
            TransformData::Toeplitz { diagonals, diag } => {
                let values: Vec<usize> = inputs.iter().zip(diag).map(|(&v, &s)| b.copy(s, v)).collect();
                (0..m)
                    .map(|i| {
                        let terms: Vec<(usize, f64)> =
                            (0..d).map(|j| (values[j], diagonals[i + d - 1 - j])).collect();
                        b.accumulate(&terms).expect("d >= 1")
                    })
                    .collect()
            }
            TransformData::Kac { steps } => {
                let mut current = inputs.clone();
                for step in steps {
                    let (s, c) = step.angle.sin_cos();
                    let (a, v) = (current[step.i], current[step.j]);
                    current[step.i] = b.gate(c, a, -s, v);
                    current[step.j] = b.gate(s, a, c, v);
                }
                current.truncate(m);
                current
            }
        };
        b.finish(taps, 1.0, self.scale())
            .expect("compiled transforms are structurally valid")
    }
}

/// Emits one accumulation per row; empty rows share a single zero-valued gate.
fn accumulate_rows(b: &mut CircuitBuilder, rows: &[Vec<(usize, f64)>], any_value: usize) -> Vec<usize> {
    let mut zero = None;
    rows.iter()
        .map(|terms| {
            b.accumulate(terms)
                .unwrap_or_else(|| *zero.get_or_insert_with(|| b.gate(0.0, any_value, 0.0, any_value)))
        })
        .collect()
}

/// In-order butterflies over the value handles in `values`, replacing each
/// handle with the handle of its transformed value. Emits `d log2 d` gates.
fn hadamard_gates(b: &mut CircuitBuilder, values: &mut [usize]) {
    let d = values.len();
    let mut h = 1;
    while h < d {
        for start in (0..d).step_by(2 * h) {
            for j in start..start + h {
                let (a, c) = (values[j], values[j + h]);
                values[j] = b.gate(1.0, a, 1.0, c);
                values[j + h] = b.gate(1.0, a, -1.0, c);
            }
        }
        h *= 2;
    }
}

/// The standalone unnormalized Hadamard circuit `H_d` with the given scale.
pub fn compile_fwht(d: usize, scale: f64) -> Result<LinearCircuit, TransformError> {
    if !d.is_power_of_two() {
        return Err(TransformError::NotPowerOfTwo { family: "fwht", d });
    }
    let mut b = CircuitBuilder::new(d);
    let mut values: Vec<usize> = (0..d).map(|j| b.input(j)).collect();
    hadamard_gates(&mut b, &mut values);
    Ok(b.finish(values, 1.0, scale)?)
}

/// Unnormalized Walsh-Hadamard transform in place.
pub fn fwht_in_place(x: &mut [f64]) -> Result<(), TransformError> {
    let d = x.len();
    if !d.is_power_of_two() {
        return Err(TransformError::NotPowerOfTwo { family: "fwht", d });
    }
    let mut h = 1;
    while h < d {
        for start in (0..d).step_by(2 * h) {
            for j in start..start + h {
                let (a, b) = (x[j], x[j + h]);
                x[j] = a + b;
                x[j + h] = a - b;
            }
        }
        h *= 2;
    }
    Ok(())
}

pub fn fwht(x: &[f64]) -> Result<Vec<f64>, TransformError> {
    let mut y = x.to_vec();
    fwht_in_place(&mut y)?;
    Ok(y)
}

/// Default Kac walk length `⌈d ln d + m ln(1/δ)⌉`.
pub fn kac_default_steps(d: usize, m: usize, delta_target: f64) -> Result<usize, TransformError> {
    if !(delta_target > 0.0 && delta_target < 1.0) {
        return Err(TransformError::InvalidDeltaTarget(delta_target));
    }
    let d_f = d as f64;
    Ok((d_f * d_f.ln() + m as f64 * delta_target.recip().ln()).ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(family: Family, m: usize, d: usize, seed: u64) -> TransformInstance {
        TransformInstance::sample(TransformSpec::new(family, m, d, seed)).unwrap()
    }

    #[test]
    fn fwht_small_cases() {
        assert_eq!(fwht(&[1.0, 0.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(fwht(&[1.0, 1.0, 1.0, 1.0]).unwrap(), vec![4.0, 0.0, 0.0, 0.0]);
        assert!(matches!(fwht(&[1.0, 2.0, 3.0]), Err(TransformError::NotPowerOfTwo { .. })));
    }

    #[test]
    fn fwht_is_self_inverse_up_to_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
            let back = fwht(&fwht(&x).unwrap()).unwrap();
            let err: f64 = back.iter().zip(&x).map(|(a, b)| (a - 64.0 * b).powi(2)).sum::<f64>().sqrt();
            let norm: f64 = x.iter().map(|v| (64.0 * v).powi(2)).sum::<f64>().sqrt();
            assert!(err <= 1e-9 * norm);
        }
    }

    #[test]
    fn fwht_circuit_small_cases() {
        let c = compile_fwht(2, 2.0).unwrap();
        let y = c.evaluate(&[1.0, 0.0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((y[0] - h).abs() < 1e-15 && (y[1] - h).abs() < 1e-15);
        assert_eq!(compile_fwht(8, 8.0).unwrap().op_count(), 24);
        assert!(compile_fwht(8, 1.0).unwrap().check_coeff_bound(1.0).unwrap());
        assert!(compile_fwht(6, 1.0).is_err());
    }

    #[test]
    fn fwht_circuit_realizes_sylvester_hadamard() {
        fn sylvester(d: usize) -> Vec<Vec<f64>> {
            if d == 1 {
                return vec![vec![1.0]];
            }
            let h = sylvester(d / 2);
            let mut out = Vec::new();
            for row in &h {
                out.push(row.iter().chain(row).copied().collect());
            }
            for row in &h {
                out.push(row.iter().copied().chain(row.iter().map(|v| -v)).collect());
            }
            out
        }
        for d in [1, 2, 4, 8] {
            let b = compile_fwht(d, 1.0).unwrap().realize_matrix();
            let expect: Vec<f64> = sylvester(d).concat();
            assert_eq!(b.entries(), expect.as_slice(), "d={d}");
        }
    }

    #[test]
    fn validation_errors() {
        let bad = |f, m, d| TransformInstance::sample(TransformSpec::new(f, m, d, 0)).unwrap_err();
        assert!(matches!(bad(Family::DenseRademacher, 5, 4), TransformError::OutputExceedsInput { .. }));
        assert!(matches!(bad(Family::DenseRademacher, 0, 4), TransformError::ZeroDimension { .. }));
        assert!(matches!(bad(Family::SparseKn { sparsity: 0 }, 2, 4), TransformError::InvalidSparsity { .. }));
        assert!(matches!(bad(Family::SparseKn { sparsity: 3 }, 2, 4), TransformError::InvalidSparsity { .. }));
        assert!(matches!(bad(Family::FastJl { q: 0.0 }, 2, 4), TransformError::InvalidProbability(_)));
        assert!(matches!(bad(Family::FastJl { q: 1.5 }, 2, 4), TransformError::InvalidProbability(_)));
        assert!(matches!(bad(Family::FastJl { q: 0.5 }, 2, 6), TransformError::NotPowerOfTwo { .. }));
        assert!(matches!(bad(Family::ToeplitzD, 2, 12), TransformError::NotPowerOfTwo { .. }));
        assert!(matches!(bad(Family::Kac { steps: 3 }, 1, 1), TransformError::KacTooSmall(1)));
    }

    #[test]
    fn sparse_with_full_sparsity_is_dense() {
        let b = inst(Family::SparseKn { sparsity: 8 }, 8, 8, 7).compile_circuit().realize_matrix();
        assert!(b.entries().iter().all(|v| v.abs() == 1.0));
    }

    #[test]
    fn kac_without_steps_drops_trailing_coordinates() {
        let k = inst(Family::Kac { steps: 0 }, 2, 4, 1);
        assert_eq!(k.embed(&[0.0, 0.0, 0.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(k.compile_circuit().op_count(), 0);
        assert_eq!(k.scale(), 0.5);
    }

    #[test]
    fn kac_circuit_has_two_gates_per_step() {
        let c = inst(Family::Kac { steps: 5 }, 3, 6, 9).compile_circuit();
        assert_eq!(c.op_count(), 10);
        assert!(c.gates().iter().all(|g| g.lambda.abs() <= 1.0 && g.mu.abs() <= 1.0));
    }

    #[test]
    fn dense_gate_counts() {
        assert_eq!(inst(Family::DenseRademacher, 4, 4, 3).compile_circuit().op_count(), 12);
        // single column: one copy gate per row
        assert_eq!(inst(Family::DenseRademacher, 1, 1, 3).compile_circuit().op_count(), 1);
    }

    #[test]
    fn fast_jl_hadamard_part() {
        let i = inst(Family::FastJl { q: 0.5 }, 4, 8, 5);
        let TransformData::FastJl { rows, .. } = &i.data else { unreachable!() };
        let mut p_cost: usize = rows.iter().map(|r| accumulation_cost(r.len())).sum();
        p_cost += usize::from(rows.iter().any(Vec::is_empty));
        let total = i.compile_circuit().op_count();
        assert_eq!(total - 8 - p_cost, 24);
        assert!(p_cost <= rows.iter().map(Vec::len).sum::<usize>() + 1);
    }

    #[test]
    fn dense_column_norm_is_exact() {
        let i = inst(Family::DenseRademacher, 16, 16, 2);
        let mut e1 = vec![0.0; 16];
        e1[0] = 1.0;
        let y = i.embed(&e1).unwrap();
        assert_eq!(y.iter().map(|v| v * v).sum::<f64>(), 1.0);
        assert_eq!(i.embed(&[0.0; 16]).unwrap(), vec![0.0; 16]);
    }

    #[test]
    fn embed_dimension_mismatch() {
        let i = inst(Family::ToeplitzD, 2, 4, 0);
        assert_eq!(
            i.embed(&[1.0; 3]),
            Err(TransformError::DimensionMismatch { expected: 4, actual: 3 })
        );
    }

    #[test]
    fn json_carries_only_the_spec() {
        let i = inst(Family::SparseKn { sparsity: 3 }, 4, 10, 42);
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"family":"sparse_kn","sparsity":3,"m":4,"d":10,"seed":42}"#);
        assert_eq!(serde_json::from_str::<TransformInstance>(&json).unwrap(), i);
        assert!(serde_json::from_str::<TransformInstance>(r#"{"family":"fast_jl","q":2.0,"m":4,"d":8,"seed":1}"#).is_err());
    }

    #[test]
    fn kac_default_steps_formula() {
        // 16 ln 16 + 4 ln 100 = 44.36 + 18.42
        assert_eq!(kac_default_steps(16, 4, 0.01).unwrap(), 63);
        assert!(kac_default_steps(16, 4, 1.0).is_err());
    }

    #[test]
    fn scales() {
        let s = |f, m, d| TransformSpec::new(f, m, d, 0).scale();
        assert_eq!(s(Family::DenseRademacher, 4, 8), 4.0);
        assert_eq!(s(Family::ToeplitzD, 4, 8), 4.0);
        assert_eq!(s(Family::SparseKn { sparsity: 3 }, 4, 8), 3.0);
        assert_eq!(s(Family::FastJl { q: 0.25 }, 4, 8), 8.0);
        assert_eq!(s(Family::Kac { steps: 1 }, 4, 8), 0.5);
    }
}
