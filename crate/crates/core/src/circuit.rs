//! Straight-line linear algorithms with bounded coefficients.
//!
//! A circuit starts from the values `1, x_1, ..., x_d` (indices `0..=d`) and
//! appends one value per gate, `lambda * v[left] + mu * v[right]`. The outputs
//! are read from `m` tap indices and multiplied once by `s^{-1/2}`.
//!
//! The Morgenstern bound lives here too: a circuit whose coefficients are all
//! bounded by `r > 1/2` in absolute value needs at least
//! `ln Δ(B) / ln(2r)` gates to compute `B`, where `Δ(B)` is the largest
//! absolute determinant of a square submatrix.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::RealizedMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("input dimension must be positive")]
    EmptyInput,
    #[error("circuit must have at least one output tap")]
    NoTaps,
    #[error("gate {gate} reads value {index}, but only values below {limit} exist at that point")]
    ForwardReference { gate: usize, index: usize, limit: usize },
    #[error("gate {gate} has a non-finite coefficient")]
    NonFiniteCoefficient { gate: usize },
    #[error("tap {tap} references value {index}; valid taps are 1..={max}")]
    TapOutOfRange { tap: usize, index: usize, max: usize },
    #[error("coefficient bound must be a finite number above 1/2, got {0}")]
    CoeffBoundTooSmall(f64),
    #[error("scale must be a positive finite number, got {0}")]
    InvalidScale(f64),
    #[error("expected an input of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("input entry {0} is not finite")]
    NonFiniteInput(usize),
    #[error("determinant bound must be positive and finite, got {0}")]
    NonPositiveDelta(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One step `v = lambda * v[left] + mu * v[right]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub lambda: f64,
    pub mu: f64,
    pub left: usize,
    pub right: usize,
}

impl Gate {
    pub fn new(lambda: f64, left: usize, mu: f64, right: usize) -> Self {
        Self {
            lambda,
            mu,
            left,
            right,
        }
    }

    /// `sign * v[src]`, written with a zero second coefficient.
    pub fn copy(sign: f64, src: usize) -> Self {
        Self::new(sign, src, 0.0, src)
    }
}

/// An immutable, validated linear circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit", into = "RawCircuit")]
pub struct LinearCircuit {
    input_dim: usize,
    gates: Vec<Gate>,
    taps: Vec<usize>,
    coeff_bound: f64,
    scale: f64,
}

#[derive(Serialize, Deserialize)]
struct RawCircuit {
    input_dim: usize,
    gates: Vec<Gate>,
    taps: Vec<usize>,
    coeff_bound: f64,
    scale: f64,
}

impl TryFrom<RawCircuit> for LinearCircuit {
    type Error = CircuitError;

    fn try_from(raw: RawCircuit) -> Result<Self, Self::Error> {
        LinearCircuit::new(raw.input_dim, raw.gates, raw.taps, raw.coeff_bound, raw.scale)
    }
}

impl From<LinearCircuit> for RawCircuit {
    fn from(c: LinearCircuit) -> Self {
        RawCircuit {
            input_dim: c.input_dim,
            gates: c.gates,
            taps: c.taps,
            coeff_bound: c.coeff_bound,
            scale: c.scale,
        }
    }
}

fn validate_bound(r: f64) -> Result<(), CircuitError> {
    if r.is_finite() && r > 0.5 {
        Ok(())
    } else {
        Err(CircuitError::CoeffBoundTooSmall(r))
    }
}

impl LinearCircuit {
    /// Validates the structure of a circuit. The coefficient bound is declared,
    /// not enforced; use [`LinearCircuit::check_coeff_bound`] to verify it.
    pub fn new(
        input_dim: usize,
        gates: Vec<Gate>,
        taps: Vec<usize>,
        coeff_bound: f64,
        scale: f64,
    ) -> Result<Self, CircuitError> {
        if input_dim == 0 {
            return Err(CircuitError::EmptyInput);
        }
        if taps.is_empty() {
            return Err(CircuitError::NoTaps);
        }
        validate_bound(coeff_bound)?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(CircuitError::InvalidScale(scale));
        }
        for (g, gate) in gates.iter().enumerate() {
            let limit = input_dim + 1 + g;
            for index in [gate.left, gate.right] {
                if index >= limit {
                    return Err(CircuitError::ForwardReference { gate: g, index, limit });
                }
            }
            if !(gate.lambda.is_finite() && gate.mu.is_finite()) {
                return Err(CircuitError::NonFiniteCoefficient { gate: g });
            }
        }
        let max = input_dim + gates.len();
        for (tap, &index) in taps.iter().enumerate() {
            if index == 0 || index > max {
                return Err(CircuitError::TapOutOfRange { tap, index, max });
            }
        }
        Ok(Self {
            input_dim,
            gates,
            taps,
            coeff_bound,
            scale,
        })
    }

    /// The circuit with no gates whose taps are the inputs themselves.
    pub fn identity(d: usize, scale: f64) -> Result<Self, CircuitError> {
        Self::new(d, Vec::new(), (1..=d).collect(), 1.0, scale)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.taps.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn taps(&self) -> &[usize] {
        &self.taps
    }

    pub fn coeff_bound(&self) -> f64 {
        self.coeff_bound
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Number of gates; this is the step count the Morgenstern bound constrains.
    pub fn op_count(&self) -> usize {
        self.gates.len()
    }

    fn run(&self, x: &[f64], constant: f64) -> Vec<f64> {
        let mut values = Vec::with_capacity(1 + self.input_dim + self.gates.len());
        values.push(constant);
        values.extend_from_slice(x);
        for gate in &self.gates {
            let v = gate.lambda * values[gate.left] + gate.mu * values[gate.right];
            values.push(v);
        }
        self.taps.iter().map(|&k| values[k]).collect()
    }

    fn check_input(&self, x: &[f64]) -> Result<(), CircuitError> {
        if x.len() != self.input_dim {
            return Err(CircuitError::DimensionMismatch {
                expected: self.input_dim,
                actual: x.len(),
            });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(CircuitError::NonFiniteInput(i));
        }
        Ok(())
    }

    /// Tap values before the output scale is applied.
    pub fn evaluate_unscaled(&self, x: &[f64]) -> Result<Vec<f64>, CircuitError> {
        self.check_input(x)?;
        Ok(self.run(x, 1.0))
    }

    /// `s^{-1/2}` times the tap values.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>, CircuitError> {
        let factor = self.scale.sqrt().recip();
        let mut out = self.evaluate_unscaled(x)?;
        out.iter_mut().for_each(|v| *v *= factor);
        Ok(out)
    }

    /// The matrix `B` computed by the circuit (without the scale factor),
    /// obtained by running the circuit on each standard basis vector.
    ///
    /// Only the linear part is returned: the constant slot is zeroed, so a
    /// gate reading index 0 contributes nothing here.
    pub fn realize_matrix(&self) -> RealizedMatrix {
        let (m, d) = (self.output_dim(), self.input_dim);
        let mut entries = vec![0.0; m * d];
        let mut basis = vec![0.0; d];
        for j in 0..d {
            basis[j] = 1.0;
            for (i, v) in self.run(&basis, 0.0).into_iter().enumerate() {
                entries[i * d + j] = v;
            }
            basis[j] = 0.0;
        }
        RealizedMatrix::new(m, d, entries, self.scale).expect("circuit dimensions are positive")
    }

    /// True iff every gate coefficient satisfies `|c| <= r`.
    pub fn check_coeff_bound(&self, r: f64) -> Result<bool, CircuitError> {
        validate_bound(r)?;
        Ok(self
            .gates
            .iter()
            .all(|g| g.lambda.abs() <= r && g.mu.abs() <= r))
    }

    /// Writes the line-oriented text form: a header `d m r s`, one
    /// `lambda mu left right` line per gate, then the tap indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {:.16e} {:.16e}",
            self.input_dim,
            self.output_dim(),
            self.coeff_bound,
            self.scale
        );
        for g in &self.gates {
            let _ = writeln!(out, "{:.16e} {:.16e} {} {}", g.lambda, g.mu, g.left, g.right);
        }
        let taps: Vec<String> = self.taps.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", taps.join(" "));
        out
    }

    /// Parses the format produced by [`LinearCircuit::to_text`]. Blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Self, CircuitError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        if lines.len() < 2 {
            return Err(CircuitError::Parse {
                line: lines.len() + 1,
                msg: "expected a header line and a tap line".into(),
            });
        }

        fn fields((line, text): (usize, &str), n: usize) -> Result<Vec<&str>, CircuitError> {
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() != n {
                return Err(CircuitError::Parse {
                    line,
                    msg: format!("expected {n} fields, got {}", parts.len()),
                });
            }
            Ok(parts)
        }
        fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, CircuitError>
        where
            T::Err: std::fmt::Display,
        {
            s.parse().map_err(|e| CircuitError::Parse {
                line,
                msg: format!("bad number {s:?}: {e}"),
            })
        }

        let (hline, _) = lines[0];
        let header = fields(lines[0], 4)?;
        let d: usize = num(hline, header[0])?;
        let m: usize = num(hline, header[1])?;
        let r: f64 = num(hline, header[2])?;
        let s: f64 = num(hline, header[3])?;

        let mut gates = Vec::with_capacity(lines.len() - 2);
        for &entry in &lines[1..lines.len() - 1] {
            let f = fields(entry, 4)?;
            let line = entry.0;
            gates.push(Gate {
                lambda: num(line, f[0])?,
                mu: num(line, f[1])?,
                left: num(line, f[2])?,
                right: num(line, f[3])?,
            });
        }

        let (tline, ttext) = lines[lines.len() - 1];
        let taps = ttext
            .split_whitespace()
            .map(|t| num(tline, t))
            .collect::<Result<Vec<usize>, _>>()?;
        if taps.len() != m {
            return Err(CircuitError::Parse {
                line: tline,
                msg: format!("header declares {m} taps, found {}", taps.len()),
            });
        }
        Self::new(d, gates, taps, r, s)
    }
}

/// Incremental construction of a circuit; value handles are plain indices.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    input_dim: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(input_dim: usize) -> Self {
        Self {
            input_dim,
            gates: Vec::new(),
        }
    }

    /// Value index of input `x_{i+1}` (zero-based `i`).
    pub fn input(&self, i: usize) -> usize {
        debug_assert!(i < self.input_dim);
        i + 1
    }

    pub fn gate(&mut self, lambda: f64, left: usize, mu: f64, right: usize) -> usize {
        self.gates.push(Gate::new(lambda, left, mu, right));
        self.input_dim + self.gates.len()
    }

    pub fn copy(&mut self, sign: f64, src: usize) -> usize {
        self.gate(sign, src, 0.0, src)
    }

    /// Emits `Σ c_k v_k` over a signed list of value indices: one copy gate for a
    /// single term, `k - 1` accumulation gates for `k >= 2` terms. Returns `None`
    /// for an empty list.
    pub fn accumulate(&mut self, terms: &[(usize, f64)]) -> Option<usize> {
        match terms {
            [] => None,
            [(v, c)] => Some(self.copy(*c, *v)),
            [(a, ca), (b, cb), rest @ ..] => {
                let mut acc = self.gate(*ca, *a, *cb, *b);
                for (v, c) in rest {
                    acc = self.gate(1.0, acc, *c, *v);
                }
                Some(acc)
            }
        }
    }

    pub fn op_count(&self) -> usize {
        self.gates.len()
    }

    pub fn finish(self, taps: Vec<usize>, coeff_bound: f64, scale: f64) -> Result<LinearCircuit, CircuitError> {
        LinearCircuit::new(self.input_dim, self.gates, taps, coeff_bound, scale)
    }
}

/// Gate count of [`CircuitBuilder::accumulate`] for a list of `k` terms.
pub fn accumulation_cost(k: usize) -> usize {
    match k {
        0 => 0,
        1 => 1,
        k => k - 1,
    }
}

/// `max(0, ln Δ / ln 2r)`.
pub fn morgenstern_bound(delta: f64, r: f64) -> Result<f64, CircuitError> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(CircuitError::NonPositiveDelta(delta));
    }
    morgenstern_bound_log(delta.ln(), r)
}

/// Same bound taking `ln Δ` directly, for determinants that overflow `f64`.
pub fn morgenstern_bound_log(log_delta: f64, r: f64) -> Result<f64, CircuitError> {
    validate_bound(r)?;
    if log_delta.is_nan() || log_delta == f64::INFINITY {
        return Err(CircuitError::NonPositiveDelta(log_delta.exp()));
    }
    Ok((log_delta / (2.0 * r).ln()).max(0.0))
}
