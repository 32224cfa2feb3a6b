//! Gram-spectrum diagnostics and the determinant route to operation lower bounds.
//!
//! For `B ∈ R^{m×d}` with eigenvalues `λ_1 >= ... >= λ_m` of `BᵀB`, every
//! `l <= m` admits an `l x l` submatrix `F` with
//!
//! ```text
//! |det F| >= sqrt( Π_{i<=l} λ_i / (C(d,l) C(m,l)) )
//! ```
//!
//! Maximizing the right-hand side over `l` gives a lower bound on `Δ(B)`, and
//! [`morgenstern_bound_log`] turns that into a lower bound on the gate count
//! of any circuit with coefficients bounded by `r`. Everything is kept in
//! natural-log space since these products overflow `f64` quickly.
//!
//! Quantities that depend on unspecified universal constants are reported as
//! ratios and never turned into pass/fail verdicts.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;
use thiserror::Error;

use crate::circuit::{morgenstern_bound_log, CircuitError};
use crate::matrix::RealizedMatrix;

/// Largest row or column count accepted by [`exact_delta_small`].
pub const EXACT_DELTA_CAP: usize = 8;

/// Relative tolerance below zero for eigenvalues treated as round-off.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("expected m <= d, got a {m}x{d} matrix")]
    TallMatrix { m: usize, d: usize },
    #[error("eigenvalue {value} is below -{CLAMP_TOLERANCE}·λ₁ (λ₁ = {lambda_1}); eigensolve is unreliable")]
    NegativeEigenvalue { value: f64, lambda_1: f64 },
    #[error("rank l={l} must lie in 1..={m}")]
    InvalidRank { l: usize, m: usize },
    #[error("eigenvalue λ_{l} is zero, so no l x l minor bound exists")]
    ZeroEigenvalue { l: usize },
    #[error("spectrum is identically zero")]
    ZeroSpectrum,
    #[error("exhaustive minor enumeration is capped at {cap}x{cap}, got {m}x{d}")]
    TooLarge { m: usize, d: usize, cap: usize },
    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("t parameter must be positive and finite, got {0}")]
    InvalidTParam(f64),
    #[error("invalid universal constants: {0}")]
    InvalidConstants(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// The unspecified constants of the lower-bound chain, all defaulting to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalConstants {
    /// Fraction in `λ_{⌈cm/t⌉} >= ds/(3m)`; in `(0, 1]`.
    pub c: f64,
    /// Anti-concentration prefactor; in `(0, 1]`.
    pub c1: f64,
    /// Anti-concentration exponent constant; at least 1.
    #[serde(rename = "C1")]
    pub big_c1: f64,
}

impl Default for UniversalConstants {
    fn default() -> Self {
        Self {
            c: 1.0,
            c1: 1.0,
            big_c1: 1.0,
        }
    }
}

impl UniversalConstants {
    pub fn validate(&self) -> Result<(), SpectralError> {
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(SpectralError::InvalidConstants(format!("c must lie in (0, 1], got {}", self.c)));
        }
        if !(self.c1 > 0.0 && self.c1 <= 1.0) {
            return Err(SpectralError::InvalidConstants(format!("c1 must lie in (0, 1], got {}", self.c1)));
        }
        if !(self.big_c1 >= 1.0 && self.big_c1.is_finite()) {
            return Err(SpectralError::InvalidConstants(format!("C1 must be >= 1, got {}", self.big_c1)));
        }
        Ok(())
    }
}

/// `t = m ε² / ln(1/δ)`.
pub fn t_param(m: usize, epsilon: f64, delta: f64) -> f64 {
    m as f64 * epsilon * epsilon / delta.recip().ln()
}

fn check_finite(b: &RealizedMatrix) -> Result<(), SpectralError> {
    if b.is_finite() {
        Ok(())
    } else {
        Err(SpectralError::NonFinite)
    }
}

/// Sorts descending and clamps round-off negatives to zero.
fn sort_and_clamp(mut values: Vec<f64>) -> Result<Vec<f64>, SpectralError> {
    values.sort_by(|a, b| b.total_cmp(a));
    let lambda_1 = values.first().copied().unwrap_or(0.0).max(0.0);
    for v in &mut values {
        if *v < 0.0 {
            if *v < -CLAMP_TOLERANCE * lambda_1 {
                return Err(SpectralError::NegativeEigenvalue { value: *v, lambda_1 });
            }
            *v = 0.0;
        }
    }
    Ok(values)
}

/// The `m` eigenvalues of `BBᵀ` (equal to the nonzero spectrum of `BᵀB`),
/// sorted descending.
pub fn gram_eigenvalues(b: &RealizedMatrix) -> Result<Vec<f64>, SpectralError> {
    check_finite(b)?;
    let (m, d) = (b.rows(), b.cols());
    if m > d {
        return Err(SpectralError::TallMatrix { m, d });
    }
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v: f64 = b.row(i).iter().zip(b.row(j)).map(|(x, y)| x * y).sum();
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    let eig = SymmetricEigen::new(gram);
    sort_and_clamp(eig.eigenvalues.iter().copied().collect())
}

/// Number of eigenvalues at or above `threshold`.
pub fn count_at_threshold(eigenvalues: &[f64], threshold: f64) -> usize {
    eigenvalues.iter().filter(|&&v| v >= threshold).count()
}

/// `½ (Σ_{i<=l} ln λ_i − ln C(d,l) − ln C(m,l))`: the log of a value that some
/// `l x l` minor of `B` is guaranteed to reach in absolute value.
pub fn det_lower_bound_log(eigenvalues: &[f64], l: usize, d: usize, m: usize) -> Result<f64, SpectralError> {
    if l == 0 || l > m || l > eigenvalues.len() {
        return Err(SpectralError::InvalidRank { l, m });
    }
    if m > d {
        return Err(SpectralError::TallMatrix { m, d });
    }
    let lambda_l = eigenvalues[l - 1];
    if lambda_l.is_nan() || lambda_l <= 0.0 {
        return Err(SpectralError::ZeroEigenvalue { l });
    }
    let log_prod: f64 = eigenvalues[..l].iter().map(|v| v.ln()).sum();
    Ok(0.5 * (log_prod - ln_binomial(d as u64, l as u64) - ln_binomial(m as u64, l as u64)))
}

/// The `l` maximizing [`det_lower_bound_log`] and the maximum itself. Ties go
/// to the smallest `l`.
pub fn best_det_bound_log(eigenvalues: &[f64], d: usize, m: usize) -> Result<(usize, f64), SpectralError> {
    let positive = eigenvalues.iter().take(m).take_while(|&&v| v > 0.0).count();
    if positive == 0 {
        return Err(SpectralError::ZeroSpectrum);
    }
    let mut best = (0, f64::NEG_INFINITY);
    for l in 1..=positive {
        let v = det_lower_bound_log(eigenvalues, l, d, m)?;
        if v > best.1 {
            best = (l, v);
        }
    }
    Ok(best)
}

/// `(⌈cm/t⌉ / 2) · ln(c² s / (3 (e t)²))`, the log of the large-minor bound
/// implied by `λ_{⌈cm/t⌉} >= ds/(3m)`. Diagnostic only.
pub fn large_minor_log_bound(m: usize, s: f64, t: f64, c: f64) -> f64 {
    let l = (c * m as f64 / t).ceil();
    let e_t = std::f64::consts::E * t;
    0.5 * l * (c * c * s / (3.0 * e_t * e_t)).ln()
}

fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .expect("non-empty range");
        let p = a[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    det
}

/// Exact `Δ(B)`: the largest `|det|` over every square submatrix, by
/// exhaustive enumeration. Limited to `m, d <= 8`.
pub fn exact_delta_small(b: &RealizedMatrix) -> Result<f64, SpectralError> {
    check_finite(b)?;
    let (m, d) = (b.rows(), b.cols());
    if m > EXACT_DELTA_CAP || d > EXACT_DELTA_CAP {
        return Err(SpectralError::TooLarge {
            m,
            d,
            cap: EXACT_DELTA_CAP,
        });
    }
    let bits = |mask: u32, len: usize| -> Vec<usize> { (0..len).filter(|i| mask & (1 << i) != 0).collect() };
    let best = (1u32..1 << m)
        .into_par_iter()
        .map(|row_mask| {
            let rows = bits(row_mask, m);
            let k = rows.len();
            let mut best = 0.0f64;
            for col_mask in 1u32..1 << d {
                if col_mask.count_ones() as usize != k {
                    continue;
                }
                let cols = bits(col_mask, d);
                let sub: Vec<f64> = rows
                    .iter()
                    .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| b.get(i, j))
                    .collect();
                best = best.max(determinant(sub, k).abs());
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Number of columns with `‖B e_i‖² / s ∈ (1 − ε, 1 + ε)`.
pub fn column_norm_census(b: &RealizedMatrix, s: f64, epsilon: f64) -> usize {
    (0..b.cols())
        .filter(|&j| {
            let ratio: f64 = (0..b.rows()).map(|i| b.get(i, j).powi(2)).sum::<f64>() / s;
            ratio > 1.0 - epsilon && ratio < 1.0 + epsilon
        })
        .count()
}

/// `gᵀ(BᵀB)g − Σ_i λ_i (U g)_i²` with `U` the eigenvectors of the `d x d`
/// matrix `BᵀB`; zero up to round-off. Costs a full `d x d` eigensolve.
pub fn quadratic_form_residual(b: &RealizedMatrix, g: &[f64]) -> Result<f64, SpectralError> {
    check_finite(b)?;
    let d = b.cols();
    if g.len() != d {
        return Err(SpectralError::DimensionMismatch {
            expected: d,
            actual: g.len(),
        });
    }
    let bm = DMatrix::from_row_slice(b.rows(), d, b.entries());
    let gram = bm.transpose() * &bm;
    let gv = nalgebra::DVector::from_column_slice(g);
    let direct = gv.dot(&(&gram * &gv));
    let eig = SymmetricEigen::new(gram);
    let rotated = eig.eigenvectors.transpose() * &gv;
    let via_spectrum: f64 = eig
        .eigenvalues
        .iter()
        .zip(rotated.iter())
        .map(|(lambda, u)| lambda * u * u)
        .sum();
    Ok(direct - via_spectrum)
}

/// Spectrum of `BᵀB` and everything derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub m: usize,
    pub d: usize,
    pub scale: f64,
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    pub frob_sq: f64,
    pub lambda_1: f64,
    /// `ds / (3m)`.
    pub threshold: f64,
    pub large_count: usize,
    pub t_param: f64,
    pub coeff_bound: f64,
    /// Maximizing `l` of the minor bound, `None` for a zero spectrum.
    pub l_star: Option<usize>,
    pub det_log_lb: Option<f64>,
    /// Gate lower bound from `det_log_lb`; zero for a zero spectrum.
    pub ops_lb: f64,
    /// Log of the large-minor bound at the configured `c`, when finite.
    pub large_minor_log_bound: Option<f64>,
    /// `sqrt(m Σλ²)`, the Cauchy-Schwarz ceiling on the trace.
    pub cauchy_schwarz_upper: f64,
    pub constants: UniversalConstants,
}

impl SpectralReport {
    /// Builds the report for `b`, using the scale carried by the matrix.
    pub fn compute(
        b: &RealizedMatrix,
        t_param: f64,
        coeff_bound: f64,
        constants: UniversalConstants,
    ) -> Result<Self, SpectralError> {
        constants.validate()?;
        if !(t_param.is_finite() && t_param > 0.0) {
            return Err(SpectralError::InvalidTParam(t_param));
        }
        let eigenvalues = gram_eigenvalues(b)?;
        let (m, d, scale) = (b.rows(), b.cols(), b.scale());
        let trace: f64 = eigenvalues.iter().sum();
        let frob_sq: f64 = eigenvalues.iter().map(|v| v * v).sum();
        let lambda_1 = eigenvalues[0];
        let threshold = d as f64 * scale / (3.0 * m as f64);
        let large_count = count_at_threshold(&eigenvalues, threshold);

        let (l_star, det_log_lb, ops_lb) = match best_det_bound_log(&eigenvalues, d, m) {
            Ok((l, v)) => (Some(l), Some(v), morgenstern_bound_log(v, coeff_bound)?),
            Err(SpectralError::ZeroSpectrum) => (None, None, 0.0),
            Err(e) => return Err(e),
        };
        let lm = large_minor_log_bound(m, scale, t_param, constants.c);

        Ok(Self {
            m,
            d,
            scale,
            trace,
            frob_sq,
            lambda_1,
            threshold,
            large_count,
            t_param,
            coeff_bound,
            l_star,
            det_log_lb,
            ops_lb,
            large_minor_log_bound: lm.is_finite().then_some(lm),
            cauchy_schwarz_upper: (m as f64 * frob_sq).sqrt(),
            constants,
            eigenvalues,
        })
    }

    /// `ds`, the scale-weighted dimension.
    pub fn ds(&self) -> f64 {
        self.d as f64 * self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    /// `Tr(BᵀB)`.
    pub lhs: f64,
    /// `(1 − ε)(1 − 4δ) d s`.
    pub rhs: f64,
    /// `2ds/3`.
    pub two_thirds_ds: f64,
    /// `Tr(BᵀB) >= 2ds/3`.
    pub passes: bool,
}

/// Trace against `(1 − ε)(1 − 4δ) ds` and `2ds/3`.
pub fn trace_check(report: &SpectralReport, epsilon: f64, delta: f64) -> TraceCheck {
    let ds = report.ds();
    let two_thirds_ds = 2.0 * ds / 3.0;
    TraceCheck {
        lhs: report.trace,
        rhs: (1.0 - epsilon) * (1.0 - 4.0 * delta) * ds,
        two_thirds_ds,
        passes: report.trace >= two_thirds_ds,
    }
}

/// `Σλ² / (400 C₁ t (ds)² / m)`. A diagnostic ratio, not a verdict.
pub fn frobenius_ratio(
    report: &SpectralReport,
    t_param: f64,
    constants: &UniversalConstants,
) -> Result<f64, SpectralError> {
    constants.validate()?;
    if !(t_param.is_finite() && t_param > 0.0) {
        return Err(SpectralError::InvalidTParam(t_param));
    }
    let ds = report.ds();
    Ok(report.frob_sq / (400.0 * constants.big_c1 * t_param * ds * ds / report.m as f64))
}

/// `#{i : λ_i >= ds/(3m)}`.
pub fn count_large_eigenvalues(report: &SpectralReport) -> usize {
    count_at_threshold(&report.eigenvalues, report.threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<f64>], s: f64) -> RealizedMatrix {
        RealizedMatrix::from_rows(rows, s).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn h2() -> RealizedMatrix {
        mat(&[vec![1.0, 1.0], vec![1.0, -1.0]], 2.0)
    }

    fn zeros(m: usize, d: usize) -> RealizedMatrix {
        RealizedMatrix::new(m, d, vec![0.0; m * d], 1.0).unwrap()
    }

    #[test]
    fn eigenvalues_of_small_matrices() {
        let e = gram_eigenvalues(&mat(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1.0)).unwrap();
        assert!(close(e[0], 1.0, 1e-12) && close(e[1], 1.0, 1e-12));
        let e = gram_eigenvalues(&h2()).unwrap();
        assert!(close(e[0], 2.0, 1e-12) && close(e[1], 2.0, 1e-12));
        let e = gram_eigenvalues(&mat(&[vec![3.0, 0.0, 0.0], vec![0.0, 4.0, 0.0]], 1.0)).unwrap();
        assert!(close(e[0], 16.0, 1e-12) && close(e[1], 9.0, 1e-12));
    }

    #[test]
    fn eigenvalue_errors() {
        assert_eq!(
            gram_eigenvalues(&mat(&[vec![1.0], vec![2.0]], 1.0)),
            Err(SpectralError::TallMatrix { m: 2, d: 1 })
        );
        assert_eq!(gram_eigenvalues(&mat(&[vec![f64::NAN, 1.0]], 1.0)), Err(SpectralError::NonFinite));
    }

    #[test]
    fn clamping_policy() {
        assert_eq!(sort_and_clamp(vec![-1e-12, 4.0]).unwrap(), vec![4.0, 0.0]);
        assert!(matches!(
            sort_and_clamp(vec![-1e-3, 4.0]),
            Err(SpectralError::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn minor_bound_on_hadamard() {
        let e = gram_eigenvalues(&h2()).unwrap();
        assert!(close(det_lower_bound_log(&e, 2, 2, 2).unwrap(), 2f64.ln(), 1e-12));
        let l1 = det_lower_bound_log(&e, 1, 2, 2).unwrap();
        assert!(close(l1.exp(), std::f64::consts::FRAC_1_SQRT_2, 1e-12));
        assert!(l1.exp() <= 1.0);
        assert_eq!(best_det_bound_log(&e, 2, 2).unwrap().0, 2);
    }

    #[test]
    fn minor_bound_errors() {
        let e = [4.0, 0.0];
        assert_eq!(det_lower_bound_log(&e, 0, 3, 2), Err(SpectralError::InvalidRank { l: 0, m: 2 }));
        assert_eq!(det_lower_bound_log(&e, 3, 3, 2), Err(SpectralError::InvalidRank { l: 3, m: 2 }));
        assert_eq!(det_lower_bound_log(&e, 2, 3, 2), Err(SpectralError::ZeroEigenvalue { l: 2 }));
        assert_eq!(best_det_bound_log(&[0.0, 0.0], 3, 2), Err(SpectralError::ZeroSpectrum));
        assert_eq!(best_det_bound_log(&e, 3, 2).unwrap().0, 1);
    }

    #[test]
    fn scaled_identity_prefers_full_rank() {
        let (m, s) = (5, 9.0);
        let e = vec![s; m];
        let (l, v) = best_det_bound_log(&e, m, m).unwrap();
        assert_eq!(l, m);
        assert!(close(v, 0.5 * m as f64 * s.ln(), 1e-12));
    }

    #[test]
    fn exact_delta_by_hand() {
        assert_eq!(exact_delta_small(&mat(&[vec![1.0, 2.0], vec![3.0, 4.0]], 1.0)).unwrap(), 4.0);
        let i3 = mat(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], 1.0);
        assert_eq!(exact_delta_small(&i3).unwrap(), 1.0);
        assert_eq!(exact_delta_small(&zeros(2, 3)).unwrap(), 0.0);
        assert!(matches!(exact_delta_small(&zeros(2, 9)), Err(SpectralError::TooLarge { .. })));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = vec![2.0, -1.0, 0.5, 3.0, 0.0, 1.0, -2.0, 4.0, 1.5];
        let cof = 2.0 * (0.0 * 1.5 - 1.0 * 4.0) + (3.0 * 1.5 - 1.0 * -2.0) + 0.5 * (3.0 * 4.0 - 0.0 * -2.0);
        assert!(close(determinant(a, 3), cof, 1e-12));
    }

    #[test]
    fn census_cases() {
        assert_eq!(column_norm_census(&zeros(2, 5), 1.0, 0.25), 0);
        let b = mat(&[vec![1.0, 1.0, 2.0], vec![-1.0, 1.0, 0.0]], 2.0);
        // column norms² / s: 1, 1, 2
        assert_eq!(column_norm_census(&b, 2.0, 0.25), 2);
    }

    #[test]
    fn quadratic_residual_trivial_cases() {
        let b = mat(&[vec![1.0, 2.0, 0.0], vec![0.5, -1.0, 3.0]], 1.0);
        assert_eq!(quadratic_form_residual(&b, &[0.0; 3]).unwrap(), 0.0);
        let id = mat(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1.0);
        assert!(quadratic_form_residual(&id, &[0.3, -2.0]).unwrap().abs() < 1e-15);
        assert!(quadratic_form_residual(&b, &[1.0]).is_err());
    }

    #[test]
    fn report_on_zero_matrix() {
        let r = SpectralReport::compute(&zeros(2, 4), 1.0, 1.0, UniversalConstants::default()).unwrap();
        assert_eq!(r.trace, 0.0);
        assert_eq!(count_large_eigenvalues(&r), 0);
        assert_eq!((r.l_star, r.det_log_lb, r.ops_lb), (None, None, 0.0));
        assert!(!trace_check(&r, 0.25, 0.01).passes);
    }

    #[test]
    fn report_on_scaled_identity() {
        let (m, s) = (4, 16.0_f64);
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { s.sqrt() } else { 0.0 }).collect())
            .collect();
        let b = mat(&rows, s);
        let r = SpectralReport::compute(&b, 2.0, 1.0, UniversalConstants::default()).unwrap();
        assert_eq!(r.large_count, m);
        assert!(close(r.threshold, s / 3.0, 1e-15));
        // frob_sq = m s², ratio = m² / (400 C1 t d²) with d = m
        let ratio = frobenius_ratio(&r, 2.0, &UniversalConstants::default()).unwrap();
        assert!(close(ratio, 1.0 / 800.0, 1e-12));
        // doubling s leaves the ratio unchanged
        let r2 = SpectralReport::compute(&b.scaled(2f64.sqrt(), 2.0 * s).unwrap(), 2.0, 1.0, UniversalConstants::default())
            .unwrap();
        assert!(close(frobenius_ratio(&r2, 2.0, &UniversalConstants::default()).unwrap(), ratio, 1e-12));
        assert!(close(r.ops_lb, 0.5 * m as f64 * s.ln() / 2f64.ln(), 1e-12));
    }

    #[test]
    fn trace_check_two_unit_rows() {
        // zero-step Kac matrix at d=4, m=2, s=1/2
        let b = mat(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]], 0.5);
        let r = SpectralReport::compute(&b, 1.0, 1.0, UniversalConstants::default()).unwrap();
        let tc = trace_check(&r, 0.25, 1.0 / 36.0);
        assert!(close(tc.lhs, 2.0, 1e-12));
        assert!(close(tc.two_thirds_ds, 4.0 / 3.0, 1e-12));
        assert!(tc.passes);
    }

    #[test]
    fn constants_and_t_validation() {
        let b = h2();
        let bad = UniversalConstants { c1: 1.5, ..Default::default() };
        assert!(SpectralReport::compute(&b, 1.0, 1.0, bad).is_err());
        let bad = UniversalConstants { big_c1: 0.5, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(SpectralReport::compute(&b, 0.0, 1.0, UniversalConstants::default()).is_err());
        assert!(close(t_param(64, 0.25, (-4.0f64).exp()), 1.0, 1e-12));
    }

    #[test]
    fn large_minor_bound_closed_form() {
        // c = 1, t = 1, m = 3, s = 3e²: ⌈3⌉/2 · ln(1) = 0
        let e = std::f64::consts::E;
        assert!(large_minor_log_bound(3, 3.0 * e * e, 1.0, 1.0).abs() < 1e-12);
    }
}
