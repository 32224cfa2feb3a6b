//! Bounded-coefficient linear circuits for Johnson-Lindenstrauss embeddings.
//!
//! The crate samples the common fast JL transform families, compiles each one
//! into a straight-line linear circuit whose gate coefficients are bounded by
//! 1, and certifies the circuit size against a chain of lower bounds:
//! eigenvalues of the Gram matrix bound the largest square-minor determinant,
//! which in turn bounds the number of gates any such circuit needs.
//!
//! - [`circuit`]: the gate model, evaluation, matrix realization, text format.
//! - [`transforms`]: seeded transform families, fast embedding, compilation.
//! - [`distortion`]: Monte Carlo norm-preservation estimates.
//! - [`spectral`]: Gram spectrum, minor bounds, exhaustive minor oracle.
//! - [`harness`]: experiment grid runner, over-A sweeps, benchmarks.

pub mod circuit;
pub mod distortion;
pub mod harness;
pub mod matrix;
pub mod spectral;
pub mod stats;
pub mod transforms;

pub use circuit::{morgenstern_bound, morgenstern_bound_log, CircuitError, Gate, LinearCircuit};
pub use matrix::RealizedMatrix;
pub use spectral::{SpectralReport, UniversalConstants};
pub use transforms::{Family, TransformInstance, TransformSpec};
