use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jlcert::distortion::{estimate_failure_rate, DistortionParams, InputDistribution};
use jlcert::harness::{bench_embed, certify_instance, run_experiment, ExperimentConfig, HarnessError};
use jlcert::spectral::{exact_delta_small, t_param, EXACT_DELTA_CAP};
use jlcert::transforms::kac_default_steps;
use jlcert::{Family, RealizedMatrix, SpectralReport, TransformInstance, TransformSpec, UniversalConstants};

#[derive(Parser)]
#[command(name = "jlcert", version, about = "Fast JL transforms as bounded-coefficient linear circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an instance and print its spec, circuit or realized matrix.
    Sample {
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(long, value_enum, default_value_t = Emit::Spec)]
        emit: Emit,
    },
    /// Spectral report for a CSV matrix or a sampled instance.
    Spectra {
        #[arg(long, conflicts_with = "family")]
        matrix: Option<PathBuf>,
        /// Scale attached to a CSV matrix.
        #[arg(long, default_value_t = 1.0, requires = "matrix")]
        scale: f64,
        #[command(flatten)]
        transform: TransformArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        constants: ConstantArgs,
        /// Coefficient bound r for the gate lower bound.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Also enumerate every square minor (m, d <= 8).
        #[arg(long)]
        exact_delta: bool,
    },
    /// Monte Carlo failure rate on one instance, as single-line JSON.
    Distortion {
        #[command(flatten)]
        transform: TransformArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
        dist: Dist,
        /// Support size for `--dist sparse_k`.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Seed for the input stream; defaults to the instance seed.
        #[arg(long)]
        input_seed: Option<u64>,
    },
    /// Full lower-bound chain for one instance. Exit code 2 on a violation.
    Certify {
        #[command(flatten)]
        transform: TransformArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// Median embedding time and gate count.
    Bench {
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
    /// Run a JSON experiment config and write rows.csv, rows.json, meta.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "dense_rademacher", alias = "dense")]
    DenseRademacher,
    #[value(name = "sparse_kn", alias = "sparse")]
    SparseKn,
    #[value(name = "fast_jl", alias = "fastjl")]
    FastJl,
    #[value(name = "toeplitz_d", alias = "toeplitz")]
    ToeplitzD,
    #[value(name = "kac")]
    Kac,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    sparsity: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    /// Kac walk length; defaults to ceil(d ln d + m ln(1/delta)) with delta = 0.01.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
}

#[derive(Args)]
struct ConstantArgs {
    #[arg(long = "const-c", default_value_t = 1.0)]
    c: f64,
    #[arg(long = "const-c1", default_value_t = 1.0)]
    c1: f64,
    #[arg(long = "const-big-c1", default_value_t = 1.0)]
    big_c1: f64,
}

impl ConstantArgs {
    fn get(&self) -> UniversalConstants {
        UniversalConstants {
            c: self.c,
            c1: self.c1,
            big_c1: self.big_c1,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Spec,
    Circuit,
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Gaussian,
    Basis,
    #[value(name = "sparse_k")]
    SparseK,
}

enum Failure {
    Error(String),
    Violation(String),
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.to_string())
    }
}

fn usage(msg: &str) -> Failure {
    Failure::Error(msg.to_string())
}

impl TransformArgs {
    fn spec(&self) -> Result<TransformSpec, Failure> {
        let family = self.family.ok_or_else(|| usage("--family is required"))?;
        let m = self.m.ok_or_else(|| usage("--m is required"))?;
        let d = self.d.ok_or_else(|| usage("--d is required"))?;
        let family = match family {
            FamilyArg::DenseRademacher => Family::DenseRademacher,
            FamilyArg::SparseKn => Family::SparseKn {
                sparsity: self.sparsity.ok_or_else(|| usage("--sparsity is required for sparse_kn"))?,
            },
            FamilyArg::FastJl => Family::FastJl {
                q: self.q.ok_or_else(|| usage("--q is required for fast_jl"))?,
            },
            FamilyArg::ToeplitzD => Family::ToeplitzD,
            FamilyArg::Kac => Family::Kac {
                steps: match self.steps {
                    Some(s) => s,
                    None => kac_default_steps(d, m, 0.01)?,
                },
            },
        };
        Ok(TransformSpec::new(family, m, d, self.seed))
    }

    fn instance(&self) -> Result<TransformInstance, Failure> {
        Ok(TransformInstance::sample(self.spec()?)?)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

#[derive(Serialize)]
struct SpectraOutput {
    #[serde(flatten)]
    report: SpectralReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_delta: Option<f64>,
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Sample { transform, emit } => {
            let inst = transform.instance()?;
            match emit {
                Emit::Spec => print_json(inst.spec())?,
                Emit::Circuit => print!("{}", inst.compile_circuit().to_text()),
                Emit::Matrix => print!("{}", inst.compile_circuit().realize_matrix().to_csv()),
            }
        }
        Command::Spectra {
            matrix,
            scale,
            transform,
            target,
            constants,
            r,
            exact_delta,
        } => {
            let b = match matrix {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| usage(&format!("{}: {e}", path.display())))?;
                    RealizedMatrix::from_csv(&text, scale).map_err(|e| usage(&format!("{}: {e}", path.display())))?
                }
                None => transform.instance()?.compile_circuit().realize_matrix(),
            };
            let exact_delta = if exact_delta {
                if b.rows() > EXACT_DELTA_CAP || b.cols() > EXACT_DELTA_CAP {
                    return Err(usage(&format!("--exact-delta needs m, d <= {EXACT_DELTA_CAP}")));
                }
                Some(exact_delta_small(&b)?)
            } else {
                None
            };
            let t = t_param(b.rows(), target.eps, target.delta);
            let report = SpectralReport::compute(&b, t, r, constants.get())?;
            print_json(&SpectraOutput { report, exact_delta })?;
        }
        Command::Distortion {
            transform,
            target,
            samples,
            dist,
            k,
            input_seed,
        } => {
            let inst = transform.instance()?;
            let input = match dist {
                Dist::Gaussian => InputDistribution::Gaussian,
                Dist::Basis => InputDistribution::BasisVectors,
                Dist::SparseK => InputDistribution::SparseK { k },
            };
            let params = DistortionParams {
                epsilon: target.eps,
                delta: target.delta,
                sample_count: samples,
                input,
                seed: input_seed.unwrap_or(inst.seed()),
            };
            print_json(&estimate_failure_rate(&inst, &params)?)?;
        }
        Command::Certify {
            transform,
            target,
            constants,
        } => {
            let inst = transform.instance()?;
            let cert = certify_instance(&inst, target.eps, target.delta, constants.get())?;
            print_json(&cert)?;
            if !cert.coeff_bound_ok || !cert.consistent {
                return Err(Failure::Violation(format!(
                    "{} gates < lower bound {:.6}",
                    cert.op_count, cert.spectral.ops_lb
                )));
            }
        }
        Command::Bench { transform, reps } => {
            let inst = transform.instance()?;
            print_json(&bench_embed(&inst, reps)?)?;
        }
        Command::Run { config, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            match run_experiment(&cfg) {
                Ok(rows) => eprintln!("{} rows written to {}", rows.len(), cfg.output_dir.display()),
                Err(e @ HarnessError::CertificationViolation { .. }) => return Err(Failure::Violation(e.to_string())),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("certification violation: {msg}");
            ExitCode::from(2)
        }
    }
}
