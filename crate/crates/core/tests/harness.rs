mod common;

use std::path::Path;

use common::{gaussian, sample};
use jlcert::harness::{
    bench_embed, certify_instance, compute_rows, over_a_failure_sweep, run_experiment, Cell, ExperimentConfig,
    FamilyConfig, TIMING_COLUMN,
};
use jlcert::{Family, UniversalConstants};

fn reference_config(out: &Path) -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/reference.json");
    let mut cfg = ExperimentConfig::load(&path).unwrap();
    cfg.output_dir = out.to_owned();
    cfg
}

/// rows.csv without the timing column.
fn strip_timing_csv(text: &str) -> String {
    let mut lines = text.lines();
    let schema = lines.next().unwrap();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let skip = header.iter().position(|h| *h == TIMING_COLUMN).unwrap();
    let keep = |line: &str| {
        line.split(',')
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, v)| v)
            .collect::<Vec<_>>()
            .join(",")
    };
    std::iter::once(schema.to_string())
        .chain(std::iter::once(keep(&header.join(","))))
        .chain(lines.map(keep))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reruns_are_identical_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = reference_config(dir.path());
    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();

    run_experiment(&cfg).unwrap();
    let first = (strip_timing_csv(&read("rows.csv")), read("meta.json"));
    run_experiment(&cfg).unwrap();
    let second = (strip_timing_csv(&read("rows.csv")), read("meta.json"));
    assert_eq!(first, second);
    assert!(first.0.starts_with("# schema: "));
}

#[test]
fn rows_follow_config_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = reference_config(dir.path());
    let rows = compute_rows(&cfg).unwrap();
    assert_eq!(rows.len(), cfg.families.len() * cfg.cells.len() * cfg.trials);
    let mut i = 0;
    for f in &cfg.families {
        for c in &cfg.cells {
            for t in 0..cfg.trials {
                let r = &rows[i];
                assert_eq!((r.m, r.d, r.trial), (c.m, c.d, t));
                assert_eq!(r.family, f.resolve(c.m, c.d, cfg.delta).unwrap().name());
                assert!(r.op_count as f64 >= r.ops_lb);
                i += 1;
            }
        }
    }
}

#[test]
fn dense_ops_bound_grows_with_m() {
    let cfg = ExperimentConfig {
        families: vec![FamilyConfig::DenseRademacher],
        cells: [8, 16, 32, 64].iter().map(|&m| Cell { m, d: 4 * m }).collect(),
        epsilon: 0.25,
        delta: 0.01,
        trials: 3,
        base_seed: 1,
        output_dir: "unused".into(),
        constants: UniversalConstants::default(),
        distortion_samples: 10,
        input: jlcert::distortion::InputDistribution::Gaussian,
        embed_repetitions: 3,
    };
    let rows = compute_rows(&cfg).unwrap();
    let means: Vec<f64> = rows.chunks(3).map(|c| c.iter().map(|r| r.ops_lb).sum::<f64>() / 3.0).collect();
    for w in means.windows(2) {
        assert!(w[1] >= w[0], "{means:?}");
    }
}

#[test]
fn over_a_sweep_rates() {
    let d = 256;
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    let rate = over_a_failure_sweep(Family::DenseRademacher, 256, d, &e1, 0.25, 10_000, 8).unwrap();
    assert!(rate <= 0.05, "{rate}");

    let x = gaussian(d, &mut common::rng(3));
    let rate = over_a_failure_sweep(Family::DenseRademacher, 256, d, &x, 0.25, 2_000, 9).unwrap();
    assert!(rate <= 0.05, "{rate}");

    let rate = over_a_failure_sweep(Family::Kac { steps: 500 }, 64, 64, &x[..64], 0.01, 500, 1).unwrap();
    assert_eq!(rate, 0.0);
}

#[test]
fn fast_jl_embeds_faster_than_dense() {
    let d = 1 << 14;
    let fast = sample(Family::FastJl { q: 0.01 }, 256, d, 1);
    let dense = sample(Family::DenseRademacher, 256, d, 1);
    let f = bench_embed(&fast, 7).unwrap();
    let g = bench_embed(&dense, 7).unwrap();
    assert!(f.median_ns < g.median_ns, "fast {} ns vs dense {} ns", f.median_ns, g.median_ns);
    assert!(f.ops < g.ops);
}

#[test]
fn certificate_is_consistent_for_square_kac() {
    let inst = sample(Family::Kac { steps: 30 }, 8, 8, 4);
    let cert = certify_instance(&inst, 0.25, 0.01, UniversalConstants::default()).unwrap();
    assert!(cert.consistent && cert.coeff_bound_ok);
    assert_eq!(cert.column_census, 8);
    // orthogonal rows: every eigenvalue of BBᵀ is 1
    assert!(cert.spectral.eigenvalues.iter().all(|v| (v - 1.0).abs() < 1e-12));
}
