#![allow(dead_code, clippy::needless_range_loop)]

use jlcert::transforms::kac_default_steps;
use jlcert::{Family, RealizedMatrix, TransformInstance, TransformSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(m: usize, d: usize, rng: &mut impl Rng) -> RealizedMatrix {
    let entries = (0..m * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
    RealizedMatrix::new(m, d, entries, 1.0).unwrap()
}

pub fn gaussian(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..d).map(|_| rng.sample(rand_distr::StandardNormal)).collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// One representative of every family at `(m, d)`; `d` must be a power of two.
pub fn all_families(m: usize, d: usize) -> Vec<Family> {
    vec![
        Family::DenseRademacher,
        Family::SparseKn { sparsity: m.min(4) },
        Family::FastJl { q: 0.25 },
        Family::ToeplitzD,
        Family::Kac {
            steps: kac_default_steps(d, m, 0.01).unwrap(),
        },
    ]
}

pub fn sample(family: Family, m: usize, d: usize, seed: u64) -> TransformInstance {
    TransformInstance::sample(TransformSpec::new(family, m, d, seed)).unwrap()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// `B Bᵀ` as nested rows.
pub fn gram_rows(b: &RealizedMatrix) -> Vec<Vec<f64>> {
    (0..b.rows())
        .map(|i| {
            (0..b.rows())
                .map(|k| b.row(i).iter().zip(b.row(k)).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect()
}

/// Determinant by Laplace expansion along the first row.
pub fn laplace_det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<f64>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * a[0][j] * laplace_det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest |det| over all square submatrices, by recursive subset listing.
pub fn brute_delta(b: &RealizedMatrix) -> f64 {
    let mut best = 0.0f64;
    for k in 1..=b.rows().min(b.cols()) {
        for rows in subsets(b.rows(), k) {
            for cols in subsets(b.cols(), k) {
                let sub: Vec<Vec<f64>> = rows.iter().map(|&i| cols.iter().map(|&j| b.get(i, j)).collect()).collect();
                best = best.max(laplace_det(&sub).abs());
            }
        }
    }
    best
}
