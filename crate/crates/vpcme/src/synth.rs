//! Synthetic multi-label datasets with known generating rules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use vpcme_core::{Matrix, MultiLabelDataset};

/// Three noise-free labels, each the sign of one of three features uniform on [-1, 1].
pub fn sign_labels(n: usize, seed: u64) -> MultiLabelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feats = Vec::with_capacity(n * 3);
    for _ in 0..n * 3 {
        feats.push(rng.random_range(-1.0..1.0));
    }
    let labels = feats.iter().map(|&v| v > 0.0).collect();
    build(n, 3, feats, labels)
}

/// Three correlated labels thresholding linear combinations of eight Gaussian
/// features, each label flipped independently with probability `noise`.
pub fn linear_labels(n: usize, seed: u64, noise: f64) -> MultiLabelDataset {
    const W: [[f64; 8]; 3] = [
        [1.0, 0.8, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0],
        [0.6, 0.0, 1.0, 0.0, 0.0, -0.4, 0.0, 0.0],
        [0.0, 0.7, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0],
    ];
    const BIAS: [f64; 3] = [0.0, 0.3, -0.2];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feats = Vec::with_capacity(n * 8);
    let mut labels = Vec::with_capacity(n * 3);
    for _ in 0..n {
        let x: Vec<f64> = (0..8).map(|_| rng.sample(StandardNormal)).collect();
        for (w, b) in W.iter().zip(BIAS) {
            let clean = w.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>() > b;
            labels.push(clean ^ rng.random_bool(noise));
        }
        feats.extend(x);
    }
    build(n, 8, feats, labels)
}

fn build(n: usize, k: usize, feats: Vec<f64>, labels: Vec<bool>) -> MultiLabelDataset {
    let features = Matrix::from_row_major(n, k, feats).expect("generator shape");
    MultiLabelDataset::with_default_names(features, labels, 3).expect("generator output is valid")
}
