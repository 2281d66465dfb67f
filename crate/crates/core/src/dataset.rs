//! Multi-label datasets, summary statistics and cross-validation splits.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Matrix, Result};

/// Feature matrix plus boolean label matrix, one row per instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiLabelDataset {
    features: Matrix,
    labels: Vec<bool>,
    label_names: Vec<String>,
}

impl MultiLabelDataset {
    /// `labels` holds one row of `label_names.len()` flags per feature row.
    pub fn new(features: Matrix, labels: Vec<bool>, label_names: Vec<String>) -> Result<Self> {
        let n = features.rows();
        let r = label_names.len();
        if n == 0 {
            return Err(Error::validation("dataset needs at least one instance"));
        }
        if features.cols() == 0 {
            return Err(Error::validation("dataset needs at least one feature column"));
        }
        if r < 2 {
            return Err(Error::validation(format!("dataset needs at least two labels, got {r}")));
        }
        if labels.len() != n * r {
            return Err(Error::DimensionMismatch { expected: n * r, found: labels.len() });
        }
        if let Some(pos) = features.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!(
                "non-finite feature at instance {}, column {}",
                pos / features.cols(),
                pos % features.cols()
            )));
        }
        Ok(MultiLabelDataset { features, labels, label_names })
    }

    /// Like [`new`](Self::new) with generated names `label0`, `label1`, ...
    pub fn with_default_names(features: Matrix, labels: Vec<bool>, label_count: usize) -> Result<Self> {
        let names = (0..label_count).map(|i| format!("label{i}")).collect();
        Self::new(features, labels, names)
    }

    pub fn instance_count(&self) -> usize {
        self.features.rows()
    }

    pub fn feature_count(&self) -> usize {
        self.features.cols()
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn instance(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    /// Indicator row of instance `i`.
    pub fn labels_of(&self, i: usize) -> &[bool] {
        let r = self.label_count();
        &self.labels[i * r..(i + 1) * r]
    }

    pub fn label_rows(&self) -> impl Iterator<Item = &[bool]> {
        let r = self.label_count();
        self.labels.chunks_exact(r)
    }

    pub fn labels_flat(&self) -> &[bool] {
        &self.labels
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    /// Instances at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let n = self.instance_count();
        let k = self.feature_count();
        let r = self.label_count();
        let mut feats = Vec::with_capacity(indices.len() * k);
        let mut labels = Vec::with_capacity(indices.len() * r);
        for &i in indices {
            if i >= n {
                return Err(Error::validation(format!("instance index {i} out of range (n = {n})")));
            }
            feats.extend_from_slice(self.instance(i));
            labels.extend_from_slice(self.labels_of(i));
        }
        let features = Matrix::from_row_major(indices.len(), k, feats)?;
        Self::new(features, labels, self.label_names.clone())
    }

    /// Same labels, different features (e.g. after standardization).
    pub fn with_features(&self, features: Matrix) -> Result<Self> {
        if features.rows() != self.instance_count() {
            return Err(Error::DimensionMismatch { expected: self.instance_count(), found: features.rows() });
        }
        Self::new(features, self.labels.clone(), self.label_names.clone())
    }

    pub fn stats(&self) -> DatasetStats {
        compute_stats(self)
    }
}

/// Label statistics of a dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DatasetStats {
    pub instances: usize,
    pub features: usize,
    pub labels: usize,
    /// Number of distinct label combinations.
    pub distinct: usize,
    /// Mean number of labels per instance.
    pub cardinality: f64,
    /// Cardinality divided by the number of labels.
    pub density: f64,
}

pub fn compute_stats(ds: &MultiLabelDataset) -> DatasetStats {
    let n = ds.instance_count();
    let r = ds.label_count();
    let distinct: BTreeSet<&[bool]> = ds.label_rows().collect();
    let total: usize = ds.label_rows().map(|row| row.iter().filter(|&&b| b).count()).sum();
    let cardinality = total as f64 / n as f64;
    DatasetStats {
        instances: n,
        features: ds.feature_count(),
        labels: r,
        distinct: distinct.len(),
        cardinality,
        density: cardinality / r as f64,
    }
}

/// Fold index of every instance for one k-fold partition.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldAssignment {
    pub fold_of_instance: Vec<usize>,
    pub folds: usize,
    pub seed: u64,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_instance.len()).filter(|&i| self.fold_of_instance[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_instance.len()).filter(|&i| self.fold_of_instance[i] != fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.folds];
        for &f in &self.fold_of_instance {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Shuffles `0..n` with a generator seeded from `seed` and deals the
/// shuffled indices round-robin into `folds` parts.
pub fn kfold_split(n: usize, folds: usize, seed: u64) -> Result<FoldAssignment> {
    if folds < 2 {
        return Err(Error::config(format!("need at least 2 folds, got {folds}")));
    }
    if folds > n {
        return Err(Error::config(format!("{folds} folds requested for only {n} instances")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_of_instance = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        fold_of_instance[i] = pos % folds;
    }
    Ok(FoldAssignment { fold_of_instance, folds, seed })
}

/// Per-column z-score transform fitted on one set of rows.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    /// Columns with zero variance are centered but not rescaled.
    pub fn fit(features: &Matrix) -> Self {
        let n = features.rows().max(1) as f64;
        let k = features.cols();
        let mut mean = vec![0.0; k];
        for row in features.iter_rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; k];
        for row in features.iter_rows() {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|s| {
                let sd = libm::sqrt(s / n);
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn apply(&self, features: &Matrix) -> Result<Matrix> {
        if features.cols() != self.mean.len() {
            return Err(Error::DimensionMismatch { expected: self.mean.len(), found: features.cols() });
        }
        let mut out = features.clone();
        for i in 0..out.rows() {
            for ((v, m), s) in out.row_mut(i).iter_mut().zip(&self.mean).zip(&self.scale) {
                *v = (*v - m) / s;
            }
        }
        Ok(out)
    }
}
