//! ML-kNN: per-label maximum a posteriori decisions from the number of
//! positive labels among the k nearest training instances.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Matrix, Result};

pub const DEFAULT_K: usize = 10;
pub const DEFAULT_SMOOTHING: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MlknnModel {
    pub k_neighbors: usize,
    pub smoothing: f64,
    pub train_points: Matrix,
    /// Row-major `n × label_count` indicator matrix.
    pub train_labels: Vec<bool>,
    pub label_count: usize,
    /// `P(label present)`, Laplace-smoothed.
    pub prior_pos: Vec<f64>,
    /// `freq_pos[l][c]`: training instances carrying `l` with exactly `c` positive neighbors for `l`.
    pub freq_pos: Vec<Vec<u64>>,
    /// Same as `freq_pos` for instances without `l`.
    pub freq_neg: Vec<Vec<u64>>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Indices of the `k` training rows closest to `query`, skipping `exclude`.
/// Equal distances favour the lower index. The result is unordered.
fn nearest(
    points: &Matrix,
    query: &[f64],
    k: usize,
    exclude: Option<usize>,
    scratch: &mut Vec<(f64, usize)>,
) -> Vec<usize> {
    scratch.clear();
    scratch.extend(
        points
            .iter_rows()
            .enumerate()
            .filter(|&(i, _)| Some(i) != exclude)
            .map(|(i, row)| (squared_distance(row, query), i)),
    );
    if k < scratch.len() {
        scratch.select_nth_unstable_by(k, by_distance_then_index);
        scratch.truncate(k);
    }
    scratch.iter().map(|&(_, i)| i).collect()
}

impl MlknnModel {
    /// Fits ML-kNN on `points` (`n × d`) with row-major `labels` (`n × label_count`).
    pub fn fit(
        points: &Matrix,
        labels: &[bool],
        label_count: usize,
        k_neighbors: usize,
        smoothing: f64,
    ) -> Result<Self> {
        let n = points.rows();
        if n < 2 {
            return Err(Error::config("ML-kNN needs at least two training instances"));
        }
        if k_neighbors == 0 || k_neighbors >= n {
            return Err(Error::config(format!("k_neighbors must lie in [1, {}), got {k_neighbors}", n)));
        }
        if !(smoothing > 0.0 && smoothing.is_finite()) {
            return Err(Error::config(format!("smoothing must be positive, got {smoothing}")));
        }
        if label_count == 0 {
            return Err(Error::config("ML-kNN needs at least one label"));
        }
        if labels.len() != n * label_count {
            return Err(Error::DimensionMismatch { expected: n * label_count, found: labels.len() });
        }
        if points.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("training points must be finite"));
        }

        let label = |i: usize, l: usize| labels[i * label_count + l];
        let prior_pos = (0..label_count)
            .map(|l| {
                let positives = (0..n).filter(|&i| label(i, l)).count() as f64;
                (smoothing + positives) / (2.0 * smoothing + n as f64)
            })
            .collect();

        let mut freq_pos = vec![vec![0u64; k_neighbors + 1]; label_count];
        let mut freq_neg = vec![vec![0u64; k_neighbors + 1]; label_count];
        let mut scratch = Vec::with_capacity(n);
        let mut counts = vec![0usize; label_count];
        for i in 0..n {
            let neighbors = nearest(points, points.row(i), k_neighbors, Some(i), &mut scratch);
            counts.iter_mut().for_each(|c| *c = 0);
            for &j in &neighbors {
                for (l, c) in counts.iter_mut().enumerate() {
                    *c += usize::from(label(j, l));
                }
            }
            for (l, &c) in counts.iter().enumerate() {
                if label(i, l) {
                    freq_pos[l][c] += 1;
                } else {
                    freq_neg[l][c] += 1;
                }
            }
        }

        Ok(MlknnModel {
            k_neighbors,
            smoothing,
            train_points: points.clone(),
            train_labels: labels.to_vec(),
            label_count,
            prior_pos,
            freq_pos,
            freq_neg,
        })
    }

    pub fn dim(&self) -> usize {
        self.train_points.cols()
    }

    /// Positive-neighbor count per label for a query.
    pub fn neighbor_label_counts(&self, query: &[f64]) -> Result<Vec<usize>> {
        if query.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: query.len() });
        }
        let mut scratch = Vec::with_capacity(self.train_points.rows());
        let neighbors = nearest(&self.train_points, query, self.k_neighbors, None, &mut scratch);
        let mut counts = vec![0usize; self.label_count];
        for &j in &neighbors {
            let row = &self.train_labels[j * self.label_count..(j + 1) * self.label_count];
            for (c, &b) in counts.iter_mut().zip(row) {
                *c += usize::from(b);
            }
        }
        Ok(counts)
    }

    /// Posterior probability of each label, strictly inside (0, 1).
    pub fn posterior_scores(&self, query: &[f64]) -> Result<Vec<f64>> {
        let counts = self.neighbor_label_counts(query)?;
        let s = self.smoothing;
        let denom_base = s * (self.k_neighbors + 1) as f64;
        Ok(counts
            .iter()
            .enumerate()
            .map(|(l, &c)| {
                let pos_total: u64 = self.freq_pos[l].iter().sum();
                let neg_total: u64 = self.freq_neg[l].iter().sum();
                let like_pos = (s + self.freq_pos[l][c] as f64) / (denom_base + pos_total as f64);
                let like_neg = (s + self.freq_neg[l][c] as f64) / (denom_base + neg_total as f64);
                let p1 = self.prior_pos[l];
                let num = p1 * like_pos;
                num / (num + (1.0 - p1) * like_neg)
            })
            .collect())
    }

    /// Label `l` is predicted iff its posterior exceeds 0.5.
    pub fn predict_bipartition(&self, query: &[f64]) -> Result<Vec<bool>> {
        Ok(bipartition_from_scores(&self.posterior_scores(query)?))
    }
}

/// Strict 0.5 threshold: an exact 0.5 is negative.
pub fn bipartition_from_scores(scores: &[f64]) -> Vec<bool> {
    scores.iter().map(|&p| p > 0.5).collect()
}

/// Convenience wrapper for [`MlknnModel::fit`].
pub fn fit_mlknn(
    points: &Matrix,
    labels: &[bool],
    label_count: usize,
    k_neighbors: usize,
    smoothing: f64,
) -> Result<MlknnModel> {
    MlknnModel::fit(points, labels, label_count, k_neighbors, smoothing)
}
