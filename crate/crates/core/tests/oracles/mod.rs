//! Brute-force reference implementations used by the property tests and the
//! acceptance suite. Nothing here calls into the code paths it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;

pub type Pairs = [(usize, usize)];

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean of ‖x_i − x_j‖² over pairs.
pub fn mean_sq_distance(x: &[Vec<f64>], pairs: &Pairs) -> f64 {
    let total: f64 = pairs
        .iter()
        .map(|&(i, j)| {
            let d = diff(&x[i], &x[j]);
            dot(&d, &d)
        })
        .sum();
    total / pairs.len() as f64
}

/// Ratio of mean squared cannot-link distance to mean squared must-link distance, 1 on degenerate input.
pub fn scaling_r(x: &[Vec<f64>], must: &Pairs, cannot: &Pairs) -> f64 {
    if must.is_empty() || cannot.is_empty() {
        return 1.0;
    }
    let m = mean_sq_distance(x, must);
    if m == 0.0 {
        return 1.0;
    }
    mean_sq_distance(x, cannot) / m
}

/// Objective evaluated pair by pair for projection columns `w` (each of length k):
/// `1/(2n_C) Σ_C ‖Wᵀ(x_i − x_j)‖² − r/(2n_M) Σ_M ‖Wᵀ(x_i − x_j)‖²`.
pub fn objective(x: &[Vec<f64>], must: &Pairs, cannot: &Pairs, columns: &[Vec<f64>]) -> f64 {
    let r = scaling_r(x, must, cannot);
    let projected_sq = |pairs: &Pairs| -> f64 {
        if pairs.is_empty() {
            return 0.0;
        }
        let s: f64 = pairs
            .iter()
            .map(|&(i, j)| {
                let d = diff(&x[i], &x[j]);
                columns.iter().map(|w| dot(w, &d).powi(2)).sum::<f64>()
            })
            .sum();
        s / (2.0 * pairs.len() as f64)
    };
    projected_sq(cannot) - r * projected_sq(must)
}

pub fn random_unit_vector<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// ML-kNN tables recomputed with a full sort of every distance list.
pub struct BruteMlknn {
    pub prior: Vec<f64>,
    pub freq_pos: Vec<Vec<u64>>,
    pub freq_neg: Vec<Vec<u64>>,
    points: Vec<Vec<f64>>,
    labels: Vec<Vec<bool>>,
    k: usize,
    s: f64,
}

fn sorted_neighbors(points: &[Vec<f64>], q: &[f64], skip: Option<usize>) -> Vec<usize> {
    let mut all: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .map(|(i, p)| {
            let mut d = 0.0;
            for c in 0..p.len() {
                d += (p[c] - q[c]) * (p[c] - q[c]);
            }
            (d, i)
        })
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    all.into_iter().map(|(_, i)| i).collect()
}

impl BruteMlknn {
    pub fn fit(points: &[Vec<f64>], labels: &[Vec<bool>], k: usize, s: f64) -> Self {
        let n = points.len();
        let m = labels[0].len();
        let mut prior = vec![0.0; m];
        let mut freq_pos = vec![vec![0u64; k + 1]; m];
        let mut freq_neg = vec![vec![0u64; k + 1]; m];
        for l in 0..m {
            let pos = labels.iter().filter(|y| y[l]).count();
            prior[l] = (s + pos as f64) / (2.0 * s + n as f64);
        }
        for i in 0..n {
            let nn = sorted_neighbors(points, &points[i], Some(i));
            for l in 0..m {
                let c = nn[..k].iter().filter(|&&j| labels[j][l]).count();
                if labels[i][l] {
                    freq_pos[l][c] += 1;
                } else {
                    freq_neg[l][c] += 1;
                }
            }
        }
        BruteMlknn { prior, freq_pos, freq_neg, points: points.to_vec(), labels: labels.to_vec(), k, s }
    }

    pub fn scores(&self, q: &[f64]) -> Vec<f64> {
        let nn = sorted_neighbors(&self.points, q, None);
        let m = self.prior.len();
        (0..m)
            .map(|l| {
                let c = nn[..self.k].iter().filter(|&&j| self.labels[j][l]).count();
                let n_pos: u64 = self.freq_pos[l].iter().sum();
                let n_neg: u64 = self.freq_neg[l].iter().sum();
                let kk = (self.k + 1) as f64;
                let l1 = (self.s + self.freq_pos[l][c] as f64) / (self.s * kk + n_pos as f64);
                let l0 = (self.s + self.freq_neg[l][c] as f64) / (self.s * kk + n_neg as f64);
                let p1 = self.prior[l];
                p1 * l1 / (p1 * l1 + (1.0 - p1) * l0)
            })
            .collect()
    }
}

fn set_of(flags: &[bool]) -> BTreeSet<usize> {
    flags.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Labels in rank order (position 0 holds the label ranked 1).
fn rank_list(ranks: &[usize]) -> Vec<usize> {
    let mut list = vec![usize::MAX; ranks.len()];
    for (label, &r) in ranks.iter().enumerate() {
        list[r - 1] = label;
    }
    list
}

/// Per-instance metric values, `None` where the instance is skipped.
pub struct InstanceOracle {
    pub hamming: f64,
    pub ranking_loss: Option<f64>,
    pub one_error: Option<f64>,
    pub coverage: f64,
    pub average_precision: Option<f64>,
    pub f1: f64,
    pub recall: Option<f64>,
}

pub fn instance_oracle(truth: &[bool], predicted: &[bool], ranks: &[usize]) -> InstanceOracle {
    let m = truth.len();
    let y = set_of(truth);
    let z = set_of(predicted);
    let list = rank_list(ranks);

    let hamming = y.symmetric_difference(&z).count() as f64 / m as f64;

    let ranking_loss = if y.is_empty() || y.len() == m {
        None
    } else {
        let mut bad = 0;
        let mut total = 0;
        for a in 0..m {
            for b in 0..m {
                if y.contains(&a) && !y.contains(&b) {
                    total += 1;
                    if ranks[a] > ranks[b] {
                        bad += 1;
                    }
                }
            }
        }
        Some(bad as f64 / total as f64)
    };

    let one_error = if y.is_empty() { None } else { Some(if y.contains(&list[0]) { 0.0 } else { 1.0 }) };

    // walk down the rank list until every relevant label is covered
    let coverage = if y.is_empty() {
        0.0
    } else {
        let mut seen = 0;
        let mut depth = 0;
        for (pos, label) in list.iter().enumerate() {
            if y.contains(label) {
                seen += 1;
            }
            if seen == y.len() {
                depth = pos;
                break;
            }
        }
        depth as f64
    };

    // precision at every prefix that ends in a relevant label
    let average_precision = if y.is_empty() {
        None
    } else {
        let mut hits = 0;
        let mut acc = 0.0;
        for (pos, label) in list.iter().enumerate() {
            if y.contains(label) {
                hits += 1;
                acc += hits as f64 / (pos + 1) as f64;
            }
        }
        Some(acc / y.len() as f64)
    };

    let inter = y.intersection(&z).count() as f64;
    let f1 = if y.is_empty() && z.is_empty() { 1.0 } else { 2.0 * inter / (y.len() + z.len()) as f64 };
    let recall = if y.is_empty() {
        if z.is_empty() {
            Some(1.0)
        } else {
            None
        }
    } else {
        Some(inter / y.len() as f64)
    };

    InstanceOracle { hamming, ranking_loss, one_error, coverage, average_precision, f1, recall }
}

/// Ranks by descending score, insertion-sort style with lower index first on ties.
pub fn ranks_oracle(scores: &[f64]) -> Vec<usize> {
    let m = scores.len();
    (0..m).map(|l| 1 + (0..m).filter(|&o| scores[o] > scores[l] || (scores[o] == scores[l] && o < l)).count()).collect()
}

pub fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    if v.is_empty() {
        None
    } else {
        Some(v.iter().sum::<f64>() / v.len() as f64)
    }
}
