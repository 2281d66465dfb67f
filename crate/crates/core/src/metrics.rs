//! Example-based multi-label evaluation metrics.
//!
//! Ranks are 1-based: rank 1 is the most relevant label. Instances for which
//! a metric is undefined are skipped and counted:
//!
//! | metric            | undefined when        | handling        |
//! |-------------------|-----------------------|-----------------|
//! | ranking loss      | `|Y| = 0` or `|Y| = M`| skipped         |
//! | one-error         | `|Y| = 0`             | skipped         |
//! | average precision | `|Y| = 0`             | skipped         |
//! | coverage          | `|Y| = 0`             | contributes 0   |
//! | F1                | `|Y| = |Z| = 0`       | contributes 1   |
//! | recall            | `|Y| = 0`             | 1 if `Z` is empty, else skipped |

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::ensemble::Prediction;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MetricKind {
    HammingLoss,
    RankingLoss,
    OneError,
    Coverage,
    AveragePrecision,
    F1,
    Recall,
}

impl MetricKind {
    pub const ALL: [MetricKind; 7] = [
        MetricKind::HammingLoss,
        MetricKind::RankingLoss,
        MetricKind::OneError,
        MetricKind::Coverage,
        MetricKind::AveragePrecision,
        MetricKind::F1,
        MetricKind::Recall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::HammingLoss => "hamming_loss",
            MetricKind::RankingLoss => "ranking_loss",
            MetricKind::OneError => "one_error",
            MetricKind::Coverage => "coverage",
            MetricKind::AveragePrecision => "average_precision",
            MetricKind::F1 => "f1",
            MetricKind::Recall => "recall",
        }
    }

    pub fn lower_is_better(self) -> bool {
        matches!(self, MetricKind::HammingLoss | MetricKind::RankingLoss | MetricKind::OneError | MetricKind::Coverage)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Ranks labels by descending score; equal scores favour the lower label index.
pub fn rank_from_scores(scores: &[f64]) -> Result<Vec<usize>> {
    if scores.is_empty() {
        return Err(Error::validation("cannot rank an empty score vector"));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::validation("scores must be finite"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut ranks = vec![0; scores.len()];
    for (pos, &label) in order.iter().enumerate() {
        ranks[label] = pos + 1;
    }
    Ok(ranks)
}

fn size(set: &[bool]) -> usize {
    set.iter().filter(|&&b| b).count()
}

pub fn instance_hamming(truth: &[bool], predicted: &[bool]) -> f64 {
    let diff = truth.iter().zip(predicted).filter(|(a, b)| a != b).count();
    diff as f64 / truth.len() as f64
}

pub fn instance_ranking_loss(truth: &[bool], ranks: &[usize]) -> Option<f64> {
    let relevant = size(truth);
    let irrelevant = truth.len() - relevant;
    if relevant == 0 || irrelevant == 0 {
        return None;
    }
    let mut violations = 0usize;
    for (a, _) in truth.iter().enumerate().filter(|(_, &t)| t) {
        for (b, _) in truth.iter().enumerate().filter(|(_, &t)| !t) {
            violations += usize::from(ranks[a] > ranks[b]);
        }
    }
    Some(violations as f64 / (relevant * irrelevant) as f64)
}

pub fn instance_one_error(truth: &[bool], ranks: &[usize]) -> Option<f64> {
    if size(truth) == 0 {
        return None;
    }
    let top = (0..ranks.len()).min_by_key(|&l| ranks[l])?;
    Some(if truth[top] { 0.0 } else { 1.0 })
}

pub fn instance_coverage(truth: &[bool], ranks: &[usize]) -> f64 {
    truth.iter().zip(ranks).filter(|(&t, _)| t).map(|(_, &r)| r).max().map_or(0.0, |worst| (worst - 1) as f64)
}

pub fn instance_average_precision(truth: &[bool], ranks: &[usize]) -> Option<f64> {
    let relevant: Vec<usize> = truth.iter().zip(ranks).filter(|(&t, _)| t).map(|(_, &r)| r).collect();
    if relevant.is_empty() {
        return None;
    }
    let sum: f64 =
        relevant.iter().map(|&r| relevant.iter().filter(|&&other| other <= r).count() as f64 / r as f64).sum();
    Some(sum / relevant.len() as f64)
}

fn intersection(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(&x, &y)| x && y).count()
}

pub fn instance_f1(truth: &[bool], predicted: &[bool]) -> f64 {
    let denom = size(truth) + size(predicted);
    if denom == 0 {
        return 1.0;
    }
    2.0 * intersection(truth, predicted) as f64 / denom as f64
}

pub fn instance_recall(truth: &[bool], predicted: &[bool]) -> Option<f64> {
    let relevant = size(truth);
    if relevant == 0 {
        return (size(predicted) == 0).then_some(1.0);
    }
    Some(intersection(truth, predicted) as f64 / relevant as f64)
}

/// Mean of the defined values and the number of skipped ones.
fn average(values: impl Iterator<Item = Option<f64>>) -> (Option<f64>, usize) {
    let (mut sum, mut used, mut skipped) = (0.0, 0usize, 0usize);
    for v in values {
        match v {
            Some(v) => {
                sum += v;
                used += 1;
            }
            None => skipped += 1,
        }
    }
    ((used > 0).then(|| sum / used as f64), skipped)
}

fn check_rows<A: AsRef<[bool]>, B: AsRef<[T]>, T>(truths: &[A], others: &[B]) -> Result<usize> {
    if truths.is_empty() {
        return Err(Error::undefined("metric over zero instances"));
    }
    if truths.len() != others.len() {
        return Err(Error::DimensionMismatch { expected: truths.len(), found: others.len() });
    }
    let m = truths[0].as_ref().len();
    if m == 0 {
        return Err(Error::validation("label sets must have at least one label"));
    }
    for (t, o) in truths.iter().zip(others) {
        if t.as_ref().len() != m || o.as_ref().len() != m {
            return Err(Error::validation(format!("every row must have {m} labels")));
        }
    }
    Ok(m)
}

fn require(value: Option<f64>, what: &str) -> Result<f64> {
    value.ok_or_else(|| Error::undefined(format!("{what}: every instance was skipped")))
}

/// `(1/N) Σ |Y Δ Z| / M`.
pub fn hamming_loss<A: AsRef<[bool]>, B: AsRef<[bool]>>(
    truths: &[A],
    predicted: &[B],
    label_count: usize,
) -> Result<f64> {
    let m = check_rows(truths, predicted)?;
    if m != label_count {
        return Err(Error::DimensionMismatch { expected: label_count, found: m });
    }
    let n = truths.len() as f64;
    Ok(truths.iter().zip(predicted).map(|(t, p)| instance_hamming(t.as_ref(), p.as_ref())).sum::<f64>() / n)
}

pub fn ranking_loss<A: AsRef<[bool]>, R: AsRef<[usize]>>(truths: &[A], ranks: &[R]) -> Result<f64> {
    check_rows(truths, ranks)?;
    let (v, _) = average(truths.iter().zip(ranks).map(|(t, r)| instance_ranking_loss(t.as_ref(), r.as_ref())));
    require(v, "ranking loss")
}

pub fn one_error<A: AsRef<[bool]>, R: AsRef<[usize]>>(truths: &[A], ranks: &[R]) -> Result<f64> {
    check_rows(truths, ranks)?;
    let (v, _) = average(truths.iter().zip(ranks).map(|(t, r)| instance_one_error(t.as_ref(), r.as_ref())));
    require(v, "one-error")
}

pub fn coverage<A: AsRef<[bool]>, R: AsRef<[usize]>>(truths: &[A], ranks: &[R]) -> Result<f64> {
    check_rows(truths, ranks)?;
    let n = truths.len() as f64;
    Ok(truths.iter().zip(ranks).map(|(t, r)| instance_coverage(t.as_ref(), r.as_ref())).sum::<f64>() / n)
}

pub fn average_precision<A: AsRef<[bool]>, R: AsRef<[usize]>>(truths: &[A], ranks: &[R]) -> Result<f64> {
    check_rows(truths, ranks)?;
    let (v, _) = average(truths.iter().zip(ranks).map(|(t, r)| instance_average_precision(t.as_ref(), r.as_ref())));
    require(v, "average precision")
}

pub fn f1_metric<A: AsRef<[bool]>, B: AsRef<[bool]>>(truths: &[A], predicted: &[B]) -> Result<f64> {
    check_rows(truths, predicted)?;
    let n = truths.len() as f64;
    Ok(truths.iter().zip(predicted).map(|(t, p)| instance_f1(t.as_ref(), p.as_ref())).sum::<f64>() / n)
}

pub fn recall<A: AsRef<[bool]>, B: AsRef<[bool]>>(truths: &[A], predicted: &[B]) -> Result<f64> {
    check_rows(truths, predicted)?;
    let (v, _) = average(truths.iter().zip(predicted).map(|(t, p)| instance_recall(t.as_ref(), p.as_ref())));
    require(v, "recall")
}

/// One metric over one evaluation unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    /// `None` when every instance was skipped.
    pub value: Option<f64>,
    pub skipped: usize,
}

/// All seven metrics over one evaluation unit (e.g. one test fold).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitEvaluation {
    pub instances: usize,
    pub metrics: [MetricValue; 7],
}

impl UnitEvaluation {
    pub fn get(&self, kind: MetricKind) -> MetricValue {
        self.metrics[kind.index()]
    }
}

/// Per-instance metric of (truth, predicted labels, ranks).
type InstanceFn<T> = dyn Fn(&[bool], &[bool], &[usize]) -> T;

/// Scores predictions against ground truth; ranks come from the prediction scores.
pub fn evaluate<A: AsRef<[bool]>>(truths: &[A], predictions: &[Prediction]) -> Result<UnitEvaluation> {
    let labels: Vec<&[bool]> = predictions.iter().map(|p| p.labels.as_slice()).collect();
    let m = check_rows(truths, &labels)?;
    let ranks = predictions.iter().map(|p| rank_from_scores(&p.scores)).collect::<Result<Vec<_>>>()?;
    check_rows(truths, &ranks)?;
    let pairs = || truths.iter().map(AsRef::as_ref).zip(labels.iter().copied()).zip(&ranks);

    let dense = |f: &InstanceFn<f64>| average(pairs().map(|((t, z), r)| Some(f(t, z, r))));
    let sparse = |f: &InstanceFn<Option<f64>>| average(pairs().map(|((t, z), r)| f(t, z, r)));
    let pack = |(value, skipped): (Option<f64>, usize)| MetricValue { value, skipped };

    debug_assert!(labels.iter().all(|z| z.len() == m));
    Ok(UnitEvaluation {
        instances: truths.len(),
        metrics: [
            pack(dense(&|t, z, _| instance_hamming(t, z))),
            pack(sparse(&|t, _, r| instance_ranking_loss(t, r))),
            pack(sparse(&|t, _, r| instance_one_error(t, r))),
            pack(dense(&|t, _, r| instance_coverage(t, r))),
            pack(sparse(&|t, _, r| instance_average_precision(t, r))),
            pack(dense(&|t, z, _| instance_f1(t, z))),
            pack(sparse(&|t, z, _| instance_recall(t, z))),
        ],
    })
}
