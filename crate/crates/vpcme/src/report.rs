//! JSON report schema.
//!
//! Every command writes one top-level object with a `command` tag, the
//! program `version`, an echo of the configuration and the results. Metric
//! tables always list the seven metrics in the same order:
//!
//! ```json
//! "hamming_loss": { "mean": 0.19, "std": 0.01, "skipped": 0, "undefined_units": 0 }
//! ```
//!
//! `mean`/`std` are over repeat × fold units and are `null` when the metric is
//! undefined in every unit. `skipped` counts instances dropped because of a
//! degenerate label set, summed over units. Wall time is only present when
//! timing was requested, so that reruns stay byte-identical.

use serde::{Deserialize, Serialize};
use vpcme_core::{DatasetStats, MetricKind, VpcmeConfig};

use crate::harness::{Method, SweepParameter};

pub const VERSION: &str = concat!("vpcme ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub skipped: usize,
    pub undefined_units: usize,
}

/// The seven metrics in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTable<T> {
    pub hamming_loss: T,
    pub ranking_loss: T,
    pub one_error: T,
    pub coverage: T,
    pub average_precision: T,
    pub f1: T,
    pub recall: T,
}

impl<T> MetricTable<T> {
    pub fn from_fn(mut f: impl FnMut(MetricKind) -> T) -> Self {
        MetricTable {
            hamming_loss: f(MetricKind::HammingLoss),
            ranking_loss: f(MetricKind::RankingLoss),
            one_error: f(MetricKind::OneError),
            coverage: f(MetricKind::Coverage),
            average_precision: f(MetricKind::AveragePrecision),
            f1: f(MetricKind::F1),
            recall: f(MetricKind::Recall),
        }
    }

    pub fn get(&self, kind: MetricKind) -> &T {
        match kind {
            MetricKind::HammingLoss => &self.hamming_loss,
            MetricKind::RankingLoss => &self.ranking_loss,
            MetricKind::OneError => &self.one_error,
            MetricKind::Coverage => &self.coverage,
            MetricKind::AveragePrecision => &self.average_precision,
            MetricKind::F1 => &self.f1,
            MetricKind::Recall => &self.recall,
        }
    }
}

/// Scores of one repeat × fold unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRecord {
    pub repeat: usize,
    pub fold: usize,
    pub seed: u64,
    pub train_instances: usize,
    pub test_instances: usize,
    /// `null` where every test instance was skipped for that metric.
    pub metrics: MetricTable<Option<f64>>,
    pub skipped: MetricTable<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: Method,
    pub units: usize,
    pub metrics: MetricTable<MetricSummary>,
}

impl EvaluationReport {
    pub fn mean(&self, kind: MetricKind) -> Option<f64> {
        self.metrics.get(kind).mean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSource {
    pub path: String,
    pub label_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub method: Method,
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
    pub zscore: bool,
    /// Folds are reshuffled for every repeat from `seed + repeat`.
    pub fold_reshuffle: String,
    pub vpcme: VpcmeConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub command: String,
    pub version: String,
    pub data: Option<DataSource>,
    pub config: ConfigEcho,
    pub report: EvaluationReport,
    pub unit_results: Vec<UnitRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub version: String,
    pub data: Option<DataSource>,
    pub config: ConfigEcho,
    pub parameter: SweepParameter,
    pub points: Vec<SweepPoint>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_seconds: Option<f64>,
}

/// Paired t-test of one metric between two methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedTest {
    /// Paired units where the metric is defined for both methods.
    pub pairs: usize,
    pub t: Option<f64>,
    pub df: Option<usize>,
    /// Mean of `a − b`.
    pub mean_difference: Option<f64>,
    pub significant: bool,
    /// `•` when `a` is significantly better, `◦` when significantly worse, empty otherwise.
    pub marker: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub a: String,
    pub b: String,
    pub metrics: MetricTable<PairedTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub config: ConfigEcho,
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub command: String,
    pub version: String,
    pub data: Option<DataSource>,
    pub rows: Vec<ComparisonRow>,
    pub pairwise: Vec<PairwiseComparison>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub command: String,
    pub version: String,
    pub data: DataSource,
    pub stats: DatasetStats,
    pub label_names: Vec<String>,
    /// Positive instances per label.
    pub label_frequency: Vec<usize>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
