//! Repeated k-fold cross-validation, parameter sweeps and method comparison.
//!
//! Seeds: repeat `r` shuffles its folds with `seed + r`; the model trained
//! for fold `f` of that repeat uses `(seed + r) ^ ((f + 1) << 32)`. Units run
//! in parallel and are aggregated in (repeat, fold) order, so results do not
//! depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vpcme_core::{
    evaluate, kfold_split, paired_t_test, train_vpcme, Error, MetricKind, MlknnModel, MultiLabelClassifier,
    MultiLabelDataset, Prediction, Standardizer, VpcmeConfig, VpcmeModel,
};

use crate::report::{
    ComparisonReport, ComparisonRow, ConfigEcho, DataSource, EvaluationReport, MetricSummary, MetricTable, PairedTest,
    PairwiseComparison, SweepPoint, UnitRecord, VERSION,
};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Boosted ensemble of constraint projections.
    #[value(name = "vpcme")]
    Vpcme,
    /// Same ensemble with uniform weights in every round.
    #[value(name = "bagging_vpcp", alias = "bagging-vpcp")]
    BaggingVpcp,
    /// A single ML-kNN on the raw features.
    #[value(name = "mlknn_single", alias = "mlknn-single", alias = "mlknn")]
    MlknnSingle,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Vpcme, Method::BaggingVpcp, Method::MlknnSingle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Vpcme => "vpcme",
            Method::BaggingVpcp => "bagging_vpcp",
            Method::MlknnSingle => "mlknn_single",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub method: Method,
    /// Ensemble parameters; `seed` is overwritten per unit.
    pub vpcme: VpcmeConfig,
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
    pub zscore: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            method: Method::Vpcme,
            vpcme: VpcmeConfig::default(),
            folds: 5,
            repeats: 20,
            seed: 0,
            zscore: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::Config(format!("folds must be at least 2, got {}", self.folds)));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        self.vpcme.validate()
    }

    pub fn repeat_seed(&self, repeat: usize) -> u64 {
        self.seed.wrapping_add(repeat as u64)
    }

    pub fn unit_seed(&self, repeat: usize, fold: usize) -> u64 {
        self.repeat_seed(repeat) ^ ((fold as u64 + 1) << 32)
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            method: self.method,
            folds: self.folds,
            repeats: self.repeats,
            seed: self.seed,
            zscore: self.zscore,
            fold_reshuffle: "per_repeat".into(),
            vpcme: self.vpcme,
        }
    }

    /// Smallest training set the method accepts.
    fn min_train(&self) -> usize {
        2.max(self.vpcme.k_neighbors + 1)
    }
}

/// A model trained by one of the methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Ensemble(VpcmeModel),
    Mlknn(MlknnModel),
}

impl MultiLabelClassifier for TrainedModel {
    fn feature_count(&self) -> usize {
        match self {
            TrainedModel::Ensemble(m) => m.feature_count(),
            TrainedModel::Mlknn(m) => m.feature_count(),
        }
    }

    fn label_count(&self) -> usize {
        match self {
            TrainedModel::Ensemble(m) => m.label_count(),
            TrainedModel::Mlknn(m) => m.label_count(),
        }
    }

    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        match self {
            TrainedModel::Ensemble(m) => m.predict(x),
            TrainedModel::Mlknn(m) => m.predict(x),
        }
    }
}

/// Trains `method` on `ds` (already standardized if requested).
pub fn train_method(ds: &MultiLabelDataset, method: Method, cfg: &VpcmeConfig) -> Result<TrainedModel> {
    match method {
        Method::Vpcme => train_vpcme(ds, &VpcmeConfig { boosting_enabled: true, ..*cfg }).map(TrainedModel::Ensemble),
        Method::BaggingVpcp => {
            train_vpcme(ds, &VpcmeConfig { boosting_enabled: false, ..*cfg }).map(TrainedModel::Ensemble)
        }
        Method::MlknnSingle => {
            MlknnModel::fit(ds.features(), ds.labels_flat(), ds.label_count(), cfg.k_neighbors, cfg.smoothing)
                .map(TrainedModel::Mlknn)
        }
    }
}

/// Per-unit results plus their aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub units: Vec<UnitRecord>,
    pub report: EvaluationReport,
}

pub fn cross_validate(ds: &MultiLabelDataset, cfg: &ExperimentConfig) -> Result<CvOutcome> {
    cfg.validate()?;
    let n = ds.instance_count();
    let splits = (0..cfg.repeats).map(|r| kfold_split(n, cfg.folds, cfg.repeat_seed(r))).collect::<Result<Vec<_>>>()?;

    // Round-robin dealing makes every repeat's fold sizes identical; check them all anyway.
    let smallest_train = splits.iter().flat_map(|s| s.fold_sizes()).map(|size| n - size).min().unwrap_or(0);
    if smallest_train < cfg.min_train() {
        return Err(Error::Config(format!(
            "training folds hold {smallest_train} instances, need at least {} for k = {}",
            cfg.min_train(),
            cfg.vpcme.k_neighbors
        )));
    }

    let jobs: Vec<(usize, usize)> = (0..cfg.repeats).flat_map(|r| (0..cfg.folds).map(move |f| (r, f))).collect();
    let units = jobs
        .par_iter()
        .map(|&(r, f)| {
            let split = &splits[r];
            run_unit(ds, cfg, r, f, &split.train_indices(f), &split.test_indices(f))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = aggregate(cfg.method, &units);
    Ok(CvOutcome { units, report })
}

fn run_unit(
    ds: &MultiLabelDataset,
    cfg: &ExperimentConfig,
    repeat: usize,
    fold: usize,
    train_idx: &[usize],
    test_idx: &[usize],
) -> Result<UnitRecord> {
    assert!(
        test_idx.iter().all(|i| train_idx.binary_search(i).is_err()),
        "test instance leaked into its training fold"
    );
    let mut train = ds.subset(train_idx)?;
    let mut test = ds.subset(test_idx)?;
    if cfg.zscore {
        let z = Standardizer::fit(train.features());
        test = test.with_features(z.apply(test.features())?)?;
        train = train.with_features(z.apply(train.features())?)?;
    }
    let seed = cfg.unit_seed(repeat, fold);
    let model = train_method(&train, cfg.method, &VpcmeConfig { seed, ..cfg.vpcme })?;
    let predictions =
        (0..test.instance_count()).map(|i| model.predict(test.instance(i))).collect::<Result<Vec<_>>>()?;
    let truths: Vec<&[bool]> = test.label_rows().collect();
    let eval = evaluate(&truths, &predictions)?;
    Ok(UnitRecord {
        repeat,
        fold,
        seed,
        train_instances: train.instance_count(),
        test_instances: test.instance_count(),
        metrics: MetricTable::from_fn(|k| eval.get(k).value),
        skipped: MetricTable::from_fn(|k| eval.get(k).skipped),
    })
}

/// Mean and sample standard deviation over units, in the order given.
pub fn aggregate(method: Method, units: &[UnitRecord]) -> EvaluationReport {
    let metrics = MetricTable::from_fn(|kind| {
        let values: Vec<f64> = units.iter().filter_map(|u| *u.metrics.get(kind)).collect();
        let (mean, std) = mean_std(&values);
        MetricSummary {
            mean,
            std,
            skipped: units.iter().map(|u| *u.skipped.get(kind)).sum(),
            undefined_units: units.len() - values.len(),
        }
    });
    EvaluationReport { method, units: units.len(), metrics }
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (Some(mean), Some(0.0));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some(var.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Theta,
    EnsembleSize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl SweepSpec {
    /// Θ = 0.1, 0.2, …, 1.0.
    pub fn theta_default() -> Self {
        SweepSpec { parameter: SweepParameter::Theta, values: (1..=10).map(|i| i as f64 / 10.0).collect() }
    }

    pub fn ensemble_size_default() -> Self {
        SweepSpec { parameter: SweepParameter::EnsembleSize, values: vec![1.0, 10.0, 20.0, 30.0, 40.0, 50.0] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one value".into()));
        }
        for &v in &self.values {
            let ok = match self.parameter {
                SweepParameter::Theta => (0.0..=1.0).contains(&v),
                SweepParameter::EnsembleSize => v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64,
            };
            if !ok {
                return Err(Error::Config(format!("{v} is not a valid {:?} value", self.parameter)));
            }
        }
        Ok(())
    }

    fn apply(&self, cfg: &ExperimentConfig, value: f64) -> ExperimentConfig {
        let mut out = *cfg;
        match self.parameter {
            SweepParameter::Theta => out.vpcme.theta = value,
            SweepParameter::EnsembleSize => out.vpcme.ensemble_size = value as usize,
        }
        out
    }
}

/// Cross-validates once per sweep value with everything else fixed.
pub fn run_sweep(ds: &MultiLabelDataset, cfg: &ExperimentConfig, sweep: &SweepSpec) -> Result<Vec<SweepPoint>> {
    sweep.validate()?;
    if cfg.method == Method::MlknnSingle {
        return Err(Error::Config("sweeps vary ensemble parameters; mlknn_single has none".into()));
    }
    sweep
        .values
        .iter()
        .map(|&value| {
            let outcome = cross_validate(ds, &sweep.apply(cfg, value))?;
            Ok(SweepPoint { value, report: outcome.report })
        })
        .collect()
}

/// Runs every configuration on identical splits and t-tests each pair of rows.
pub fn compare_methods(
    ds: &MultiLabelDataset,
    cfgs: &[ExperimentConfig],
    data: Option<DataSource>,
) -> Result<ComparisonReport> {
    let Some(first) = cfgs.first() else {
        return Err(Error::Config("nothing to compare".into()));
    };
    if let Some(bad) = cfgs.iter().find(|c| (c.seed, c.folds, c.repeats) != (first.seed, first.folds, first.repeats)) {
        return Err(Error::Config(format!(
            "compared configurations must share seed, folds and repeats: ({}, {}, {}) vs ({}, {}, {})",
            first.seed, first.folds, first.repeats, bad.seed, bad.folds, bad.repeats
        )));
    }
    let outcomes = cfgs.iter().map(|c| cross_validate(ds, c)).collect::<Result<Vec<_>>>()?;
    let names = row_names(cfgs);

    let mut pairwise = Vec::new();
    for a in 0..cfgs.len() {
        for b in a + 1..cfgs.len() {
            let metrics = MetricTable::from_fn(|kind| paired(kind, &outcomes[a].units, &outcomes[b].units));
            pairwise.push(PairwiseComparison { a: names[a].clone(), b: names[b].clone(), metrics });
        }
    }
    let rows = cfgs
        .iter()
        .zip(outcomes)
        .zip(names)
        .map(|((cfg, outcome), name)| ComparisonRow { name, config: cfg.echo(), report: outcome.report })
        .collect();
    Ok(ComparisonReport {
        command: "compare".into(),
        version: VERSION.into(),
        data,
        rows,
        pairwise,
        wall_time_seconds: None,
    })
}

/// Method names, suffixed with the row index when a method appears twice.
fn row_names(cfgs: &[ExperimentConfig]) -> Vec<String> {
    cfgs.iter()
        .enumerate()
        .map(|(i, c)| {
            if cfgs.iter().filter(|o| o.method == c.method).count() > 1 {
                format!("{}#{i}", c.method.name())
            } else {
                c.method.name().to_string()
            }
        })
        .collect()
}

fn paired(kind: MetricKind, a: &[UnitRecord], b: &[UnitRecord]) -> PairedTest {
    let (xs, ys): (Vec<f64>, Vec<f64>) = a
        .iter()
        .zip(b)
        .filter_map(|(ua, ub)| {
            debug_assert_eq!((ua.repeat, ua.fold), (ub.repeat, ub.fold));
            Some(((*ua.metrics.get(kind))?, (*ub.metrics.get(kind))?))
        })
        .unzip();
    let pairs = xs.len();
    match paired_t_test(&xs, &ys) {
        Ok(t) => {
            let a_better = if kind.lower_is_better() { t.mean_difference < 0.0 } else { t.mean_difference > 0.0 };
            let marker = match (t.significant_at_001, a_better) {
                (false, _) => "",
                (true, true) => "•",
                (true, false) => "◦",
            };
            PairedTest {
                pairs,
                t: t.t.is_finite().then_some(t.t),
                df: Some(t.df),
                mean_difference: Some(t.mean_difference),
                significant: t.significant_at_001,
                marker: marker.into(),
            }
        }
        Err(_) => {
            PairedTest { pairs, t: None, df: None, mean_difference: None, significant: false, marker: String::new() }
        }
    }
}
