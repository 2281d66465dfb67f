//! The ensemble training loop and majority-vote prediction.
//!
//! Each round samples constraints with the current instance weights, fits a
//! projection, trains ML-kNN on the projected training set and scores that
//! member on the same set. With boosting enabled, every misclassified instance
//! has its weight multiplied by `1 + θ`, where θ is the member's training error
//! rate, and the weights are renormalized. With boosting disabled the weights
//! stay uniform, which gives the bagging baseline.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constraints::{sample_constraints, ConstraintConfig, ATTEMPTS_PER_PAIR};
use crate::mlknn::{bipartition_from_scores, MlknnModel, DEFAULT_K, DEFAULT_SMOOTHING};
use crate::projection::{fit_projection, ProjectionModel};
use crate::{Error, MultiLabelDataset, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VpcmeConfig {
    pub ensemble_size: usize,
    pub theta: f64,
    pub k_neighbors: usize,
    pub smoothing: f64,
    /// Must-link target; `None` means the training set size.
    pub target_must: Option<usize>,
    /// Cannot-link target; `None` means the training set size.
    pub target_cannot: Option<usize>,
    /// Draw budget per member; `None` means 50 × (must + cannot targets).
    pub max_attempts: Option<usize>,
    pub seed: u64,
    /// `false` keeps weights uniform (bagging baseline).
    pub boosting_enabled: bool,
}

impl Default for VpcmeConfig {
    fn default() -> Self {
        VpcmeConfig {
            ensemble_size: 30,
            theta: 0.6,
            k_neighbors: DEFAULT_K,
            smoothing: DEFAULT_SMOOTHING,
            target_must: None,
            target_cannot: None,
            max_attempts: None,
            seed: 0,
            boosting_enabled: true,
        }
    }
}

impl VpcmeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size == 0 {
            return Err(Error::config("ensemble_size must be at least 1"));
        }
        if self.k_neighbors == 0 {
            return Err(Error::config("k_neighbors must be at least 1"));
        }
        self.constraint_config(2).validate()
    }

    /// Constraint sampling parameters for a training set of `n` instances.
    pub fn constraint_config(&self, n: usize) -> ConstraintConfig {
        let must = self.target_must.unwrap_or(n);
        let cannot = self.target_cannot.unwrap_or(n);
        ConstraintConfig {
            theta: self.theta,
            target_must: must,
            target_cannot: cannot,
            max_attempts: self.max_attempts.unwrap_or(ATTEMPTS_PER_PAIR * (must + cannot)),
        }
    }
}

/// Instance weights carried between rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostState {
    pub weights: Vec<f64>,
    pub last_error_rate: f64,
}

impl BoostState {
    pub fn uniform(n: usize) -> Self {
        BoostState { weights: vec![1.0 / n as f64; n], last_error_rate: 0.0 }
    }

    /// Records a round's misclassifications and returns its error rate θ.
    ///
    /// When `reweight` is set, misclassified weights are scaled by `1 + θ` and
    /// the vector is renormalized to sum to one.
    pub fn update(&mut self, misclassified: &[bool], reweight: bool) -> Result<f64> {
        let n = self.weights.len();
        if misclassified.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: misclassified.len() });
        }
        let theta = misclassified.iter().filter(|&&m| m).count() as f64 / n as f64;
        self.last_error_rate = theta;
        if reweight && theta > 0.0 {
            for (w, &m) in self.weights.iter_mut().zip(misclassified) {
                if m {
                    *w *= 1.0 + theta;
                }
            }
            let total: f64 = self.weights.iter().sum();
            self.weights.iter_mut().for_each(|w| *w /= total);
        }
        Ok(theta)
    }
}

/// Exact set mismatch between predicted and true indicator rows.
pub fn sample_is_misclassified(predicted: &[bool], truth: &[bool]) -> bool {
    predicted != truth
}

/// Labels plus per-label scores for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub labels: Vec<bool>,
    pub scores: Vec<f64>,
}

/// Anything that maps a feature vector to a multi-label prediction.
pub trait MultiLabelClassifier {
    fn feature_count(&self) -> usize;
    fn label_count(&self) -> usize;
    fn predict(&self, x: &[f64]) -> Result<Prediction>;
}

impl MultiLabelClassifier for MlknnModel {
    fn feature_count(&self) -> usize {
        self.dim()
    }

    fn label_count(&self) -> usize {
        self.label_count
    }

    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        let scores = self.posterior_scores(x)?;
        Ok(Prediction { labels: bipartition_from_scores(&scores), scores })
    }
}

/// One projection and the classifier trained in its output space.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Member {
    pub projection: ProjectionModel,
    pub classifier: MlknnModel,
}

impl MultiLabelClassifier for Member {
    fn feature_count(&self) -> usize {
        self.projection.input_dim()
    }

    fn label_count(&self) -> usize {
        self.classifier.label_count
    }

    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        self.classifier.predict(&self.projection.transform(x)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainingLogEntry {
    /// Training error rate θ of this member.
    pub error_rate: f64,
    pub reduced_dim: usize,
    pub must_pairs: usize,
    pub cannot_pairs: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VpcmeModel {
    pub members: Vec<Member>,
    pub config: VpcmeConfig,
    pub training_log: Vec<TrainingLogEntry>,
    pub feature_count: usize,
    pub label_count: usize,
}

impl MultiLabelClassifier for VpcmeModel {
    fn feature_count(&self) -> usize {
        self.feature_count
    }

    fn label_count(&self) -> usize {
        self.label_count
    }

    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        predict_ensemble(self, x)
    }
}

/// Round-by-round trainer; [`train_vpcme`] drives it to completion.
#[derive(Debug)]
pub struct VpcmeTrainer<'a> {
    ds: &'a MultiLabelDataset,
    config: VpcmeConfig,
    constraints: ConstraintConfig,
    state: BoostState,
    members: Vec<Member>,
    log: Vec<TrainingLogEntry>,
}

impl<'a> VpcmeTrainer<'a> {
    pub fn new(ds: &'a MultiLabelDataset, config: VpcmeConfig) -> Result<Self> {
        config.validate()?;
        let n = ds.instance_count();
        let needed = 2.max(config.k_neighbors + 1);
        if n < needed {
            return Err(Error::config(format!(
                "{n} training instances, need at least {needed} for k_neighbors = {}",
                config.k_neighbors
            )));
        }
        let constraints = config.constraint_config(n);
        constraints.validate()?;
        Ok(VpcmeTrainer {
            ds,
            config,
            constraints,
            state: BoostState::uniform(n),
            members: Vec::with_capacity(config.ensemble_size),
            log: Vec::with_capacity(config.ensemble_size),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.state.weights
    }

    pub fn rounds_done(&self) -> usize {
        self.members.len()
    }

    pub fn is_done(&self) -> bool {
        self.members.len() >= self.config.ensemble_size
    }

    /// Random stream of round `l`: the configured seed, stream number `l`.
    pub fn member_rng(seed: u64, round: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(round as u64);
        rng
    }

    /// Trains the next member and updates the weights. Returns the member's misclassification mask.
    pub fn step(&mut self) -> Result<Vec<bool>> {
        let ds = self.ds;
        let round = self.members.len();
        let mut rng = Self::member_rng(self.config.seed, round);
        let sets = sample_constraints(ds, &self.state.weights, &self.constraints, &mut rng)?;
        let projection = fit_projection(ds, &sets)?;
        let projected = projection.transform_matrix(ds.features())?;
        let classifier = MlknnModel::fit(
            &projected,
            ds.labels_flat(),
            ds.label_count(),
            self.config.k_neighbors,
            self.config.smoothing,
        )?;

        let misclassified = projected
            .iter_rows()
            .zip(ds.label_rows())
            .map(|(z, truth)| Ok(sample_is_misclassified(&classifier.predict_bipartition(z)?, truth)))
            .collect::<Result<Vec<bool>>>()?;
        let error_rate = self.state.update(&misclassified, self.config.boosting_enabled)?;

        self.log.push(TrainingLogEntry {
            error_rate,
            reduced_dim: projection.reduced_dim,
            must_pairs: sets.must.len(),
            cannot_pairs: sets.cannot.len(),
        });
        self.members.push(Member { projection, classifier });
        Ok(misclassified)
    }

    pub fn finish(self) -> VpcmeModel {
        VpcmeModel {
            members: self.members,
            config: self.config,
            training_log: self.log,
            feature_count: self.ds.feature_count(),
            label_count: self.ds.label_count(),
        }
    }
}

/// Trains `config.ensemble_size` members on `ds`.
pub fn train_vpcme(ds: &MultiLabelDataset, config: &VpcmeConfig) -> Result<VpcmeModel> {
    let mut trainer = VpcmeTrainer::new(ds, *config)?;
    while !trainer.is_done() {
        trainer.step()?;
    }
    Ok(trainer.finish())
}

/// Majority vote over members.
///
/// Scores are the mean member posteriors. A label is predicted when more than
/// half the members vote for it; on an exact split it is predicted iff its
/// mean score exceeds 0.5.
pub fn predict_ensemble(model: &VpcmeModel, x: &[f64]) -> Result<Prediction> {
    if x.len() != model.feature_count {
        return Err(Error::DimensionMismatch { expected: model.feature_count, found: x.len() });
    }
    let r = model.label_count;
    let mut votes = vec![0usize; r];
    let mut sums = vec![0.0; r];
    for member in &model.members {
        let p = member.predict(x)?;
        for l in 0..r {
            votes[l] += usize::from(p.labels[l]);
            sums[l] += p.scores[l];
        }
    }
    let s = model.members.len();
    let scores: Vec<f64> = sums.into_iter().map(|v| v / s as f64).collect();
    let labels = votes
        .iter()
        .zip(&scores)
        .map(|(&v, &score)| match (2 * v).cmp(&s) {
            core::cmp::Ordering::Greater => true,
            core::cmp::Ordering::Equal => score > 0.5,
            core::cmp::Ordering::Less => false,
        })
        .collect();
    Ok(Prediction { labels, scores })
}
