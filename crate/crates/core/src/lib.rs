//! Multi-label ensembles built from variable pairwise constraint projections.
//!
//! Every ensemble member resamples must-link / cannot-link pairs under a label
//! overlap threshold, learns an orthonormal projection from the constraint
//! scatter matrices, and fits an ML-kNN classifier in the projected space.
//! Misclassified training instances gain weight between members, which biases
//! the next round of pair sampling. Members vote on the final label set.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the experiment
//! harness and the command line tool live in the `vpcme` crate.

#![no_std]

extern crate alloc;

pub mod constraints;
pub mod dataset;
pub mod eigen;
pub mod ensemble;
mod error;
pub mod matrix;
pub mod metrics;
pub mod mlknn;
pub mod projection;
pub mod stats;

pub use constraints::{label_overlap_ratio, sample_constraints, ConstraintConfig, PairConstraintSets};
pub use dataset::{compute_stats, kfold_split, DatasetStats, FoldAssignment, MultiLabelDataset, Standardizer};
pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use ensemble::{
    predict_ensemble, sample_is_misclassified, train_vpcme, BoostState, Member, MultiLabelClassifier, Prediction,
    TrainingLogEntry, VpcmeConfig, VpcmeModel, VpcmeTrainer,
};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use metrics::{evaluate, rank_from_scores, MetricKind, MetricValue, UnitEvaluation};
pub use mlknn::{fit_mlknn, MlknnModel};
pub use projection::{fit_projection, scaling_coefficient, scatter_matrices, ProjectionModel, ScatterPair};
pub use stats::{paired_t_test, t_critical_001, TTestResult};
