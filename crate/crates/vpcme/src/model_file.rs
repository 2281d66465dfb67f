//! Self-describing JSON model artifacts.
//!
//! Floats are written with shortest round-trip formatting, so a loaded model
//! reproduces the saved model's predictions bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use vpcme_core::{MultiLabelClassifier, Prediction, Standardizer, VpcmeConfig};

use crate::harness::{Method, TrainedModel};

pub const FORMAT: &str = "vpcme-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("{path}: i/o failure")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed model file")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: not a model file (format {found:?}, version {version})")]
    Format { path: String, found: String, version: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub format_version: u32,
    pub version: String,
    pub method: Method,
    pub feature_count: usize,
    pub label_names: Vec<String>,
    pub config: VpcmeConfig,
    /// Fitted on the training features when z-scoring was requested.
    pub standardizer: Option<Standardizer>,
    pub model: TrainedModel,
}

impl ModelFile {
    pub fn new(
        method: Method,
        config: VpcmeConfig,
        label_names: Vec<String>,
        standardizer: Option<Standardizer>,
        model: TrainedModel,
    ) -> Self {
        ModelFile {
            format: FORMAT.into(),
            format_version: FORMAT_VERSION,
            version: crate::report::VERSION.into(),
            method,
            feature_count: model.feature_count(),
            label_names,
            config,
            standardizer,
            model,
        }
    }

    /// Standardizes `x` if needed, then predicts.
    pub fn predict(&self, x: &[f64]) -> vpcme_core::Result<Prediction> {
        match &self.standardizer {
            Some(z) => {
                let m = vpcme_core::Matrix::from_row_major(1, x.len(), x.to_vec())?;
                self.model.predict(z.apply(&m)?.row(0))
            }
            None => self.model.predict(x),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelFileError> {
        let io = |source| ModelFileError::Io { path: path.display().to_string(), source };
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        serde_json::to_writer(&mut w, self)
            .map_err(|source| ModelFileError::Json { path: path.display().to_string(), source })?;
        w.write_all(b"\n").and_then(|_| w.flush()).map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        let name = path.display().to_string();
        let file = File::open(path).map_err(|source| ModelFileError::Io { path: name.clone(), source })?;
        let m: ModelFile = serde_json::from_reader(BufReader::new(file))
            .map_err(|source| ModelFileError::Json { path: name.clone(), source })?;
        if m.format != FORMAT || m.format_version != FORMAT_VERSION {
            return Err(ModelFileError::Format { path: name, found: m.format, version: m.format_version });
        }
        Ok(m)
    }
}
