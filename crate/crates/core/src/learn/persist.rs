//! Model files are two JSON lines: a header, then the model parameters.
//! The header carries a sha256 of the parameter line so tampering is caught.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Model, ModelConfig, ModelKind};
use crate::features::FeatureSchema;
use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "clickbait-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    version: u32,
    kind: ModelKind,
    /// Checksum of the full manifest the features were selected from.
    schema_checksum: String,
    features: Vec<String>,
    hyperparameters: ModelConfig,
    payload_checksum: String,
}

/// A fitted model plus what is needed to rebuild its input vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub config: ModelConfig,
    pub schema_checksum: String,
    /// Input columns, by schema name, in model order.
    pub features: Vec<String>,
    pub model: Model,
}

impl TrainedModel {
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let payload = serde_json::to_string(&self.model)
            .map_err(|e| Error::ModelFormat(e.to_string()))?;
        let header = Header {
            format: MODEL_FORMAT.into(),
            version: MODEL_FORMAT_VERSION,
            kind: self.config.kind,
            schema_checksum: self.schema_checksum.clone(),
            features: self.features.clone(),
            hyperparameters: self.config,
            payload_checksum: hex::encode(Sha256::digest(payload.as_bytes())),
        };
        let header = serde_json::to_string(&header).map_err(|e| Error::ModelFormat(e.to_string()))?;
        writeln!(w, "{header}")?;
        writeln!(w, "{payload}")?;
        w.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        self.write(&mut out)?;
        Ok(out)
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header_line = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::ModelFormat("empty file".into()))?;
        let payload = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::ModelFormat("missing parameter line".into()))?;
        let header: Header = serde_json::from_str(&header_line)
            .map_err(|e| Error::ModelFormat(format!("header: {e}")))?;
        if header.format != MODEL_FORMAT {
            return Err(Error::ModelFormat(format!("unknown format \"{}\"", header.format)));
        }
        if header.version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!("unsupported version {}", header.version)));
        }
        let actual = hex::encode(Sha256::digest(payload.as_bytes()));
        if actual != header.payload_checksum {
            return Err(Error::ChecksumMismatch(format!(
                "model parameters hash to {actual}, header records {}",
                header.payload_checksum
            )));
        }
        let model: Model = serde_json::from_str(&payload)
            .map_err(|e| Error::ModelFormat(format!("parameters: {e}")))?;
        if model.n_features() != header.features.len() {
            return Err(Error::ModelFormat(format!(
                "model expects {} inputs but header lists {} features",
                model.n_features(),
                header.features.len()
            )));
        }
        if header.kind != header.hyperparameters.kind {
            return Err(Error::ModelFormat("kind disagrees with hyperparameters".into()));
        }
        Ok(TrainedModel {
            config: header.hyperparameters,
            schema_checksum: header.schema_checksum,
            features: header.features,
            model,
        })
    }

    /// Column indices of this model's inputs within `schema`, after checking
    /// that the model was trained against the same manifest.
    pub fn columns_in(&self, schema: &FeatureSchema) -> Result<Vec<usize>> {
        let expected = schema.checksum();
        if self.schema_checksum != expected {
            return Err(Error::SchemaMismatch(format!(
                "model was trained against schema {}, manifest is {expected}",
                self.schema_checksum
            )));
        }
        self.features
            .iter()
            .map(|name| {
                schema
                    .index_of(name)
                    .ok_or_else(|| Error::SchemaMismatch(format!("feature \"{name}\" not in manifest")))
            })
            .collect()
    }
}
