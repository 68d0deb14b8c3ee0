// Copyright 2026 The rivetlite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Training configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::LayerwiseError;
use crate::encode::Encoding;

/// Layerwise-learning schedule and optimizer settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LLConfig {
    pub n_qubits: usize,
    pub layers_per_step: usize,
    pub num_steps: usize,
    pub partitions: usize,
    pub sweeps: usize,
    pub epochs_per_step: usize,
    pub epochs_per_partition: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
    pub encoding: Encoding,
    /// Fraction of rows used for training; the rest is the test set.
    pub train_fraction: f64,
    /// Epochs for the all-layers-at-once baseline.
    pub regular_epochs: usize,
    /// Device used for the stitched/monolithic transpile timings.
    pub topology: String,
    /// Transpile every Phase-1 step both ways and record the times.
    pub record_transpile: bool,
}

impl Default for LLConfig {
    fn default() -> Self {
        Self {
            n_qubits: 4,
            layers_per_step: 3,
            num_steps: 2,
            partitions: 2,
            sweeps: 2,
            epochs_per_step: 10,
            epochs_per_partition: 5,
            learning_rate: 0.05,
            batch_size: 16,
            seed: 42,
            encoding: Encoding::Angle,
            train_fraction: 0.8,
            regular_epochs: 40,
            topology: "heavyhex-27".into(),
            record_transpile: true,
        }
    }
}

impl LLConfig {
    /// Iris: 4 qubits, 2 steps of 3 layers, then 2 sweeps over 2 partitions.
    pub fn iris() -> Self {
        Self::default()
    }

    /// Digits: 4 amplitude-encoded qubits, 12 layers grown 3 at a time.
    pub fn digits() -> Self {
        Self {
            encoding: Encoding::Amplitude,
            num_steps: 4,
            layers_per_step: 3,
            epochs_per_step: 8,
            epochs_per_partition: 6,
            regular_epochs: 40,
            ..Self::default()
        }
    }

    pub fn total_layers(&self) -> usize {
        self.layers_per_step * self.num_steps
    }

    pub fn total_parameters(&self) -> usize {
        self.total_layers() * self.n_qubits
    }

    /// Expected number of test-accuracy checkpoints in a full run.
    pub fn checkpoint_count(&self) -> usize {
        self.num_steps + self.partitions * self.sweeps
    }

    pub fn validate(&self) -> Result<(), LayerwiseError> {
        let positive = [
            ("n_qubits", self.n_qubits),
            ("layers_per_step", self.layers_per_step),
            ("num_steps", self.num_steps),
            ("partitions", self.partitions),
            ("sweeps", self.sweeps),
            ("batch_size", self.batch_size),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(LayerwiseError::Config(format!("{name} must be positive")));
        }
        if self.partitions > self.total_parameters() {
            return Err(LayerwiseError::Config(format!(
                "{} partitions exceed the {} trainable parameters",
                self.partitions,
                self.total_parameters()
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(LayerwiseError::Config("learning_rate must be positive and finite".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(LayerwiseError::Config("train_fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Parse TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self, LayerwiseError> {
        let cfg: LLConfig = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| LayerwiseError::Config(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| LayerwiseError::Config(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, LayerwiseError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| LayerwiseError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        LLConfig::iris().validate().unwrap();
        LLConfig::digits().validate().unwrap();
        assert_eq!(LLConfig::iris().total_parameters(), 24);
        assert_eq!(LLConfig::digits().total_layers(), 12);
        assert_eq!(LLConfig::iris().checkpoint_count(), 6);
    }

    #[test]
    fn parses_toml_and_json() {
        let cfg = LLConfig::parse("num_steps = 3\nencoding = \"zz\"\n").unwrap();
        assert_eq!(cfg.num_steps, 3);
        assert_eq!(cfg.encoding, Encoding::Zz);
        let cfg = LLConfig::parse(r#"{"seed": 7}"#).unwrap();
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(LLConfig::parse("num_steps = 0").is_err());
        assert!(LLConfig::parse("bogus = 1").is_err());
        assert!(LLConfig::parse("partitions = 100").is_err());
        assert!(LLConfig::parse("learning_rate = -1.0").is_err());
        assert!(LLConfig::parse("n_qubits = \"four\"").is_err());
    }
}
