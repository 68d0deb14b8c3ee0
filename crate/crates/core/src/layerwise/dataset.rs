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

//! Binary-labelled tabular datasets and the two bundled fixtures.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LayerwiseError;

const IRIS_CSV: &str = include_str!("../../data/iris_binary.csv");
const DIGITS_CSV: &str = include_str!("../../data/digits_3v6_4x4.csv");

/// Rows of features with a 0/1 label each.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

/// Train/test partition of one dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub train: Dataset,
    pub test: Dataset,
}

impl Dataset {
    /// Parse CSV with header `label,f0,...,f{k-1}`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, LayerwiseError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers().map_err(|e| LayerwiseError::Dataset(e.to_string()))?.clone();
        if headers.get(0) != Some("label") || headers.len() < 2 {
            return Err(LayerwiseError::Dataset("header must start with `label` followed by feature columns".into()));
        }
        for (i, name) in headers.iter().skip(1).enumerate() {
            if name != format!("f{i}") {
                return Err(LayerwiseError::Dataset(format!("column {} should be f{i}, found {name:?}", i + 1)));
            }
        }
        let mut out = Dataset::default();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| LayerwiseError::Dataset(e.to_string()))?;
            let bad = |what: &str| LayerwiseError::Dataset(format!("row {}: {what}", row + 1));
            let label = match record.get(0) {
                Some("0") => 0,
                Some("1") => 1,
                other => return Err(bad(&format!("label {other:?} is not 0 or 1"))),
            };
            let values = record
                .iter()
                .skip(1)
                .map(|v| v.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("non-numeric feature"))?;
            out.features.push(values);
            out.labels.push(label);
        }
        out.validate()?;
        Ok(out)
    }

    pub fn from_path(path: &Path) -> Result<Self, LayerwiseError> {
        let file =
            std::fs::File::open(path).map_err(|e| LayerwiseError::Dataset(format!("{}: {e}", path.display())))?;
        Self::from_csv(file)
    }

    /// Setosa (0) vs versicolor (1), four raw measurements.
    pub fn iris() -> Self {
        Self::from_csv(IRIS_CSV.as_bytes()).expect("bundled iris fixture parses")
    }

    /// Handwritten 3 (label 0) vs 6 (label 1), 4x4 mean-pooled pixels.
    pub fn digits() -> Self {
        Self::from_csv(DIGITS_CSV.as_bytes()).expect("bundled digits fixture parses")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<(), LayerwiseError> {
        if self.is_empty() {
            return Err(LayerwiseError::EmptyDataset);
        }
        if self.features.len() != self.labels.len() {
            return Err(LayerwiseError::Dataset("feature and label counts differ".into()));
        }
        let k = self.num_features();
        if self.features.iter().any(|f| f.len() != k) {
            return Err(LayerwiseError::Dataset("rows have different feature counts".into()));
        }
        if let Some(&l) = self.labels.iter().find(|&&l| l > 1) {
            return Err(LayerwiseError::NonBinaryLabel(l));
        }
        Ok(())
    }

    /// Min-max scale every column to `[0, pi]` using this dataset's ranges.
    /// Constant columns map to 0.
    pub fn scaled_to_pi(&self) -> Self {
        let k = self.num_features();
        let mut lo = vec![f64::INFINITY; k];
        let mut hi = vec![f64::NEG_INFINITY; k];
        for row in &self.features {
            for (j, &v) in row.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let features = self
            .features
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &v)| if hi[j] > lo[j] { PI * (v - lo[j]) / (hi[j] - lo[j]) } else { 0.0 })
                    .collect()
            })
            .collect();
        Dataset { features, labels: self.labels.clone() }
    }

    fn subset(&self, idx: &[usize]) -> Self {
        Dataset {
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Shuffle with `seed` and put the first `train_fraction` of rows in the
    /// training set. Both sides get at least one row.
    pub fn split(&self, train_fraction: f64, seed: u64) -> Result<Split, LayerwiseError> {
        self.validate()?;
        if self.len() < 2 || !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(LayerwiseError::Dataset(format!(
                "cannot split {} rows with train fraction {train_fraction}",
                self.len()
            )));
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let cut = ((self.len() as f64 * train_fraction).round() as usize).clamp(1, self.len() - 1);
        Ok(Split { train: self.subset(&idx[..cut]), test: self.subset(&idx[cut..]) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let iris = Dataset::iris();
        assert_eq!((iris.len(), iris.num_features()), (100, 4));
        assert_eq!(iris.labels.iter().filter(|&&l| l == 1).count(), 50);
        let digits = Dataset::digits();
        assert_eq!(digits.num_features(), 16);
        assert!(digits.features.iter().flatten().all(|&v| v >= 0.0));
        assert!(digits.features.iter().all(|row| row.iter().any(|&v| v > 0.0)));
    }

    #[test]
    fn scaling_range() {
        let s = Dataset::iris().scaled_to_pi();
        for j in 0..4 {
            let col: Vec<f64> = s.features.iter().map(|r| r[j]).collect();
            assert_eq!(col.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
            assert!((col.iter().cloned().fold(0.0, f64::max) - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn split_is_deterministic_and_disjoint() {
        let d = Dataset::iris();
        let a = d.split(0.8, 42).unwrap();
        let b = d.split(0.8, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.train.len(), a.test.len()), (80, 20));
        assert_ne!(a, d.split(0.8, 7).unwrap());
    }

    #[test]
    fn rejects_bad_csv() {
        assert!(matches!(Dataset::from_csv("label,f0\n2,1.0\n".as_bytes()), Err(LayerwiseError::Dataset(_))));
        assert!(Dataset::from_csv("y,f0\n1,1.0\n".as_bytes()).is_err());
        assert!(Dataset::from_csv("label,f0\n1,abc\n".as_bytes()).is_err());
        assert!(matches!(Dataset::from_csv("label,f0\n".as_bytes()), Err(LayerwiseError::EmptyDataset)));
    }
}
