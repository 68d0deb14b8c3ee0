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

//! Circuit JSON:
//! `{"n": 2, "gates": [{"name": "rx", "qubits": [0], "params": [0.5]}], "measurements": [[0, 0]]}`.
//! Numeric angles are JSON numbers; symbolic parameters are expression strings.

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, Expr, Gate, GateKind, Param};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ParamRepr {
    Number(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    name: String,
    qubits: Vec<usize>,
    #[serde(default)]
    params: Vec<ParamRepr>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CircuitRepr {
    n: usize,
    gates: Vec<GateRepr>,
    #[serde(default)]
    measurements: Vec<[usize; 2]>,
}

impl From<&Circuit> for CircuitRepr {
    fn from(c: &Circuit) -> Self {
        CircuitRepr {
            n: c.num_qubits(),
            gates: c
                .gates()
                .iter()
                .map(|g| GateRepr {
                    name: g.name().to_owned(),
                    qubits: g.qubits().to_vec(),
                    params: g
                        .params()
                        .iter()
                        .map(|p| match p {
                            Param::Value(v) => ParamRepr::Number(*v),
                            Param::Symbolic(e) => ParamRepr::Text(e.to_string()),
                        })
                        .collect(),
                })
                .collect(),
            measurements: c.measurements().iter().map(|&(q, c)| [q, c]).collect(),
        }
    }
}

impl TryFrom<CircuitRepr> for Circuit {
    type Error = CircuitError;

    fn try_from(repr: CircuitRepr) -> Result<Self, Self::Error> {
        let mut c = Circuit::try_new(repr.n)?;
        for g in repr.gates {
            let kind: GateKind = g.name.parse()?;
            let params = g
                .params
                .into_iter()
                .map(|p| match p {
                    ParamRepr::Number(v) => Ok(Param::Value(v)),
                    ParamRepr::Text(s) => s.parse::<Expr>().map(Param::from),
                })
                .collect::<Result<Vec<_>, CircuitError>>()?;
            c.push(Gate::new(kind, &g.qubits, params)?)?;
        }
        for [q, b] in repr.measurements {
            c.measure(q, b)?;
        }
        Ok(c)
    }
}

impl Serialize for Circuit {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CircuitRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CircuitRepr::deserialize(deserializer)?;
        Circuit::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl Circuit {
    pub fn from_json(text: &str) -> Result<Circuit, CircuitError> {
        serde_json::from_str(text).map_err(|e| CircuitError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit JSON is always serializable")
    }
}
