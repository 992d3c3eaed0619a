use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

const TABLE: &str = include_str!("../data/expected.json");

#[derive(Debug, Clone, Deserialize)]
pub struct Expectation {
    pub claim: String,
    pub value: Value,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExpectedTable {
    pub version: String,
    pub entries: BTreeMap<String, Expectation>,
}

impl ExpectedTable {
    /// The table compiled into the binary.
    pub fn builtin() -> Self {
        serde_json::from_str(TABLE).expect("builtin expected table parses")
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Config(format!("expected table: {e}")))
    }

    pub fn get(&self, id: &str) -> Result<&Expectation, CliError> {
        self.entries
            .get(id)
            .ok_or_else(|| CliError::MissingExpectation(id.into()))
    }
}
