//! JSON scenario configuration.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Overrides of the scenario parameters; unset fields keep the scenario default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buffer: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    /// Built-in scenario this config runs.
    pub scenario: String,
    /// Registry name, when the file defines a new scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub params: ParamOverrides,
    /// `None` runs every check of the scenario; an empty list runs nothing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl Config {
    pub fn for_scenario(name: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scenario: name.to_string(),
            name: None,
            description: None,
            params: ParamOverrides::default(),
            checks: None,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config {
                path: path.to_path_buf(),
                message: format!(
                    "field schema_version: expected {SCHEMA_VERSION}, found {}",
                    cfg.schema_version
                ),
            });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }
}
