//! JSON description files for bitorsors. Endpoint groupoids are referenced
//! by name and resolved by the caller.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;

use super::Bitorsor;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitorsorFile {
    pub schema_version: u32,
    pub name: String,
    pub left: String,
    pub right: String,
    pub carrier: Vec<String>,
    pub rho: Vec<usize>,
    pub alpha: Vec<usize>,
    /// Entries `[σ, q, σ·q]`.
    pub left_action: Vec<[usize; 3]>,
    /// Entries `[q, τ, q·τ]`.
    pub right_action: Vec<[usize; 3]>,
}

impl BitorsorFile {
    pub fn new(b: &Bitorsor) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: b.name.clone(),
            left: b.left.name().to_string(),
            right: b.right.name().to_string(),
            carrier: b.carrier().to_vec(),
            rho: b.rhos().to_vec(),
            alpha: b.alphas().to_vec(),
            left_action: b.left_entries(),
            right_action: b.right_entries(),
        }
    }

    pub fn build(&self, resolve: impl Fn(&str) -> Option<FiniteGroupoid>) -> Result<Bitorsor> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Invalid(format!("unsupported schema_version {}", self.schema_version)));
        }
        let left = resolve(&self.left).ok_or_else(|| Error::Invalid(format!("unknown groupoid {}", self.left)))?;
        let right = resolve(&self.right).ok_or_else(|| Error::Invalid(format!("unknown groupoid {}", self.right)))?;
        Bitorsor::from_tables(
            self.name.clone(),
            left,
            right,
            self.carrier.clone(),
            self.rho.clone(),
            self.alpha.clone(),
            &self.left_action,
            &self.right_action,
        )
    }
}

pub fn to_json(b: &Bitorsor) -> Result<String> {
    Ok(serde_json::to_string_pretty(&BitorsorFile::new(b))?)
}

pub fn from_json(text: &str, resolve: impl Fn(&str) -> Option<FiniteGroupoid>) -> Result<Bitorsor> {
    let f: BitorsorFile = serde_json::from_str(text)?;
    f.build(resolve)
}
