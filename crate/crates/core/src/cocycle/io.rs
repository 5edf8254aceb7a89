use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::groupoid::io::SCHEMA_VERSION;

use super::cocycle::Cocycle;

/// Cocycle values as exact rational matrices, keyed by arrow label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleFile {
    pub schema_version: u32,
    pub groupoid: String,
    pub rank: usize,
    pub arrows: Vec<String>,
    pub values: Vec<ExactMatrix>,
}

impl CocycleFile {
    pub fn new(groupoid: &crate::groupoid::FiniteGroupoid, c: &Cocycle) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            groupoid: groupoid.name().to_string(),
            rank: c.rank,
            arrows: groupoid.arrows().to_vec(),
            values: c.values.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(s)?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(Error::Invalid(format!("unsupported schema version {}", f.schema_version)));
        }
        if f.arrows.len() != f.values.len() {
            return Err(Error::Shape("one value per arrow label".into()));
        }
        Ok(f)
    }

    /// Values reordered to match `g`'s arrow order.
    pub fn cocycle_on(&self, g: &crate::groupoid::FiniteGroupoid) -> Result<Cocycle> {
        let mut values = vec![None; g.arrow_count()];
        for (label, v) in self.arrows.iter().zip(&self.values) {
            let a = g
                .arrow_by_label(label)
                .ok_or_else(|| Error::UnknownArrow(label.clone()))?;
            values[a] = Some(v.clone());
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(a, v)| v.ok_or_else(|| Error::UnknownArrow(g.arrow_label(a).to_string())))
            .collect::<Result<Vec<_>>>()?;
        let c = Cocycle { rank: self.rank, values };
        if c.values.iter().any(|m| m.rows() != c.rank || m.cols() != c.rank) {
            return Err(Error::Shape("cocycle entries have different ranks".into()));
        }
        Ok(c)
    }
}
