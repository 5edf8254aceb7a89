//! JSON description files for groupoids.
//!
//! ```json
//! { "schema_version": 1, "kind": "action", "name": "Z6xZ3",
//!   "group": {"labels": ["0", ...], "table": [[...], ...]},
//!   "base": {"flavor": "FiniteSet", "points": ["0", "1", "2"]},
//!   "action": {"permutations": [[0, 1, 2], ...]},
//!   "covers": [{"sheets": [[0, 1], [1, 2], [2, 0]]}] }
//! ```
//!
//! Finite tables use `"kind": "finite"` with `objects`, `arrows` (label,
//! source, target, inverse), `units` and `compose` triples `[τ, σ, τ∘σ]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ActionGroupoid, CechCover, FiniteGroupoid, Groupoid, GroupoidTables};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrowEntry {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub inverse: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupoidDescription {
    Finite {
        name: String,
        objects: Vec<String>,
        arrows: Vec<ArrowEntry>,
        units: Vec<usize>,
        compose: Vec<[usize; 3]>,
    },
    Action(ActionGroupoid),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupoidFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub groupoid: GroupoidDescription,
    #[serde(default)]
    pub covers: Vec<CechCover>,
}

impl GroupoidFile {
    pub fn new(g: &Groupoid, covers: Vec<CechCover>) -> Self {
        let groupoid = match g {
            Groupoid::Action(a) => GroupoidDescription::Action(a.clone()),
            Groupoid::Finite(f) => {
                let t = f.tables();
                GroupoidDescription::Finite {
                    name: t.name,
                    objects: t.objects,
                    arrows: (0..t.arrows.len())
                        .map(|a| ArrowEntry {
                            label: t.arrows[a].clone(),
                            source: t.source[a],
                            target: t.target[a],
                            inverse: t.inverse[a],
                        })
                        .collect(),
                    units: t.unit,
                    compose: t.compose.iter().map(|&(a, b, c)| [a, b, c]).collect(),
                }
            }
        };
        Self {
            schema_version: SCHEMA_VERSION,
            groupoid,
            covers,
        }
    }

    pub fn build(&self) -> Result<Groupoid> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Invalid(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        match &self.groupoid {
            GroupoidDescription::Action(a) => {
                ActionGroupoid::new(a.name.clone(), a.group.clone(), a.base.clone(), a.action.clone())
                    .map(Groupoid::Action)
            }
            GroupoidDescription::Finite {
                name,
                objects,
                arrows,
                units,
                compose,
            } => FiniteGroupoid::from_tables(GroupoidTables {
                name: name.clone(),
                objects: objects.clone(),
                arrows: arrows.iter().map(|a| a.label.clone()).collect(),
                source: arrows.iter().map(|a| a.source).collect(),
                target: arrows.iter().map(|a| a.target).collect(),
                compose: compose.iter().map(|c| (c[0], c[1], c[2])).collect(),
                inverse: arrows.iter().map(|a| a.inverse).collect(),
                unit: units.clone(),
            })
            .map(Groupoid::Finite),
        }
    }
}

pub fn to_json(g: &Groupoid, covers: Vec<CechCover>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GroupoidFile::new(g, covers))?)
}

pub fn from_json(text: &str) -> Result<(Groupoid, Vec<CechCover>)> {
    let file: GroupoidFile = serde_json::from_str(text)?;
    let g = file.build()?;
    Ok((g, file.covers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::FiniteGroup;

    #[test]
    fn finite_round_trip() {
        let g: Groupoid = FiniteGroupoid::from_group("Z3", &FiniteGroup::cyclic(3)).into();
        let text = to_json(&g, vec![CechCover::trivial(1)]).unwrap();
        let (back, covers) = from_json(&text).unwrap();
        assert_eq!(back.as_finite().unwrap(), g.as_finite().unwrap());
        assert_eq!(covers.len(), 1);
        assert_eq!(to_json(&back, covers).unwrap(), text);
    }

    #[test]
    fn action_round_trip() {
        let g: Groupoid = ActionGroupoid::cyclic_shift("Z6xZ3", 6, 3, |a| a % 3).into();
        let text = to_json(&g, vec![CechCover::cyclic_pairs(3)]).unwrap();
        let (back, covers) = from_json(&text).unwrap();
        assert_eq!(to_json(&back, covers).unwrap(), text);
    }

    #[test]
    fn bad_schema_version() {
        let g: Groupoid = FiniteGroupoid::from_group("Z1", &FiniteGroup::trivial()).into();
        let text = to_json(&g, vec![]).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(from_json(&text).is_err());
    }
}
