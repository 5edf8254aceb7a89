//! Groupoids of the two catalog flavors: explicit finite tables and finite
//! group actions on finite sets, flat circles and flat tori.

mod action;
mod base;
mod cech;
mod finite;
mod group;
pub mod io;

pub use action::{ActionGroupoid, GroupAction};
pub use base::{wrap, BaseSpace, Isometry};
pub use cech::{arc_cech_groupoid, cech_groupoid, Arc, ArcCechGroupoid, CechCover, CechGroupoid};
pub use finite::{validate_finite, FiniteGroupoid, GroupoidTables};
pub use group::FiniteGroup;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::report::ValidationReport;

/// Either catalog flavor.
#[derive(Debug, Clone)]
pub enum Groupoid {
    Finite(FiniteGroupoid),
    Action(ActionGroupoid),
}

impl From<FiniteGroupoid> for Groupoid {
    fn from(g: FiniteGroupoid) -> Self {
        Self::Finite(g)
    }
}

impl From<ActionGroupoid> for Groupoid {
    fn from(g: ActionGroupoid) -> Self {
        Self::Action(g)
    }
}

impl Groupoid {
    pub fn name(&self) -> &str {
        match self {
            Self::Finite(g) => g.name(),
            Self::Action(g) => &g.name,
        }
    }

    /// Explicit tables when the base is finite.
    pub fn as_finite(&self) -> Result<FiniteGroupoid> {
        match self {
            Self::Finite(g) => Ok(g.clone()),
            Self::Action(g) => g.to_finite(),
        }
    }
}

/// Object reference: an index for finite bases, a fractional point otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectRef {
    Index(usize),
    Point(Vec<Rational>),
}

/// Arrow reference. Action arrows are `(g, x)` with `x` the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrowRef {
    Index(usize),
    Action { element: usize, source: ObjectRef },
}

pub fn validate_groupoid(g: &Groupoid) -> ValidationReport {
    match g {
        Groupoid::Finite(f) => validate_finite(f),
        Groupoid::Action(a) => {
            let mut r = a.validate();
            if let Err(e) = a.base.validate() {
                r.fail("base", e.to_string());
            }
            r
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitPartition {
    /// Blocks of object indices (finite) or sample-grid indices (Fourier).
    pub blocks: Vec<Vec<usize>>,
    /// True when the blocks partition the uniform sample grid rather than objects.
    pub sampled: bool,
}

impl OrbitPartition {
    pub fn count(&self) -> usize {
        self.blocks.len()
    }
}

/// Orbits of objects. For Fourier bases the partition is taken on the
/// `4·modeCutoff` sample grid, which every catalog isometry preserves.
pub fn orbits(g: &Groupoid) -> Result<OrbitPartition> {
    match g {
        Groupoid::Action(a) if !a.is_finite() => {
            let grid = a.base.sample_grid();
            let mut block_of = vec![usize::MAX; grid.len()];
            let mut blocks = Vec::new();
            for i in 0..grid.len() {
                if block_of[i] != usize::MAX {
                    continue;
                }
                let mut block: Vec<usize> = (0..a.order())
                    .map(|el| {
                        let p = a.act_point(el, &grid[i]);
                        grid.iter().position(|q| *q == p).expect("isometries preserve the grid")
                    })
                    .collect();
                block.sort_unstable();
                block.dedup();
                for &j in &block {
                    block_of[j] = blocks.len();
                }
                blocks.push(block);
            }
            Ok(OrbitPartition { blocks, sampled: true })
        }
        _ => Ok(OrbitPartition {
            blocks: g.as_finite()?.orbits(),
            sampled: false,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isotropy {
    /// Arrow indices (finite) or group elements (Fourier) fixing the object.
    pub elements: Vec<usize>,
}

impl Isotropy {
    pub fn rank(&self) -> usize {
        self.elements.len()
    }
}

pub fn isotropy(g: &Groupoid, x: &ObjectRef) -> Result<Isotropy> {
    match (g, x) {
        (Groupoid::Action(a), ObjectRef::Point(p)) if !a.is_finite() => {
            if p.len() != a.base.dimension() {
                return Err(Error::UnknownObject(format!("{p:?}")));
            }
            let p: Vec<Rational> = p.iter().map(|&v| wrap(v)).collect();
            Ok(Isotropy {
                elements: (0..a.order()).filter(|&el| a.act_point(el, &p) == p).collect(),
            })
        }
        (_, ObjectRef::Index(i)) => {
            let f = g.as_finite()?;
            Ok(Isotropy {
                elements: f.isotropy(*i)?,
            })
        }
        _ => Err(Error::UnknownObject(format!("{x:?}"))),
    }
}

/// Germ of `t∘σ̂` at the source of an arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Germ {
    /// Discrete base: the germ is the target point.
    Point(usize),
    Isometry(Isometry),
}

impl Germ {
    pub fn is_identity_at(&self, source: usize) -> bool {
        match self {
            Self::Point(t) => *t == source,
            Self::Isometry(i) => i.is_identity(),
        }
    }
}

pub fn germ_of(g: &Groupoid, arrow: &ArrowRef) -> Result<Germ> {
    match (g, arrow) {
        (Groupoid::Action(a), ArrowRef::Action { element, .. }) if !a.is_finite() => a
            .isometry(*element)
            .cloned()
            .map(Germ::Isometry)
            .ok_or_else(|| Error::UnknownArrow(element.to_string())),
        (Groupoid::Action(a), ArrowRef::Action { element, source: ObjectRef::Index(x) }) => {
            let p = a
                .permutation(*element)
                .ok_or_else(|| Error::UnknownArrow(element.to_string()))?;
            Ok(Germ::Point(*p.get(*x).ok_or_else(|| Error::UnknownObject(x.to_string()))?))
        }
        (_, ArrowRef::Index(i)) => {
            let f = g.as_finite()?;
            if *i >= f.arrow_count() {
                return Err(Error::UnknownArrow(i.to_string()));
            }
            Ok(Germ::Point(f.target(*i)))
        }
        _ => Err(Error::UnknownArrow(format!("{arrow:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Effectiveness {
    pub effective: bool,
    /// Two distinct arrows with the same germ, when not effective.
    pub witness: Option<(ArrowRef, ArrowRef)>,
}

pub fn is_effective(g: &Groupoid) -> Result<Effectiveness> {
    match g {
        Groupoid::Action(a) if !a.is_finite() => {
            // Flat isometries agreeing on an open set agree everywhere, so
            // arrows at one point have equal germs iff their isometries agree.
            let isos = a.isometries();
            for el in 0..isos.len() {
                for other in 0..el {
                    if isos[el] == isos[other] {
                        let at = ObjectRef::Point(vec![Rational::from_integer(0); a.base.dimension()]);
                        return Ok(Effectiveness {
                            effective: false,
                            witness: Some((
                                ArrowRef::Action { element: other, source: at.clone() },
                                ArrowRef::Action { element: el, source: at },
                            )),
                        });
                    }
                }
            }
            Ok(Effectiveness {
                effective: true,
                witness: None,
            })
        }
        _ => {
            let f = g.as_finite()?;
            let w = f.effectiveness_witness();
            Ok(Effectiveness {
                effective: w.is_none(),
                witness: w.map(|(a, b)| (ArrowRef::Index(a), ArrowRef::Index(b))),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn z6_on_z3() -> Groupoid {
        ActionGroupoid::cyclic_shift("Z6xZ3", 6, 3, |a| a % 3).into()
    }

    #[test]
    fn z6_on_z3_single_orbit_and_isotropy() {
        let g = z6_on_z3();
        assert!(validate_groupoid(&g).is_valid());
        let o = orbits(&g).unwrap();
        assert_eq!(o.count(), 1);
        assert_eq!(o.blocks[0].len(), 3);
        let iso = isotropy(&g, &ObjectRef::Index(0)).unwrap();
        let f = g.as_finite().unwrap();
        let labels: Vec<&str> = iso.elements.iter().map(|&a| f.arrow_label(a)).collect();
        assert_eq!(labels, vec!["(0,0)", "(3,0)"]);
    }

    #[test]
    fn germ_of_action_arrow_is_target() {
        let g = z6_on_z3();
        let germ = germ_of(&g, &ArrowRef::Action { element: 2, source: ObjectRef::Index(1) }).unwrap();
        assert_eq!(germ, Germ::Point(0));
    }

    #[test]
    fn rotation_circle_is_effective() {
        let a = ActionGroupoid::new(
            "rot",
            FiniteGroup::cyclic(2),
            BaseSpace::circle(std::f64::consts::TAU, 8),
            GroupAction::Isometries(vec![
                Isometry::identity(1),
                Isometry::translation(vec![Ratio::new(1, 2)]),
            ]),
        )
        .unwrap();
        let g: Groupoid = a.into();
        assert!(is_effective(&g).unwrap().effective);
        let o = orbits(&g).unwrap();
        assert!(o.sampled);
        assert_eq!(o.count(), 16);
    }
}
