use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::report::ValidationReport;

use super::base::{BaseSpace, Isometry};
use super::finite::{validate_finite, FiniteGroupoid};
use super::group::FiniteGroup;

/// How group elements act on the base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupAction {
    /// `perm[g][x] = g·x` on a finite base.
    Permutations(Vec<Vec<usize>>),
    /// One flat isometry per group element on a Fourier base.
    Isometries(Vec<Isometry>),
}

/// Action groupoid `G ⋉ X`. The arrow `(g, x)` goes from `x` to `g·x`, and
/// `(h, g·x)∘(g, x) = (hg, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionGroupoid {
    pub name: String,
    pub group: FiniteGroup,
    pub base: BaseSpace,
    pub action: GroupAction,
}

impl ActionGroupoid {
    pub fn new(name: impl Into<String>, group: FiniteGroup, base: BaseSpace, action: GroupAction) -> Result<Self> {
        let g = Self {
            name: name.into(),
            group,
            base,
            action,
        };
        g.base.validate()?;
        let n = g.group.order();
        match (&g.base, &g.action) {
            (BaseSpace::FiniteSet { points }, GroupAction::Permutations(p)) => {
                if p.len() != n || p.iter().any(|row| row.len() != points.len() || row.iter().any(|&y| y >= points.len())) {
                    return Err(Error::Shape("permutation table does not match group and base".into()));
                }
            }
            (BaseSpace::FiniteSet { .. }, GroupAction::Isometries(_)) => {
                return Err(Error::Invalid("finite bases act by permutations".into()));
            }
            (_, GroupAction::Isometries(isos)) => {
                if isos.len() != n {
                    return Err(Error::Shape("one isometry per group element required".into()));
                }
                if let Some(i) = isos.iter().position(|t| !t.is_valid_for(&g.base)) {
                    return Err(Error::Invalid(format!(
                        "element {} does not act by a catalog isometry",
                        g.group.label(i)
                    )));
                }
            }
            (_, GroupAction::Permutations(_)) => {
                return Err(Error::Invalid("Fourier bases act by isometries".into()));
            }
        }
        Ok(g)
    }

    /// `Z_n ⋉ {0..k-1}` acting by `a·y = y + shift(a)`.
    pub fn cyclic_shift(name: impl Into<String>, n: usize, k: usize, shift: impl Fn(usize) -> usize) -> Self {
        let perms = (0..n).map(|a| (0..k).map(|y| (y + shift(a)) % k).collect()).collect();
        Self::new(name, FiniteGroup::cyclic(n), BaseSpace::finite_n(k), GroupAction::Permutations(perms))
            .expect("cyclic shift action is well formed")
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn is_finite(&self) -> bool {
        self.base.is_finite()
    }

    pub fn isometry(&self, g: usize) -> Option<&Isometry> {
        match &self.action {
            GroupAction::Isometries(v) => v.get(g),
            GroupAction::Permutations(_) => None,
        }
    }

    pub fn isometries(&self) -> &[Isometry] {
        match &self.action {
            GroupAction::Isometries(v) => v,
            GroupAction::Permutations(_) => &[],
        }
    }

    pub fn permutation(&self, g: usize) -> Option<&[usize]> {
        match &self.action {
            GroupAction::Permutations(p) => p.get(g).map(Vec::as_slice),
            GroupAction::Isometries(_) => None,
        }
    }

    pub fn act_point(&self, g: usize, p: &[Rational]) -> Vec<Rational> {
        self.isometries()[g].apply(p)
    }

    /// Arrow index of `(g, x)` in [`ActionGroupoid::to_finite`].
    pub fn arrow_index(&self, g: usize, x: usize) -> usize {
        g * self.base.point_count().unwrap_or(0) + x
    }

    /// Explicit table form for a finite base.
    pub fn to_finite(&self) -> Result<FiniteGroupoid> {
        let GroupAction::Permutations(perm) = &self.action else {
            return Err(Error::Unsupported("only finite bases have explicit tables".into()));
        };
        let BaseSpace::FiniteSet { points } = &self.base else {
            unreachable!("checked in constructor")
        };
        let k = points.len();
        let n = self.group.order();
        let mut arrows = Vec::with_capacity(n * k);
        let mut source = Vec::with_capacity(n * k);
        let mut target = Vec::with_capacity(n * k);
        let mut inverse = Vec::with_capacity(n * k);
        for g in 0..n {
            for x in 0..k {
                arrows.push(format!("({},{})", self.group.label(g), points[x]));
                source.push(x);
                target.push(perm[g][x]);
                inverse.push(self.group.inv(g) * k + perm[g][x]);
            }
        }
        let group = &self.group;
        FiniteGroupoid::from_rule(
            self.name.clone(),
            points.clone(),
            arrows,
            source,
            target,
            |tau, sigma| group.mul(tau / k, sigma / k) * k + sigma % k,
            inverse,
            (0..k).map(|x| group.identity() * k + x).collect(),
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = self.group.validate();
        r.subject = format!("action groupoid {}", self.name);
        let n = self.group.order();
        let e = self.group.identity();
        match &self.action {
            GroupAction::Permutations(p) => {
                let k = p.first().map_or(0, Vec::len);
                for x in 0..k {
                    r.check("identity-acts-trivially", p[e][x] == x, || format!("e·{x} = {}", p[e][x]));
                }
                for g in 0..n {
                    for h in 0..n {
                        let gh = self.group.mul(g, h);
                        for x in 0..k {
                            r.check("homomorphism", p[gh][x] == p[g][p[h][x]], || {
                                format!("({}·{})·{x} != {}·({}·{x})", self.group.label(g), self.group.label(h), self.group.label(g), self.group.label(h))
                            });
                        }
                    }
                }
                if let Ok(f) = self.to_finite() {
                    r.merge(validate_finite(&f));
                }
            }
            GroupAction::Isometries(isos) => {
                r.check("identity-acts-trivially", isos[e].is_identity(), || "e acts nontrivially".into());
                for g in 0..n {
                    for h in 0..n {
                        let gh = self.group.mul(g, h);
                        r.check("homomorphism", isos[gh] == isos[g].then_after(&isos[h]), || {
                            format!("act({}·{}) != act({})∘act({})", self.group.label(g), self.group.label(h), self.group.label(g), self.group.label(h))
                        });
                    }
                }
                for (g, iso) in isos.iter().enumerate() {
                    r.check("catalog-isometry", iso.is_valid_for(&self.base), || {
                        format!("element {}", self.group.label(g))
                    });
                }
            }
        }
        r
    }
}
