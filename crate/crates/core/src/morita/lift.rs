use crate::error::{Error, Result};
use crate::groupoid::{ActionGroupoid, FiniteGroupoid};

use super::bitorsor::Bitorsor;

/// A set of arrows with pairwise distinct sources and pairwise distinct targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    pub arrows: Vec<usize>,
}

impl Bisection {
    pub fn single(arrow: usize) -> Self {
        Self { arrows: vec![arrow] }
    }

    pub fn units(g: &FiniteGroupoid) -> Self {
        Self {
            arrows: (0..g.object_count()).map(|x| g.unit(x)).collect(),
        }
    }

    /// Global bisection `{(g, x) : x}` of an action groupoid on a finite base.
    pub fn constant_element(a: &ActionGroupoid, element: usize) -> Self {
        let k = a.base.point_count().unwrap_or(0);
        Self {
            arrows: (0..k).map(|x| a.arrow_index(element, x)).collect(),
        }
    }

    pub fn is_valid(&self, g: &FiniteGroupoid) -> bool {
        let mut s: Vec<usize> = self.arrows.iter().map(|&a| g.source(a)).collect();
        let mut t: Vec<usize> = self.arrows.iter().map(|&a| g.target(a)).collect();
        let n = s.len();
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        s.len() == n && t.len() == n
    }

    fn with_source(&self, g: &FiniteGroupoid, x: usize) -> Option<usize> {
        self.arrows.iter().copied().find(|&a| g.source(a) == x)
    }

    fn with_target(&self, g: &FiniteGroupoid, y: usize) -> Option<usize> {
        self.arrows.iter().copied().find(|&a| g.target(a) == y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Bisections of `Θ` lifted through the left action.
    Left,
    /// Bisections of `Ξ` lifted through the right action.
    Right,
}

/// Lift `φ̂` of a bisection to a partial map on the carrier, with the
/// intertwining identity checked on its whole domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalLift {
    /// `map[q] = φ̂(q)` where defined.
    pub map: Vec<Option<usize>>,
    pub intertwines: bool,
}

impl LocalLift {
    pub fn is_identity_on_domain(&self) -> bool {
        self.map.iter().enumerate().all(|(q, v)| v.map_or(true, |v| v == q))
    }
}

/// Left: `φ̂_σ(q') = σ̂(ϱ q')·q'`, checked against `ϱ∘φ̂_σ = φ_σ∘ϱ`.
/// Right: `φ̂_τ(q') = q'·τ̂`, checked against `α∘φ̂_τ⁻¹ = φ_τ∘α`.
pub fn lift_bisection(phi: &Bitorsor, side: Side, bis: &Bisection, q: usize) -> Result<LocalLift> {
    let n = phi.carrier_len();
    let mut map = vec![None; n];
    let mut ok = true;
    match side {
        Side::Left => {
            let g = &phi.left;
            if !bis.is_valid(g) {
                return Err(Error::Invalid("not a bisection".into()));
            }
            if bis.with_source(g, phi.rho(q)).is_none() {
                return Err(Error::AnchorMismatch(format!(
                    "bisection misses ϱ({})",
                    phi.carrier_label(q)
                )));
            }
            for (p, slot) in map.iter_mut().enumerate() {
                if let Some(s) = bis.with_source(g, phi.rho(p)) {
                    let v = phi.act_left(s, p).expect("anchored action");
                    *slot = Some(v);
                    ok &= phi.rho(v) == g.target(s);
                }
            }
        }
        Side::Right => {
            let g = &phi.right;
            if !bis.is_valid(g) {
                return Err(Error::Invalid("not a bisection".into()));
            }
            if bis.with_target(g, phi.alpha(q)).is_none() {
                return Err(Error::AnchorMismatch(format!(
                    "bisection misses α({})",
                    phi.carrier_label(q)
                )));
            }
            for (p, slot) in map.iter_mut().enumerate() {
                if let Some(t) = bis.with_target(g, phi.alpha(p)) {
                    let v = phi.act_right(p, t).expect("anchored action");
                    *slot = Some(v);
                    // α(p) = φ_τ(α(v)) since α(v) = s(τ) and φ_τ(s τ) = t τ.
                    let image = bis.with_source(g, phi.alpha(v)).map(|a| g.target(a));
                    ok &= image == Some(phi.alpha(p));
                }
            }
        }
    }
    Ok(LocalLift { map, intertwines: ok })
}
