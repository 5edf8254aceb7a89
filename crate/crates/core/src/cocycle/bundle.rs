use crate::error::{Error, Result};
use crate::exact::{exact, Exact, ExactMatrix};
use crate::groupoid::{CechGroupoid, FiniteGroupoid};
use crate::morita::{same_structure, Bitorsor};
use crate::report::ValidationReport;

use super::cocycle::Cocycle;

/// Rank-`k` vector bundle with fibre `C^k` over every object and a groupoid
/// action `ρ(σ): E_{sσ} → E_{tσ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantBundle {
    pub groupoid: FiniteGroupoid,
    pub rank: usize,
    pub action: Vec<ExactMatrix>,
}

impl EquivariantBundle {
    pub fn trivial(g: &FiniteGroupoid, rank: usize) -> Self {
        Self {
            groupoid: g.clone(),
            rank,
            action: vec![ExactMatrix::identity(rank); g.arrow_count()],
        }
    }

    pub fn from_fn(g: &FiniteGroupoid, rank: usize, f: impl Fn(usize) -> ExactMatrix) -> Self {
        Self {
            groupoid: g.clone(),
            rank,
            action: (0..g.arrow_count()).map(f).collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &self.groupoid;
        let mut r = ValidationReport::new(format!("bundle on {}", g.name()));
        for m in &self.action {
            r.check("fibre-rank", m.rows() == self.rank && m.cols() == self.rank, || format!("{m:?}"));
        }
        for (t, s, ts) in g.compose_entries() {
            r.check("action-law", &self.action[t] * &self.action[s] == self.action[ts], || {
                format!("({}, {})", g.arrow_label(t), g.arrow_label(s))
            });
        }
        for x in 0..g.object_count() {
            r.check("unit-acts-trivially", self.action[g.unit(x)].is_identity(), || g.object_label(x).to_string());
        }
        r
    }

    /// Basis of invariant sections `ψ(tσ) = ρ(σ)ψ(sσ)`, each as per-object
    /// fibre vectors, by an exact nullspace solve.
    pub fn invariant_sections(&self) -> Vec<Vec<Vec<Exact>>> {
        let g = &self.groupoid;
        let k = self.rank;
        let n = g.object_count() * k;
        let mut rows = Vec::new();
        for a in 0..g.arrow_count() {
            let (s, t) = (g.source(a), g.target(a));
            for i in 0..k {
                let mut row = vec![Exact::default(); n];
                for j in 0..k {
                    row[s * k + j] = row[s * k + j] + self.action[a][(i, j)];
                }
                row[t * k + i] = row[t * k + i] - exact(1);
                rows.push(row);
            }
        }
        if n == 0 {
            return Vec::new();
        }
        let basis = if rows.is_empty() {
            (0..n).map(|e| (0..n).map(|i| exact(i64::from(i == e))).collect()).collect()
        } else {
            ExactMatrix::from_rows(&rows).expect("rectangular").nullspace()
        };
        basis.into_iter().map(|v| v.chunks(k).map(<[Exact]>::to_vec).collect()).collect()
    }

    /// Structure cocycle on a Čech groupoid of the base, using the global
    /// trivialization `C^k` on every sheet.
    pub fn structure_cocycle(&self, cech: &CechGroupoid) -> Cocycle {
        Cocycle {
            rank: self.rank,
            values: cech.arrows.iter().map(|&(s, _, _)| self.action[s].clone()).collect(),
        }
    }
}

/// Glues sheet trivializations: each object uses the first sheet containing
/// it, so `ρ(σ) = g(σ, a(tσ), a(sσ))`.
pub fn reconstruct(cech: &CechGroupoid, g: &Cocycle) -> Result<EquivariantBundle> {
    if g.values.len() != cech.groupoid.arrow_count() {
        return Err(Error::Shape("cocycle does not match the Čech groupoid".into()));
    }
    let base = cech.base.clone();
    let n = base.arrow_count();
    let mut action = Vec::with_capacity(n);
    for s in 0..n {
        let a = cech.cover.sheet_of(base.target(s)).expect("valid cover");
        let b = cech.cover.sheet_of(base.source(s)).expect("valid cover");
        let arrow = cech.arrow(s, a, b).expect("endpoints lie in their sheets");
        action.push(g.values[arrow].clone());
    }
    Ok(EquivariantBundle {
        groupoid: base,
        rank: g.rank,
        action,
    })
}

/// `[Q ×_{ϱ,π} ξ]/Θ` with `[q, u]·τ = [q·τ, u]`, one representative `q_y`
/// per object. For `τ: y → y'`, `ρ'(τ) = ρ(σ)` with `σ·(q_y·τ⁻¹) = q_{y'}`.
#[derive(Debug, Clone)]
pub struct InducedBundle {
    pub bundle: EquivariantBundle,
    pub representatives: Vec<usize>,
}

pub fn induced_bundle(phi: &Bitorsor, xi: &EquivariantBundle) -> Result<InducedBundle> {
    induced_bundle_with(phi, xi, |y| phi.alpha_fibre(y).first().copied())
}

pub fn induced_bundle_with(
    phi: &Bitorsor,
    xi: &EquivariantBundle,
    rep: impl Fn(usize) -> Option<usize>,
) -> Result<InducedBundle> {
    if !same_structure(&phi.left, &xi.groupoid) {
        return Err(Error::GroupoidMismatch(format!(
            "bundle lives on {}, bitorsor starts at {}",
            xi.groupoid.name(),
            phi.left.name()
        )));
    }
    let right = &phi.right;
    let representatives: Vec<usize> = (0..right.object_count())
        .map(|y| {
            rep(y)
                .filter(|&q| phi.alpha(q) == y)
                .ok_or_else(|| Error::NotBitorsor(format!("no carrier point over {}", right.object_label(y))))
        })
        .collect::<Result<_>>()?;
    let mut action = Vec::with_capacity(right.arrow_count());
    for t in 0..right.arrow_count() {
        let (y, y2) = (right.source(t), right.target(t));
        let moved = phi.act_right(representatives[y], right.inverse(t)).expect("anchored action");
        let sigma = phi
            .left_witness(moved, representatives[y2])
            .ok_or_else(|| Error::NotBitorsor(format!("no unique Θ arrow for {}", right.arrow_label(t))))?;
        action.push(xi.action[sigma].clone());
    }
    Ok(InducedBundle {
        bundle: EquivariantBundle {
            groupoid: right.clone(),
            rank: xi.rank,
            action,
        },
        representatives,
    })
}
