use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groupoid::{cech_groupoid, CechCover, CechGroupoid, FiniteGroupoid};

use super::bitorsor::Bitorsor;

/// Bitorsor between Čech groupoids together with its index bookkeeping.
#[derive(Debug, Clone)]
pub struct LocalizedBitorsor {
    pub bitorsor: Bitorsor,
    pub cech_x: CechGroupoid,
    pub cech_y: CechGroupoid,
    /// Carrier point `(q, a, i)`: `ϱ(q) ∈ U_a`, `α(q) ∈ V_i`.
    pub points: Vec<(usize, usize, usize)>,
    ids: HashMap<(usize, usize, usize), usize>,
}

impl LocalizedBitorsor {
    pub fn point(&self, q: usize, a: usize, i: usize) -> Option<usize> {
        self.ids.get(&(q, a, i)).copied()
    }
}

/// Restricts `φ` to Čech groupoids of the given covers.
///
/// Left: `(σ, a', a)·(q, a, i) = (σ·q, a', i)`; right:
/// `(q, a, i)·(τ, i, j) = (q·τ, a, j)`.
pub fn localize_cech(phi: &Bitorsor, cover_x: &CechCover, cover_y: &CechCover) -> Result<LocalizedBitorsor> {
    let cech_x = cech_groupoid(&phi.left, cover_x)?;
    let cech_y = cech_groupoid(&phi.right, cover_y)?;
    let mut points = Vec::new();
    let mut ids = HashMap::new();
    for q in 0..phi.carrier_len() {
        let mut any = false;
        for a in 0..cover_x.sheets.len() {
            for i in 0..cover_y.sheets.len() {
                if cover_x.contains(a, phi.rho(q)) && cover_y.contains(i, phi.alpha(q)) {
                    ids.insert((q, a, i), points.len());
                    points.push((q, a, i));
                    any = true;
                }
            }
        }
        if !any {
            return Err(Error::CoverIncomplete(format!(
                "carrier point {} lies in no sheet pair",
                phi.carrier_label(q)
            )));
        }
    }
    let carrier = points
        .iter()
        .map(|&(q, a, i)| format!("{}@{a},{i}", phi.carrier_label(q)))
        .collect();
    let rho = points.iter().map(|&(q, a, _)| cech_x.object(phi.rho(q), a).expect("sheet member")).collect();
    let alpha = points.iter().map(|&(q, _, i)| cech_y.object(phi.alpha(q), i).expect("sheet member")).collect();
    let bitorsor = Bitorsor::from_rules(
        format!("cech({})", phi.name),
        cech_x.groupoid.clone(),
        cech_y.groupoid.clone(),
        carrier,
        rho,
        alpha,
        |s, p| {
            let (sigma, a2, _) = cech_x.arrows[s];
            let (q, _, i) = points[p];
            ids[&(phi.act_left(sigma, q).expect("anchored action"), a2, i)]
        },
        |p, t| {
            let (tau, _, j) = cech_y.arrows[t];
            let (q, a, _) = points[p];
            ids[&(phi.act_right(q, tau).expect("anchored action"), a, j)]
        },
    )?;
    Ok(LocalizedBitorsor {
        bitorsor,
        cech_x,
        cech_y,
        points,
        ids,
    })
}

/// Canonical bitorsor `G ↔ Ǧ`: carrier `{(σ, a) : s(σ) ∈ N_a}` with `ϱ = t`,
/// `α = (s σ, a)`, `κ·(σ, a) = (κσ, a)` and `(σ, a)·(τ, a, b) = (στ, b)`.
pub fn cech_bitorsor(g: &FiniteGroupoid, cover: &CechCover) -> Result<(Bitorsor, CechGroupoid)> {
    let cech = cech_groupoid(g, cover)?;
    let mut points = Vec::new();
    for sigma in 0..g.arrow_count() {
        for a in 0..cover.sheets.len() {
            if cover.contains(a, g.source(sigma)) {
                points.push((sigma, a));
            }
        }
    }
    let ids: HashMap<(usize, usize), usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let b = Bitorsor::from_rules(
        format!("cech-canonical({})", g.name()),
        g.clone(),
        cech.groupoid.clone(),
        points.iter().map(|&(s, a)| format!("{}@{a}", g.arrow_label(s))).collect(),
        points.iter().map(|&(s, _)| g.target(s)).collect(),
        points.iter().map(|&(s, a)| cech.object(g.source(s), a).expect("sheet member")).collect(),
        |k, p| {
            let (s, a) = points[p];
            ids[&(g.compose(k, s).expect("anchored"), a)]
        },
        |p, t| {
            let (s, _) = points[p];
            let (tau, _, b) = cech.arrows[t];
            ids[&(g.compose(s, tau).expect("anchored"), b)]
        },
    )?;
    Ok((b, cech))
}
