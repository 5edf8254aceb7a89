use crate::error::{Error, Result};
use crate::morita::LocalizedBitorsor;

use super::cocycle::Cocycle;

/// One component `β^i: V_i → ϱ⁻¹(U_a) ∩ α⁻¹(V_i)` per sheet of the Y cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionComponent {
    /// The X sheet `a` the component lands in.
    pub x_sheet: usize,
    /// Pairs `(y, q)` with `α(q) = y`, one for every `y ∈ V_i`.
    pub points: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionFamily {
    pub components: Vec<SectionComponent>,
}

impl SectionFamily {
    /// Builds components from `choose(i, y) = (a, q)`; the X sheet must not
    /// depend on `y`.
    pub fn from_rule(loc: &LocalizedBitorsor, choose: impl Fn(usize, usize) -> (usize, usize)) -> Result<Self> {
        let mut components = Vec::new();
        for (i, sheet) in loc.cech_y.cover.sheets.iter().enumerate() {
            let mut x_sheet = None;
            let mut points = Vec::new();
            for &y in sheet {
                let (a, q) = choose(i, y);
                if x_sheet.is_some_and(|b| b != a) {
                    return Err(Error::SectionEscapes(format!("sheet {i} uses two X sheets")));
                }
                x_sheet = Some(a);
                points.push((y, q));
            }
            components.push(SectionComponent {
                x_sheet: x_sheet.unwrap_or(0),
                points,
            });
        }
        let family = Self { components };
        family.validate(loc)?;
        Ok(family)
    }

    /// First X sheet (in cover order) over which every point of the Y sheet
    /// has a carrier point, choosing the lowest-index carrier point each time.
    pub fn first_available(loc: &LocalizedBitorsor) -> Result<Self> {
        let b = &loc.bitorsor;
        let (base, cover_x) = (&loc.cech_y.cover, &loc.cech_x.cover);
        let phi_alpha = |q: usize| loc.cech_y.objects[b.alpha(q)].0;
        let mut components = Vec::new();
        for (i, sheet) in base.sheets.iter().enumerate() {
            let found = (0..cover_x.sheets.len()).find_map(|a| {
                let points: Option<Vec<(usize, usize)>> = sheet
                    .iter()
                    .map(|&y| {
                        loc.points
                            .iter()
                            .find(|&&(q, a2, i2)| a2 == a && i2 == i && phi_alpha(loc.point(q, a, i).expect("listed")) == y)
                            .map(|&(q, _, _)| (y, q))
                    })
                    .collect();
                points.map(|points| SectionComponent { x_sheet: a, points })
            });
            components.push(found.ok_or_else(|| Error::SectionEscapes(format!("no X sheet serves Y sheet {i}")))?);
        }
        let family = Self { components };
        family.validate(loc)?;
        Ok(family)
    }

    pub fn validate(&self, loc: &LocalizedBitorsor) -> Result<()> {
        let cover_y = &loc.cech_y.cover;
        if self.components.len() != cover_y.sheets.len() {
            return Err(Error::Shape("one section component per Y sheet".into()));
        }
        for (i, comp) in self.components.iter().enumerate() {
            for &y in &cover_y.sheets[i] {
                let Some(&(_, q)) = comp.points.iter().find(|p| p.0 == y) else {
                    return Err(Error::SectionEscapes(format!("component {i} misses object {y}")));
                };
                // The localized point exists iff ϱ(q) ∈ U_a and α(q) ∈ V_i.
                let Some(p) = loc.point(q, comp.x_sheet, i) else {
                    return Err(Error::SectionEscapes(format!(
                        "β^{i}({y}) = {q} is outside sheet pair ({}, {i})",
                        comp.x_sheet
                    )));
                };
                if loc.cech_y.objects[loc.bitorsor.alpha(p)].0 != y {
                    return Err(Error::SectionEscapes(format!("β^{i}({y}) = {q} but α(q) != {y}")));
                }
            }
        }
        Ok(())
    }

    /// Localized carrier point `β^i(y)`.
    pub fn at(&self, loc: &LocalizedBitorsor, i: usize, y: usize) -> usize {
        let comp = &self.components[i];
        let q = comp.points.iter().find(|p| p.0 == y).expect("validated section").1;
        loc.point(q, comp.x_sheet, i).expect("validated section")
    }
}

/// For a Y-side Čech arrow `τ: (y, j) → (y', i)`, the induced value is
/// `g(σ)` where `σ` is the unique X-side Čech arrow with
/// `σ·β^j(y) = β^i(y')·τ`.
pub fn induce_cocycle(loc: &LocalizedBitorsor, g: &Cocycle, beta: &SectionFamily) -> Result<Cocycle> {
    beta.validate(loc)?;
    let b = &loc.bitorsor;
    if g.values.len() != b.left.arrow_count() {
        return Err(Error::Shape("cocycle does not live on the X-side Čech groupoid".into()));
    }
    let cy = &loc.cech_y;
    let mut values = Vec::with_capacity(cy.groupoid.arrow_count());
    for t in 0..cy.groupoid.arrow_count() {
        let (y, j) = cy.objects[cy.groupoid.source(t)];
        let (y2, i) = cy.objects[cy.groupoid.target(t)];
        let p1 = beta.at(loc, j, y);
        let p2 = beta.at(loc, i, y2);
        let moved = b.act_right(p2, t).expect("anchored action");
        let sigma = b.left_witness(p1, moved).ok_or_else(|| {
            Error::NotBitorsor(format!("no unique X arrow for {}", cy.groupoid.arrow_label(t)))
        })?;
        values.push(g.values[sigma].clone());
    }
    Ok(Cocycle { rank: g.rank, values })
}
