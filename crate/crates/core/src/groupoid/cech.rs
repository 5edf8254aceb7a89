use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{frac_serde, Rational};

use super::action::ActionGroupoid;
use super::base::wrap;
use super::finite::FiniteGroupoid;

/// Cover of a finite base by labelled subsets (object indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechCover {
    pub sheets: Vec<Vec<usize>>,
}

impl CechCover {
    pub fn new(sheets: Vec<Vec<usize>>) -> Self {
        Self { sheets }
    }

    pub fn trivial(objects: usize) -> Self {
        Self {
            sheets: vec![(0..objects).collect()],
        }
    }

    pub fn singletons(objects: usize) -> Self {
        Self {
            sheets: (0..objects).map(|x| vec![x]).collect(),
        }
    }

    /// Cyclic overlapping pairs `{i, i+1}` on `k` points.
    pub fn cyclic_pairs(k: usize) -> Self {
        Self {
            sheets: (0..k).map(|i| vec![i, (i + 1) % k]).collect(),
        }
    }

    pub fn validate(&self, objects: usize) -> Result<()> {
        if let Some(i) = self.sheets.iter().position(Vec::is_empty) {
            return Err(Error::EmptySheet(i));
        }
        if self.sheets.iter().flatten().any(|&x| x >= objects) {
            return Err(Error::CoverIncomplete("sheet refers to an unknown object".into()));
        }
        if let Some(x) = (0..objects).find(|x| !self.sheets.iter().any(|s| s.contains(x))) {
            return Err(Error::CoverIncomplete(format!("object {x} is in no sheet")));
        }
        Ok(())
    }

    pub fn contains(&self, sheet: usize, x: usize) -> bool {
        self.sheets[sheet].contains(&x)
    }

    /// First sheet containing `x`.
    pub fn sheet_of(&self, x: usize) -> Option<usize> {
        self.sheets.iter().position(|s| s.contains(&x))
    }
}

/// Čech groupoid `⊔_{ab} Θ^{N_a}_{N_b} ⇉ ⊔_a N_a` with its sheet bookkeeping.
///
/// Object `(x, a)` is `x ∈ N_a`; arrow `(σ, a, b)` goes from `(s σ, b)` to
/// `(t σ, a)`, and `(τ, a, b)∘(σ, b, c) = (τσ, a, c)`.
#[derive(Debug, Clone)]
pub struct CechGroupoid {
    pub groupoid: FiniteGroupoid,
    /// The groupoid being localized.
    pub base: FiniteGroupoid,
    pub cover: CechCover,
    pub objects: Vec<(usize, usize)>,
    pub arrows: Vec<(usize, usize, usize)>,
    object_ids: HashMap<(usize, usize), usize>,
    arrow_ids: HashMap<(usize, usize, usize), usize>,
}

impl CechGroupoid {
    pub fn object(&self, x: usize, sheet: usize) -> Option<usize> {
        self.object_ids.get(&(x, sheet)).copied()
    }

    pub fn arrow(&self, sigma: usize, a: usize, b: usize) -> Option<usize> {
        self.arrow_ids.get(&(sigma, a, b)).copied()
    }

    pub fn sheet_count(&self) -> usize {
        self.cover.sheets.len()
    }

    /// Sheet pair `(a, b)` of an arrow going from sheet `b` to sheet `a`.
    pub fn sheets_of_arrow(&self, arrow: usize) -> (usize, usize) {
        let (_, a, b) = self.arrows[arrow];
        (a, b)
    }

    /// Orbit partition with sheet indices collapsed back to base objects.
    pub fn collapsed_orbits(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .groupoid
            .orbits()
            .into_iter()
            .map(|b| {
                let mut xs: Vec<usize> = b.iter().map(|&o| self.objects[o].0).collect();
                xs.sort_unstable();
                xs.dedup();
                xs
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

pub fn cech_groupoid(g: &FiniteGroupoid, cover: &CechCover) -> Result<CechGroupoid> {
    cover.validate(g.object_count())?;
    let mut objects = Vec::new();
    let mut object_ids = HashMap::new();
    for (a, sheet) in cover.sheets.iter().enumerate() {
        for &x in sheet {
            object_ids.insert((x, a), objects.len());
            objects.push((x, a));
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_ids = HashMap::new();
    let k = cover.sheets.len();
    for a in 0..k {
        for b in 0..k {
            for sigma in 0..g.arrow_count() {
                if cover.contains(b, g.source(sigma)) && cover.contains(a, g.target(sigma)) {
                    arrow_ids.insert((sigma, a, b), arrows.len());
                    arrows.push((sigma, a, b));
                }
            }
        }
    }
    let object_labels = objects
        .iter()
        .map(|&(x, a)| format!("{}@{a}", g.object_label(x)))
        .collect();
    let arrow_labels = arrows
        .iter()
        .map(|&(s, a, b)| format!("{}[{a}<-{b}]", g.arrow_label(s)))
        .collect();
    let source = arrows.iter().map(|&(s, _, b)| object_ids[&(g.source(s), b)]).collect();
    let target = arrows.iter().map(|&(s, a, _)| object_ids[&(g.target(s), a)]).collect();
    let inverse = arrows
        .iter()
        .map(|&(s, a, b)| arrow_ids[&(g.inverse(s), b, a)])
        .collect();
    let unit = objects
        .iter()
        .map(|&(x, a)| arrow_ids[&(g.unit(x), a, a)])
        .collect();
    let groupoid = FiniteGroupoid::from_rule(
        format!("cech({})", g.name()),
        object_labels,
        arrow_labels,
        source,
        target,
        |t, s| {
            let (tau, a, _) = arrows[t];
            let (sigma, _, c) = arrows[s];
            let ts = g.compose(tau, sigma).expect("composable in the base groupoid");
            arrow_ids[&(ts, a, c)]
        },
        inverse,
        unit,
    )?;
    Ok(CechGroupoid {
        groupoid,
        base: g.clone(),
        cover: cover.clone(),
        objects,
        arrows,
        object_ids,
        arrow_ids,
    })
}

/// Open arc `(center − half_width, center + half_width)` on a circle, in
/// fractions of the circumference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    #[serde(with = "frac_serde")]
    pub center: Rational,
    #[serde(with = "frac_serde")]
    pub half_width: Rational,
}

impl Arc {
    pub fn new(center: Rational, half_width: Rational) -> Self {
        Self {
            center: wrap(center),
            half_width,
        }
    }

    pub fn contains(&self, p: Rational) -> bool {
        if self.half_width * 2 >= Rational::one() {
            return true;
        }
        let d = wrap(p - self.center);
        let d = d.min(Rational::one() - d);
        d < self.half_width
    }

    /// Half-open interval `[lo, hi)` lifted so that `0 ≤ lo < 1`.
    fn interval(&self) -> (Rational, Rational) {
        let lo = wrap(self.center - self.half_width);
        (lo, lo + self.half_width * 2)
    }
}

/// Symbolic Čech groupoid of a circle action groupoid: one arrow family per
/// `(g, a, b)` whose translate `g·arc_b` meets `arc_a`.
#[derive(Debug, Clone)]
pub struct ArcCechGroupoid {
    pub arcs: Vec<Arc>,
    pub sheet_pairs: Vec<(usize, usize, usize)>,
}

pub fn arc_cech_groupoid(g: &ActionGroupoid, arcs: &[Arc]) -> Result<ArcCechGroupoid> {
    if g.base.dimension() != 1 {
        return Err(Error::Unsupported("arc covers are defined on circles".into()));
    }
    if let Some(i) = arcs.iter().position(|a| a.half_width <= Rational::zero()) {
        return Err(Error::EmptySheet(i));
    }
    check_arcs_cover(arcs)?;
    let mut sheet_pairs = Vec::new();
    for el in 0..g.order() {
        let t = g.isometries()[el].shift[0];
        for (a, arc_a) in arcs.iter().enumerate() {
            for (b, arc_b) in arcs.iter().enumerate() {
                let moved = Arc::new(arc_b.center + t, arc_b.half_width);
                if arcs_meet(&moved, arc_a) {
                    sheet_pairs.push((el, a, b));
                }
            }
        }
    }
    Ok(ArcCechGroupoid {
        arcs: arcs.to_vec(),
        sheet_pairs,
    })
}

fn arcs_meet(a: &Arc, b: &Arc) -> bool {
    let d = wrap(a.center - b.center);
    let d = d.min(Rational::one() - d);
    d < a.half_width + b.half_width
}

fn check_arcs_cover(arcs: &[Arc]) -> Result<()> {
    if arcs.iter().any(|a| a.half_width * 2 >= Rational::one()) {
        return Ok(());
    }
    // Unroll every interval to [lo, hi) and its shift by one, then sweep [0, 1].
    let iv: Vec<(Rational, Rational)> = arcs
        .iter()
        .flat_map(|a| {
            let (lo, hi) = a.interval();
            [(lo, hi), (lo - 1, hi - 1)]
        })
        .collect();
    // Greedy sweep over open intervals: `cur` is the first point not yet known
    // to be covered; it must lie strictly inside some interval.
    let mut cur = Rational::zero();
    for _ in 0..=iv.len() {
        if cur > Rational::one() {
            return Ok(());
        }
        let best = iv
            .iter()
            .filter(|&&(lo, hi)| lo < cur && cur < hi)
            .map(|&(_, hi)| hi)
            .max();
        match best {
            Some(hi) => cur = hi,
            None => break,
        }
    }
    if cur > Rational::one() {
        Ok(())
    } else {
        Err(Error::CoverIncomplete(format!("arcs miss the point {cur}")))
    }
}
