use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::report::ValidationReport;

use super::bitorsor::{validate_generalized_hom, Bitorsor, HomMode};

/// Strict groupoid morphism given on objects and arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictMorphism {
    pub on_objects: Vec<usize>,
    pub on_arrows: Vec<usize>,
}

/// `Θ ← Q_• → Ξ` with middle groupoid arrows `(σ, q, τ): q → σ·q·τ`,
/// sent to `σ` on the left and to `τ⁻¹` on the right.
#[derive(Debug, Clone)]
pub struct WeakEquivalencePair {
    pub middle: FiniteGroupoid,
    pub arrows: Vec<(usize, usize, usize)>,
    pub to_left: StrictMorphism,
    pub to_right: StrictMorphism,
}

pub fn weak_equivalence_pair(phi: &Bitorsor) -> Result<WeakEquivalencePair> {
    let check = validate_generalized_hom(phi, HomMode::Bitorsor);
    if !check.is_valid() {
        return Err(Error::NotBitorsor(check.summary()));
    }
    let (l, r) = (&phi.left, &phi.right);
    let mut arrows = Vec::new();
    for s in 0..l.arrow_count() {
        for q in 0..phi.carrier_len() {
            if l.source(s) != phi.rho(q) {
                continue;
            }
            for t in 0..r.arrow_count() {
                if r.target(t) == phi.alpha(q) {
                    arrows.push((s, q, t));
                }
            }
        }
    }
    let ids: HashMap<(usize, usize, usize), usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let image = |&(s, q, t): &(usize, usize, usize)| {
        let sq = phi.act_left(s, q).expect("anchored");
        phi.act_right(sq, t).expect("anchored")
    };
    let middle = FiniteGroupoid::from_rule(
        format!("middle({})", phi.name),
        phi.carrier().to_vec(),
        arrows
            .iter()
            .map(|&(s, q, t)| format!("({},{},{})", l.arrow_label(s), phi.carrier_label(q), r.arrow_label(t)))
            .collect(),
        arrows.iter().map(|&(_, q, _)| q).collect(),
        arrows.iter().map(image).collect(),
        |b, a| {
            let (s2, _, t2) = arrows[b];
            let (s1, q, t1) = arrows[a];
            let s = l.compose(s2, s1).expect("composable");
            let t = r.compose(t1, t2).expect("composable");
            ids[&(s, q, t)]
        },
        arrows
            .iter()
            .map(|a @ &(s, _, t)| ids[&(l.inverse(s), image(a), r.inverse(t))])
            .collect(),
        (0..phi.carrier_len())
            .map(|q| ids[&(l.unit(phi.rho(q)), q, r.unit(phi.alpha(q)))])
            .collect(),
    )?;
    let to_left = StrictMorphism {
        on_objects: phi.rhos().to_vec(),
        on_arrows: arrows.iter().map(|&(s, _, _)| s).collect(),
    };
    let to_right = StrictMorphism {
        on_objects: phi.alphas().to_vec(),
        on_arrows: arrows.iter().map(|&(_, _, t)| r.inverse(t)).collect(),
    };
    Ok(WeakEquivalencePair {
        middle,
        arrows,
        to_left,
        to_right,
    })
}

/// Functoriality, surjectivity on objects, and the cartesian square
/// `Z₁ ≅ (Z₀ × Z₀) ×_{X₀ × X₀} X₁`, all by enumeration.
pub fn check_weak_equivalence(z: &FiniteGroupoid, x: &FiniteGroupoid, f: &StrictMorphism) -> ValidationReport {
    let mut r = ValidationReport::new(format!("weak equivalence {} -> {}", z.name(), x.name()));
    for a in 0..z.arrow_count() {
        let fa = f.on_arrows[a];
        r.check(
            "functor-endpoints",
            x.source(fa) == f.on_objects[z.source(a)] && x.target(fa) == f.on_objects[z.target(a)],
            || z.arrow_label(a).to_string(),
        );
    }
    for (b, a, ba) in z.compose_entries() {
        r.check("functor-composition", x.compose(f.on_arrows[b], f.on_arrows[a]) == Some(f.on_arrows[ba]), || {
            format!("{}∘{}", z.arrow_label(b), z.arrow_label(a))
        });
    }
    for xo in 0..x.object_count() {
        r.check("surjective-on-objects", f.on_objects.contains(&xo), || x.object_label(xo).to_string());
    }
    for z1 in 0..z.object_count() {
        for z2 in 0..z.object_count() {
            let (x1, x2) = (f.on_objects[z1], f.on_objects[z2]);
            for &xa in x.hom(x1, x2) {
                let lifts = z.hom(z1, z2).iter().filter(|&&a| f.on_arrows[a] == xa).count();
                r.check("cartesian", lifts == 1, || {
                    format!(
                        "{} lifts of {} between {} and {}",
                        lifts,
                        x.arrow_label(xa),
                        z.object_label(z1),
                        z.object_label(z2)
                    )
                });
            }
        }
    }
    r
}

impl WeakEquivalencePair {
    pub fn check(&self, phi: &Bitorsor) -> (ValidationReport, ValidationReport) {
        (
            check_weak_equivalence(&self.middle, &phi.left, &self.to_left),
            check_weak_equivalence(&self.middle, &phi.right, &self.to_right),
        )
    }
}
