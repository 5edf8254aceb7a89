use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::group::FiniteGroup;

/// Groupoid with finitely many objects and arrows, stored as explicit tables.
///
/// Arrows point from `source` to `target`; `compose(τ, σ)` is `τ∘σ` and is
/// defined when `source(τ) == target(σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    name: String,
    objects: Vec<String>,
    arrows: Vec<String>,
    source: Vec<usize>,
    target: Vec<usize>,
    compose: Vec<Option<usize>>,
    inverse: Vec<usize>,
    unit: Vec<usize>,
    homs: Vec<Vec<usize>>,
}

/// Raw tables for [`FiniteGroupoid::from_tables`].
#[derive(Debug, Clone)]
pub struct GroupoidTables {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<String>,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// Entries `(τ, σ, τ∘σ)`; pairs not listed are undefined.
    pub compose: Vec<(usize, usize, usize)>,
    pub inverse: Vec<usize>,
    pub unit: Vec<usize>,
}

impl FiniteGroupoid {
    /// Builds from raw tables. Only index ranges are enforced here; the groupoid
    /// axioms are checked by [`validate_finite`].
    pub fn from_tables(t: GroupoidTables) -> Result<Self> {
        let n = t.arrows.len();
        let m = t.objects.len();
        if t.source.len() != n || t.target.len() != n || t.inverse.len() != n || t.unit.len() != m {
            return Err(Error::Shape("groupoid table lengths disagree".into()));
        }
        let bad_obj = t.source.iter().chain(&t.target).any(|&x| x >= m);
        let bad_arr = t.inverse.iter().chain(&t.unit).any(|&a| a >= n)
            || t.compose.iter().any(|&(a, b, c)| a >= n || b >= n || c >= n);
        if bad_obj || bad_arr {
            return Err(Error::Shape("groupoid table index out of range".into()));
        }
        let mut compose = vec![None; n * n];
        for &(a, b, c) in &t.compose {
            compose[a * n + b] = Some(c);
        }
        let mut homs = vec![Vec::new(); m * m];
        for a in 0..n {
            homs[t.source[a] * m + t.target[a]].push(a);
        }
        Ok(Self {
            name: t.name,
            objects: t.objects,
            arrows: t.arrows,
            source: t.source,
            target: t.target,
            compose,
            inverse: t.inverse,
            unit: t.unit,
            homs,
        })
    }

    /// Builds from a composition rule evaluated on every composable pair.
    #[allow(clippy::too_many_arguments)]
    pub fn from_rule(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<String>,
        source: Vec<usize>,
        target: Vec<usize>,
        rule: impl Fn(usize, usize) -> usize,
        inverse: Vec<usize>,
        unit: Vec<usize>,
    ) -> Result<Self> {
        let n = arrows.len();
        if source.len() != n || target.len() != n {
            return Err(Error::Shape("source/target length".into()));
        }
        let mut compose = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if source[a] == target[b] {
                    compose.push((a, b, rule(a, b)));
                }
            }
        }
        Self::from_tables(GroupoidTables {
            name: name.into(),
            objects,
            arrows,
            source,
            target,
            compose,
            inverse,
            unit,
        })
    }

    /// The group `G ⇉ *`.
    pub fn from_group(name: impl Into<String>, g: &FiniteGroup) -> Self {
        let n = g.order();
        Self::from_rule(
            name,
            vec!["*".into()],
            g.labels().to_vec(),
            vec![0; n],
            vec![0; n],
            |a, b| g.mul(a, b),
            (0..n).map(|a| g.inv(a)).collect(),
            vec![g.identity()],
        )
        .expect("group tables are well formed")
    }

    /// Only identity arrows over the given objects.
    pub fn unit_groupoid(name: impl Into<String>, objects: Vec<String>) -> Self {
        let m = objects.len();
        let arrows = objects.iter().map(|o| format!("1_{o}")).collect();
        Self::from_rule(
            name,
            objects,
            arrows,
            (0..m).collect(),
            (0..m).collect(),
            |a, _| a,
            (0..m).collect(),
            (0..m).collect(),
        )
        .expect("unit tables are well formed")
    }

    /// Copy with one composition entry overwritten (used to build counterexamples).
    pub fn with_compose_entry(&self, tau: usize, sigma: usize, value: Option<usize>) -> Self {
        let mut g = self.clone();
        let n = g.arrows.len();
        g.compose[tau * n + sigma] = value;
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn object_label(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_label(&self, a: usize) -> &str {
        &self.arrows[a]
    }

    pub fn object_by_label(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|o| o == label)
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn target(&self, a: usize) -> usize {
        self.target[a]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn compose(&self, tau: usize, sigma: usize) -> Option<usize> {
        self.compose[tau * self.arrows.len() + sigma]
    }

    /// Arrows `x → y`.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.objects.len() + y]
    }

    /// Arrows with target `x` (the t-fibre `Θ^x`).
    pub fn arrows_into(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.target[a] == x)
    }

    pub fn arrows_from(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.source[a] == x)
    }

    /// Composition table entries `(τ, σ, τ∘σ)` in ascending order.
    pub fn compose_entries(&self) -> Vec<(usize, usize, usize)> {
        let n = self.arrows.len();
        (0..n * n)
            .filter_map(|i| self.compose[i].map(|c| (i / n, i % n, c)))
            .collect()
    }

    pub fn tables(&self) -> GroupoidTables {
        GroupoidTables {
            name: self.name.clone(),
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            compose: self.compose_entries(),
            inverse: self.inverse.clone(),
            unit: self.unit.clone(),
        }
    }

    pub fn isotropy(&self, x: usize) -> Result<Vec<usize>> {
        if x >= self.objects.len() {
            return Err(Error::UnknownObject(x.to_string()));
        }
        Ok(self.hom(x, x).to_vec())
    }

    /// Orbit partition: blocks of objects joined by arrows, in order of first element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let m = self.objects.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in 0..self.arrows.len() {
            let (s, t) = (find(&mut parent, self.source[a]), find(&mut parent, self.target[a]));
            if s != t {
                parent[s.max(t)] = s.min(t);
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut root_block = vec![usize::MAX; m];
        for x in 0..m {
            let r = find(&mut parent, x);
            if root_block[r] == usize::MAX {
                root_block[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[root_block[r]].push(x);
        }
        blocks
    }

    /// Discrete-base germ rule: effective iff no two distinct arrows share source
    /// and target. Returns a witness pair otherwise.
    pub fn effectiveness_witness(&self) -> Option<(usize, usize)> {
        self.homs.iter().find(|h| h.len() > 1).map(|h| (h[0], h[1]))
    }

    /// Spanning-tree paths: for every object, an arrow from its orbit anchor
    /// (`None` at anchors). Anchors are the first objects of each orbit.
    pub fn anchor_arrows(&self) -> Vec<Option<usize>> {
        let m = self.objects.len();
        let mut out = vec![None; m];
        for block in self.orbits() {
            let anchor = block[0];
            for &x in &block[1..] {
                out[x] = self.hom(anchor, x).first().copied();
            }
        }
        out
    }
}

/// Checks every groupoid axiom on explicit tables.
pub fn validate_finite(g: &FiniteGroupoid) -> ValidationReport {
    let mut r = ValidationReport::new(format!("groupoid {}", g.name()));
    let n = g.arrow_count();
    let lbl = |a: usize| g.arrow_label(a).to_string();
    for tau in 0..n {
        for sigma in 0..n {
            let composable = g.source(tau) == g.target(sigma);
            let c = g.compose(tau, sigma);
            r.check("composable-domain", composable == c.is_some(), || {
                format!("{}∘{} defined={} composable={}", lbl(tau), lbl(sigma), c.is_some(), composable)
            });
            if let Some(c) = c {
                let ok = g.source(c) == g.source(sigma) && g.target(c) == g.target(tau);
                r.check("compose-endpoints", ok, || format!("{}∘{} = {}", lbl(tau), lbl(sigma), lbl(c)));
            }
        }
    }
    for kappa in 0..n {
        for sigma in 0..n {
            let Some(ks) = g.compose(kappa, sigma) else { continue };
            for tau in 0..n {
                let Some(tk) = g.compose(tau, kappa) else { continue };
                let lhs = g.compose(tk, sigma);
                let rhs = g.compose(tau, ks);
                r.check("associativity", lhs.is_some() && lhs == rhs, || {
                    format!("triple ({}, {}, {})", lbl(tau), lbl(kappa), lbl(sigma))
                });
            }
        }
    }
    for x in 0..g.object_count() {
        let u = g.unit(x);
        r.check("unit-endpoints", g.source(u) == x && g.target(u) == x, || {
            format!("unit of {} is {}", g.object_label(x), lbl(u))
        });
    }
    for a in 0..n {
        let ut = g.unit(g.target(a));
        let us = g.unit(g.source(a));
        r.check("left-unit", g.compose(ut, a) == Some(a), || {
            format!("triple ({}, {}, -)", lbl(ut), lbl(a))
        });
        r.check("right-unit", g.compose(a, us) == Some(a), || {
            format!("triple ({}, {}, -)", lbl(a), lbl(us))
        });
        let inv = g.inverse(a);
        r.check(
            "inverse-endpoints",
            g.source(inv) == g.target(a) && g.target(inv) == g.source(a),
            || format!("inverse of {} is {}", lbl(a), lbl(inv)),
        );
        r.check("left-inverse", g.compose(inv, a) == Some(us), || {
            format!("triple ({}, {}, {}): σ⁻¹∘σ is not the unit", lbl(inv), lbl(a), lbl(us))
        });
        r.check("right-inverse", g.compose(a, inv) == Some(ut), || {
            format!("triple ({}, {}, {}): σ∘σ⁻¹ is not the unit", lbl(a), lbl(inv), lbl(ut))
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_as_groupoid_is_valid() {
        let g = FiniteGroupoid::from_group("Z2", &FiniteGroup::cyclic(2));
        assert!(validate_finite(&g).is_valid());
        assert_eq!(g.orbits(), vec![vec![0]]);
        assert_eq!(g.isotropy(0).unwrap().len(), 2);
        assert_eq!(g.effectiveness_witness(), Some((0, 1)));
    }

    #[test]
    fn corrupted_square_is_reported() {
        let g = FiniteGroupoid::from_group("Z2", &FiniteGroup::cyclic(2)).with_compose_entry(1, 1, Some(1));
        let r = validate_finite(&g);
        assert!(!r.is_valid());
        assert!(r.failures("left-inverse").any(|v| v.witness.contains("(1, 1, 0)")));
    }

    #[test]
    fn unit_groupoid_orbits_are_singletons() {
        let g = FiniteGroupoid::unit_groupoid("u", vec!["p".into(), "q".into(), "r".into()]);
        assert!(validate_finite(&g).is_valid());
        assert_eq!(g.orbits().len(), 3);
        assert!(g.effectiveness_witness().is_none());
    }
}
