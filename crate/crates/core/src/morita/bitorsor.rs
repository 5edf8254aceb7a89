use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::report::ValidationReport;

/// Generalized homomorphism `Θ ⇉ X ← Q → Y ⇇ Ξ` on finite carriers.
///
/// `σ·q` is defined iff `s(σ) = ϱ(q)` and then `ϱ(σ·q) = t(σ)`; `q·τ` is
/// defined iff `t(τ) = α(q)` and then `α(q·τ) = s(τ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitorsor {
    pub name: String,
    pub left: FiniteGroupoid,
    pub right: FiniteGroupoid,
    carrier: Vec<String>,
    rho: Vec<usize>,
    alpha: Vec<usize>,
    left_act: Vec<Option<usize>>,
    right_act: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomMode {
    /// Conditions 1 and 2: commuting actions and a right torsor over `X`.
    Generalized,
    /// Additionally a left torsor over `Y`.
    Bitorsor,
}

impl Bitorsor {
    /// Builds action tables by evaluating the rules on every pair allowed by
    /// the anchors. Rules must return carrier indices.
    #[allow(clippy::too_many_arguments)]
    pub fn from_rules(
        name: impl Into<String>,
        left: FiniteGroupoid,
        right: FiniteGroupoid,
        carrier: Vec<String>,
        rho: Vec<usize>,
        alpha: Vec<usize>,
        left_rule: impl Fn(usize, usize) -> usize,
        right_rule: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let nq = carrier.len();
        if rho.len() != nq || alpha.len() != nq {
            return Err(Error::Shape("anchor lengths differ from carrier".into()));
        }
        if rho.iter().any(|&x| x >= left.object_count()) || alpha.iter().any(|&y| y >= right.object_count()) {
            return Err(Error::Shape("anchor value out of range".into()));
        }
        let mut left_act = vec![None; left.arrow_count() * nq];
        for s in 0..left.arrow_count() {
            for q in 0..nq {
                if left.source(s) == rho[q] {
                    left_act[s * nq + q] = Some(left_rule(s, q));
                }
            }
        }
        let mut right_act = vec![None; nq * right.arrow_count()];
        for q in 0..nq {
            for t in 0..right.arrow_count() {
                if right.target(t) == alpha[q] {
                    right_act[q * right.arrow_count() + t] = Some(right_rule(q, t));
                }
            }
        }
        if left_act.iter().chain(&right_act).flatten().any(|&v| v >= nq) {
            return Err(Error::Shape("action rule leaves the carrier".into()));
        }
        Ok(Self {
            name: name.into(),
            left,
            right,
            carrier,
            rho,
            alpha,
            left_act,
            right_act,
        })
    }

    /// Builds from explicit action entries `(σ, q, σ·q)` and `(q, τ, q·τ)`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        name: impl Into<String>,
        left: FiniteGroupoid,
        right: FiniteGroupoid,
        carrier: Vec<String>,
        rho: Vec<usize>,
        alpha: Vec<usize>,
        left_entries: &[[usize; 3]],
        right_entries: &[[usize; 3]],
    ) -> Result<Self> {
        let nq = carrier.len();
        let (nl, nr) = (left.arrow_count(), right.arrow_count());
        if rho.len() != nq || alpha.len() != nq {
            return Err(Error::Shape("anchor lengths differ from carrier".into()));
        }
        let mut left_act = vec![None; nl * nq];
        for &[s, q, v] in left_entries {
            if s >= nl || q >= nq || v >= nq {
                return Err(Error::Shape(format!("left action entry {:?} out of range", [s, q, v])));
            }
            left_act[s * nq + q] = Some(v);
        }
        let mut right_act = vec![None; nq * nr];
        for &[q, t, v] in right_entries {
            if t >= nr || q >= nq || v >= nq {
                return Err(Error::Shape(format!("right action entry {:?} out of range", [q, t, v])));
            }
            right_act[q * nr + t] = Some(v);
        }
        Ok(Self {
            name: name.into(),
            left,
            right,
            carrier,
            rho,
            alpha,
            left_act,
            right_act,
        })
    }

    pub fn left_entries(&self) -> Vec<[usize; 3]> {
        let nq = self.carrier.len();
        (0..self.left_act.len())
            .filter_map(|i| self.left_act[i].map(|v| [i / nq, i % nq, v]))
            .collect()
    }

    pub fn right_entries(&self) -> Vec<[usize; 3]> {
        let nr = self.right.arrow_count();
        (0..self.right_act.len())
            .filter_map(|i| self.right_act[i].map(|v| [i / nr, i % nr, v]))
            .collect()
    }

    /// Carrier relabelled through the bijection `perm` (point `q` becomes `perm[q]`).
    pub fn relabelled(&self, perm: &[usize]) -> Self {
        let n = self.carrier.len();
        let mut inv = vec![0; n];
        for (q, &p) in perm.iter().enumerate() {
            inv[p] = q;
        }
        let carrier = (0..n).map(|p| self.carrier[inv[p]].clone()).collect();
        let rho = (0..n).map(|p| self.rho[inv[p]]).collect();
        let alpha = (0..n).map(|p| self.alpha[inv[p]]).collect();
        let le: Vec<[usize; 3]> = self.left_entries().iter().map(|&[s, q, v]| [s, perm[q], perm[v]]).collect();
        let re: Vec<[usize; 3]> = self.right_entries().iter().map(|&[q, t, v]| [perm[q], t, perm[v]]).collect();
        Self::from_tables(self.name.clone(), self.left.clone(), self.right.clone(), carrier, rho, alpha, &le, &re)
            .expect("relabelling keeps tables in range")
    }

    pub fn carrier_len(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn carrier_label(&self, q: usize) -> &str {
        &self.carrier[q]
    }

    pub fn rho(&self, q: usize) -> usize {
        self.rho[q]
    }

    pub fn alpha(&self, q: usize) -> usize {
        self.alpha[q]
    }

    pub fn rhos(&self) -> &[usize] {
        &self.rho
    }

    pub fn alphas(&self) -> &[usize] {
        &self.alpha
    }

    pub fn act_left(&self, sigma: usize, q: usize) -> Option<usize> {
        self.left_act[sigma * self.carrier.len() + q]
    }

    pub fn act_right(&self, q: usize, tau: usize) -> Option<usize> {
        self.right_act[q * self.right.arrow_count() + tau]
    }

    /// Copy with one left-action entry replaced.
    pub fn with_left_entry(&self, sigma: usize, q: usize, value: Option<usize>) -> Self {
        let mut b = self.clone();
        let n = b.carrier.len();
        b.left_act[sigma * n + q] = value;
        b
    }

    /// Copy with the whole right action replaced by `rule` on the same domain.
    pub fn with_right_rule(&self, rule: impl Fn(usize, usize) -> usize) -> Self {
        let mut b = self.clone();
        let nr = b.right.arrow_count();
        for q in 0..b.carrier.len() {
            for t in 0..nr {
                if b.right_act[q * nr + t].is_some() {
                    b.right_act[q * nr + t] = Some(rule(q, t));
                }
            }
        }
        b
    }

    /// Carrier points over `y`.
    pub fn alpha_fibre(&self, y: usize) -> Vec<usize> {
        (0..self.carrier.len()).filter(|&q| self.alpha[q] == y).collect()
    }

    pub fn rho_fibre(&self, x: usize) -> Vec<usize> {
        (0..self.carrier.len()).filter(|&q| self.rho[q] == x).collect()
    }

    /// The unique `τ` with `q·τ = q'` (right torsor witness), if it exists.
    pub fn right_witness(&self, q: usize, q2: usize) -> Option<usize> {
        let mut found = None;
        for t in 0..self.right.arrow_count() {
            if self.act_right(q, t) == Some(q2) {
                if found.is_some() {
                    return None;
                }
                found = Some(t);
            }
        }
        found
    }

    /// The unique `σ` with `σ·q = q'` (left torsor witness), if it exists.
    pub fn left_witness(&self, q: usize, q2: usize) -> Option<usize> {
        let mut found = None;
        for s in 0..self.left.arrow_count() {
            if self.act_left(s, q) == Some(q2) {
                if found.is_some() {
                    return None;
                }
                found = Some(s);
            }
        }
        found
    }

    /// Identity bitorsor of `G`: the carrier is the arrow space with `ϱ = t`,
    /// `α = s`, and both actions by composition.
    pub fn identity(g: &FiniteGroupoid) -> Self {
        Self::from_rules(
            format!("id({})", g.name()),
            g.clone(),
            g.clone(),
            g.arrows().to_vec(),
            (0..g.arrow_count()).map(|a| g.target(a)).collect(),
            (0..g.arrow_count()).map(|a| g.source(a)).collect(),
            |s, a| g.compose(s, a).expect("anchored composition"),
            |a, t| g.compose(a, t).expect("anchored composition"),
        )
        .expect("identity tables are well formed")
    }

    /// Reverse bitorsor `Ξ ↔ Θ` with `τ·q = q·τ⁻¹` and `q·σ = σ⁻¹·q`.
    pub fn inverse(&self) -> Self {
        let (l, r) = (&self.left, &self.right);
        Self::from_rules(
            format!("inv({})", self.name),
            r.clone(),
            l.clone(),
            self.carrier.clone(),
            self.alpha.clone(),
            self.rho.clone(),
            |t, q| self.act_right(q, r.inverse(t)).expect("anchored action"),
            |q, s| self.act_left(l.inverse(s), q).expect("anchored action"),
        )
        .expect("inverse tables are well formed")
    }
}

/// Same objects, arrows and tables, ignoring labels and names.
pub fn same_structure(a: &FiniteGroupoid, b: &FiniteGroupoid) -> bool {
    let (ta, tb) = (a.tables(), b.tables());
    ta.objects.len() == tb.objects.len()
        && ta.source == tb.source
        && ta.target == tb.target
        && ta.compose == tb.compose
        && ta.inverse == tb.inverse
        && ta.unit == tb.unit
}

pub fn validate_generalized_hom(h: &Bitorsor, mode: HomMode) -> ValidationReport {
    let mut r = ValidationReport::new(format!("bitorsor {}", h.name));
    let (l, rt) = (&h.left, &h.right);
    let nq = h.carrier_len();
    let q_lbl = |q: usize| h.carrier_label(q).to_string();

    for s in 0..l.arrow_count() {
        for q in 0..nq {
            let defined = h.act_left(s, q);
            let should = l.source(s) == h.rho(q);
            r.check("left-action-domain", defined.is_some() == should, || {
                format!("{}·{}", l.arrow_label(s), q_lbl(q))
            });
            if let Some(p) = defined {
                r.check("left-action-anchors", h.rho(p) == l.target(s) && h.alpha(p) == h.alpha(q), || {
                    format!("{}·{} = {}", l.arrow_label(s), q_lbl(q), q_lbl(p))
                });
            }
        }
    }
    for q in 0..nq {
        for t in 0..rt.arrow_count() {
            let defined = h.act_right(q, t);
            let should = rt.target(t) == h.alpha(q);
            r.check("right-action-domain", defined.is_some() == should, || {
                format!("{}·{}", q_lbl(q), rt.arrow_label(t))
            });
            if let Some(p) = defined {
                r.check("right-action-anchors", h.alpha(p) == rt.source(t) && h.rho(p) == h.rho(q), || {
                    format!("{}·{} = {}", q_lbl(q), rt.arrow_label(t), q_lbl(p))
                });
            }
        }
    }
    for q in 0..nq {
        r.check("left-unit", h.act_left(l.unit(h.rho(q)), q) == Some(q), || q_lbl(q));
        r.check("right-unit", h.act_right(q, rt.unit(h.alpha(q))) == Some(q), || q_lbl(q));
    }
    for (t, s, ts) in l.compose_entries() {
        for q in 0..nq {
            let Some(sq) = h.act_left(s, q) else { continue };
            r.check("left-action-law", h.act_left(ts, q) == h.act_left(t, sq), || {
                format!("({}∘{})·{}", l.arrow_label(t), l.arrow_label(s), q_lbl(q))
            });
        }
    }
    for (t, k, tk) in rt.compose_entries() {
        for q in 0..nq {
            let Some(qt) = h.act_right(q, t) else { continue };
            r.check("right-action-law", h.act_right(q, tk) == h.act_right(qt, k), || {
                format!("{}·({}∘{})", q_lbl(q), rt.arrow_label(t), rt.arrow_label(k))
            });
        }
    }
    for s in 0..l.arrow_count() {
        for q in 0..nq {
            for t in 0..rt.arrow_count() {
                let (Some(sq), Some(qt)) = (h.act_left(s, q), h.act_right(q, t)) else { continue };
                let a = h.act_right(sq, t);
                let b = h.act_left(s, qt);
                r.check("actions-commute", a.is_some() && a == b, || {
                    format!("({}·{})·{} vs {}·({}·{})", l.arrow_label(s), q_lbl(q), rt.arrow_label(t), l.arrow_label(s), q_lbl(q), rt.arrow_label(t))
                });
            }
        }
    }
    for x in 0..l.object_count() {
        r.check("rho-surjective", h.rhos().contains(&x), || l.object_label(x).to_string());
    }
    for q in 0..nq {
        for q2 in 0..nq {
            if h.rho(q) != h.rho(q2) {
                continue;
            }
            let count = (0..rt.arrow_count()).filter(|&t| h.act_right(q, t) == Some(q2)).count();
            r.check("right-torsor", count == 1, || {
                format!("{} arrows carry {} to {}", count, q_lbl(q), q_lbl(q2))
            });
        }
    }
    if mode == HomMode::Bitorsor {
        for y in 0..rt.object_count() {
            r.check("alpha-surjective", h.alphas().contains(&y), || rt.object_label(y).to_string());
        }
        for q in 0..nq {
            for q2 in 0..nq {
                if h.alpha(q) != h.alpha(q2) {
                    continue;
                }
                let count = (0..l.arrow_count()).filter(|&s| h.act_left(s, q) == Some(q2)).count();
                r.check("left-torsor", count == 1, || {
                    format!("{} arrows carry {} to {}", count, q_lbl(q), q_lbl(q2))
                });
            }
        }
    }
    r
}
