use crate::cocycle::{EquivariantBundle, InducedBundle};
use crate::error::{Error, Result};
use crate::exact::{Exact, ExactMatrix, Rational};
use crate::groupoid::FiniteGroupoid;
use crate::morita::Bitorsor;

/// Per-object fibre vectors of a section.
pub type Section = Vec<Vec<Exact>>;

/// First arrow `σ` with `f(sσ) ≠ f(tσ)`.
pub fn function_violation(g: &FiniteGroupoid, f: &[Exact]) -> Option<usize> {
    (0..g.arrow_count()).find(|&a| f[g.source(a)] != f[g.target(a)])
}

/// `(φ_# f)(y) = f(ϱ(q))` for any `q ∈ α⁻¹(y)`.
pub fn pushforward_function(phi: &Bitorsor, f: &[Exact]) -> Result<Vec<Exact>> {
    if f.len() != phi.left.object_count() {
        return Err(Error::Shape("one value per object".into()));
    }
    if let Some(a) = function_violation(&phi.left, f) {
        return Err(Error::NotInvariant(format!("f moves along {}", phi.left.arrow_label(a))));
    }
    (0..phi.right.object_count())
        .map(|y| {
            let fibre = phi.alpha_fibre(y);
            let first = *fibre
                .first()
                .ok_or_else(|| Error::NotBitorsor(format!("empty α-fibre over {}", phi.right.object_label(y))))?;
            let v = f[phi.rho(first)];
            if let Some(&q) = fibre.iter().find(|&&q| f[phi.rho(q)] != v) {
                return Err(Error::NotInvariant(format!(
                    "fibre over {} sees {} and {}",
                    phi.right.object_label(y),
                    phi.carrier_label(first),
                    phi.carrier_label(q)
                )));
            }
            Ok(v)
        })
        .collect()
}

/// `φ_#⁻¹`: pushforward through the inverse bitorsor.
pub fn pullback_function(phi: &Bitorsor, f: &[Exact]) -> Result<Vec<Exact>> {
    pushforward_function(&phi.inverse(), f)
}

/// First arrow with `ψ(tσ) ≠ ρ(σ)ψ(sσ)`.
pub fn section_violation(xi: &EquivariantBundle, psi: &Section) -> Option<usize> {
    let g = &xi.groupoid;
    (0..g.arrow_count()).find(|&a| xi.action[a].mul_vec(&psi[g.source(a)]) != psi[g.target(a)])
}

fn check_section(xi: &EquivariantBundle, psi: &Section) -> Result<()> {
    if psi.len() != xi.groupoid.object_count() || psi.iter().any(|v| v.len() != xi.rank) {
        return Err(Error::Shape("section does not match the bundle".into()));
    }
    if let Some(a) = section_violation(xi, psi) {
        return Err(Error::NotInvariant(format!("section moves along {}", xi.groupoid.arrow_label(a))));
    }
    Ok(())
}

/// `(φ_#ψ)(y) = [q_y, ψ(ϱ(q_y))]` in the induced bundle's representative frame.
pub fn pushforward_section(phi: &Bitorsor, xi: &EquivariantBundle, induced: &InducedBundle, psi: &Section) -> Result<Section> {
    check_section(xi, psi)?;
    Ok(induced
        .representatives
        .iter()
        .map(|&q| psi[phi.rho(q)].clone())
        .collect())
}

/// `A_φ`: `ψ(x) = ρ(σ)ψ'(α(q))` for `q ∈ ϱ⁻¹(x)` and `σ·q_{α(q)} = q`.
pub fn pullback_section(phi: &Bitorsor, xi: &EquivariantBundle, induced: &InducedBundle, psi: &Section) -> Result<Section> {
    check_section(&induced.bundle, psi)?;
    (0..phi.left.object_count())
        .map(|x| {
            let q = *phi
                .rho_fibre(x)
                .first()
                .ok_or_else(|| Error::NotBitorsor(format!("empty ϱ-fibre over {}", phi.left.object_label(x))))?;
            let y = phi.alpha(q);
            let sigma = phi
                .left_witness(induced.representatives[y], q)
                .ok_or_else(|| Error::NotBitorsor(format!("no arrow to {}", phi.carrier_label(q))))?;
            Ok(xi.action[sigma].mul_vec(&psi[y]))
        })
        .collect()
}

/// Fibre inner products `w(x)·⟨u, v⟩` with positive rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProduct {
    pub weights: Vec<Rational>,
}

impl InnerProduct {
    pub fn standard(objects: usize) -> Self {
        Self {
            weights: vec![Rational::from_integer(1); objects],
        }
    }

    pub fn pair(&self, x: usize, u: &[Exact], v: &[Exact]) -> Exact {
        let s: Exact = u.iter().zip(v).map(|(a, b)| a.conj() * b).fold(Exact::default(), |a, b| a + b);
        s * Exact::new(self.weights[x], Rational::from_integer(0))
    }

    /// Each `ρ(σ)` is unitary and the weight is constant along arrows.
    pub fn is_invariant(&self, xi: &EquivariantBundle) -> bool {
        let g = &xi.groupoid;
        (0..g.arrow_count()).all(|a| {
            let m: &ExactMatrix = &xi.action[a];
            (&m.adjoint() * m).is_identity() && self.weights[g.source(a)] == self.weights[g.target(a)]
        })
    }
}

/// `([v₁], [v₂])_{#,y} = (v₁, v₂)_{ϱ(q_y)}`.
pub fn induce_inner_product(phi: &Bitorsor, xi: &EquivariantBundle, induced: &InducedBundle, ip: &InnerProduct) -> Result<InnerProduct> {
    if !ip.is_invariant(xi) {
        return Err(Error::NotInvariant("inner product is not invariant".into()));
    }
    Ok(InnerProduct {
        weights: induced.representatives.iter().map(|&q| ip.weights[phi.rho(q)]).collect(),
    })
}
