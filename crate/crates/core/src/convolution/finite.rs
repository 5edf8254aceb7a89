use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cocycle::EquivariantBundle;
use crate::error::{Error, Result};
use crate::exact::{to_c64, Exact, ExactMatrix};
use crate::groupoid::FiniteGroupoid;
use crate::morita::same_structure;
use crate::transport::Section;

/// Element of `C_c(Θ)` on a finite groupoid: one value per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteConvolution {
    pub groupoid: FiniteGroupoid,
    pub values: Vec<Exact>,
}

impl FiniteConvolution {
    pub fn zero(g: &FiniteGroupoid) -> Self {
        Self {
            groupoid: g.clone(),
            values: vec![Exact::zero(); g.arrow_count()],
        }
    }

    pub fn delta(g: &FiniteGroupoid, arrow: usize) -> Self {
        let mut f = Self::zero(g);
        f.values[arrow] = Exact::one();
        f
    }

    /// `Σ_x δ_{1_x}`.
    pub fn unit(g: &FiniteGroupoid) -> Self {
        let mut f = Self::zero(g);
        for x in 0..g.object_count() {
            f.values[g.unit(x)] = Exact::one();
        }
        f
    }

    pub fn from_values(g: &FiniteGroupoid, values: Vec<Exact>) -> Result<Self> {
        if values.len() != g.arrow_count() {
            return Err(Error::Shape("one value per arrow".into()));
        }
        Ok(Self {
            groupoid: g.clone(),
            values,
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if !same_structure(&self.groupoid, &other.groupoid) {
            return Err(Error::GroupoidMismatch(format!(
                "{} and {}",
                self.groupoid.name(),
                other.groupoid.name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, z: Exact) -> Self {
        Self {
            values: self.values.iter().map(|v| v * z).collect(),
            ..self.clone()
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&a| !self.values[a].is_zero()).collect()
    }

    pub fn to_terms(&self) -> Vec<ConvolutionTerm> {
        self.support()
            .into_iter()
            .map(|a| {
                let z = to_c64(&self.values[a]);
                ConvolutionTerm {
                    arrow: Some(self.groupoid.arrow_label(a).to_string()),
                    element: None,
                    mode: None,
                    re: z.re,
                    im: z.im,
                }
            })
            .collect()
    }
}

/// One serialized term: an arrow label (finite flavor) or a group element
/// with a mode (Fourier flavor), and a complex value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionTerm {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrow: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Vec<i64>>,
    pub re: f64,
    pub im: f64,
}

/// `(f₁ * f₂)(σ) = Σ_{τ∘κ = σ} f₁(τ) f₂(κ)`, with `κ` applied first. This
/// orientation makes `act(f₁ * f₂) = act(f₁) ∘ act(f₂)`.
pub fn convolve(f1: &FiniteConvolution, f2: &FiniteConvolution) -> Result<FiniteConvolution> {
    f1.check_same(f2)?;
    let g = &f1.groupoid;
    let mut out = FiniteConvolution::zero(g);
    for tau in f1.support() {
        for kappa in f2.support() {
            if let Some(s) = g.compose(tau, kappa) {
                out.values[s] += f1.values[tau] * f2.values[kappa];
            }
        }
    }
    Ok(out)
}

/// `(f·ψ)_x = Σ_{tσ = x} f(σ) ρ(σ) ψ(sσ)` (counting Haar system).
pub fn act(f: &FiniteConvolution, xi: &EquivariantBundle, psi: &Section) -> Result<Section> {
    let g = &xi.groupoid;
    if !same_structure(&f.groupoid, g) {
        return Err(Error::GroupoidMismatch("element and bundle live on different groupoids".into()));
    }
    if psi.len() != g.object_count() || psi.iter().any(|v| v.len() != xi.rank) {
        return Err(Error::Shape("section does not match the bundle".into()));
    }
    let mut out = vec![vec![Exact::zero(); xi.rank]; g.object_count()];
    for s in f.support() {
        let moved = xi.action[s].mul_vec(&psi[g.source(s)]);
        for (o, m) in out[g.target(s)].iter_mut().zip(moved) {
            *o += f.values[s] * m;
        }
    }
    Ok(out)
}

/// Matrix of `act(f, ·)` on `⊕_x C^r`, objects in order.
pub fn representation_matrix(f: &FiniteConvolution, xi: &EquivariantBundle) -> Result<ExactMatrix> {
    let g = &xi.groupoid;
    let r = xi.rank;
    let n = g.object_count() * r;
    let mut m = ExactMatrix::zeros(n, n);
    for x in 0..g.object_count() {
        for c in 0..r {
            let mut psi = vec![vec![Exact::zero(); r]; g.object_count()];
            psi[x][c] = Exact::one();
            let img = act(f, xi, &psi)?;
            for (y, v) in img.iter().enumerate() {
                for (d, z) in v.iter().enumerate() {
                    m[(y * r + d, x * r + c)] = *z;
                }
            }
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFaithfulness {
    pub faithful: bool,
    pub kernel_dimension: usize,
    /// A nonzero element acting as zero.
    pub witness: Option<FiniteConvolution>,
}

/// Kernel of `f ↦ act(f, ·)` on the whole arrow space, by exact nullspace.
pub fn finite_faithfulness_probe(xi: &EquivariantBundle) -> Result<FiniteFaithfulness> {
    let g = &xi.groupoid;
    let columns: Vec<Vec<Exact>> = (0..g.arrow_count())
        .map(|a| representation_matrix(&FiniteConvolution::delta(g, a), xi).map(|m| m.entries().to_vec()))
        .collect::<Result<_>>()?;
    let rows = columns.first().map_or(0, Vec::len);
    let mut big = ExactMatrix::zeros(rows, g.arrow_count());
    for (a, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            big[(i, a)] = *z;
        }
    }
    let kernel = big.nullspace();
    let witness = kernel
        .first()
        .map(|v| FiniteConvolution::from_values(g, v.clone()))
        .transpose()?;
    Ok(FiniteFaithfulness {
        faithful: kernel.is_empty(),
        kernel_dimension: kernel.len(),
        witness,
    })
}
