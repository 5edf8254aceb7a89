use crate::error::{Error, Result};
use crate::exact::{Exact, ExactMatrix};
use crate::groupoid::FiniteGroupoid;
use crate::report::ValidationReport;

/// Arrow-indexed invertible matrices `g(σ)` on a finite (usually Čech) groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub rank: usize,
    pub values: Vec<ExactMatrix>,
}

impl Cocycle {
    pub fn new(values: Vec<ExactMatrix>) -> Result<Self> {
        let rank = values.first().map_or(0, ExactMatrix::rows);
        if values.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(Error::Shape("cocycle entries have different ranks".into()));
        }
        Ok(Self { rank, values })
    }

    pub fn identity(g: &FiniteGroupoid, rank: usize) -> Self {
        Self {
            rank,
            values: vec![ExactMatrix::identity(rank); g.arrow_count()],
        }
    }

    pub fn from_fn(g: &FiniteGroupoid, rank: usize, f: impl Fn(usize) -> ExactMatrix) -> Result<Self> {
        let values: Vec<ExactMatrix> = (0..g.arrow_count()).map(f).collect();
        if values.is_empty() {
            return Ok(Self { rank, values });
        }
        let c = Self::new(values)?;
        if c.rank != rank {
            return Err(Error::Shape(format!("expected rank {rank}, got {}", c.rank)));
        }
        Ok(c)
    }

    /// Rank-one cocycle from scalar values.
    pub fn scalar(values: impl IntoIterator<Item = Exact>) -> Self {
        Self {
            rank: 1,
            values: values.into_iter().map(ExactMatrix::scalar).collect(),
        }
    }

    pub fn value(&self, arrow: usize) -> &ExactMatrix {
        &self.values[arrow]
    }

    /// `λ(t σ) g(σ) λ(s σ)⁻¹`.
    pub fn twisted(&self, g: &FiniteGroupoid, lambda: &[ExactMatrix]) -> Result<Self> {
        let inv: Vec<ExactMatrix> = lambda
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::Invalid("coboundary is not invertible".into())))
            .collect::<Result<_>>()?;
        Ok(Self {
            rank: self.rank,
            values: (0..g.arrow_count())
                .map(|a| &(&lambda[g.target(a)] * &self.values[a]) * &inv[g.source(a)])
                .collect(),
        })
    }
}

/// Cocycle law `g(τ)g(σ) = g(τσ)`, invertibility, and identity on unit arrows.
pub fn validate_cocycle(g: &FiniteGroupoid, c: &Cocycle) -> Result<ValidationReport> {
    if c.values.len() != g.arrow_count() {
        return Err(Error::Shape(format!(
            "{} entries for {} arrows",
            c.values.len(),
            g.arrow_count()
        )));
    }
    if c.values.iter().any(|m| m.rows() != c.rank || m.cols() != c.rank) {
        return Err(Error::Shape("cocycle entries have different ranks".into()));
    }
    let mut r = ValidationReport::new(format!("cocycle on {}", g.name()));
    for (t, s, ts) in g.compose_entries() {
        r.check("cocycle-law", &c.values[t] * &c.values[s] == c.values[ts], || {
            format!("({}, {})", g.arrow_label(t), g.arrow_label(s))
        });
    }
    for (a, m) in c.values.iter().enumerate() {
        r.check("invertible", m.is_invertible(), || g.arrow_label(a).to_string());
    }
    for x in 0..g.object_count() {
        let u = g.unit(x);
        r.check("unit-normalized", c.values[u].is_identity(), || g.arrow_label(u).to_string());
    }
    Ok(r)
}
