use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dirac::{assemble_dirac, growth_exponent, DiracSpec, TruncatedDirac};
use super::integral::{orbifold_pairing, OrbifoldMeasure};
use crate::error::{Error, Result};
use crate::fourier::{rational_f64, FourierField};
use crate::linalg::{
    add, anticommutator, apply, commutator, frobenius, frobenius_on_cols, identity, mul, norm_on_cols, sub, Op,
};

/// Seed for the random invariant spinors of the divergence check.
pub const DIVERGENCE_SEED: u64 = 0x5eed_d1f0;

/// An algebra element with a representation on truncated spinor fields.
pub trait Represented {
    fn label(&self) -> String;
    /// Largest mode shift of the representation.
    fn degree(&self) -> usize;
    fn represent(&self, td: &TruncatedDirac) -> Result<Op>;
    /// `Σ_j π(∂_j f) c(e^j)`, the predicted `[D, π(f)]`.
    fn gradient(&self, td: &TruncatedDirac) -> Result<Op>;
}

fn check_function(f: &FourierField, td: &TruncatedDirac) -> Result<()> {
    if f.rank != 1 || f.window.twist.iter().any(|t| rational_f64(t) != 0.0) {
        return Err(Error::Shape("generators are untwisted scalar functions".into()));
    }
    if f.window.circumferences != td.window.circumferences {
        return Err(Error::Shape("generator lives on another base".into()));
    }
    if f.degree() > td.window.cutoff {
        return Err(Error::BandLimit(format!(
            "generator degree {} exceeds cutoff {}",
            f.degree(),
            td.window.cutoff
        )));
    }
    Ok(())
}

/// `Σ_j M_{∂_j f} c(e^j)`.
pub fn function_gradient(f: &FourierField, td: &TruncatedDirac) -> Op {
    (0..td.window.dim())
        .map(|j| mul(&td.multiplication(&f.derivative(j)), &td.clifford_multiplication(j)))
        .reduce(|a, b| add(&a, &b))
        .expect("at least one axis")
}

impl Represented for FourierField {
    fn label(&self) -> String {
        let terms: Vec<String> = (0..self.window.mode_count())
            .filter(|&i| self.coeffs[i].norm() > 0.0)
            .map(|i| format!("{:?}", self.window.mode(i)))
            .collect();
        format!("function{{{}}}", terms.join(","))
    }

    fn degree(&self) -> usize {
        FourierField::degree(self)
    }

    fn represent(&self, td: &TruncatedDirac) -> Result<Op> {
        check_function(self, td)?;
        Ok(td.multiplication(self))
    }

    fn gradient(&self, td: &TruncatedDirac) -> Result<Op> {
        check_function(self, td)?;
        Ok(function_gradient(self, td))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleOptions {
    /// Lower bound for the edge buffer; each generator uses at least its degree.
    pub buffer: usize,
    /// Recompute commutator norms at cutoff `2M`.
    pub doubled: bool,
    /// Number of random invariant spinor pairs for the divergence identity.
    pub divergence_probes: usize,
}

impl Default for TripleOptions {
    fn default() -> Self {
        Self {
            buffer: 2,
            doubled: true,
            divergence_probes: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorCheck {
    pub generator: String,
    pub buffer: usize,
    /// `‖[D, π(f)]‖` on interior-band columns.
    pub norm: f64,
    pub norm_doubled: Option<f64>,
    pub relative_drift: Option<f64>,
    /// `‖[D, π(f)] − Σ π(∂_j f) c(e^j)‖_F` on interior-band columns.
    pub gradient_residual: f64,
    /// `‖[P, π(f)]‖_F`.
    pub projector_commutator: f64,
    pub chirality_commutator: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiralityCheck {
    /// `ω² = 1` in exact arithmetic.
    pub square_exact: bool,
    /// `‖{ω, D}‖_F`.
    pub anticommutator: f64,
    /// `‖[ω, P]‖_F`.
    pub projector_commutator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralTripleReport {
    pub subject: String,
    pub cutoff: usize,
    pub buffer: usize,
    pub dimension: usize,
    pub hermiticity_residual: f64,
    pub invariance_residual: f64,
    /// `‖P² − P‖_F` and `‖[P, D]‖_F`.
    pub projector_residual: f64,
    pub eigenvalues: Vec<f64>,
    pub growth_exponent: f64,
    pub growth_relative_error: f64,
    pub commutators: Vec<CommutatorCheck>,
    pub chirality: Option<ChiralityCheck>,
    pub divergence_residual: Option<f64>,
    pub faithful: Option<bool>,
    pub notes: Vec<String>,
}

impl SpectralTripleReport {
    pub fn max_commutator_drift(&self) -> f64 {
        self.commutators
            .iter()
            .filter_map(|c| c.relative_drift)
            .fold(0.0, f64::max)
    }
}

/// Random unit-norm invariant spinor supported on the interior band.
fn random_invariant(td: &TruncatedDirac, p: &Op, band: &[usize], rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    let mut v = DVector::zeros(td.dim());
    for &i in band {
        v[i] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let w = apply(p, &v);
    let n = w.norm();
    if n == 0.0 {
        w
    } else {
        w / Complex64::new(n, 0.0)
    }
}

/// `|∫⟨Dψ, ψ'⟩ − ∫⟨ψ, Dψ'⟩|` maximized over random invariant pairs.
pub fn divergence_residual(td: &TruncatedDirac, buffer: usize, probes: usize) -> Result<f64> {
    let measure = OrbifoldMeasure::single_chart(&td.spec.groupoid)?;
    let p = td.invariant_projector();
    let band = td.interior_indices(buffer);
    let mut rng = ChaCha8Rng::seed_from_u64(DIVERGENCE_SEED);
    let field = |coeffs: DVector<Complex64>| FourierField {
        window: td.window.clone(),
        rank: td.spin_dim(),
        coeffs,
    };
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let a = random_invariant(td, &p, &band, &mut rng);
        let b = random_invariant(td, &p, &band, &mut rng);
        let da = apply(&td.matrix, &a);
        let db = apply(&td.matrix, &b);
        let lhs = orbifold_pairing(&measure, &field(da), &field(b.clone()))?;
        let rhs = orbifold_pairing(&measure, &field(a), &field(db))?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Runs the truncated spectral-triple checks for `spec` with the given
/// generators.
pub fn check_spectral_triple(
    spec: &DiracSpec,
    generators: &[&dyn Represented],
    opts: &TripleOptions,
) -> Result<SpectralTripleReport> {
    let td = assemble_dirac(spec)?;
    let doubled = if opts.doubled {
        Some(assemble_dirac(&DiracSpec {
            cutoff: 2 * spec.cutoff,
            ..spec.clone()
        })?)
    } else {
        None
    };
    let buffer = generators.iter().map(|g| g.degree()).fold(opts.buffer.max(2), usize::max);
    let p = td.invariant_projector();
    let projector_residual = frobenius(&sub(&mul(&p, &p), &p)).max(frobenius(&commutator(&p, &td.matrix)));

    let mut commutators = Vec::new();
    for g in generators {
        let b = g.degree().max(opts.buffer).max(2);
        let pi = g.represent(&td)?;
        let c = commutator(&td.matrix, &pi);
        let cols = td.interior_indices(b);
        let norm = norm_on_cols(&c, &cols);
        let (norm_doubled, relative_drift) = match &doubled {
            Some(td2) => {
                let c2 = commutator(&td2.matrix, &g.represent(td2)?);
                let n2 = norm_on_cols(&c2, &td2.interior_indices(b));
                let drift = if norm == 0.0 && n2 == 0.0 {
                    0.0
                } else {
                    (n2 - norm).abs() / norm.max(n2)
                };
                (Some(n2), Some(drift))
            }
            None => (None, None),
        };
        let gradient_residual = frobenius_on_cols(&sub(&c, &g.gradient(&td)?), &cols);
        commutators.push(CommutatorCheck {
            generator: g.label(),
            buffer: b,
            norm,
            norm_doubled,
            relative_drift,
            gradient_residual,
            projector_commutator: frobenius(&commutator(&p, &pi)),
            chirality_commutator: td.chirality.as_ref().map(|w| frobenius(&commutator(w, &pi))),
        });
    }

    let chirality = match (&td.chirality, &td.clifford.chirality) {
        (Some(w), Some(exact_w)) => Some(ChiralityCheck {
            square_exact: (exact_w * exact_w).is_identity()
                && frobenius(&sub(&mul(w, w), &identity(td.dim()))) == 0.0,
            anticommutator: frobenius(&anticommutator(w, &td.matrix)),
            projector_commutator: frobenius(&commutator(w, &p)),
        }),
        _ => None,
    };

    let eigenvalues = td.invariant_spectrum(buffer).interior();
    let n = td.window.dim() as f64;
    let lambda_max = td
        .window
        .circumferences
        .iter()
        .map(|l| 2.0 * PI * (spec.cutoff - buffer) as f64 / l)
        .fold(f64::INFINITY, f64::min);
    let growth = growth_exponent(&eigenvalues, lambda_max);
    let divergence = if opts.divergence_probes > 0 {
        Some(divergence_residual(&td, buffer, opts.divergence_probes)?)
    } else {
        None
    };
    let mut notes = Vec::new();
    if spec.lift.phase_twisted {
        notes.push("spin lift uses ±i phases; no ±1 lift exists for this twist".into());
    }
    Ok(SpectralTripleReport {
        subject: spec.groupoid.name.clone(),
        cutoff: spec.cutoff,
        buffer,
        dimension: td.window.dim(),
        hermiticity_residual: td.hermiticity_residual(),
        invariance_residual: td.invariance_residual(),
        projector_residual,
        eigenvalues,
        growth_exponent: growth,
        growth_relative_error: (growth - n).abs() / n,
        commutators,
        chirality,
        divergence_residual: divergence,
        faithful: None,
        notes,
    })
}
