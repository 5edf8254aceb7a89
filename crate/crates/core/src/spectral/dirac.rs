use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_clifford, spin_lift_search, CliffordRep, SpinLift};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::fourier::{action_operator, multiplication_operator, FourierField, ModeWindow};
use crate::groupoid::ActionGroupoid;
use crate::linalg::{
    add, commutator, frobenius, hermitian_eigenvalues, op_from_triplets, projector_range, restrict, scale, sub,
    adjoint, Op,
};

/// Smallest cutoff accepted for a truncated Dirac operator.
pub const MIN_CUTOFF: usize = 8;
/// Largest `‖[D, U_g]‖_F` accepted when assembling.
pub const INVARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracSpec {
    pub groupoid: ActionGroupoid,
    pub lift: SpinLift,
    pub cutoff: usize,
}

impl DiracSpec {
    pub fn new(groupoid: ActionGroupoid, lift: SpinLift, cutoff: usize) -> Self {
        Self {
            groupoid,
            lift,
            cutoff,
        }
    }

    /// Uses the first lift found for the twist (strict lifts first).
    pub fn with_search(groupoid: ActionGroupoid, twist: Vec<Rational>, cutoff: usize) -> Result<Self> {
        let rep = build_clifford(groupoid.base.dimension())?;
        let found = spin_lift_search(&groupoid, &rep, &twist)?;
        let lift = found
            .all()
            .next()
            .cloned()
            .ok_or_else(|| Error::Invalid(format!("no spin lift of {} with twist {twist:?}", groupoid.name)))?;
        Ok(Self::new(groupoid, lift, cutoff))
    }

    pub fn window(&self) -> ModeWindow {
        ModeWindow::new(self.groupoid.base.circumferences(), self.cutoff, self.lift.twist.clone())
            .expect("validated twist")
    }
}

/// `D` on `span{e_k} ⊗ Σ` with the lifted group action and chirality.
#[derive(Debug, Clone)]
pub struct TruncatedDirac {
    pub spec: DiracSpec,
    pub window: ModeWindow,
    pub clifford: CliffordRep,
    pub matrix: Op,
    /// `U_g` for every group element, in group order.
    pub actions: Vec<Op>,
    pub chirality: Option<Op>,
}

impl TruncatedDirac {
    pub fn spin_dim(&self) -> usize {
        self.clifford.spinor_dim()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn interior_indices(&self, buffer: usize) -> Vec<usize> {
        self.window.interior_indices(buffer, self.spin_dim())
    }

    /// `I ⊗ A` for a fibre matrix `A`.
    pub fn fibre_operator(&self, a: &DMatrix<Complex64>) -> Op {
        let r = self.spin_dim();
        let n = self.window.mode_count();
        op_from_triplets(
            n * r,
            n * r,
            (0..n).flat_map(|i| (0..r * r).map(move |e| (i * r + e / r, i * r + e % r, a[(e / r, e % r)]))),
        )
    }

    /// Clifford multiplication `c(e^j) = −iγ^j` on every mode.
    pub fn clifford_multiplication(&self, axis: usize) -> Op {
        let g = self.clifford.gammas[axis].to_complex() * Complex64::new(0.0, -1.0);
        self.fibre_operator(&g)
    }

    pub fn multiplication(&self, f: &FourierField) -> Op {
        multiplication_operator(&self.window, self.spin_dim(), f)
    }

    /// `(1/|G|) Σ_g U_g`.
    pub fn invariant_projector(&self) -> Op {
        let w = Complex64::new(1.0 / self.actions.len() as f64, 0.0);
        let sum = self.actions.iter().skip(1).fold(self.actions[0].clone(), |a, b| add(&a, b));
        scale(&sum, w)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        frobenius(&sub(&self.matrix, &adjoint(&self.matrix)))
    }

    pub fn invariance_residual(&self) -> f64 {
        self.actions
            .iter()
            .map(|u| frobenius(&commutator(&self.matrix, u)))
            .fold(0.0, f64::max)
    }

    /// Mode orbits under the group (the action permutes modes).
    pub fn mode_orbits(&self) -> Vec<Vec<usize>> {
        let w = &self.window;
        let n = w.mode_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let k = w.mode(i);
            let mut orbit: Vec<usize> = self
                .spec
                .groupoid
                .isometries()
                .iter()
                .filter_map(|iso| w.index_of(&w.reflected(&k, iso.sign)))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &j in &orbit {
                seen[j] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Spectrum of `D` on `P(H)`, computed orbit block by orbit block.
    pub fn invariant_spectrum(&self, buffer: usize) -> InvariantSpectrum {
        let p = self.invariant_projector();
        let r = self.spin_dim();
        let mut blocks = Vec::new();
        for orbit in self.mode_orbits() {
            let idx: Vec<usize> = orbit.iter().flat_map(|&i| (0..r).map(move |c| i * r + c)).collect();
            let v = projector_range(&restrict(&p, &idx, &idx));
            if v.ncols() == 0 {
                continue;
            }
            let d = restrict(&self.matrix, &idx, &idx);
            let eig = hermitian_eigenvalues(&(v.adjoint() * d * &v));
            let interior = orbit.iter().all(|&i| self.window.is_interior(&self.window.mode(i), buffer));
            blocks.push(SpectralBlock {
                modes: orbit.iter().map(|&i| self.window.mode(i)).collect(),
                interior,
                eigenvalues: eig,
            });
        }
        InvariantSpectrum { blocks }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBlock {
    pub modes: Vec<Vec<i64>>,
    pub interior: bool,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSpectrum {
    pub blocks: Vec<SpectralBlock>,
}

impl InvariantSpectrum {
    /// Sorted eigenvalues of the interior blocks.
    pub fn interior(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .blocks
            .iter()
            .filter(|b| b.interior)
            .flat_map(|b| b.eigenvalues.iter().copied())
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn invariant_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.eigenvalues.len()).sum()
    }
}

/// `D(k) = Σ_j (2π/L_j)(k_j + δ_j) γ^j` on every mode, with `U_g` from the
/// lift; fails if `‖[D, U_g]‖_F` exceeds [`INVARIANCE_TOL`].
pub fn assemble_dirac(spec: &DiracSpec) -> Result<TruncatedDirac> {
    if spec.cutoff < MIN_CUTOFF {
        return Err(Error::Invalid(format!("cutoff {} below {MIN_CUTOFF}", spec.cutoff)));
    }
    let g = &spec.groupoid;
    if g.is_finite() {
        return Err(Error::Unsupported("Dirac operators need a Fourier base".into()));
    }
    let clifford = build_clifford(g.base.dimension())?;
    if spec.lift.matrices.len() != g.order() {
        return Err(Error::Shape("one lift matrix per group element".into()));
    }
    let window = spec.window();
    let r = clifford.spinor_dim();
    let gammas: Vec<DMatrix<Complex64>> = clifford.gammas.iter().map(|m| m.to_complex()).collect();
    let n = window.mode_count();
    let mut entries = Vec::new();
    for i in 0..n {
        let k = window.mode(i);
        let mut block = DMatrix::<Complex64>::zeros(r, r);
        for (a, gamma) in gammas.iter().enumerate() {
            block += gamma * Complex64::new(window.frequency(&k, a), 0.0);
        }
        for e in 0..r * r {
            entries.push((i * r + e / r, i * r + e % r, block[(e / r, e % r)]));
        }
    }
    let matrix = op_from_triplets(n * r, n * r, entries);
    let actions = g
        .isometries()
        .iter()
        .enumerate()
        .map(|(a, iso)| action_operator(&window, iso, &spec.lift.matrix_c64(a)))
        .collect();
    let td = TruncatedDirac {
        spec: spec.clone(),
        window,
        chirality: None,
        matrix,
        actions,
        clifford,
    };
    let chirality = td.clifford.chirality.as_ref().map(|w| td.fibre_operator(&w.to_complex()));
    let td = TruncatedDirac { chirality, ..td };
    let res = td.invariance_residual();
    if res > INVARIANCE_TOL {
        return Err(Error::Invalid(format!("lift and action disagree: ‖[D, U]‖ = {res:e}")));
    }
    Ok(td)
}

/// Least-squares exponent `p` of `N(λ) ~ λ^p` over `[Λ/4, Λ]` sampled at 32
/// log-spaced points, where `N(λ) = #{|μ| ≤ λ}`.
pub fn growth_exponent(eigenvalues: &[f64], lambda_max: f64) -> f64 {
    let samples = 32;
    let lo = lambda_max / 4.0;
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for i in 0..samples {
        let lam = lo * (lambda_max / lo).powf(i as f64 / (samples - 1) as f64);
        let count = eigenvalues.iter().filter(|e| e.abs() <= lam * (1.0 + 1e-12)).count();
        if count > 0 {
            x.push(lam.ln());
            y.push((count as f64).ln());
        }
    }
    crate::linalg::fit_slope(&x, &y)
}
