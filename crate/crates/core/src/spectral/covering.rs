use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dirac::{assemble_dirac, DiracSpec, TruncatedDirac, MIN_CUTOFF};
use crate::clifford::{build_clifford, spin_lift_search, SpinLift};
use crate::error::{Error, Result};
use crate::exact::{frac_serde, to_c64, ExactMatrix, Rational};
use crate::fourier::FourierField;
use crate::groupoid::{wrap, Arc};
use crate::linalg::{adjoint, apply, mul, restrict, sub, Op};
use crate::transport::CircleCovering;

/// `D_#` on the quotient of a free circle covering together with the checks
/// tying it to the invariant part of `D`.
#[derive(Debug, Clone)]
pub struct InducedDirac {
    pub upstairs: TruncatedDirac,
    pub downstairs: TruncatedDirac,
    pub down_twist: Rational,
    /// `U_φ`: upstairs basis to downstairs basis.
    pub unitary: Op,
    pub buffer: usize,
    /// Downstairs basis indices whose upstairs partner is interior.
    pub band: Vec<usize>,
    /// `‖U D U* − D_#‖_F` on the band.
    pub conjugation_residual: f64,
    /// Largest `‖φ_# D A_φ e_j − D_# e_j‖_∞` over band columns.
    pub transport_residual: f64,
    /// Largest disagreement between the two branch representatives.
    pub representative_residual: f64,
    pub upstairs_spectrum: Vec<f64>,
    pub downstairs_spectrum: Vec<f64>,
}

impl InducedDirac {
    /// Elementwise gap between the sorted spectra; infinite on a length
    /// mismatch.
    pub fn spectrum_residual(&self) -> f64 {
        if self.upstairs_spectrum.len() != self.downstairs_spectrum.len() {
            return f64::INFINITY;
        }
        self.upstairs_spectrum
            .iter()
            .zip(&self.downstairs_spectrum)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn lift_c64(lift: &SpinLift) -> Vec<DMatrix<Complex64>> {
    (0..lift.matrices.len()).map(|g| lift.matrix_c64(g)).collect()
}

/// Builds `D_# = φ_# ∘ D ∘ A_φ` for the covering of `spec.groupoid` over its
/// quotient and compares it with `U_φ D U_φ*` and with the directly assembled
/// quotient operator.
pub fn induced_dirac(spec: &DiracSpec, buffer: usize) -> Result<InducedDirac> {
    let cov = CircleCovering::new(&spec.groupoid)?;
    let upstairs = assemble_dirac(spec)?;
    let lift = lift_c64(&spec.lift);
    let twist = spec.lift.twist[0];
    let phase = to_c64(&spec.lift.signs[cov.generator]);
    let down_twist = cov.downstairs_twist(twist, phase)?;

    let m = cov.degree;
    // |j + δ'| = |k + δ|/m never exceeds ⌊M/m⌋ + ½ on the upstairs window
    let down_cutoff = (spec.cutoff / m).max(MIN_CUTOFF);
    let quotient = cov.quotient(down_cutoff);
    let down_lift = SpinLift::trivial(1, 1, vec![down_twist]);
    let downstairs = assemble_dirac(&DiracSpec::new(quotient, down_lift, down_cutoff))?;
    let (uw, dw) = (&upstairs.window, &downstairs.window);
    let unitary = cov.mode_map(uw, dw, 1);

    let band: Vec<usize> = (0..dw.mode_count())
        .filter(|&j| {
            let k = cov.mode_up(dw.mode(j)[0], twist, down_twist);
            uw.is_interior(&[k], buffer)
        })
        .collect();

    let conj = mul(&mul(&unitary, &upstairs.matrix), &adjoint(&unitary));
    let gap = restrict(&sub(&conj, &downstairs.matrix), &band, &band);
    let conjugation_residual = gap.norm();

    let mut transport_residual: f64 = 0.0;
    let mut representative_residual: f64 = 0.0;
    for &j in &band {
        let mut e = FourierField::zeros(dw, 1);
        e.coeffs[j] = Complex64::new(1.0, 0.0);
        let up = cov.pullback(&e, &lift, uw)?;
        let d_up = FourierField {
            coeffs: apply(&upstairs.matrix, &up.coeffs),
            ..up
        };
        let pushed = cov.pushforward(&d_up, &lift, dw)?;
        let expect: DVector<Complex64> = apply(&downstairs.matrix, &e.coeffs);
        transport_residual = transport_residual.max((&pushed.field.coeffs - expect).camax());
        representative_residual = representative_residual.max(pushed.overlap_residual);
    }

    let upstairs_spectrum = upstairs.invariant_spectrum(buffer).interior();
    let mut downstairs_spectrum: Vec<f64> = band
        .iter()
        .map(|&j| downstairs.matrix.get_entry(j, j).map_or(0.0, |v| v.into_value().re))
        .collect();
    downstairs_spectrum.sort_by(f64::total_cmp);

    Ok(InducedDirac {
        upstairs,
        downstairs,
        down_twist,
        unitary,
        buffer,
        band,
        conjugation_residual,
        transport_residual,
        representative_residual,
        upstairs_spectrum,
        downstairs_spectrum,
    })
}

/// Strict spin lifts upstairs, the downstairs twist each one induces, and the
/// twists admitting a lift on the quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinCorrespondence {
    pub upstairs: Vec<SpinLift>,
    #[serde(with = "frac_serde::vec")]
    pub images: Vec<Rational>,
    #[serde(with = "frac_serde::vec")]
    pub downstairs: Vec<Rational>,
}

impl SpinCorrespondence {
    pub fn is_bijective(&self) -> bool {
        let mut img = self.images.clone();
        img.sort();
        let distinct = img.windows(2).all(|w| w[0] != w[1]);
        let mut down = self.downstairs.clone();
        down.sort();
        distinct && img == down
    }
}

/// Matches equivariant spin structures upstairs with spin structures on the
/// quotient through the induced twist.
pub fn spin_correspondence(cov: &CircleCovering) -> Result<SpinCorrespondence> {
    let rep = build_clifford(1)?;
    let twists = [Rational::from_integer(0), Rational::new(1, 2)];
    let mut upstairs = Vec::new();
    let mut images = Vec::new();
    for &t in &twists {
        for lift in spin_lift_search(&cov.upstairs, &rep, &[t])?.strict {
            images.push(cov.downstairs_twist(t, to_c64(&lift.signs[cov.generator]))?);
            upstairs.push(lift);
        }
    }
    let quotient = cov.quotient(MIN_CUTOFF);
    let mut downstairs = Vec::new();
    for &t in &twists {
        if !spin_lift_search(&quotient, &rep, &[t])?.strict.is_empty() {
            downstairs.push(t);
        }
    }
    Ok(SpinCorrespondence {
        upstairs,
        images,
        downstairs,
    })
}

/// One sampled entry of the tangent cocycles on an arc cover of the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentEntry {
    pub sheets: (usize, usize),
    #[serde(with = "frac_serde")]
    pub point: Rational,
    /// Group element relating the two branch lifts.
    pub element: usize,
    pub induced: ExactMatrix,
    pub downstairs: ExactMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentCocycleCheck {
    pub entries: Vec<TangentEntry>,
}

impl TangentCocycleCheck {
    pub fn mismatches(&self) -> Vec<&TangentEntry> {
        self.entries.iter().filter(|e| e.induced != e.downstairs).collect()
    }
}

/// Representative of `p` inside `arc`, unrolled around the arc's centre.
fn unrolled(arc: &Arc, p: Rational) -> Rational {
    let d = wrap(p - arc.center + Rational::new(1, 2)) - Rational::new(1, 2);
    arc.center + d
}

/// Compares the tangent cocycle induced through the branch sections
/// `β_i(y) = (ŷ_i + i mod m)/m` with the tangent cocycle of the quotient on
/// the same arc cover. Points are sampled on a grid of `samples` per unit.
pub fn tangent_cocycle_check(cov: &CircleCovering, arcs: &[Arc], samples: i64) -> Result<TangentCocycleCheck> {
    if arcs.is_empty() || samples <= 0 {
        return Err(Error::Invalid("need arcs and a positive sample count".into()));
    }
    let m = cov.degree as i64;
    let isos = cov.upstairs.isometries();
    let quotient = cov.quotient(MIN_CUTOFF);
    let down_id = quotient.isometries()[quotient.group.identity()].differential();
    let to_exact = |d: Vec<Vec<i64>>| {
        let rows: Vec<&[i64]> = d.iter().map(Vec::as_slice).collect();
        ExactMatrix::from_integers(&rows)
    };
    let beta = |i: usize, p: Rational| {
        let branch = Rational::from_integer(i as i64 % m);
        wrap((unrolled(&arcs[i], p) + branch) / Rational::from_integer(m))
    };
    let mut entries = Vec::new();
    for s in 0..samples {
        let p = Rational::new(s, samples);
        let inside: Vec<usize> = (0..arcs.len()).filter(|&i| arcs[i].contains(p)).collect();
        for &i in &inside {
            for &j in &inside {
                let (bi, bj) = (beta(i, p), beta(j, p));
                let hits: Vec<usize> = (0..isos.len()).filter(|&g| isos[g].apply(&[bj])[0] == bi).collect();
                let [element] = hits[..] else {
                    return Err(Error::Invalid(format!(
                        "{} elements relate the branches at {p} on sheets ({i}, {j})",
                        hits.len()
                    )));
                };
                // the quotient chart change ŷ_j ↦ ŷ_i is a translation
                if !(unrolled(&arcs[i], p) - unrolled(&arcs[j], p)).is_integer() {
                    return Err(Error::Invalid(format!("charts {i} and {j} disagree at {p}")));
                }
                entries.push(TangentEntry {
                    sheets: (i, j),
                    point: p,
                    element,
                    induced: to_exact(isos[element].differential()),
                    downstairs: to_exact(down_id.clone()),
                });
            }
        }
    }
    Ok(TangentCocycleCheck { entries })
}
