//! Truncated Fourier mode spaces on flat circles and tori.
//!
//! A field on an axis of circumference `L` with spin twist `δ ∈ {0, ½}` is
//! `Σ_k c_k e^{2πi(k+δ)x/L}` over the window `−M−2δ ≤ k ≤ M`, which is
//! symmetric in frequency. Coordinates `x` are arc length.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{frac_serde, Rational};
use crate::groupoid::Isometry;
use crate::linalg::{op_from_triplets, Op};

pub fn rational_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeWindow {
    pub circumferences: Vec<f64>,
    pub cutoff: usize,
    #[serde(with = "frac_serde::vec")]
    pub twist: Vec<Rational>,
}

impl ModeWindow {
    pub fn new(circumferences: Vec<f64>, cutoff: usize, twist: Vec<Rational>) -> Result<Self> {
        if circumferences.len() != twist.len() || circumferences.is_empty() || circumferences.len() > 2 {
            return Err(Error::Shape("one twist per axis, one or two axes".into()));
        }
        let half = Rational::new(1, 2);
        if twist.iter().any(|t| *t != Rational::from_integer(0) && *t != half) {
            return Err(Error::Invalid("spin twist must be 0 or 1/2".into()));
        }
        Ok(Self {
            circumferences,
            cutoff,
            twist,
        })
    }

    /// Untwisted window for functions.
    pub fn functions(circumferences: Vec<f64>, cutoff: usize) -> Self {
        let n = circumferences.len();
        Self::new(circumferences, cutoff, vec![Rational::from_integer(0); n]).expect("untwisted")
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        Self {
            cutoff,
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.circumferences.len()
    }

    /// Inclusive range `(lo, hi)` of `k` on an axis.
    pub fn axis_range(&self, axis: usize) -> (i64, i64) {
        let m = self.cutoff as i64;
        let shift = (self.twist[axis] * 2).to_integer();
        (-m - shift, m)
    }

    fn axis_len(&self, axis: usize) -> usize {
        let (lo, hi) = self.axis_range(axis);
        (hi - lo + 1) as usize
    }

    pub fn mode_count(&self) -> usize {
        (0..self.dim()).map(|a| self.axis_len(a)).product()
    }

    /// Modes in index order (first axis slowest).
    pub fn modes(&self) -> Vec<Vec<i64>> {
        (0..self.mode_count()).map(|i| self.mode(i)).collect()
    }

    pub fn mode(&self, index: usize) -> Vec<i64> {
        let mut rest = index;
        let mut k = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            let len = self.axis_len(a);
            k[a] = self.axis_range(a).0 + (rest % len) as i64;
            rest /= len;
        }
        k
    }

    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        let mut idx = 0;
        for (a, &ka) in k.iter().enumerate() {
            let (lo, hi) = self.axis_range(a);
            if ka < lo || ka > hi {
                return None;
            }
            idx = idx * self.axis_len(a) + (ka - lo) as usize;
        }
        Some(idx)
    }

    /// `(k_a + δ_a)` as a float.
    pub fn shifted(&self, k: &[i64], axis: usize) -> f64 {
        k[axis] as f64 + rational_f64(&self.twist[axis])
    }

    /// Angular frequency `2π(k_a + δ_a)/L_a`.
    pub fn frequency(&self, k: &[i64], axis: usize) -> f64 {
        2.0 * PI * self.shifted(k, axis) / self.circumferences[axis]
    }

    /// Inside the band `lo + B ≤ k ≤ hi − B` on every axis.
    pub fn is_interior(&self, k: &[i64], buffer: usize) -> bool {
        k.iter().enumerate().all(|(a, &ka)| {
            let (lo, hi) = self.axis_range(a);
            ka >= lo + buffer as i64 && ka <= hi - buffer as i64
        })
    }

    pub fn interior_modes(&self, buffer: usize) -> Vec<usize> {
        (0..self.mode_count()).filter(|&i| self.is_interior(&self.mode(i), buffer)).collect()
    }

    /// Basis indices `mode·rank + c` of the interior band.
    pub fn interior_indices(&self, buffer: usize, rank: usize) -> Vec<usize> {
        self.interior_modes(buffer)
            .into_iter()
            .flat_map(|i| (0..rank).map(move |c| i * rank + c))
            .collect()
    }

    /// Mode `k'` with `k' + δ = s(k + δ)`.
    pub fn reflected(&self, k: &[i64], sign: i8) -> Vec<i64> {
        k.iter()
            .enumerate()
            .map(|(a, &ka)| {
                if sign > 0 {
                    ka
                } else {
                    -ka - (self.twist[a] * 2).to_integer()
                }
            })
            .collect()
    }
}

/// Coefficients of a `C^rank`-valued field; basis index `mode·rank + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    pub window: ModeWindow,
    pub rank: usize,
    pub coeffs: DVector<Complex64>,
}

impl FourierField {
    pub fn zeros(window: &ModeWindow, rank: usize) -> Self {
        Self {
            window: window.clone(),
            rank,
            coeffs: DVector::zeros(window.mode_count() * rank),
        }
    }

    pub fn from_fn(window: &ModeWindow, rank: usize, f: impl Fn(&[i64], usize) -> Complex64) -> Self {
        let mut out = Self::zeros(window, rank);
        for i in 0..window.mode_count() {
            let k = window.mode(i);
            for c in 0..rank {
                out.coeffs[i * rank + c] = f(&k, c);
            }
        }
        out
    }

    /// Scalar field with the listed `(mode, coefficient)` terms.
    pub fn from_terms(window: &ModeWindow, terms: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        let mut out = Self::zeros(window, 1);
        for (k, v) in terms {
            let i = window
                .index_of(k)
                .ok_or_else(|| Error::BandLimit(format!("mode {k:?} outside cutoff {}", window.cutoff)))?;
            out.coeffs[i] += v;
        }
        Ok(out)
    }

    pub fn constant(window: &ModeWindow, c: Complex64) -> Self {
        Self::from_fn(window, 1, |k, _| if k.iter().all(|&x| x == 0) { c } else { Complex64::new(0.0, 0.0) })
    }

    pub fn coefficient(&self, k: &[i64], c: usize) -> Complex64 {
        self.window
            .index_of(k)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i * self.rank + c])
    }

    /// Largest `|k_a|` over modes with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        let mut d = 0;
        for i in 0..self.window.mode_count() {
            if (0..self.rank).any(|c| self.coeffs[i * self.rank + c].norm() > 0.0) {
                let k = self.window.mode(i);
                for (a, &ka) in k.iter().enumerate() {
                    let s = self.window.shifted(&k, a).abs().ceil() as usize;
                    d = d.max(s).max(ka.unsigned_abs() as usize);
                }
            }
        }
        d
    }

    /// Same field on another window; fails if a nonzero mode would be lost.
    pub fn rewindow(&self, window: &ModeWindow) -> Result<Self> {
        if window.twist != self.window.twist || window.circumferences != self.window.circumferences {
            return Err(Error::Shape("windows differ in twist or circumference".into()));
        }
        let mut out = Self::zeros(window, self.rank);
        for i in 0..self.window.mode_count() {
            let k = self.window.mode(i);
            for c in 0..self.rank {
                let v = self.coeffs[i * self.rank + c];
                if v.norm() == 0.0 {
                    continue;
                }
                let j = window
                    .index_of(&k)
                    .ok_or_else(|| Error::BandLimit(format!("mode {k:?} outside cutoff {}", window.cutoff)))?;
                out.coeffs[j * self.rank + c] = v;
            }
        }
        Ok(out)
    }

    /// Value at arc-length coordinates `x`, summed in ascending mode order.
    pub fn evaluate(&self, x: &[f64]) -> Vec<Complex64> {
        let w = &self.window;
        let mut out = vec![Complex64::new(0.0, 0.0); self.rank];
        for i in 0..w.mode_count() {
            let k = w.mode(i);
            let phase: f64 = (0..w.dim()).map(|a| w.frequency(&k, a) * x[a]).sum();
            let e = cis(phase);
            for (c, o) in out.iter_mut().enumerate() {
                *o += self.coeffs[i * self.rank + c] * e;
            }
        }
        out
    }

    /// Derivative along an axis.
    pub fn derivative(&self, axis: usize) -> Self {
        let w = &self.window;
        let mut out = self.clone();
        for i in 0..w.mode_count() {
            let k = w.mode(i);
            let f = Complex64::new(0.0, w.frequency(&k, axis));
            for c in 0..self.rank {
                out.coeffs[i * self.rank + c] *= f;
            }
        }
        out
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        Self {
            coeffs: &self.coeffs * z,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.window != other.window || self.rank != other.rank {
            return Err(Error::Shape("fields live on different windows".into()));
        }
        Ok(Self {
            coeffs: &self.coeffs + &other.coeffs,
            ..self.clone()
        })
    }

    /// Pointwise product with a scalar function, exact on a window wide
    /// enough for both bands.
    pub fn times_function(&self, f: &FourierField) -> Result<Self> {
        if f.rank != 1 || f.window.twist.iter().any(|t| *t != Rational::from_integer(0)) {
            return Err(Error::Shape("multiplier must be an untwisted scalar function".into()));
        }
        if f.window.circumferences != self.window.circumferences {
            return Err(Error::Shape("circumferences differ".into()));
        }
        let window = self.window.with_cutoff(self.window.cutoff + f.window.cutoff);
        let mut out = Self::zeros(&window, self.rank);
        for i in 0..self.window.mode_count() {
            let k = self.window.mode(i);
            for j in 0..f.window.mode_count() {
                let fv = f.coeffs[j];
                if fv.norm() == 0.0 {
                    continue;
                }
                let l = f.window.mode(j);
                let kl: Vec<i64> = k.iter().zip(&l).map(|(a, b)| a + b).collect();
                let t = window.index_of(&kl).expect("widened window");
                for c in 0..self.rank {
                    out.coeffs[t * self.rank + c] += fv * self.coeffs[i * self.rank + c];
                }
            }
        }
        Ok(out)
    }

    /// Composition with an isometry `x ↦ s x + r L` of an untwisted field.
    pub fn compose_isometry(&self, iso: &Isometry) -> Result<Self> {
        if self.window.twist.iter().any(|t| *t != Rational::from_integer(0)) {
            return Err(Error::Unsupported("composition of twisted fields".into()));
        }
        let w = &self.window;
        let mut out = Self::zeros(w, self.rank);
        for i in 0..w.mode_count() {
            let k = w.mode(i);
            let phase: f64 = (0..w.dim()).map(|a| 2.0 * PI * k[a] as f64 * rational_f64(&iso.shift[a])).sum();
            let k2: Vec<i64> = k.iter().map(|&x| iso.sign as i64 * x).collect();
            let j = w.index_of(&k2).expect("symmetric window");
            for c in 0..self.rank {
                out.coeffs[j * self.rank + c] += self.coeffs[i * self.rank + c] * cis(phase);
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.coeffs - &other.coeffs).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Coefficients on a circle window from samples `v_p = ψ(pL/N)` of a field
/// whose band fits in `N` bins.
pub fn analyze_circle(window: &ModeWindow, rank: usize, samples: &[Vec<Complex64>]) -> Result<FourierField> {
    if window.dim() != 1 {
        return Err(Error::Unsupported("sampling analysis is implemented on circles".into()));
    }
    let n = samples.len();
    if n < window.mode_count() {
        return Err(Error::BandLimit(format!("{n} samples for {} modes", window.mode_count())));
    }
    let delta = rational_f64(&window.twist[0]);
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let mut out = FourierField::zeros(window, rank);
    for c in 0..rank {
        let mut buf: Vec<Complex64> = samples
            .iter()
            .enumerate()
            .map(|(p, v)| v[c] * cis(-2.0 * PI * delta * p as f64 / n as f64))
            .collect();
        fft.process(&mut buf);
        for i in 0..window.mode_count() {
            let k = window.mode(i)[0];
            let bin = k.rem_euclid(n as i64) as usize;
            out.coeffs[i * rank + c] = buf[bin] / n as f64;
        }
    }
    Ok(out)
}

/// Mode-space operator of `(U ψ)(v) = ρ ψ(g⁻¹ v)` for `g: v ↦ s v + r`:
/// `e_k ⊗ u ↦ e^{−2πi s(k+δ)·r} e_{k'} ⊗ ρ u` with `k' + δ = s(k + δ)`.
pub fn action_operator(window: &ModeWindow, iso: &Isometry, rho: &DMatrix<Complex64>) -> Op {
    let r = rho.nrows();
    let mut entries = Vec::new();
    for i in 0..window.mode_count() {
        let k = window.mode(i);
        let k2 = window.reflected(&k, iso.sign);
        let Some(j) = window.index_of(&k2) else {
            continue;
        };
        let theta: f64 = (0..window.dim())
            .map(|a| -2.0 * PI * iso.sign as f64 * window.shifted(&k, a) * rational_f64(&iso.shift[a]))
            .sum();
        let ph = cis(theta);
        for a in 0..r {
            for b in 0..r {
                entries.push((j * r + a, i * r + b, ph * rho[(a, b)]));
            }
        }
    }
    let n = window.mode_count() * r;
    op_from_triplets(n, n, entries)
}

/// Multiplication by an untwisted scalar function `f`, truncated to the window,
/// acting on `rank` fibre components.
pub fn multiplication_operator(window: &ModeWindow, rank: usize, f: &FourierField) -> Op {
    let mut entries = Vec::new();
    for j in 0..f.window.mode_count() {
        let v = f.coeffs[j];
        if v.norm() == 0.0 {
            continue;
        }
        let l = f.window.mode(j);
        for i in 0..window.mode_count() {
            let k = window.mode(i);
            let kl: Vec<i64> = k.iter().zip(&l).map(|(a, b)| a + b).collect();
            if let Some(t) = window.index_of(&kl) {
                for c in 0..rank {
                    entries.push((t * rank + c, i * rank + c, v));
                }
            }
        }
    }
    let n = window.mode_count() * rank;
    op_from_triplets(n, n, entries)
}

/// Derivative along `axis` acting on `rank` fibre components.
pub fn derivative_operator(window: &ModeWindow, rank: usize, axis: usize) -> Op {
    let n = window.mode_count() * rank;
    op_from_triplets(
        n,
        n,
        (0..window.mode_count()).flat_map(|i| {
            let f = Complex64::new(0.0, window.frequency(&window.mode(i), axis));
            (0..rank).map(move |c| (i * rank + c, i * rank + c, f))
        }),
    )
}
