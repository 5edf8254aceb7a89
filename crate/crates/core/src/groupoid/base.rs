use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{frac_serde, Rational};

/// The base spaces of the catalog. Fourier bases are flat circles and tori;
/// their points are written as fractions of each circumference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flavor")]
pub enum BaseSpace {
    FiniteSet {
        points: Vec<String>,
    },
    FourierCircle {
        circumference: f64,
        mode_cutoff: usize,
    },
    FourierTorus {
        circumferences: [f64; 2],
        mode_cutoff: usize,
    },
}

impl BaseSpace {
    pub fn finite(points: &[&str]) -> Self {
        Self::FiniteSet {
            points: points.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn finite_n(n: usize) -> Self {
        Self::FiniteSet {
            points: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn circle(circumference: f64, mode_cutoff: usize) -> Self {
        Self::FourierCircle {
            circumference,
            mode_cutoff,
        }
    }

    pub fn torus(circumferences: [f64; 2], mode_cutoff: usize) -> Self {
        Self::FourierTorus {
            circumferences,
            mode_cutoff,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::FiniteSet { .. } => 0,
            Self::FourierCircle { .. } => 1,
            Self::FourierTorus { .. } => 2,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::FiniteSet { .. })
    }

    pub fn circumferences(&self) -> Vec<f64> {
        match self {
            Self::FiniteSet { .. } => Vec::new(),
            Self::FourierCircle { circumference, .. } => vec![*circumference],
            Self::FourierTorus { circumferences, .. } => circumferences.to_vec(),
        }
    }

    pub fn mode_cutoff(&self) -> Option<usize> {
        match self {
            Self::FiniteSet { .. } => None,
            Self::FourierCircle { mode_cutoff, .. } | Self::FourierTorus { mode_cutoff, .. } => {
                Some(*mode_cutoff)
            }
        }
    }

    pub fn point_count(&self) -> Option<usize> {
        match self {
            Self::FiniteSet { points } => Some(points.len()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::FiniteSet { points } => {
                if points.is_empty() {
                    return Err(Error::Invalid("finite base needs at least one point".into()));
                }
                let mut sorted = points.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != points.len() {
                    return Err(Error::Invalid("finite base labels must be distinct".into()));
                }
            }
            Self::FourierCircle {
                circumference,
                mode_cutoff,
            } => check_fourier(&[*circumference], *mode_cutoff)?,
            Self::FourierTorus {
                circumferences,
                mode_cutoff,
            } => check_fourier(circumferences, *mode_cutoff)?,
        }
        Ok(())
    }

    /// Uniform sample grid with `4·modeCutoff` points per axis, as fractions.
    pub fn sample_grid(&self) -> Vec<Vec<Rational>> {
        let Some(m) = self.mode_cutoff() else {
            return Vec::new();
        };
        let n = 4 * m as i64;
        let axis: Vec<Rational> = (0..n).map(|i| Ratio::new(i, n)).collect();
        match self.dimension() {
            1 => axis.iter().map(|&a| vec![a]).collect(),
            _ => axis
                .iter()
                .flat_map(|&a| axis.iter().map(move |&b| vec![a, b]))
                .collect(),
        }
    }
}

fn check_fourier(lengths: &[f64], cutoff: usize) -> Result<()> {
    if lengths.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::Invalid("circumference must be positive".into()));
    }
    if cutoff < 2 {
        return Err(Error::Invalid("mode cutoff must be at least 2".into()));
    }
    Ok(())
}

/// Reduce a fraction into `[0, 1)`.
pub fn wrap(r: Rational) -> Rational {
    r - r.floor()
}

/// Flat isometry `v ↦ sign·v + shift` with the shift in fractions of each
/// circumference. Circles only use `sign = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Isometry {
    pub sign: i8,
    #[serde(with = "frac_serde::vec")]
    pub shift: Vec<Rational>,
}

impl Isometry {
    pub fn identity(dim: usize) -> Self {
        Self {
            sign: 1,
            shift: vec![Rational::zero(); dim],
        }
    }

    pub fn translation(shift: Vec<Rational>) -> Self {
        Self {
            sign: 1,
            shift: shift.into_iter().map(wrap).collect(),
        }
    }

    pub fn negation(dim: usize) -> Self {
        Self {
            sign: -1,
            shift: vec![Rational::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn apply(&self, p: &[Rational]) -> Vec<Rational> {
        let s = Rational::from_integer(self.sign as i64);
        p.iter()
            .zip(&self.shift)
            .map(|(&x, &t)| wrap(s * x + t))
            .collect()
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Isometry) -> Isometry {
        let s = Rational::from_integer(self.sign as i64);
        Isometry {
            sign: self.sign * other.sign,
            shift: self
                .shift
                .iter()
                .zip(&other.shift)
                .map(|(&t1, &t2)| wrap(s * t2 + t1))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let s = Rational::from_integer(self.sign as i64);
        Isometry {
            sign: self.sign,
            shift: self.shift.iter().map(|&t| wrap(-s * t)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.sign == 1 && self.shift.iter().all(Zero::is_zero)
    }

    /// Differential: `sign` times the identity on each axis.
    pub fn differential(&self) -> Vec<Vec<i64>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { self.sign as i64 } else { 0 }).collect())
            .collect()
    }

    /// Unreduced-translation bookkeeping: for `self ∘ other`, the integer
    /// `n_j` with `sign_self·t_other + t_self = t_composite + n_j` per axis.
    pub fn wrap_count(&self, other: &Isometry) -> Vec<i64> {
        let s = Rational::from_integer(self.sign as i64);
        self.shift
            .iter()
            .zip(&other.shift)
            .map(|(&t1, &t2)| (s * t2 + t1).floor().to_integer())
            .collect()
    }

    pub fn is_valid_for(&self, base: &BaseSpace) -> bool {
        let dim_ok = self.dim() == base.dimension();
        let sign_ok = match base {
            BaseSpace::FourierCircle { .. } => self.sign == 1,
            _ => self.sign == 1 || self.sign == -1,
        };
        let shift_ok = self.shift.iter().all(|&t| t >= Rational::zero() && t < Rational::one());
        dim_ok && sign_ok && shift_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Ratio::new(n, d)
    }

    #[test]
    fn torus_negation_fixes_half_periods() {
        let neg = Isometry::negation(2);
        assert_eq!(neg.apply(&[q(0, 1), q(0, 1)]), vec![q(0, 1), q(0, 1)]);
        assert_eq!(neg.apply(&[q(1, 2), q(0, 1)]), vec![q(1, 2), q(0, 1)]);
        assert_ne!(neg.apply(&[q(1, 4), q(0, 1)]), vec![q(1, 4), q(0, 1)]);
    }

    #[test]
    fn composition_and_inverse() {
        let a = Isometry::translation(vec![q(3, 4)]);
        let b = Isometry::translation(vec![q(1, 2)]);
        assert_eq!(a.then_after(&b), Isometry::translation(vec![q(1, 4)]));
        assert_eq!(a.wrap_count(&b), vec![1]);
        assert!(a.then_after(&a.inverse()).is_identity());
    }

    #[test]
    fn grid_size() {
        assert_eq!(BaseSpace::circle(1.0, 8).sample_grid().len(), 32);
        assert_eq!(BaseSpace::torus([1.0, 1.0], 2).sample_grid().len(), 64);
        assert!(BaseSpace::circle(1.0, 1).validate().is_err());
    }
}
