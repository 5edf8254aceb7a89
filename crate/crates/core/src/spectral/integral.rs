use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{rational_f64, FourierField};
use crate::groupoid::ActionGroupoid;

/// Tolerance for `Σ_a ρ_a = 1` on the sample grid and for chart invariance.
pub const PARTITION_TOL: f64 = 1e-10;

/// Chart `U_a` with `k_a/|G_a^a|` weighting and bump `ρ_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierChart {
    pub principal_rank: usize,
    pub isotropy_order: usize,
    pub bump: FourierField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbifoldMeasure {
    pub circumferences: Vec<f64>,
    pub charts: Vec<FourierChart>,
}

/// Number of group elements acting as the identity, i.e. the isotropy rank
/// on the principal stratum.
pub fn principal_rank(g: &ActionGroupoid) -> usize {
    g.isometries().iter().filter(|i| i.is_identity()).count()
}

impl OrbifoldMeasure {
    /// Charts that each cover the whole base with the full group as chart
    /// group; `bumps` must be invariant and sum to one.
    pub fn whole_base(g: &ActionGroupoid, bumps: Vec<FourierField>) -> Result<Self> {
        let k = principal_rank(g);
        let m = Self {
            circumferences: g.base.circumferences(),
            charts: bumps
                .into_iter()
                .map(|bump| FourierChart {
                    principal_rank: k,
                    isotropy_order: g.order(),
                    bump,
                })
                .collect(),
        };
        m.validate(Some(g))?;
        Ok(m)
    }

    pub fn single_chart(g: &ActionGroupoid) -> Result<Self> {
        let w = crate::fourier::ModeWindow::functions(g.base.circumferences(), 0);
        Self::whole_base(g, vec![FourierField::constant(&w, Complex64::new(1.0, 0.0))])
    }

    pub fn validate(&self, g: Option<&ActionGroupoid>) -> Result<()> {
        if self.charts.is_empty() {
            return Err(Error::Partition("no charts".into()));
        }
        let cutoff = self.charts.iter().map(|c| c.bump.window.cutoff).max().unwrap_or(0);
        let n = 4 * cutoff.max(2);
        let dim = self.circumferences.len();
        let points = n.pow(dim as u32);
        for p in 0..points {
            let x: Vec<f64> = (0..dim)
                .map(|a| {
                    let i = if a == 0 { p / n.pow((dim - 1) as u32) } else { p % n };
                    self.circumferences[a] * (i % n) as f64 / n as f64
                })
                .collect();
            let s: Complex64 = self.charts.iter().map(|c| c.bump.evaluate(&x)[0]).sum();
            if (s - 1.0).norm() > PARTITION_TOL {
                return Err(Error::Partition(format!("bumps sum to {s} at {x:?}")));
            }
        }
        if let Some(g) = g {
            for (a, c) in self.charts.iter().enumerate() {
                for (e, iso) in g.isometries().iter().enumerate() {
                    if c.bump.compose_isometry(iso)?.max_abs_diff(&c.bump) > PARTITION_TOL {
                        return Err(Error::NotInvariant(format!(
                            "bump {a} moved by {}",
                            g.group.label(e)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        self.circumferences.iter().product()
    }

    /// `Σ_a (k_a/|G_a^a|) ∫ ρ_a h ν`, where `h` is given through its Fourier
    /// coefficients `coeff(l)`; only the modes of the bumps are needed.
    pub fn integrate_modes(&self, coeff: impl Fn(&[i64]) -> Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for c in &self.charts {
            let w = &c.bump.window;
            let mut chart = Complex64::new(0.0, 0.0);
            for i in 0..w.mode_count() {
                let r = c.bump.coeffs[i];
                if r.norm() == 0.0 {
                    continue;
                }
                let l: Vec<i64> = w.mode(i).iter().map(|x| -x).collect();
                chart += r * coeff(&l);
            }
            total += chart * (c.principal_rank as f64 / c.isotropy_order as f64) * self.volume();
        }
        total
    }
}

/// Orbifold integral of an invariant scalar function.
pub fn orbifold_integral(m: &OrbifoldMeasure, f: &FourierField) -> Result<Complex64> {
    if f.rank != 1 || f.window.twist.iter().any(|t| rational_f64(t) != 0.0) {
        return Err(Error::Shape("integrand must be an untwisted scalar function".into()));
    }
    if f.window.circumferences != m.circumferences {
        return Err(Error::Shape("integrand lives on another base".into()));
    }
    Ok(m.integrate_modes(|l| f.coefficient(l, 0)))
}

/// Mode `l` of the pointwise fibre pairing `⟨a(x), b(x)⟩`:
/// `Σ_{k,c} conj(a_{k,c}) b_{k+l,c}`.
pub fn pairing_mode(a: &FourierField, b: &FourierField, l: &[i64]) -> Complex64 {
    let w = &a.window;
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..w.mode_count() {
        let k = w.mode(i);
        let kl: Vec<i64> = k.iter().zip(l).map(|(x, y)| x + y).collect();
        for c in 0..a.rank {
            let av = a.coeffs[i * a.rank + c];
            if av.norm() != 0.0 {
                s += av.conj() * b.coefficient(&kl, c);
            }
        }
    }
    s
}

/// `∫_orb ⟨a, b⟩` for two fields on the same window.
pub fn orbifold_pairing(m: &OrbifoldMeasure, a: &FourierField, b: &FourierField) -> Result<Complex64> {
    if a.window != b.window || a.rank != b.rank {
        return Err(Error::Shape("paired fields live on different windows".into()));
    }
    Ok(m.integrate_modes(|l| pairing_mode(a, b, l)))
}

/// Chart on a finite base: points with bump values and the `k/|G|` weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteChart {
    pub points: Vec<usize>,
    pub bump: Vec<f64>,
    pub principal_rank: usize,
    pub isotropy_order: usize,
}

/// Counting-measure orbifold integral `Σ_a (k_a/|G_a^a|) Σ_{x ∈ U_a} ρ_a(x) f(x)`.
pub fn finite_orbifold_integral(charts: &[FiniteChart], f: &[Complex64]) -> Result<Complex64> {
    let mut cover = vec![0.0; f.len()];
    let mut total = Complex64::new(0.0, 0.0);
    for c in charts {
        if c.points.len() != c.bump.len() {
            return Err(Error::Shape("one bump value per chart point".into()));
        }
        let w = c.principal_rank as f64 / c.isotropy_order as f64;
        for (&x, &r) in c.points.iter().zip(&c.bump) {
            let v = f.get(x).ok_or_else(|| Error::UnknownObject(x.to_string()))?;
            cover[x] += r;
            total += v * r * w;
        }
    }
    if let Some(x) = cover.iter().position(|s| (s - 1.0).abs() > PARTITION_TOL) {
        return Err(Error::Partition(format!("bumps sum to {} at point {x}", cover[x])));
    }
    Ok(total)
}
