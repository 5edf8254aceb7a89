//! Complex Clifford modules for `n ≤ 2` and spin lifts of catalog isometries.
//!
//! Gamma conventions: `n = 1` uses `γ¹ = (1)`; `n = 2` uses the Pauli
//! matrices `γ¹ = σ_x`, `γ² = σ_y`, with chirality `ω = −iγ¹γ² = σ_z`.
//! Clifford multiplication by the coframe is `c(e^j) = −iγ^j`.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact, exact_complex, frac_serde, Exact, ExactMatrix, Rational};
use crate::groupoid::{ActionGroupoid, Isometry};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordRep {
    pub n: usize,
    pub gammas: Vec<ExactMatrix>,
    pub chirality: Option<ExactMatrix>,
}

impl CliffordRep {
    pub fn spinor_dim(&self) -> usize {
        self.gammas[0].rows()
    }

    /// `γ¹γ²` for `n = 2`, the identity otherwise.
    pub fn rotation_generator(&self) -> ExactMatrix {
        if self.n == 2 {
            &self.gammas[0] * &self.gammas[1]
        } else {
            ExactMatrix::identity(self.spinor_dim())
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new(format!("clifford n={}", self.n));
        let d = self.spinor_dim();
        for (i, gi) in self.gammas.iter().enumerate() {
            r.check("hermitian", gi.adjoint() == *gi, || format!("γ{}", i + 1));
            for (j, gj) in self.gammas.iter().enumerate() {
                let anti = &(gi * gj) + &(gj * gi);
                let expect = if i == j {
                    ExactMatrix::identity(d).scale(&exact(2))
                } else {
                    ExactMatrix::zeros(d, d)
                };
                r.check("anticommutation", anti == expect, || format!("(γ{}, γ{})", i + 1, j + 1));
            }
        }
        if let Some(w) = &self.chirality {
            r.check("chirality-square", (w * w).is_identity(), || "ω²".into());
            for (i, g) in self.gammas.iter().enumerate() {
                r.check("chirality-anticommutes", (&(w * g) + &(g * w)).is_zero(), || format!("γ{}", i + 1));
            }
        }
        r
    }
}

pub fn build_clifford(n: usize) -> Result<CliffordRep> {
    match n {
        1 => Ok(CliffordRep {
            n,
            gammas: vec![ExactMatrix::identity(1)],
            chirality: None,
        }),
        2 => {
            let z = exact(0);
            let g1 = ExactMatrix::from_integers(&[&[0, 1], &[1, 0]]);
            let g2 = ExactMatrix::from_rows(&[vec![z, exact_complex(0, -1)], vec![exact_complex(0, 1), z]])?;
            let w = (&g1 * &g2).scale(&exact_complex(0, -1));
            Ok(CliffordRep {
                n,
                gammas: vec![g1, g2],
                chirality: Some(w),
            })
        }
        _ => Err(Error::Unsupported(format!("Clifford modules for n = {n}"))),
    }
}

/// Lifted action `g ↦ ρ_s(g)` on spinors for a fixed spin twist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinLift {
    #[serde(with = "frac_serde::vec")]
    pub twist: Vec<Rational>,
    pub matrices: Vec<ExactMatrix>,
    /// Scalar `ε_g` with `ρ_s(g) = ε_g Λ(g)`.
    pub signs: Vec<Exact>,
    /// True when some `ε_g` is `±i` (no `±1` solution exists).
    pub phase_twisted: bool,
}

impl SpinLift {
    pub fn matrix_c64(&self, g: usize) -> DMatrix<Complex64> {
        self.matrices[g].to_complex()
    }

    /// The lift with every element acting trivially.
    pub fn trivial(order: usize, dim: usize, twist: Vec<Rational>) -> Self {
        Self {
            twist,
            matrices: vec![ExactMatrix::identity(dim); order],
            signs: vec![exact(1); order],
            phase_twisted: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSearch {
    /// Lifts with `ε_g ∈ {±1}`.
    pub strict: Vec<SpinLift>,
    /// Lifts needing `ε_g ∈ {±i}`; searched only when `strict` is empty.
    pub twisted: Vec<SpinLift>,
}

impl LiftSearch {
    pub fn all(&self) -> impl Iterator<Item = &SpinLift> {
        self.strict.iter().chain(&self.twisted)
    }
}

/// `e^{−2πi δ·n}` for the wrap vector `n` of a composition; always `±1`.
pub fn wrap_phase(twist: &[Rational], wraps: &[i64]) -> Exact {
    let t: Rational = twist.iter().zip(wraps).map(|(d, &w)| *d * Rational::from_integer(w)).sum();
    // t ∈ ½ℤ
    if (t * 2).to_integer().rem_euclid(2) == 0 {
        exact(1)
    } else {
        exact(-1)
    }
}

fn tangent_base(iso: &Isometry, rep: &CliffordRep) -> ExactMatrix {
    if iso.sign < 0 {
        rep.rotation_generator()
    } else {
        ExactMatrix::identity(rep.spinor_dim())
    }
}

/// Enumerates `ε` on a generating set, extends along the Cayley graph by
/// `ρ(g a) = c(g, a) ρ(g) ρ(a)`, and keeps assignments satisfying the strict
/// law `ρ(g)ρ(h) = c(g,h) ρ(gh)` on all pairs together with
/// `Ad ρ(g) γ^j = s_g γ^j`.
pub fn spin_lift_search(g: &ActionGroupoid, rep: &CliffordRep, twist: &[Rational]) -> Result<LiftSearch> {
    let isos = g.isometries();
    if isos.is_empty() {
        return Err(Error::Unsupported("spin lifts need an isometric action".into()));
    }
    if isos[0].dim() != rep.n || twist.len() != rep.n {
        return Err(Error::Shape("Clifford dimension, base dimension and twist disagree".into()));
    }
    let strict = search(g, rep, twist, &[exact(1), exact(-1)])?;
    let twisted = if strict.is_empty() {
        search(g, rep, twist, &[exact(1), exact(-1), exact_complex(0, 1), exact_complex(0, -1)])?
            .into_iter()
            .filter(|l| l.phase_twisted)
            .collect()
    } else {
        Vec::new()
    };
    Ok(LiftSearch { strict, twisted })
}

fn search(g: &ActionGroupoid, rep: &CliffordRep, twist: &[Rational], values: &[Exact]) -> Result<Vec<SpinLift>> {
    let group = &g.group;
    let isos = g.isometries();
    let order = group.order();
    let gens = group.generating_set();
    let d = rep.spinor_dim();
    let phase = |a: usize, b: usize| wrap_phase(twist, &isos[a].wrap_count(&isos[b]));
    let mut out = Vec::new();
    let total = values.len().pow(gens.len() as u32);
    'assign: for code in 0..total {
        let mut rho: Vec<Option<ExactMatrix>> = vec![None; order];
        rho[group.identity()] = Some(ExactMatrix::identity(d));
        let mut c = code;
        let mut gen_val = Vec::new();
        for &a in &gens {
            let eps = values[c % values.len()];
            c /= values.len();
            gen_val.push((a, tangent_base(&isos[a], rep).scale(&eps)));
        }
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let rx = rho[x].clone().expect("queued elements are assigned");
            for (a, ra) in &gen_val {
                let y = group.mul(x, *a);
                let ry = (&rx * ra).scale(&phase(x, *a));
                match &rho[y] {
                    Some(existing) if *existing != ry => continue 'assign,
                    Some(_) => {}
                    None => {
                        rho[y] = Some(ry);
                        queue.push_back(y);
                    }
                }
            }
        }
        let rho: Vec<ExactMatrix> = rho.into_iter().map(|m| m.expect("generating set")).collect();
        for a in 0..order {
            for b in 0..order {
                if &rho[a] * &rho[b] != rho[group.mul(a, b)].scale(&phase(a, b)) {
                    continue 'assign;
                }
            }
            let inv = rho[a].inverse().ok_or_else(|| Error::Invalid("singular lift".into()))?;
            for gamma in &rep.gammas {
                let expect = gamma.scale(&exact(isos[a].sign as i64));
                if &(&rho[a] * gamma) * &inv != expect {
                    continue 'assign;
                }
            }
        }
        let signs: Vec<Exact> = (0..order)
            .map(|a| {
                let base = tangent_base(&isos[a], rep);
                let (r, c) = (0..d * d)
                    .map(|i| (i / d, i % d))
                    .find(|&(r, c)| !base[(r, c)].is_zero())
                    .expect("nonzero base");
                rho[a][(r, c)] / base[(r, c)]
            })
            .collect();
        let phase_twisted = signs.iter().any(|s| !s.im.is_zero());
        out.push(SpinLift {
            twist: twist.to_vec(),
            matrices: rho,
            signs,
            phase_twisted,
        });
    }
    Ok(out)
}
