use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use super::finite::ConvolutionTerm;
use crate::error::{Error, Result};
use crate::exact::{exact, exact_complex, to_c64, Exact, ExactMatrix, Rational};
use crate::fourier::{rational_f64, FourierField, ModeWindow};
use crate::groupoid::{is_effective, ActionGroupoid, Groupoid};
use crate::linalg::{add, mul, numerical_kernel, zero, Op};
use crate::spectral::{
    check_spectral_triple, function_gradient, DiracSpec, Represented, SpectralTripleReport, TripleOptions,
    TruncatedDirac,
};

/// Relative singular-value cut for the numerical kernel fallback.
pub const KERNEL_TOL: f64 = 1e-10;

/// Element of `C_c^∞(G ⋉ T)`: for each group element `g`, the function
/// `y ↦ f(g, y)` of the source point.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierConvolution {
    pub groupoid: ActionGroupoid,
    pub components: Vec<FourierField>,
}

impl FourierConvolution {
    pub fn zero(g: &ActionGroupoid, window: &ModeWindow) -> Self {
        Self {
            groupoid: g.clone(),
            components: vec![FourierField::zeros(window, 1); g.order()],
        }
    }

    /// `f` supported on the arrows of `element`.
    pub fn on_element(g: &ActionGroupoid, element: usize, f: FourierField) -> Result<Self> {
        if element >= g.order() {
            return Err(Error::UnknownArrow(format!("group element {element}")));
        }
        let mut out = Self::zero(g, &f.window);
        out.components[element] = f;
        Ok(out)
    }

    /// Unit: the constant one on the identity component.
    pub fn unit(g: &ActionGroupoid) -> Self {
        let w = ModeWindow::functions(g.base.circumferences(), 0);
        Self::on_element(g, g.group.identity(), FourierField::constant(&w, Complex64::new(1.0, 0.0)))
            .expect("identity element")
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(FourierField::degree).max().unwrap_or(0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.groupoid.name != other.groupoid.name || self.groupoid.order() != other.groupoid.order() {
            return Err(Error::GroupoidMismatch(format!(
                "{} and {}",
                self.groupoid.name, other.groupoid.name
            )));
        }
        Ok(())
    }

    pub fn to_terms(&self) -> Vec<ConvolutionTerm> {
        let mut out = Vec::new();
        for (g, f) in self.components.iter().enumerate() {
            for i in 0..f.window.mode_count() {
                let z = f.coeffs[i];
                if z.norm() > 0.0 {
                    out.push(ConvolutionTerm {
                        arrow: None,
                        element: Some(g),
                        mode: Some(f.window.mode(i)),
                        re: z.re,
                        im: z.im,
                    });
                }
            }
        }
        out
    }

    pub fn from_terms(g: &ActionGroupoid, cutoff: usize, terms: &[ConvolutionTerm]) -> Result<Self> {
        let w = ModeWindow::functions(g.base.circumferences(), cutoff);
        let mut out = Self::zero(g, &w);
        for t in terms {
            let (Some(e), Some(k)) = (t.element, t.mode.as_ref()) else {
                return Err(Error::Invalid("Fourier terms need an element and a mode".into()));
            };
            let comp = out
                .components
                .get_mut(e)
                .ok_or_else(|| Error::UnknownArrow(format!("group element {e}")))?;
            let i = w
                .index_of(k)
                .ok_or_else(|| Error::BandLimit(format!("mode {k:?} outside cutoff {cutoff}")))?;
            comp.coeffs[i] += Complex64::new(t.re, t.im);
        }
        Ok(out)
    }
}

fn widen(f: &FourierField, cutoff: usize) -> Result<FourierField> {
    f.rewindow(&f.window.with_cutoff(cutoff.max(f.window.cutoff)))
}

/// `(f₁ * f₂)_g(y) = Σ_{hk = g} f₁_h(k·y) f₂_k(y)`, the counting-measure
/// product on arrows `(g, y): y → g·y`.
pub fn convolve_fourier(f1: &FourierConvolution, f2: &FourierConvolution) -> Result<FourierConvolution> {
    f1.check_same(f2)?;
    let g = &f1.groupoid;
    let isos = g.isometries();
    let cutoff = f1.degree() + f2.degree();
    let w = ModeWindow::functions(g.base.circumferences(), cutoff);
    let mut out = FourierConvolution::zero(g, &w);
    for h in 0..g.order() {
        for k in 0..g.order() {
            let a = f1.components[h].compose_isometry(&isos[k])?;
            let prod = widen(&f2.components[k].times_function(&a)?, cutoff)?;
            let e = g.group.mul(h, k);
            out.components[e] = widen(&out.components[e], cutoff)?.add(&prod.rewindow(&w)?)?;
        }
    }
    Ok(out)
}

impl Represented for FourierConvolution {
    fn label(&self) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, f)| f.coeffs.iter().any(|z| z.norm() > 0.0))
            .map(|(g, f)| format!("{}:{}", self.groupoid.group.label(g), f.label()))
            .collect();
        format!("convolution[{}]", parts.join(" + "))
    }

    fn degree(&self) -> usize {
        FourierConvolution::degree(self)
    }

    /// `π(f) = Σ_g U_g M_{f_g}`.
    fn represent(&self, td: &TruncatedDirac) -> Result<Op> {
        self.check_dirac(td)?;
        let n = td.dim();
        let mut out = zero(n, n);
        for (g, f) in self.components.iter().enumerate() {
            let m = f.represent(td)?;
            out = add(&out, &mul(&td.actions[g], &m));
        }
        Ok(out)
    }

    /// `Σ_g U_g Σ_j M_{∂_j f_g} c(e^j)`, using `[D, U_g] = 0`.
    fn gradient(&self, td: &TruncatedDirac) -> Result<Op> {
        self.check_dirac(td)?;
        let n = td.dim();
        let mut out = zero(n, n);
        for (g, f) in self.components.iter().enumerate() {
            out = add(&out, &mul(&td.actions[g], &function_gradient(f, td)));
        }
        Ok(out)
    }
}

impl FourierConvolution {
    fn check_dirac(&self, td: &TruncatedDirac) -> Result<()> {
        let g = &td.spec.groupoid;
        if g.name != self.groupoid.name || g.order() != self.components.len() {
            return Err(Error::GroupoidMismatch(format!(
                "element on {}, Dirac operator on {}",
                self.groupoid.name, g.name
            )));
        }
        Ok(())
    }
}

/// `e^{−2πi t}` when it is a fourth root of unity.
fn exact_phase(t: Rational) -> Option<Exact> {
    let q = t * 4;
    if !q.is_integer() {
        return None;
    }
    Some(match q.to_integer().rem_euclid(4) {
        0 => exact(1),
        1 => exact_complex(0, -1),
        2 => exact(-1),
        _ => exact_complex(0, 1),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierFaithfulness {
    pub faithful: bool,
    /// Kernel computed in exact arithmetic (all phases were fourth roots of
    /// unity) rather than by SVD rank.
    pub exact: bool,
    pub kernel_dimension: usize,
    pub witness: Option<FourierConvolution>,
    /// Agreement with effectiveness of the groupoid.
    pub effective: bool,
}

/// Kernel of `f ↦ π(f)` over elements of degree `≤ degree`, with `π(f)`
/// restricted to interior columns at cutoff `cutoff` of an untwisted field
/// bundle with fibre lift `lift`.
pub fn fourier_faithfulness_probe(
    g: &ActionGroupoid,
    lift: &[ExactMatrix],
    cutoff: usize,
    degree: usize,
) -> Result<FourierFaithfulness> {
    if lift.len() != g.order() {
        return Err(Error::Shape("one fibre matrix per group element".into()));
    }
    if degree > cutoff {
        return Err(Error::BandLimit(format!("degree {degree} exceeds cutoff {cutoff}")));
    }
    let r = lift[0].rows();
    let circ = g.base.circumferences();
    let w = ModeWindow::functions(circ.clone(), cutoff);
    let fw = ModeWindow::functions(circ, degree);
    let isos = g.isometries();
    let cols: Vec<usize> = w.interior_indices(degree, r);
    let rows = w.mode_count() * r;
    let basis: Vec<(usize, Vec<i64>)> = (0..g.order())
        .flat_map(|e| fw.modes().into_iter().map(move |l| (e, l)))
        .collect();

    // entries of π(δ_e ⊗ e_l) on column (k, c): ρ(e) maps u_c, mode k+l moves
    // to s(k+l) with phase e^{−2πi s(k+l)·r}
    let mut entries: Vec<Vec<(usize, usize, Rational, Exact)>> = Vec::new();
    for (e, l) in &basis {
        let iso = &isos[*e];
        let mut col_entries = Vec::new();
        for (j, &col) in cols.iter().enumerate() {
            let (mode, c) = (col / r, col % r);
            let kl: Vec<i64> = w.mode(mode).iter().zip(l).map(|(a, b)| a + b).collect();
            let moved: Vec<i64> = kl.iter().map(|&x| iso.sign as i64 * x).collect();
            let Some(t) = w.index_of(&moved) else {
                return Err(Error::BandLimit("probe column leaves the window".into()));
            };
            let turns: Rational = moved.iter().zip(&iso.shift).map(|(&k, &s)| s * k).sum();
            for d in 0..r {
                let v = lift[*e][(d, c)];
                if !v.is_zero() {
                    col_entries.push((t * r + d, j, turns, v));
                }
            }
        }
        entries.push(col_entries);
    }
    let n_rows = rows * cols.len();
    let all_exact = entries.iter().flatten().all(|(_, _, t, _)| exact_phase(*t).is_some());
    let effective = is_effective(&Groupoid::Action(g.clone()))?.effective;

    let kernel: Vec<Vec<Complex64>> = if all_exact {
        let mut m = ExactMatrix::zeros(n_rows, basis.len());
        for (b, col_entries) in entries.iter().enumerate() {
            for &(row, j, t, v) in col_entries {
                m[(j * rows + row, b)] += exact_phase(t).expect("checked") * v;
            }
        }
        m.nullspace()
            .into_iter()
            .map(|v| v.iter().map(to_c64).collect())
            .collect()
    } else {
        let mut m = DMatrix::<Complex64>::zeros(n_rows, basis.len());
        for (b, col_entries) in entries.iter().enumerate() {
            for &(row, j, t, v) in col_entries {
                let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * rational_f64(&t));
                m[(j * rows + row, b)] += phase * to_c64(&v);
            }
        }
        numerical_kernel(&m, KERNEL_TOL)
            .1
            .into_iter()
            .map(|v| v.iter().copied().collect())
            .collect()
    };

    let witness = kernel.first().map(|v| {
        let mut f = FourierConvolution::zero(g, &fw);
        for ((e, l), z) in basis.iter().zip(v) {
            let i = fw.index_of(l).expect("basis mode");
            f.components[*e].coeffs[i] += z;
        }
        f
    });
    Ok(FourierFaithfulness {
        faithful: kernel.is_empty(),
        exact: all_exact,
        kernel_dimension: kernel.len(),
        witness,
        effective,
    })
}

/// Spectral-triple checks with `π` the convolution representation; flags
/// non-effective groupoids as not faithful.
pub fn convolution_triple_report(
    spec: &DiracSpec,
    generators: &[FourierConvolution],
    opts: &TripleOptions,
) -> Result<SpectralTripleReport> {
    let gens: Vec<&dyn Represented> = generators.iter().map(|g| g as &dyn Represented).collect();
    let mut report = check_spectral_triple(spec, &gens, opts)?;
    let effective = is_effective(&Groupoid::Action(spec.groupoid.clone()))?.effective;
    report.faithful = Some(effective);
    if !effective {
        report.notes.push("representation not faithful: groupoid is not effective".into());
    }
    Ok(report)
}
