use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::fourier::{action_operator, analyze_circle, derivative_operator, rational_f64, FourierField, ModeWindow};
use crate::groupoid::{wrap, ActionGroupoid, BaseSpace};
use crate::linalg::{apply, op_from_triplets, Op};

/// Largest coefficient change tolerated by the invariance check.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// The bitorsor between `Z_m ⋉ Circle(L)` (free rotations) and the quotient
/// circle of circumference `L/m`, with carrier the upstairs circle, `ϱ = id`
/// and `α` the projection. Local sections are the branches
/// `β_c(y) = y + cL/m`.
#[derive(Debug, Clone)]
pub struct CircleCovering {
    pub upstairs: ActionGroupoid,
    pub degree: usize,
    /// Element acting by `x ↦ x + L/m`.
    pub generator: usize,
    /// `generator^c` for `c = 0..m`.
    pub powers: Vec<usize>,
    pub circumference: f64,
}

/// Result of a pushforward with the largest disagreement between the two arc
/// branches on their overlaps.
#[derive(Debug, Clone)]
pub struct Pushed {
    pub field: FourierField,
    pub overlap_residual: f64,
}

impl CircleCovering {
    pub fn new(g: &ActionGroupoid) -> Result<Self> {
        let BaseSpace::FourierCircle { circumference, .. } = g.base else {
            return Err(Error::Unsupported("coverings are built for circle actions".into()));
        };
        let m = g.order();
        let isos = g.isometries();
        if isos.iter().any(|i| i.sign < 0) {
            return Err(Error::Unsupported("covering needs rotations only".into()));
        }
        let free = isos.iter().filter(|i| i.is_identity()).count() == 1;
        if !free {
            return Err(Error::Unsupported(format!("{} does not act freely", g.name)));
        }
        let step = wrap(Rational::new(1, m as i64));
        let generator = isos
            .iter()
            .position(|i| i.shift[0] == step)
            .ok_or_else(|| Error::Unsupported("no rotation by L/m".into()))?;
        let mut powers = vec![g.group.identity()];
        for c in 1..m {
            powers.push(g.group.mul(powers[c - 1], generator));
        }
        Ok(Self {
            upstairs: g.clone(),
            degree: m,
            generator,
            powers,
            circumference,
        })
    }

    pub fn quotient_circumference(&self) -> f64 {
        self.circumference / self.degree as f64
    }

    pub fn quotient(&self, cutoff: usize) -> ActionGroupoid {
        crate::catalog::trivial_action(BaseSpace::circle(self.quotient_circumference(), cutoff))
    }

    /// Downstairs twist `δ'` reproducing the invariant modes: every invariant
    /// `k` has `(k + δ)/m − δ' ∈ ℤ`. The lift phase of the generator must be a
    /// fourth root of unity.
    pub fn downstairs_twist(&self, twist: Rational, generator_phase: Complex64) -> Result<Rational> {
        let turns = generator_phase.arg() / (2.0 * PI);
        let quarter = (turns * 4.0).round();
        if (turns * 4.0 - quarter).abs() > 1e-12 {
            return Err(Error::Unsupported("lift phase is not a fourth root of unity".into()));
        }
        let theta = Rational::new((quarter as i64).rem_euclid(4), 4);
        let m = Rational::from_integer(self.degree as i64);
        let mut found: Option<Rational> = None;
        for k in 0..self.degree as i64 {
            // U_g e_k = e^{−2πi(k+δ)/m} ε e_k is invariant iff (k+δ)/m − θ ∈ ℤ
            let s = (Rational::from_integer(k) + twist) / m;
            if (s - theta).is_integer() {
                let frac = s - s.floor();
                if found.is_some_and(|f| f != frac) {
                    return Err(Error::Invalid("invariant modes disagree on the twist".into()));
                }
                found = Some(frac);
            }
        }
        let d = found.ok_or_else(|| Error::Invalid("no invariant modes".into()))?;
        if d != Rational::from_integer(0) && d != Rational::new(1, 2) {
            return Err(Error::Unsupported(format!("twist {d} is not a spin structure downstairs")));
        }
        Ok(d)
    }

    /// Downstairs mode `j` with `j + δ' = (k + δ)/m`, if integral.
    pub fn mode_down(&self, k: i64, twist: Rational, down_twist: Rational) -> Option<i64> {
        let j = (Rational::from_integer(k) + twist) / Rational::from_integer(self.degree as i64) - down_twist;
        j.is_integer().then(|| j.to_integer())
    }

    /// Upstairs mode `k = m(j + δ') − δ`.
    pub fn mode_up(&self, j: i64, twist: Rational, down_twist: Rational) -> i64 {
        ((Rational::from_integer(j) + down_twist) * Rational::from_integer(self.degree as i64) - twist).to_integer()
    }

    /// Downstairs window for an upstairs window.
    pub fn down_window(&self, up: &ModeWindow, down_twist: Rational) -> ModeWindow {
        let cutoff = up.cutoff / self.degree + 1;
        ModeWindow::new(vec![self.quotient_circumference()], cutoff, vec![down_twist]).expect("spin twist")
    }

    /// Largest `‖U_g ψ − ψ‖_∞` over the group, with the worst element.
    pub fn invariance_defect(&self, field: &FourierField, lift: &[DMatrix<Complex64>]) -> (f64, usize) {
        let mut worst = (0.0, 0);
        for (e, iso) in self.upstairs.isometries().iter().enumerate() {
            let u = action_operator(&field.window, iso, &lift[e]);
            let moved = apply(&u, &field.coeffs);
            let d = (&moved - &field.coeffs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if d > worst.0 {
                worst = (d, e);
            }
        }
        worst
    }

    fn check_invariant(&self, field: &FourierField, lift: &[DMatrix<Complex64>]) -> Result<()> {
        if lift.len() != self.upstairs.order() || lift.iter().any(|m| m.nrows() != field.rank) {
            return Err(Error::Shape("one fibre matrix per group element".into()));
        }
        let (d, e) = self.invariance_defect(field, lift);
        if d > INVARIANCE_TOL {
            return Err(Error::NotInvariant(format!(
                "moved by {} (defect {d:e})",
                self.upstairs.group.label(e)
            )));
        }
        Ok(())
    }

    /// `φ_#`: samples `ψ'(y) = ρ(g^c)⁻¹ ψ(β_c(y))` on two overlapping arcs of
    /// the quotient (branch 0 on the first, branch 1 on the second), then
    /// analyzes the samples on the downstairs window `target`.
    pub fn pushforward(&self, field: &FourierField, lift: &[DMatrix<Complex64>], target: &ModeWindow) -> Result<Pushed> {
        self.check_invariant(field, lift)?;
        let (twist, down_twist) = (field.window.twist[0], target.twist[0]);
        for i in 0..field.window.mode_count() {
            let k = field.window.mode(i)[0];
            if (0..field.rank).all(|c| field.coeffs[i * field.rank + c].norm() <= INVARIANCE_TOL) {
                continue;
            }
            match self.mode_down(k, twist, down_twist) {
                Some(j) if target.index_of(&[j]).is_some() => {}
                Some(j) => return Err(Error::BandLimit(format!("mode {k} lands on {j} outside the target window"))),
                None => return Err(Error::NotInvariant(format!("mode {k} has no downstairs partner"))),
            }
        }
        let m = self.degree;
        let lq = self.quotient_circumference();
        let n = target.mode_count();
        let overlap = (n / 8).max(1);
        let inv: Vec<DMatrix<Complex64>> = (0..m.min(3))
            .map(|c| lift[self.powers[c % m]].clone().try_inverse().expect("unitary lift"))
            .collect();
        let branch = |c: usize, y: f64| -> DVector<Complex64> {
            let v = DVector::from_vec(field.evaluate(&[y + c as f64 * self.circumference / m as f64]));
            &inv[c] * v
        };
        let untwist = Complex64::from_polar(1.0, -2.0 * PI * rational_f64(&down_twist));
        let mut samples = Vec::with_capacity(n);
        let mut residual: f64 = 0.0;
        for p in 0..n {
            let y = lq * p as f64 / n as f64;
            let first = p <= n / 2 + overlap;
            let second = p + overlap >= n / 2 || p <= overlap;
            let on_first = || branch(0, y);
            let on_second = || {
                if p <= overlap && m > 1 {
                    // the second arc reaches past the seam: y is y + L/m there
                    branch(1, y + lq) * untwist
                } else {
                    branch(1.min(m - 1), y)
                }
            };
            let v = if p < n / 2 || m == 1 { on_first() } else { on_second() };
            if first && second && m > 1 {
                residual = residual.max((on_first() - on_second()).camax());
            }
            samples.push(v.iter().copied().collect::<Vec<_>>());
        }
        Ok(Pushed {
            field: analyze_circle(target, field.rank, &samples)?,
            overlap_residual: residual,
        })
    }

    /// `A_φ`: samples `ψ(x) = ρ(g^c) ψ'(x − cL/m)` with `c = ⌊xm/L⌋` on the
    /// upstairs grid and analyzes on `target`.
    pub fn pullback(&self, field: &FourierField, lift: &[DMatrix<Complex64>], target: &ModeWindow) -> Result<FourierField> {
        let (twist, down_twist) = (target.twist[0], field.window.twist[0]);
        for i in 0..field.window.mode_count() {
            if (0..field.rank).all(|c| field.coeffs[i * field.rank + c].norm() <= INVARIANCE_TOL) {
                continue;
            }
            let k = self.mode_up(field.window.mode(i)[0], twist, down_twist);
            if target.index_of(&[k]).is_none() {
                return Err(Error::BandLimit(format!("mode {k} outside the upstairs window")));
            }
        }
        let n = target.mode_count();
        let m = self.degree;
        let lq = self.quotient_circumference();
        let samples: Vec<Vec<Complex64>> = (0..n)
            .map(|p| {
                let c = p * m / n;
                let y = self.circumference * p as f64 / n as f64 - c as f64 * lq;
                let v = DVector::from_vec(field.evaluate(&[y]));
                (&lift[self.powers[c]] * v).iter().copied().collect()
            })
            .collect();
        let out = analyze_circle(target, field.rank, &samples)?;
        self.check_invariant(&out, lift)?;
        Ok(out)
    }

    /// Partial permutation `U_φ: e_k ↦ e'_j`, `j + δ' = (k + δ)/m`, from the
    /// upstairs window to the downstairs window.
    pub fn mode_map(&self, up: &ModeWindow, down: &ModeWindow, rank: usize) -> Op {
        let (t, d) = (up.twist[0], down.twist[0]);
        let mut entries = Vec::new();
        for i in 0..up.mode_count() {
            let k = up.mode(i)[0];
            if let Some(j) = self.mode_down(k, t, d).and_then(|j| down.index_of(&[j])) {
                for c in 0..rank {
                    entries.push((j * rank + c, i * rank + c, Complex64::new(1.0, 0.0)));
                }
            }
        }
        op_from_triplets(down.mode_count() * rank, up.mode_count() * rank, entries)
    }

    /// The relabelling oracle: coefficients moved along `U_φ`.
    pub fn relabel_down(&self, field: &FourierField, down: &ModeWindow) -> FourierField {
        let u = self.mode_map(&field.window, down, field.rank);
        FourierField {
            window: down.clone(),
            rank: field.rank,
            coeffs: apply(&u, &field.coeffs),
        }
    }
}

/// Trivial lift on a rank-`r` fibre for every group element.
pub fn trivial_fibre_lift(g: &ActionGroupoid, rank: usize) -> Vec<DMatrix<Complex64>> {
    vec![DMatrix::identity(rank, rank); g.order()]
}

/// `k`-form `w dx` on a circle (`k ∈ {0, 1}`), in arc-length coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantForm {
    pub degree: usize,
    pub coefficient: FourierField,
}

impl InvariantForm {
    pub fn function(f: FourierField) -> Self {
        Self {
            degree: 0,
            coefficient: f,
        }
    }

    pub fn one_form(w: FourierField) -> Self {
        Self {
            degree: 1,
            coefficient: w,
        }
    }

    pub fn exterior_derivative(&self) -> Self {
        if self.degree == 1 {
            return Self::one_form(FourierField::zeros(&self.coefficient.window, 1));
        }
        Self::one_form(self.coefficient.derivative(0))
    }
}

/// Local pullbacks `(ϱ∘β_c)^*Ω` glued on the two arcs; the branches have unit
/// derivative so the coefficient transports like a function.
pub fn pushforward_form(cov: &CircleCovering, form: &InvariantForm, cutoff: usize) -> Result<(InvariantForm, f64)> {
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let target = ModeWindow::functions(vec![cov.quotient_circumference()], cutoff);
    let pushed = cov.pushforward(&form.coefficient, &lift, &target)?;
    Ok((
        InvariantForm {
            degree: form.degree,
            coefficient: pushed.field,
        },
        pushed.overlap_residual,
    ))
}

/// Inverse transport of forms (pullback along the covering projection).
pub fn pullback_form(cov: &CircleCovering, form: &InvariantForm, cutoff: usize) -> Result<InvariantForm> {
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let target = ModeWindow::functions(vec![cov.circumference], cutoff);
    Ok(InvariantForm {
        degree: form.degree,
        coefficient: cov.pullback(&form.coefficient, &lift, &target)?,
    })
}

/// `∇ = d + iA dx` with a `rank × rank` matrix-valued potential stored as a
/// field with `rank²` components (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct CircleConnection {
    pub rank: usize,
    pub potential: FourierField,
}

impl CircleConnection {
    pub fn flat(circumference: f64, rank: usize) -> Self {
        Self {
            rank,
            potential: FourierField::zeros(&ModeWindow::functions(vec![circumference], 0), rank * rank),
        }
    }

    /// Constant scalar potential `a·I`.
    pub fn constant(circumference: f64, rank: usize, a: f64) -> Self {
        let w = ModeWindow::functions(vec![circumference], 0);
        Self {
            rank,
            potential: FourierField::from_fn(&w, rank * rank, |_, c| {
                Complex64::new(if c / rank == c % rank { a } else { 0.0 }, 0.0)
            }),
        }
    }

    /// `∇_{∂x}` on a section window.
    pub fn covariant_derivative(&self, window: &ModeWindow) -> Op {
        let r = self.rank;
        let d = derivative_operator(window, r, 0);
        let p = &self.potential;
        let mut entries: Vec<(usize, usize, Complex64)> = d.triplet_iter().map(|(a, b, v)| (a, b, *v)).collect();
        for j in 0..p.window.mode_count() {
            let l = p.window.mode(j)[0];
            for i in 0..window.mode_count() {
                let k = window.mode(i)[0];
                let Some(t) = window.index_of(&[k + l]) else {
                    continue;
                };
                for e in 0..r * r {
                    let v = p.coeffs[j * r * r + e];
                    if !v.is_zero() {
                        entries.push((t * r + e / r, i * r + e % r, Complex64::new(0.0, 1.0) * v));
                    }
                }
            }
        }
        let n = window.mode_count() * r;
        op_from_triplets(n, n, entries)
    }

    /// `∇_V ψ = v·∇_{∂x}ψ` on a window wide enough to hold the result.
    pub fn along(&self, v: &FourierField, psi: &FourierField) -> Result<FourierField> {
        let wide = psi.window.with_cutoff(psi.window.cutoff + self.potential.window.cutoff);
        let psi_w = psi.rewindow(&wide)?;
        let d = FourierField {
            coeffs: apply(&self.covariant_derivative(&wide), &psi_w.coeffs),
            ..psi_w
        };
        d.times_function(v)
    }

    /// The potential commutes with every lift matrix.
    pub fn is_invariant(&self, cov: &CircleCovering, lift: &[DMatrix<Complex64>]) -> bool {
        let r = self.rank;
        let w = &self.potential.window;
        let scalar_lift = trivial_fibre_lift(&cov.upstairs, r * r);
        if cov.invariance_defect(&self.potential, &scalar_lift).0 > INVARIANCE_TOL {
            return false;
        }
        (0..w.mode_count()).all(|i| {
            let a = DMatrix::from_fn(r, r, |x, y| self.potential.coeffs[i * r * r + x * r + y]);
            lift.iter().all(|m| (m * &a - &a * m).camax() <= INVARIANCE_TOL)
        })
    }
}

/// `φ_#∇ = φ_# ∘ ∇ ∘ φ_#⁻¹`; for the covering the potential transports as a
/// matrix of functions.
pub fn induce_connection(cov: &CircleCovering, conn: &CircleConnection, lift: &[DMatrix<Complex64>]) -> Result<CircleConnection> {
    if !conn.is_invariant(cov, lift) {
        return Err(Error::NotInvariant("connection potential is not invariant".into()));
    }
    let r = conn.rank;
    let scalar_lift = trivial_fibre_lift(&cov.upstairs, r * r);
    let target = ModeWindow::functions(
        vec![cov.quotient_circumference()],
        conn.potential.window.cutoff / cov.degree + 1,
    );
    let pushed = cov.pushforward(&conn.potential, &scalar_lift, &target)?;
    Ok(CircleConnection {
        rank: r,
        potential: pushed.field,
    })
}

/// Pointwise pairing `⟨a(x), b(x)⟩` as an untwisted scalar function.
pub fn pairing_function(a: &FourierField, b: &FourierField) -> Result<FourierField> {
    if a.window != b.window || a.rank != b.rank {
        return Err(Error::Shape("paired fields live on different windows".into()));
    }
    let w = &a.window;
    let (lo, hi) = w.axis_range(0);
    let span = (hi - lo) as usize;
    let out = ModeWindow::functions(w.circumferences.clone(), span);
    Ok(FourierField::from_fn(&out, 1, |l, _| crate::spectral::pairing_mode(a, b, l)))
}
