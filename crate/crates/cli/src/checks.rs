//! Check implementations. Each returns an outcome rather than an error when
//! the property itself fails; errors are reserved for bad inputs.

use std::f64::consts::PI;

use num_complex::Complex64;
use orbifold_core::catalog::{a2_bitorsor, a2_groupoid, a2_mutated, noneffective_circle, pillowcase, rotation_circle, z2_point};
use orbifold_core::clifford::SpinLift;
use orbifold_core::cocycle::{cohomologous, induce_cocycle, induced_bundle, validate_cocycle, Cocycle, EquivariantBundle, SectionFamily};
use orbifold_core::convolution::{convolution_triple_report, fourier_faithfulness_probe, FourierConvolution};
use orbifold_core::exact::{exact, Exact, ExactMatrix, Rational};
use orbifold_core::fourier::{FourierField, ModeWindow};
use orbifold_core::groupoid::{cech_groupoid, is_effective, Arc, ArrowRef, CechCover, Groupoid};
use orbifold_core::morita::{
    cech_bitorsor, compose_homs, fibre_partition_report, find_two_morphism, localize_cech, validate_generalized_hom,
    weak_equivalence_pair, Bitorsor, HomMode, LocalizedBitorsor,
};
use orbifold_core::spectral::{
    assemble_dirac, check_spectral_triple, divergence_residual, induced_dirac, orbifold_integral, spin_correspondence,
    tangent_cocycle_check, DiracSpec, OrbifoldMeasure, Represented, TripleOptions,
};
use orbifold_core::transport::{
    pullback_function, pullback_section, pushforward_function, pushforward_section, trivial_fibre_lift, CircleCovering,
};
use orbifold_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Fixed seed for every randomized check so reports are reproducible.
pub const CHECK_SEED: u64 = 0x5eed_0b1f;
const RANDOM_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub modes: usize,
    pub buffer: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub check: String,
    pub side: String,
    pub index: usize,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub detail: String,
    #[serde(skip)]
    pub spectra: Vec<SpectrumRow>,
}

impl CheckOutcome {
    fn exact(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            check: String::new(),
            passed,
            measured: None,
            tolerance: None,
            detail: detail.into(),
            spectra: Vec::new(),
        }
    }

    fn measured(value: f64, tol: f64, detail: impl Into<String>) -> Self {
        Self {
            check: String::new(),
            passed: value <= tol,
            measured: Some(value),
            tolerance: Some(tol),
            detail: detail.into(),
            spectra: Vec::new(),
        }
    }

    fn with_spectrum(mut self, side: &str, values: &[f64]) -> Self {
        self.spectra.extend(values.iter().enumerate().map(|(index, &eigenvalue)| SpectrumRow {
            check: String::new(),
            side: side.to_string(),
            index,
            eigenvalue,
        }));
        self
    }
}

pub type CheckFn = fn(&Params, Option<f64>) -> Result<CheckOutcome>;

pub struct CheckDef {
    pub name: &'static str,
    pub description: &'static str,
    /// `None` for exact checks.
    pub default_tolerance: Option<f64>,
    pub run: CheckFn,
}

impl CheckDef {
    pub fn execute(&self, p: &Params, tol: Option<f64>) -> Result<CheckOutcome> {
        let mut out = (self.run)(p, tol.or(self.default_tolerance))?;
        out.check = self.name.to_string();
        for row in &mut out.spectra {
            row.check = self.name.to_string();
        }
        Ok(out)
    }
}

fn tol(t: Option<f64>) -> f64 {
    t.expect("numeric checks always carry a tolerance")
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

fn sign_cocycle() -> Cocycle {
    Cocycle::scalar([exact(1), exact(-1)])
}

fn trivial_localization(phi: &Bitorsor) -> Result<LocalizedBitorsor> {
    localize_cech(
        phi,
        &CechCover::trivial(phi.left.object_count()),
        &CechCover::trivial(phi.right.object_count()),
    )
}

fn swap_bundle() -> EquivariantBundle {
    let swap = ExactMatrix::from_integers(&[&[0, 1], &[1, 0]]);
    EquivariantBundle::from_fn(&z2_point(), 2, |a| if a == 0 { ExactMatrix::identity(2) } else { swap.clone() })
}

fn trivial_lift_spec(m: usize, cutoff: usize) -> DiracSpec {
    DiracSpec::new(rotation_circle(m, 2.0 * PI, cutoff), SpinLift::trivial(m, 1, vec![zero()]), cutoff)
}

// a2-example

pub fn bitorsor_axioms(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let r = validate_generalized_hom(&a2_bitorsor(p.n), HomMode::Bitorsor);
    let bad = validate_generalized_hom(&a2_mutated(p.n), HomMode::Bitorsor);
    let detail = match bad.violations.first() {
        Some(v) => format!("{}; mutated table rejected ({} at {})", r.summary(), v.rule, v.witness),
        None => format!("{}; mutated table accepted", r.summary()),
    };
    Ok(CheckOutcome::exact(r.is_valid() && !bad.is_valid(), detail))
}

pub fn fibre_census(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let h = a2_bitorsor(p.n);
    let mut bad = Vec::new();
    for y in 0..h.right.object_count() {
        let f = fibre_partition_report(&h, y)?;
        let rank = h.right.isotropy(y)?.len();
        if !f.holds() || f.block_sizes().iter().any(|&b| b != rank) {
            bad.push(y);
        }
    }
    let detail = if bad.is_empty() {
        format!("{} objects, blocks match isotropy", h.right.object_count())
    } else {
        format!("block census fails at objects {bad:?}")
    };
    Ok(CheckOutcome::exact(bad.is_empty(), detail))
}

pub fn weak_equivalence(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let h = a2_bitorsor(p.n);
    let w = weak_equivalence_pair(&h)?;
    let (l, r) = w.check(&h);
    Ok(CheckOutcome::exact(l.is_valid() && r.is_valid(), format!("{}; {}", l.summary(), r.summary())))
}

pub fn induced_sign_cocycle(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let loc = trivial_localization(&a2_bitorsor(p.n))?;
    let beta = SectionFamily::first_available(&loc)?;
    let g = induce_cocycle(&loc, &sign_cocycle(), &beta)?;
    let r = validate_cocycle(&loc.cech_y.groupoid, &g)?;
    let minus = g.values.iter().filter(|v| **v == ExactMatrix::scalar(exact(-1))).count();
    Ok(CheckOutcome::exact(r.is_valid(), format!("{}; {minus} arrows carry −1", r.summary())))
}

pub fn composition_round_trip(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let h = a2_bitorsor(p.n);
    let c = compose_homs(&h, &h.inverse())?;
    let ok = validate_generalized_hom(&c, HomMode::Bitorsor).is_valid()
        && find_two_morphism(&c, &Bitorsor::identity(&h.left)).found().is_some();
    Ok(CheckOutcome::exact(ok, format!("φ∘φ⁻¹ has {} carrier points", c.carrier_len())))
}

// free-rotation-circle

pub fn quotient_spectrum(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let ind = induced_dirac(&trivial_lift_spec(p.m, p.modes), p.buffer)?;
    let res = ind.spectrum_residual();
    Ok(CheckOutcome::measured(res, tol(t), format!("{} band eigenvalues", ind.upstairs_spectrum.len()))
        .with_spectrum("upstairs", &ind.upstairs_spectrum)
        .with_spectrum("downstairs", &ind.downstairs_spectrum))
}

pub fn quotient_triple(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let ind = induced_dirac(&trivial_lift_spec(p.m, p.modes), p.buffer)?;
    let worst = ind
        .conjugation_residual
        .max(ind.transport_residual)
        .max(ind.representative_residual);
    Ok(CheckOutcome::measured(
        worst,
        tol(t),
        format!(
            "conjugation {:.1e}, transport {:.1e}, representatives {:.1e}",
            ind.conjugation_residual, ind.transport_residual, ind.representative_residual
        ),
    ))
}

pub fn spin_structures(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let cov = CircleCovering::new(&rotation_circle(p.m, 2.0 * PI, p.modes))?;
    let corr = spin_correspondence(&cov)?;
    let arcs = [
        Arc::new(Rational::new(1, 4), Rational::new(3, 8)),
        Arc::new(Rational::new(3, 4), Rational::new(3, 8)),
    ];
    let tangent = tangent_cocycle_check(&cov, &arcs, 64)?;
    let ok = corr.is_bijective() && tangent.mismatches().is_empty();
    Ok(CheckOutcome::exact(
        ok,
        format!(
            "{} lifts upstairs, {} downstairs; {} tangent entries, {} mismatches",
            corr.upstairs.len(),
            corr.downstairs.len(),
            tangent.entries.len(),
            tangent.mismatches().len()
        ),
    ))
}

pub fn orbifold_volume(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let g = rotation_circle(p.m, 2.0 * PI, p.modes);
    volume(&g, 2.0 * PI / p.m as f64, t)
}

fn volume(g: &orbifold_core::groupoid::ActionGroupoid, expect: f64, t: Option<f64>) -> Result<CheckOutcome> {
    let measure = OrbifoldMeasure::single_chart(g)?;
    let one = FourierField::constant(&ModeWindow::functions(g.base.circumferences(), 2), c(1.0));
    let v = orbifold_integral(&measure, &one)?;
    Ok(CheckOutcome::measured((v - c(expect)).norm(), tol(t), format!("∫1 = {:.12} (expected {expect:.12})", v.re)))
}

pub fn divergence(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let td = assemble_dirac(&trivial_lift_spec(p.m, p.modes))?;
    let r = divergence_residual(&td, p.buffer, 8)?;
    Ok(CheckOutcome::measured(r, tol(t), "8 random invariant probe pairs"))
}

// pillowcase-torus

fn pillowcase_spec(p: &Params) -> Result<DiracSpec> {
    DiracSpec::with_search(pillowcase(p.modes), vec![zero(), zero()], p.modes)
}

fn pillowcase_generators() -> Vec<FourierField> {
    let w = ModeWindow::functions(vec![2.0 * PI, 2.0 * PI], 2);
    vec![
        FourierField::from_terms(&w, &[(vec![1, 0], c(0.5)), (vec![-1, 0], c(0.5))]).unwrap(),
        FourierField::from_terms(&w, &[(vec![1, 2], c(1.0)), (vec![-1, -2], c(1.0))]).unwrap(),
    ]
}

fn pillowcase_report(p: &Params) -> Result<orbifold_core::spectral::SpectralTripleReport> {
    let spec = pillowcase_spec(p)?;
    let gens = pillowcase_generators();
    let gens: Vec<&dyn Represented> = gens.iter().map(|g| g as &dyn Represented).collect();
    let opts = TripleOptions {
        buffer: p.buffer,
        doubled: false,
        ..TripleOptions::default()
    };
    check_spectral_triple(&spec, &gens, &opts)
}

pub fn chirality(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let r = pillowcase_report(p)?;
    let Some(chi) = r.chirality else {
        return Ok(CheckOutcome::exact(false, "no chirality operator"));
    };
    let mut out = CheckOutcome::measured(chi.anticommutator, tol(t), format!("ω² = 1 exact: {}", chi.square_exact));
    out.passed &= chi.square_exact;
    Ok(out)
}

pub fn representation_chirality(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let r = pillowcase_report(p)?;
    let g = pillowcase(p.modes);
    let w = ModeWindow::functions(vec![2.0 * PI, 2.0 * PI], 2);
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let conv: Vec<FourierConvolution> = (0..2)
        .map(|_| FourierConvolution {
            groupoid: g.clone(),
            components: (0..g.order())
                .map(|_| {
                    let mut f = FourierField::zeros(&w, 1);
                    for v in f.coeffs.iter_mut() {
                        *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    }
                    f
                })
                .collect(),
        })
        .collect();
    let opts = TripleOptions {
        buffer: p.buffer,
        doubled: false,
        ..TripleOptions::default()
    };
    let rc = convolution_triple_report(&pillowcase_spec(p)?, &conv, &opts)?;
    let worst = r
        .commutators
        .iter()
        .chain(&rc.commutators)
        .map(|cm| cm.chirality_commutator.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    Ok(CheckOutcome::measured(worst, tol(t), format!("{} generators", r.commutators.len() + rc.commutators.len())))
}

pub fn growth_exponent(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let r = pillowcase_report(p)?;
    Ok(CheckOutcome::measured(
        r.growth_relative_error,
        tol(t),
        format!("exponent {:.4} against dimension 2", r.growth_exponent),
    )
    .with_spectrum("invariant", &r.eigenvalues))
}

pub fn pillowcase_divergence(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let td = assemble_dirac(&pillowcase_spec(p)?)?;
    let r = divergence_residual(&td, p.buffer, 4)?;
    Ok(CheckOutcome::measured(r, tol(t), "4 random invariant probe pairs"))
}

// noneffective-circle

pub fn effectiveness(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let e = is_effective(&Groupoid::Action(noneffective_circle(p.modes)))?;
    let element = |r: &ArrowRef| match r {
        ArrowRef::Action { element, .. } => element.to_string(),
        ArrowRef::Index(i) => format!("arrow {i}"),
    };
    let detail = match &e.witness {
        Some((a, b)) => format!("elements {} and {} have the same germ", element(a), element(b)),
        None => "reported effective".to_string(),
    };
    Ok(CheckOutcome::exact(!e.effective && e.witness.is_some(), detail))
}

pub fn faithfulness(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let g = noneffective_circle(p.modes);
    let lift = vec![ExactMatrix::identity(1); g.order()];
    let probe = fourier_faithfulness_probe(&g, &lift, p.modes, p.buffer)?;
    let spec = DiracSpec::new(g.clone(), SpinLift::trivial(g.order(), 1, vec![zero()]), p.modes);
    let report = convolution_triple_report(&spec, &[FourierConvolution::unit(&g)], &TripleOptions::default())?;
    let ok = !probe.faithful && probe.faithful == probe.effective && report.faithful == Some(false);
    Ok(CheckOutcome::exact(
        ok,
        format!("kernel dimension {} within degree {}", probe.kernel_dimension, p.buffer),
    ))
}

pub fn noneffective_volume(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    volume(&noneffective_circle(p.modes), PI, t)
}

// cech-localization

pub fn cech_bitorsor_valid(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let g = a2_groupoid(p.n);
    let (b, cech) = cech_bitorsor(&g, &CechCover::cyclic_pairs(p.n))?;
    let r = validate_generalized_hom(&b, HomMode::Bitorsor);
    let orbits = cech.collapsed_orbits().len() == g.orbits().len();
    Ok(CheckOutcome::exact(r.is_valid() && orbits, format!("{}; orbits preserved: {orbits}", r.summary())))
}

pub fn localized_bitorsor(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let h = a2_bitorsor(p.n);
    let (cx, cy) = (CechCover::trivial(1), CechCover::cyclic_pairs(p.n));
    let loc = localize_cech(&h, &cx, &cy)?;
    let r = validate_generalized_hom(&loc.bitorsor, HomMode::Bitorsor);
    let (bx, _) = cech_bitorsor(&h.left, &cx)?;
    let (by, _) = cech_bitorsor(&h.right, &cy)?;
    let through = compose_homs(&compose_homs(&bx, &loc.bitorsor)?, &by.inverse())?;
    let recovered = find_two_morphism(&through, &h).found().is_some();
    Ok(CheckOutcome::exact(
        r.is_valid() && recovered,
        format!("{}; composite 2-isomorphic to φ: {recovered}", r.summary()),
    ))
}

pub fn cech_orbits(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let g = a2_groupoid(p.n);
    let mut ok = true;
    for cover in [CechCover::trivial(p.n), CechCover::cyclic_pairs(p.n), CechCover::singletons(p.n)] {
        let c = cech_groupoid(&g, &cover)?;
        ok &= c.collapsed_orbits().len() == g.orbits().len();
    }
    Ok(CheckOutcome::exact(ok, format!("{} orbit(s) on three covers", g.orbits().len())))
}

// cocycle-transport

pub fn section_independence(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let n = p.n;
    let loc = trivial_localization(&a2_bitorsor(n))?;
    let b1 = SectionFamily::from_rule(&loc, |_, y| (0, y))?;
    let b2 = SectionFamily::from_rule(&loc, |_, y| (0, if y == 0 { n } else { y }))?;
    let g1 = induce_cocycle(&loc, &sign_cocycle(), &b1)?;
    let g2 = induce_cocycle(&loc, &sign_cocycle(), &b2)?;
    let cy = &loc.cech_y.groupoid;
    let search = cohomologous(cy, &g1, &g2)?;
    let ok = match search.found() {
        Some(lambda) => g1.twisted(cy, lambda)? == g2,
        None => false,
    };
    Ok(CheckOutcome::exact(ok, "explicit coboundary between two section families"))
}

pub fn finite_transport(p: &Params, _: Option<f64>) -> Result<CheckOutcome> {
    let phi = a2_bitorsor(p.n);
    let xi = swap_bundle();
    let induced = induced_bundle(&phi, &xi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let mut ok = true;
    for _ in 0..RANDOM_SAMPLES {
        let f = vec![Exact::new(Rational::new(rng.random_range(-9..=9), rng.random_range(1..=4)), zero())];
        let v = exact(rng.random_range(-9..=9));
        let psi = vec![vec![v, v]];
        let pf = pushforward_function(&phi, &f)?;
        ok &= pullback_function(&phi, &pf)? == f;
        let ps = pushforward_section(&phi, &xi, &induced, &psi)?;
        ok &= pullback_section(&phi, &xi, &induced, &ps)? == psi;
        let fpsi = vec![psi[0].iter().map(|u| f[0] * u).collect::<Vec<_>>()];
        let lhs = pushforward_section(&phi, &xi, &induced, &fpsi)?;
        let rhs: Vec<Vec<Exact>> = ps.iter().zip(&pf).map(|(s, g)| s.iter().map(|u| g * u).collect()).collect();
        ok &= lhs == rhs;
    }
    Ok(CheckOutcome::exact(ok, format!("{RANDOM_SAMPLES} random functions and sections, module law")))
}

pub fn circle_transport(p: &Params, t: Option<f64>) -> Result<CheckOutcome> {
    let (m, cutoff) = (p.m, p.modes);
    let cov = CircleCovering::new(&rotation_circle(m, 2.0 * PI, cutoff))?;
    let up = ModeWindow::functions(vec![2.0 * PI], cutoff);
    let down = ModeWindow::functions(vec![2.0 * PI / m as f64], cutoff / m + 1);
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let top = (cutoff / (2 * m)) as i64;
    let mut random = || {
        let terms: Vec<(Vec<i64>, Complex64)> = (-top..=top)
            .map(|j| (vec![j * m as i64], Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        FourierField::from_terms(&up, &terms)
    };
    let (mut round, mut module) = (0.0f64, 0.0f64);
    for _ in 0..RANDOM_SAMPLES {
        let (f, psi) = (random()?, random()?);
        let pf = cov.pushforward(&f, &lift, &down)?;
        round = round.max(cov.pullback(&pf.field, &lift, &up)?.max_abs_diff(&f));
        let pp = cov.pushforward(&psi, &lift, &down)?;
        let lhs = cov.pushforward(&f.times_function(&psi)?.rewindow(&up)?, &lift, &down)?.field;
        for s in 0..4 * cutoff {
            let y = 2.0 * PI * s as f64 / (4 * cutoff * m) as f64;
            let rhs = pf.field.evaluate(&[y])[0] * pp.field.evaluate(&[y])[0];
            module = module.max((lhs.evaluate(&[y])[0] - rhs).norm());
        }
    }
    Ok(CheckOutcome::measured(
        round.max(module),
        tol(t),
        format!("round trip {round:.1e}, module law {module:.1e}"),
    ))
}
