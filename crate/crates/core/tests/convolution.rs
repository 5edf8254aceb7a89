use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use orbifold_core::catalog::{a2_action, a2_groupoid, noneffective_circle, pillowcase, rotation_circle, z2_point};
use orbifold_core::clifford::SpinLift;
use orbifold_core::cocycle::EquivariantBundle;
use orbifold_core::convolution::*;
use orbifold_core::exact::{exact, Exact, ExactMatrix, Rational};
use orbifold_core::fourier::{FourierField, ModeWindow};
use orbifold_core::groupoid::{ActionGroupoid, FiniteGroupoid};
use orbifold_core::linalg::{frobenius_on_cols, mul, sub};
use orbifold_core::spectral::{assemble_dirac, DiracSpec, Represented, TripleOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_element(g: &FiniteGroupoid, rng: &mut ChaCha8Rng) -> FiniteConvolution {
    let values = (0..g.arrow_count())
        .map(|_| Exact::new(Rational::from_integer(rng.random_range(-3..=3)), Rational::from_integer(rng.random_range(-2..=2))))
        .collect();
    FiniteConvolution::from_values(g, values).unwrap()
}

fn random_section(g: &FiniteGroupoid, rank: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Exact>> {
    (0..g.object_count())
        .map(|_| (0..rank).map(|_| exact(rng.random_range(-5..=5))).collect())
        .collect()
}

#[test]
fn z2_group_algebra() {
    let g = z2_point();
    let d = FiniteConvolution::delta(&g, 1);
    assert_eq!(convolve(&d, &d).unwrap(), FiniteConvolution::delta(&g, 0));
    let u = FiniteConvolution::unit(&g);
    assert_eq!(convolve(&u, &d).unwrap(), d);
    assert_eq!(convolve(&d, &u).unwrap(), d);
}

#[test]
fn action_groupoid_deltas_compose_by_the_rule() {
    let a = a2_action(3);
    let g = a2_groupoid(3);
    for (x, y, z, w) in (0..6).flat_map(|x| (0..3).flat_map(move |y| (0..6).flat_map(move |z| (0..3).map(move |w| (x, y, z, w))))) {
        let p = convolve(
            &FiniteConvolution::delta(&g, a.arrow_index(x, y)),
            &FiniteConvolution::delta(&g, a.arrow_index(z, w)),
        )
        .unwrap();
        if y == (w + z % 3) % 3 {
            assert_eq!(p, FiniteConvolution::delta(&g, a.arrow_index((x + z) % 6, w)));
        } else {
            assert_eq!(p, FiniteConvolution::zero(&g));
        }
    }
}

#[test]
fn convolution_is_associative() {
    let g = a2_groupoid(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (f1, f2, f3) = (random_element(&g, &mut rng), random_element(&g, &mut rng), random_element(&g, &mut rng));
        let left = convolve(&convolve(&f1, &f2).unwrap(), &f3).unwrap();
        let right = convolve(&f1, &convolve(&f2, &f3).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn sections_carry_a_representation() {
    let g = z2_point();
    let line = EquivariantBundle::trivial(&g, 1);
    let psi = vec![vec![exact(3)]];
    let both = FiniteConvolution::unit(&g).add(&FiniteConvolution::delta(&g, 1)).unwrap();
    assert_eq!(act(&both, &line, &psi).unwrap(), vec![vec![exact(6)]]);
    assert_eq!(act(&FiniteConvolution::unit(&g), &line, &psi).unwrap(), psi);

    let a = a2_groupoid(3);
    let swap = ExactMatrix::from_integers(&[&[0, 1], &[1, 0]]);
    let xi = EquivariantBundle::from_fn(&a, 2, |arrow| if arrow / 3 % 2 == 1 { swap.clone() } else { ExactMatrix::identity(2) });
    assert!(xi.validate().is_valid());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (f1, f2) = (random_element(&a, &mut rng), random_element(&a, &mut rng));
        let psi = random_section(&a, 2, &mut rng);
        let lhs = act(&convolve(&f1, &f2).unwrap(), &xi, &psi).unwrap();
        let rhs = act(&f1, &xi, &act(&f2, &xi, &psi).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn point_groupoid_is_not_faithful_on_the_trivial_line() {
    let g = z2_point();
    let probe = finite_faithfulness_probe(&EquivariantBundle::trivial(&g, 1)).unwrap();
    assert!(!probe.faithful);
    assert_eq!(probe.kernel_dimension, 1);
    let w = probe.witness.unwrap();
    assert_eq!(w.values[0], -w.values[1]);
    let sign = EquivariantBundle::from_fn(&g, 1, |a| ExactMatrix::scalar(exact(if a == 0 { 1 } else { -1 })));
    let probe = finite_faithfulness_probe(&sign).unwrap();
    assert_eq!(probe.kernel_dimension, 1);
    let w = probe.witness.unwrap();
    assert_eq!(w.values[0], w.values[1]);
    // the regular representation separates the two arrows
    let swap = ExactMatrix::from_integers(&[&[0, 1], &[1, 0]]);
    let regular = EquivariantBundle::from_fn(&g, 2, |a| if a == 0 { ExactMatrix::identity(2) } else { swap.clone() });
    assert!(finite_faithfulness_probe(&regular).unwrap().faithful);
}

#[test]
fn noneffective_action_has_the_expected_kernel() {
    let a = a2_action(3);
    let g = a2_groupoid(3);
    let probe = finite_faithfulness_probe(&EquivariantBundle::trivial(&g, 1)).unwrap();
    assert!(!probe.faithful);
    assert_eq!(probe.kernel_dimension, 9);
    let line = EquivariantBundle::trivial(&g, 1);
    for y in 0..3 {
        let diff = FiniteConvolution::delta(&g, a.arrow_index(3, y))
            .add(&FiniteConvolution::delta(&g, a.arrow_index(0, y)).scale(exact(-1)))
            .unwrap();
        assert!(representation_matrix(&diff, &line).unwrap().is_zero());
    }
    let w = probe.witness.unwrap();
    assert!(representation_matrix(&w, &line).unwrap().is_zero());
}

#[test]
fn kernel_dimension_is_presentation_independent() {
    // Z6 acting on Z3 through y ↦ y − a, conjugate to the standard action by y ↦ −y
    let other = ActionGroupoid::cyclic_shift("Z6xZ3(neg)", 6, 3, |a| (3 - a % 3) % 3).to_finite().unwrap();
    let a = finite_faithfulness_probe(&EquivariantBundle::trivial(&a2_groupoid(3), 1)).unwrap();
    let b = finite_faithfulness_probe(&EquivariantBundle::trivial(&other, 1)).unwrap();
    assert_eq!(a.kernel_dimension, b.kernel_dimension);
    let free = ActionGroupoid::cyclic_shift("Z3xZ3", 3, 3, |a| a).to_finite().unwrap();
    assert!(finite_faithfulness_probe(&EquivariantBundle::trivial(&free, 1)).unwrap().faithful);
}

fn circle_dirac(g: ActionGroupoid, cutoff: usize) -> orbifold_core::spectral::TruncatedDirac {
    let order = g.order();
    assemble_dirac(&DiracSpec::new(g, SpinLift::trivial(order, 1, vec![Rational::from_integer(0)]), cutoff)).unwrap()
}

#[test]
fn rotation_component_translates_on_the_grid() {
    let g = rotation_circle(2, 2.0 * PI, 16);
    let td = circle_dirac(g.clone(), 16);
    let w = ModeWindow::functions(vec![2.0 * PI], 0);
    let f = FourierConvolution::on_element(&g, 1, FourierField::constant(&w, c(1.0))).unwrap();
    let pi = f.represent(&td).unwrap();
    let psi = FourierField::from_terms(&td.window, &[(vec![1], c(1.0)), (vec![-3], Complex64::new(0.5, 0.25))]).unwrap();
    let out = FourierField {
        coeffs: orbifold_core::linalg::apply(&pi, &psi.coeffs),
        ..psi.clone()
    };
    for p in 0..32 {
        let x = 2.0 * PI * p as f64 / 32.0;
        let lhs = out.evaluate(&[x])[0];
        let rhs = psi.evaluate(&[x - PI])[0];
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

fn random_fourier(g: &ActionGroupoid, degree: usize, rng: &mut ChaCha8Rng) -> FourierConvolution {
    let w = ModeWindow::functions(g.base.circumferences(), degree);
    FourierConvolution {
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
    }
}

#[test]
fn fourier_representation_law_on_the_band() {
    for g in [rotation_circle(2, 2.0 * PI, 16), rotation_circle(3, 2.0 * PI, 16), pillowcase(12)] {
        let td = if g.base.dimension() == 1 {
            circle_dirac(g.clone(), 16)
        } else {
            assemble_dirac(&DiracSpec::with_search(g.clone(), vec![Rational::from_integer(0); 2], 12).unwrap()).unwrap()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (f1, f2, f3) = (random_fourier(&g, 2, &mut rng), random_fourier(&g, 1, &mut rng), random_fourier(&g, 1, &mut rng));
        let p = convolve_fourier(&f1, &f2).unwrap();
        let lhs = p.represent(&td).unwrap();
        let rhs = mul(&f1.represent(&td).unwrap(), &f2.represent(&td).unwrap());
        let cols = td.interior_indices(4);
        assert!(frobenius_on_cols(&sub(&lhs, &rhs), &cols) <= 1e-12, "{}", g.name);
        let left = convolve_fourier(&p, &f3).unwrap();
        let right = convolve_fourier(&f1, &convolve_fourier(&f2, &f3).unwrap()).unwrap();
        for (a, b) in left.components.iter().zip(&right.components) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
    }
}

#[test]
fn faithfulness_follows_effectiveness() {
    let id = |n: usize, d: usize| vec![ExactMatrix::identity(d); n];
    let eff = fourier_faithfulness_probe(&rotation_circle(2, 2.0 * PI, 8), &id(2, 1), 8, 2).unwrap();
    assert!(eff.faithful && eff.exact && eff.effective);
    let non = fourier_faithfulness_probe(&noneffective_circle(8), &id(4, 1), 8, 2).unwrap();
    assert!(!non.faithful && non.exact && !non.effective);
    assert_eq!(non.kernel_dimension, 2 * 5);
    let w = non.witness.unwrap();
    let td = circle_dirac(noneffective_circle(12), 12);
    let pi = w.represent(&td).unwrap();
    assert!(frobenius_on_cols(&pi, &td.interior_indices(2)) < 1e-12);
    let odd = fourier_faithfulness_probe(&rotation_circle(3, 2.0 * PI, 8), &id(3, 1), 8, 2).unwrap();
    assert!(odd.faithful && !odd.exact);
}

#[test]
fn convolution_commutators() {
    let g = rotation_circle(2, 2.0 * PI, 16);
    let spec = DiracSpec::new(g.clone(), SpinLift::trivial(2, 1, vec![Rational::from_integer(0)]), 16);
    let w = ModeWindow::functions(vec![2.0 * PI], 2);
    let e2 = FourierConvolution::on_element(&g, 0, FourierField::from_terms(&w, &[(vec![2], c(1.0))]).unwrap()).unwrap();
    let r = convolution_triple_report(&spec, &[e2, FourierConvolution::unit(&g)], &TripleOptions::default()).unwrap();
    assert_abs_diff_eq!(r.commutators[0].norm, 2.0, epsilon = 1e-12);
    assert_eq!(r.commutators[1].norm, 0.0);
    assert!(r.max_commutator_drift() <= 1e-9);
    assert_eq!(r.faithful, Some(true));

    let spec = DiracSpec::new(
        noneffective_circle(16),
        SpinLift::trivial(4, 1, vec![Rational::from_integer(0)]),
        16,
    );
    let r = convolution_triple_report(&spec, &[FourierConvolution::unit(&noneffective_circle(16))], &TripleOptions::default()).unwrap();
    assert_eq!(r.faithful, Some(false));
    assert!(r.notes.iter().any(|n| n.contains("not faithful")));
}

#[test]
fn pillowcase_chirality_commutes_with_convolutions() {
    let g = pillowcase(12);
    let spec = DiracSpec::with_search(g.clone(), vec![Rational::from_integer(0); 2], 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gens = [random_fourier(&g, 2, &mut rng), random_fourier(&g, 1, &mut rng)];
    let opts = TripleOptions {
        doubled: false,
        ..TripleOptions::default()
    };
    let r = convolution_triple_report(&spec, &gens, &opts).unwrap();
    assert!(r.commutators.iter().all(|c| c.chirality_commutator.unwrap() <= 1e-12));
    assert!(r.commutators.iter().all(|c| c.gradient_residual <= 1e-12));
}

#[test]
fn terms_round_trip() {
    let g = rotation_circle(2, 2.0 * PI, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_fourier(&g, 2, &mut rng);
    let text = serde_json::to_string(&f.to_terms()).unwrap();
    let terms: Vec<ConvolutionTerm> = serde_json::from_str(&text).unwrap();
    let back = FourierConvolution::from_terms(&g, 2, &terms).unwrap();
    for (a, b) in back.components.iter().zip(&f.components) {
        assert!(a.max_abs_diff(b) < 1e-15);
    }
    let fin = FiniteConvolution::delta(&z2_point(), 1).to_terms();
    assert_eq!(fin[0].arrow.as_deref(), Some("g"));
}
