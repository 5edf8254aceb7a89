use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use orbifold_core::catalog::{a2_bitorsor, pillowcase, rotation_circle, z2_point};
use orbifold_core::cocycle::{induced_bundle, EquivariantBundle};
use orbifold_core::exact::{exact, ExactMatrix, Rational};
use orbifold_core::fourier::{FourierField, ModeWindow};
use orbifold_core::spectral::{orbifold_integral, OrbifoldMeasure};
use orbifold_core::transport::*;
use orbifold_core::Error;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn cos_mode(w: &ModeWindow, k: i64) -> FourierField {
    FourierField::from_terms(w, &[(vec![k], c(0.5)), (vec![-k], c(0.5))]).unwrap()
}

fn z2_cover() -> CircleCovering {
    CircleCovering::new(&rotation_circle(2, 2.0 * PI, 8)).unwrap()
}

#[test]
fn finite_functions_transport_and_return() {
    let phi = a2_bitorsor(3);
    let pushed = pushforward_function(&phi, &[exact(7)]).unwrap();
    assert_eq!(pushed, vec![exact(7); 3]);
    assert_eq!(pullback_function(&phi, &pushed).unwrap(), vec![exact(7)]);
    let err = pullback_function(&phi, &[exact(1), exact(2), exact(3)]).unwrap_err();
    assert!(matches!(err, Error::NotInvariant(_)));
}

#[test]
fn finite_sections_round_trip() {
    let phi = a2_bitorsor(3);
    let swap = ExactMatrix::from_integers(&[&[0, 1], &[1, 0]]);
    let xi = EquivariantBundle::from_fn(&z2_point(), 2, |a| if a == 0 { ExactMatrix::identity(2) } else { swap.clone() });
    let induced = induced_bundle(&phi, &xi).unwrap();
    let psi = vec![vec![exact(4), exact(4)]];
    let down = pushforward_section(&phi, &xi, &induced, &psi).unwrap();
    assert!(section_violation(&induced.bundle, &down).is_none());
    assert_eq!(pullback_section(&phi, &xi, &induced, &down).unwrap(), psi);
    let bad = vec![vec![exact(1), exact(2)]];
    assert!(matches!(
        pushforward_section(&phi, &xi, &induced, &bad),
        Err(Error::NotInvariant(_))
    ));
    let ip = induce_inner_product(&phi, &xi, &induced, &InnerProduct::standard(1)).unwrap();
    assert!(ip.is_invariant(&induced.bundle));
    assert_eq!(ip.pair(0, &down[0], &down[0]), ip.pair(2, &down[2], &down[2]));
}

#[test]
fn cos_two_theta_descends_to_mode_one() {
    let cov = z2_cover();
    let up = ModeWindow::functions(vec![2.0 * PI], 8);
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let target = ModeWindow::functions(vec![PI], 5);
    let pushed = cov.pushforward(&cos_mode(&up, 2), &lift, &target).unwrap();
    assert!(pushed.overlap_residual < 1e-12);
    assert!(pushed.field.max_abs_diff(&cos_mode(&target, 1)) < 1e-12);
    let back = cov.pullback(&pushed.field, &lift, &up).unwrap();
    assert!(back.max_abs_diff(&cos_mode(&up, 2)) < 1e-12);
}

#[test]
fn non_invariant_input_names_the_element() {
    let cov = z2_cover();
    let up = ModeWindow::functions(vec![2.0 * PI], 8);
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let target = ModeWindow::functions(vec![PI], 5);
    match cov.pushforward(&cos_mode(&up, 1), &lift, &target) {
        Err(Error::NotInvariant(msg)) => assert!(msg.contains("moved by")),
        other => panic!("expected a violation, got {other:?}"),
    }
}

#[test]
fn pushforward_agrees_with_mode_relabelling() {
    let cov = CircleCovering::new(&rotation_circle(3, 2.0 * PI, 12)).unwrap();
    let up = ModeWindow::functions(vec![2.0 * PI], 12);
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let f = FourierField::from_terms(
        &up,
        &[(vec![0], c(1.0)), (vec![3], Complex64::new(0.2, 0.7)), (vec![-6], c(-0.4)), (vec![9], c(0.1))],
    )
    .unwrap();
    let down = cov.down_window(&up, 0.into());
    let pushed = cov.pushforward(&f, &lift, &down).unwrap();
    assert!(pushed.overlap_residual < 1e-12);
    assert!(pushed.field.max_abs_diff(&cov.relabel_down(&f, &down)) < 1e-12);
}

#[test]
fn rotation_only_coverings() {
    assert!(matches!(CircleCovering::new(&pillowcase(8)), Err(Error::Unsupported(_))));
}

#[test]
fn exterior_derivative_commutes_with_transport() {
    let cov = z2_cover();
    let up = ModeWindow::functions(vec![2.0 * PI], 8);
    let f = InvariantForm::function(
        FourierField::from_terms(&up, &[(vec![2], Complex64::new(0.3, 0.1)), (vec![-4], c(0.5))]).unwrap(),
    );
    let (down, res) = pushforward_form(&cov, &f, 5).unwrap();
    assert!(res < 1e-12);
    let (d_then_push, _) = pushforward_form(&cov, &f.exterior_derivative(), 5).unwrap();
    let push_then_d = down.exterior_derivative();
    assert!(d_then_push.coefficient.max_abs_diff(&push_then_d.coefficient) < 1e-10);
    let back = pullback_form(&cov, &down, 8).unwrap();
    assert!(back.coefficient.max_abs_diff(&f.coefficient) < 1e-12);
}

#[test]
fn connections_descend_and_keep_leibniz() {
    let cov = z2_cover();
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let conn = CircleConnection::constant(2.0 * PI, 1, 0.75);
    let down = induce_connection(&cov, &conn, &lift).unwrap();
    assert_abs_diff_eq!(down.potential.coefficient(&[0], 0).re, 0.75, epsilon = 1e-12);

    // ∇(fψ) = (df)ψ + f∇ψ on the quotient
    let w = ModeWindow::functions(vec![PI], 6);
    let f = cos_mode(&ModeWindow::functions(vec![PI], 2), 1);
    let psi = FourierField::from_terms(&w, &[(vec![1], c(1.0)), (vec![-2], Complex64::new(0.0, 0.5))]).unwrap();
    let one = FourierField::constant(&ModeWindow::functions(vec![PI], 0), c(1.0));
    let lhs = down.along(&one, &psi.times_function(&f).unwrap()).unwrap();
    let df_psi = psi.times_function(&f.derivative(0)).unwrap();
    let f_dpsi = down.along(&f, &psi).unwrap();
    let rhs = df_psi.rewindow(&lhs.window).unwrap().add(&f_dpsi.rewindow(&lhs.window).unwrap()).unwrap();
    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
}

#[test]
fn non_commuting_potential_is_rejected() {
    let cov = z2_cover();
    let swap = nalgebra::DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let lift = vec![nalgebra::DMatrix::identity(2, 2), swap];
    let w = ModeWindow::functions(vec![2.0 * PI], 0);
    let conn = CircleConnection {
        rank: 2,
        potential: FourierField::from_fn(&w, 4, |_, e| c(if e == 0 { 1.0 } else { 0.0 })),
    };
    assert!(!conn.is_invariant(&cov, &lift));
    assert!(induce_connection(&cov, &conn, &lift).is_err());
}

#[test]
fn pairing_integral_is_preserved() {
    let cov = z2_cover();
    let up = ModeWindow::functions(vec![2.0 * PI], 8);
    let lift = trivial_fibre_lift(&cov.upstairs, 1);
    let a = FourierField::from_terms(&up, &[(vec![2], c(1.0)), (vec![0], Complex64::new(0.5, -0.5))]).unwrap();
    let b = FourierField::from_terms(&up, &[(vec![2], c(0.25)), (vec![-4], c(2.0))]).unwrap();
    let upstairs = orbifold_integral(
        &OrbifoldMeasure::single_chart(&cov.upstairs).unwrap(),
        &pairing_function(&a, &b).unwrap(),
    )
    .unwrap();
    let down = cov.down_window(&up, 0.into());
    let pa = cov.pushforward(&a, &lift, &down).unwrap().field;
    let pb = cov.pushforward(&b, &lift, &down).unwrap().field;
    let quotient = cov.quotient(8);
    let downstairs = orbifold_integral(
        &OrbifoldMeasure::single_chart(&quotient).unwrap(),
        &pairing_function(&pa, &pb).unwrap(),
    )
    .unwrap();
    assert_abs_diff_eq!((upstairs - downstairs).norm(), 0.0, epsilon = 1e-12);
    // ⟨a, b⟩ over Circle(2π)/Z₂ is π·(conj(1)·0.25)
    assert_abs_diff_eq!(upstairs.re, PI * 0.25, epsilon = 1e-12);
}

#[test]
fn spinors_with_half_twist_descend() {
    // Z3 with δ = ½ upstairs and the χ = −1 lift: invariant modes k with
    // (k + ½)/3 ∈ ½ + ℤ, i.e. k ≡ 1 mod 3, land on δ' = ½.
    let g = rotation_circle(3, 2.0 * PI, 12);
    let cov = CircleCovering::new(&g).unwrap();
    let lift_phase = c(-1.0);
    let d = cov.downstairs_twist(Rational::new(1, 2), lift_phase).unwrap();
    assert_eq!(d, Rational::new(1, 2));
    let lift: Vec<_> = (0..3)
        .map(|e| {
            let p = cov.powers.iter().position(|&x| x == e).unwrap();
            nalgebra::DMatrix::from_element(1, 1, lift_phase.powu(p as u32))
        })
        .collect();
    let up = ModeWindow::new(vec![2.0 * PI], 12, vec![Rational::new(1, 2)]).unwrap();
    let psi = FourierField::from_terms(&up, &[(vec![1], c(1.0)), (vec![-2], c(0.5)), (vec![4], c(0.25))]).unwrap();
    assert!(cov.invariance_defect(&psi, &lift).0 < 1e-12);
    let down = cov.down_window(&up, d);
    let pushed = cov.pushforward(&psi, &lift, &down).unwrap();
    assert!(pushed.overlap_residual < 1e-12, "{}", pushed.overlap_residual);
    assert!(pushed.field.max_abs_diff(&cov.relabel_down(&psi, &down)) < 1e-12);
    let back = cov.pullback(&pushed.field, &lift, &up).unwrap();
    assert!(back.max_abs_diff(&psi) < 1e-12);
}
