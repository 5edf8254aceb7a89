use std::f64::consts::PI;

use num_complex::Complex64;
use orbifold_core::catalog::{a2_bitorsor, rotation_circle};
use orbifold_core::cocycle::{cohomologous, induce_cocycle, Cocycle, EquivariantBundle, SectionFamily};
use orbifold_core::convolution::{act, convolve, finite_faithfulness_probe, FiniteConvolution};
use orbifold_core::exact::{exact, Exact, Rational};
use orbifold_core::fourier::{FourierField, ModeWindow};
use orbifold_core::groupoid::{cech_groupoid, is_effective, ActionGroupoid, CechCover, FiniteGroupoid, Groupoid};
use orbifold_core::morita::{find_two_morphism, localize_cech, validate_generalized_hom, HomMode};
use orbifold_core::spectral::{assemble_dirac, DiracSpec};
use orbifold_core::transport::{trivial_fibre_lift, CircleCovering};
use proptest::prelude::*;

/// `Z_{k·j} ⋉ Z_k` acting by `a·y = y + a·step`.
fn shift_groupoid(k: usize, j: usize, step: usize) -> FiniteGroupoid {
    ActionGroupoid::cyclic_shift("shift", k * j, k, move |a| (a * step) % k)
        .to_finite()
        .unwrap()
}

fn gaussian() -> impl Strategy<Value = Exact> {
    (-4i64..=4, -2i64..=2).prop_map(|(a, b)| Exact::new(Rational::from_integer(a), Rational::from_integer(b)))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn units_and_inverses(k in 1usize..6, j in 1usize..4, step in 0usize..6) {
        let g = shift_groupoid(k, j, step);
        for x in 0..g.object_count() {
            let u = g.unit(x);
            prop_assert_eq!(g.source(u), x);
            prop_assert_eq!(g.target(u), x);
        }
        for a in 0..g.arrow_count() {
            let i = g.inverse(a);
            prop_assert_eq!(g.source(i), g.target(a));
            prop_assert_eq!(g.target(i), g.source(a));
            prop_assert_eq!(g.compose(i, a), Some(g.unit(g.source(a))));
        }
    }

    #[test]
    fn cech_localization_keeps_orbits(
        k in 1usize..6,
        step in 0usize..6,
        masks in proptest::collection::vec(1u8..8, 6),
    ) {
        let g = shift_groupoid(k, 2, step);
        let mut sheets = vec![Vec::new(); 3];
        for x in 0..k {
            for (s, sheet) in sheets.iter_mut().enumerate() {
                if masks[x] & (1 << s) != 0 {
                    sheet.push(x);
                }
            }
        }
        sheets.retain(|s| !s.is_empty());
        let c = cech_groupoid(&g, &CechCover::new(sheets)).unwrap();
        prop_assert_eq!(c.collapsed_orbits().len(), g.orbits().len());
        prop_assert_eq!(c.groupoid.orbits().len(), g.orbits().len());
    }

    #[test]
    fn faithful_on_the_trivial_line_iff_effective(k in 1usize..6, j in 1usize..4, step in 0usize..6) {
        let g = shift_groupoid(k, j, step);
        let probe = finite_faithfulness_probe(&EquivariantBundle::trivial(&g, 1)).unwrap();
        let eff = is_effective(&Groupoid::Finite(g.clone())).unwrap();
        prop_assert_eq!(probe.faithful, eff.effective);
        // kernel = arrows minus distinct (source, target) pairs
        let mut pairs: Vec<(usize, usize)> = (0..g.arrow_count()).map(|a| (g.source(a), g.target(a))).collect();
        pairs.sort_unstable();
        pairs.dedup();
        prop_assert_eq!(probe.kernel_dimension, g.arrow_count() - pairs.len());
    }

    #[test]
    fn kernel_dimension_survives_conjugation(k in 2usize..7, j in 1usize..4, step in 0usize..7, u in 1usize..7) {
        prop_assume!(gcd(u, k) == 1);
        let g = shift_groupoid(k, j, step);
        let h = shift_groupoid(k, j, (u * step) % k);
        let a = finite_faithfulness_probe(&EquivariantBundle::trivial(&g, 1)).unwrap();
        let b = finite_faithfulness_probe(&EquivariantBundle::trivial(&h, 1)).unwrap();
        prop_assert_eq!(a.kernel_dimension, b.kernel_dimension);
    }

    #[test]
    fn convolution_represents(
        k in 1usize..4,
        step in 0usize..4,
        v1 in proptest::collection::vec(gaussian(), 18),
        v2 in proptest::collection::vec(gaussian(), 18),
        psi in proptest::collection::vec(-5i64..=5, 3),
    ) {
        let g = shift_groupoid(k, 2, step);
        let n = g.arrow_count();
        let f1 = FiniteConvolution::from_values(&g, v1[..n].to_vec()).unwrap();
        let f2 = FiniteConvolution::from_values(&g, v2[..n].to_vec()).unwrap();
        let line = EquivariantBundle::trivial(&g, 1);
        let psi: Vec<Vec<Exact>> = psi[..k].iter().map(|&v| vec![exact(v)]).collect();
        let lhs = act(&convolve(&f1, &f2).unwrap(), &line, &psi).unwrap();
        let rhs = act(&f1, &line, &act(&f2, &line, &psi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn relabelled_bitorsors_are_two_isomorphic(n in 1usize..5, shift in 0usize..10) {
        let phi = a2_bitorsor(n);
        let m = 2 * n;
        let perm: Vec<usize> = (0..m).map(|q| (q + shift) % m).collect();
        let moved = phi.relabelled(&perm);
        prop_assert!(validate_generalized_hom(&moved, HomMode::Bitorsor).is_valid());
        prop_assert!(find_two_morphism(&phi, &moved).found().is_some());
    }

    #[test]
    fn induced_cocycle_is_section_independent(n in 1usize..5, seam in proptest::collection::vec(any::<bool>(), 4)) {
        let phi = a2_bitorsor(n);
        let loc = localize_cech(
            &phi,
            &CechCover::trivial(1),
            &CechCover::trivial(n),
        ).unwrap();
        let sign = Cocycle::scalar([exact(1), exact(-1)]);
        let b1 = SectionFamily::from_rule(&loc, |_, y| (0, y)).unwrap();
        let b2 = SectionFamily::from_rule(&loc, |_, y| (0, if seam[y] { y + n } else { y })).unwrap();
        let g1 = induce_cocycle(&loc, &sign, &b1).unwrap();
        let g2 = induce_cocycle(&loc, &sign, &b2).unwrap();
        prop_assert!(cohomologous(&loc.cech_y.groupoid, &g1, &g2).unwrap().found().is_some());
    }

    #[test]
    fn circle_transport_round_trips(
        m in 1usize..5,
        coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
    ) {
        let cutoff = 16;
        let g = rotation_circle(m, 2.0 * PI, cutoff);
        let cov = CircleCovering::new(&g).unwrap();
        let up = ModeWindow::functions(vec![2.0 * PI], cutoff);
        let lift = trivial_fibre_lift(&cov.upstairs, 1);
        let down = ModeWindow::functions(vec![2.0 * PI / m as f64], cutoff / m + 1);
        // invariant functions carry modes divisible by m
        let terms: Vec<(Vec<i64>, Complex64)> = coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (vec![(i as i64 - 2) * m as i64], Complex64::new(a, b)))
            .filter(|(k, _)| k[0].unsigned_abs() as usize <= cutoff)
            .collect();
        let f = FourierField::from_terms(&up, &terms).unwrap();
        let pushed = cov.pushforward(&f, &lift, &down).unwrap();
        let back = cov.pullback(&pushed.field, &lift, &up).unwrap();
        prop_assert!(back.max_abs_diff(&f) <= 1e-10);
        let sq = f.times_function(&f).unwrap().rewindow(&up);
        if let Ok(sq) = sq {
            let pushed_sq = cov.pushforward(&sq, &lift, &down).unwrap().field;
            for p in 0..12 {
                let y = 2.0 * PI * p as f64 / (12.0 * m as f64);
                let v = pushed.field.evaluate(&[y])[0];
                prop_assert!((pushed_sq.evaluate(&[y])[0] - v * v).norm() <= 1e-10);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectra_stable_under_cutoff_doubling(m in 1usize..5, half in any::<bool>()) {
        let twist = vec![if half { Rational::new(1, 2) } else { Rational::from_integer(0) }];
        let g = |c| rotation_circle(m, 2.0 * PI, c);
        // Z4 with the odd twist has no lift with values in {±1, ±i}
        let spec = DiracSpec::with_search(g(16), twist.clone(), 16);
        prop_assume!(spec.is_ok());
        let small = assemble_dirac(&spec.unwrap()).unwrap();
        let big = assemble_dirac(&DiracSpec::with_search(g(32), twist, 32).unwrap()).unwrap();
        let a = small.invariant_spectrum(2).interior();
        let b = big.invariant_spectrum(2).interior();
        prop_assert!(!a.is_empty());
        for &lam in &a {
            let here = a.iter().filter(|&&x| (x - lam).abs() <= 1e-12).count();
            let there = b.iter().filter(|&&x| (x - lam).abs() <= 1e-12).count();
            prop_assert_eq!(here, there, "eigenvalue {}", lam);
        }
    }
}
