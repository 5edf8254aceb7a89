use orbifold_core::catalog::{a2_bitorsor, a2_groupoid, a2_mutated, z2_point};
use orbifold_core::groupoid::{CechCover, FiniteGroupoid};
use orbifold_core::morita::*;

fn valid(b: &Bitorsor) -> bool {
    validate_generalized_hom(b, HomMode::Bitorsor).is_valid()
}

/// Independent check of the bitorsor axioms for the discretized circle model,
/// written directly against modular arithmetic.
fn a2_oracle(n: usize) -> bool {
    let m = 2 * n;
    let left = |s: usize, q: usize| (q + s * n) % m;
    let right = |q: usize, a: usize| (q + m - a) % m;
    let alpha = |q: usize| q % n;
    for q in 0..m {
        for a in 0..m {
            // the arrow (a, y) with target α(q) has source y = α(q) − a mod N
            let qt = right(q, a);
            if alpha(qt) != (alpha(q) + n - a % n) % n {
                return false;
            }
            for s in 0..2 {
                if right(left(s, q), a) != left(s, right(q, a)) {
                    return false;
                }
            }
        }
        for q2 in 0..m {
            let taus = (0..m).filter(|&a| right(q, a) == q2).count();
            if taus != 1 {
                return false;
            }
            if alpha(q) == alpha(q2) && (0..2).filter(|&s| left(s, q) == q2).count() != 1 {
                return false;
            }
        }
    }
    true
}

#[test]
fn a2_bitorsor_valid_for_three_and_five() {
    for n in [3, 5] {
        assert!(a2_oracle(n));
        let b = a2_bitorsor(n);
        let r = validate_generalized_hom(&b, HomMode::Bitorsor);
        assert!(r.is_valid(), "{}", r.summary());
        assert_eq!(r.rules.iter().find(|t| t.rule == "right-torsor").unwrap().checked, 4 * n * n);
    }
}

#[test]
fn mutated_right_action_is_rejected_with_witness() {
    let r = validate_generalized_hom(&a2_mutated(3), HomMode::Bitorsor);
    assert!(!r.is_valid());
    assert!(r.has_failure("right-action-anchors"));
    assert!(!r.violations[0].witness.is_empty());
}

#[test]
fn identity_bitorsor_is_valid() {
    for g in [z2_point(), a2_groupoid(3)] {
        assert!(valid(&Bitorsor::identity(&g)));
    }
}

#[test]
fn unit_law_for_composition() {
    let h = a2_bitorsor(3);
    let c = compose_homs(&h, &Bitorsor::identity(&h.right)).unwrap();
    assert!(valid(&c));
    assert!(find_two_morphism(&c, &h).found().is_some());
    let c = compose_homs(&Bitorsor::identity(&h.left), &h).unwrap();
    assert!(find_two_morphism(&c, &h).found().is_some());
}

#[test]
fn a2_with_its_inverse_is_the_identity() {
    let h = a2_bitorsor(3);
    let c = compose_homs(&h, &h.inverse()).unwrap();
    assert_eq!(c.carrier_len(), 2);
    assert!(valid(&c));
    let id = Bitorsor::identity(&z2_point());
    assert!(find_two_morphism(&c, &id).found().is_some());
}

#[test]
fn composition_rejects_mismatched_middle() {
    let h = a2_bitorsor(3);
    assert!(compose_homs(&h, &h).is_err());
}

#[test]
fn cech_bitorsor_composed_twice() {
    let g = a2_groupoid(3);
    let cover = CechCover::cyclic_pairs(3);
    let (c, cech) = cech_bitorsor(&g, &cover).unwrap();
    assert!(valid(&c));
    let (c2, _) = cech_bitorsor(&cech.groupoid, &CechCover::trivial(cech.groupoid.object_count())).unwrap();
    let twice = compose_homs(&c, &c2).unwrap();
    assert!(valid(&twice));
    let once = compose_homs(&c, &Bitorsor::identity(&cech.groupoid)).unwrap();
    assert!(find_two_morphism(&twice, &once).found().is_some());
}

#[test]
fn translated_carrier_is_two_isomorphic() {
    let h = a2_bitorsor(3);
    let perm: Vec<usize> = (0..6).map(|q| (q + 1) % 6).collect();
    let moved = h.relabelled(&perm);
    assert!(valid(&moved));
    let t = find_two_morphism(&h, &moved);
    let t = t.found().unwrap();
    assert!(is_two_morphism(&h, &moved, t));
    assert_eq!(find_two_morphism(&h, &h).found().unwrap().map, (0..6).collect::<Vec<_>>());
}

#[test]
fn different_orbit_counts_short_circuit() {
    let point = FiniteGroupoid::unit_groupoid("pt", vec!["*".into()]);
    let build = |swap: bool| {
        Bitorsor::from_rules(
            if swap { "swap" } else { "fixed" },
            z2_point(),
            point.clone(),
            vec!["a".into(), "b".into()],
            vec![0, 0],
            vec![0, 0],
            move |s, q| if swap { q ^ s } else { q },
            |q, _| q,
        )
        .unwrap()
    };
    let (swap, fixed) = (build(true), build(false));
    assert_eq!(joint_orbits(&swap).len(), 1);
    assert_eq!(joint_orbits(&fixed).len(), 2);
    assert_eq!(find_two_morphism(&swap, &fixed), TwoMorphismSearch::None);
    assert!(find_two_morphism(&swap, &swap).found().is_some());
}

#[test]
fn localized_a2_has_twelve_points() {
    let h = a2_bitorsor(3);
    let loc = localize_cech(&h, &CechCover::trivial(1), &CechCover::cyclic_pairs(3)).unwrap();
    assert_eq!(loc.bitorsor.carrier_len(), 12);
    assert!(valid(&loc.bitorsor));
}

#[test]
fn trivial_covers_give_a_copy() {
    let h = a2_bitorsor(3);
    let loc = localize_cech(&h, &CechCover::trivial(1), &CechCover::trivial(3)).unwrap();
    assert_eq!(loc.bitorsor.carrier_len(), 6);
    assert_eq!(loc.bitorsor.left_entries(), h.left_entries());
    assert_eq!(loc.bitorsor.right_entries(), h.right_entries());
}

#[test]
fn localized_identity_is_the_canonical_cech_bitorsor() {
    let g = a2_groupoid(3);
    let cover = CechCover::cyclic_pairs(3);
    let loc = localize_cech(&Bitorsor::identity(&g), &CechCover::trivial(3), &cover).unwrap();
    assert!(valid(&loc.bitorsor));
    let (canon, _) = cech_bitorsor(&g, &cover).unwrap();
    // Same tables up to relabelling the trivially covered left side.
    let mut canon = canon;
    canon.left = loc.bitorsor.left.clone();
    assert!(find_two_morphism(&loc.bitorsor, &canon).found().is_some());
}

#[test]
fn localized_composite_with_cech_bitorsors_recovers_phi() {
    let h = a2_bitorsor(3);
    let (cx, cy) = (CechCover::trivial(1), CechCover::cyclic_pairs(3));
    let loc = localize_cech(&h, &cx, &cy).unwrap();
    let (bx, _) = cech_bitorsor(&h.left, &cx).unwrap();
    let (by, _) = cech_bitorsor(&h.right, &cy).unwrap();
    let through = compose_homs(&compose_homs(&bx, &loc.bitorsor).unwrap(), &by.inverse()).unwrap();
    assert!(find_two_morphism(&through, &h).found().is_some());
}

#[test]
fn lifts_of_bisections() {
    let h = a2_bitorsor(3);
    let lift = lift_bisection(&h, Side::Left, &Bisection::single(1), 0).unwrap();
    assert!(lift.intertwines);
    assert_eq!(lift.map, (0..6).map(|q| Some((q + 3) % 6)).collect::<Vec<_>>());
    let unit = lift_bisection(&h, Side::Left, &Bisection::single(0), 2).unwrap();
    assert!(unit.is_identity_on_domain());

    let action = orbifold_core::catalog::a2_action(3);
    let bis = Bisection::constant_element(&action, 1);
    let lift = lift_bisection(&h, Side::Right, &bis, 0).unwrap();
    assert!(lift.intertwines);
    assert_eq!(lift.map, (0..6).map(|q| Some((q + 5) % 6)).collect::<Vec<_>>());
    let units = lift_bisection(&h, Side::Right, &Bisection::units(&h.right), 4).unwrap();
    assert!(units.is_identity_on_domain());
}

#[test]
fn lift_needs_matching_anchor() {
    let h = a2_bitorsor(3);
    // arrow (0, 1) ends at 1, but α(0) = 0
    let err = lift_bisection(&h, Side::Right, &Bisection::single(1), 0).unwrap_err();
    assert!(matches!(err, orbifold_core::Error::AnchorMismatch(_)));
}

#[test]
fn weak_equivalence_pair_of_a2() {
    let h = a2_bitorsor(3);
    let w = weak_equivalence_pair(&h).unwrap();
    assert_eq!(w.middle.object_count(), 6);
    // a cartesian square over Z2 forces |Z2| arrows per ordered object pair
    assert_eq!(w.middle.arrow_count(), 6 * 6 * 2);
    assert!(orbifold_core::groupoid::validate_finite(&w.middle).is_valid());
    let (l, r) = w.check(&h);
    assert!(l.is_valid(), "{}", l.summary());
    assert!(r.is_valid(), "{}", r.summary());
}

#[test]
fn weak_equivalence_pair_of_identity_and_cech() {
    let z2 = z2_point();
    let w = weak_equivalence_pair(&Bitorsor::identity(&z2)).unwrap();
    assert_eq!(w.middle.object_count(), 2);
    let (l, r) = w.check(&Bitorsor::identity(&z2));
    assert!(l.is_valid() && r.is_valid());

    let (c, _) = cech_bitorsor(&a2_groupoid(3), &CechCover::cyclic_pairs(3)).unwrap();
    let w = weak_equivalence_pair(&c).unwrap();
    let (l, r) = w.check(&c);
    assert!(l.is_valid() && r.is_valid());
    assert!(r.rules.iter().any(|t| t.rule == "cartesian" && t.checked > 0));
}

#[test]
fn weak_equivalence_rejects_non_bitorsor() {
    assert!(weak_equivalence_pair(&a2_mutated(3)).is_err());
}

#[test]
fn fibre_census() {
    let h = a2_bitorsor(3);
    let f = fibre_partition_report(&h, 0).unwrap();
    assert_eq!(f.fibre, vec![0, 3]);
    assert_eq!(f.block_sizes(), vec![2]);
    assert!(f.holds());
    let h5 = a2_bitorsor(5);
    let f = fibre_partition_report(&h5, 2).unwrap();
    assert_eq!(f.fibre, vec![2, 7]);
    assert!(f.holds());
    let id = Bitorsor::identity(&FiniteGroupoid::unit_groupoid("u", vec!["p".into(), "q".into()]));
    let f = fibre_partition_report(&id, 1).unwrap();
    assert_eq!(f.block_sizes(), vec![1]);
    assert!(f.holds());
    assert!(fibre_partition_report(&h, 7).is_err());
}

#[test]
fn json_round_trip() {
    let h = a2_bitorsor(3);
    let text = io::to_json(&h).unwrap();
    let back = io::from_json(&text, |name| match name {
        "Z2" => Some(z2_point()),
        "Z6xZ3" => Some(a2_groupoid(3)),
        _ => None,
    })
    .unwrap();
    assert_eq!(back, h);
}
