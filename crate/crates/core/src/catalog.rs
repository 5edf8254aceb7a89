//! Named builders for the groupoids, bitorsors and bundles used throughout
//! the tests, benches and CLI scenarios.

use std::f64::consts::PI;

use crate::exact::Rational;
use crate::groupoid::{ActionGroupoid, BaseSpace, FiniteGroup, FiniteGroupoid, GroupAction, Isometry};
use crate::morita::Bitorsor;

/// `Z₂ ⇉ *` with arrows `e` and `g`.
pub fn z2_point() -> FiniteGroupoid {
    let g = FiniteGroup::from_table(vec!["e".into(), "g".into()], vec![vec![0, 1], vec![1, 0]])
        .expect("Z2 table");
    FiniteGroupoid::from_group("Z2", &g)
}

/// `Z_{2N} ⋉ Z_N` acting by `a·y = y + (a mod N)`.
pub fn a2_action(n: usize) -> ActionGroupoid {
    ActionGroupoid::cyclic_shift(format!("Z{}xZ{}", 2 * n, n), 2 * n, n, move |a| a % n)
}

pub fn a2_groupoid(n: usize) -> FiniteGroupoid {
    a2_action(n).to_finite().expect("finite base")
}

/// Discretized circle bitorsor between `Z₂ ⇉ *` and `Z_{2N} ⋉ Z_N`: carrier
/// `Z_{2N}`, `ϱ` constant, `α = q mod N`, `σ·q = q + N`, `q·(a, y) = q − a`.
pub fn a2_bitorsor(n: usize) -> Bitorsor {
    let m = 2 * n;
    let right = a2_groupoid(n);
    let k = n;
    Bitorsor::from_rules(
        format!("a2(N={n})"),
        z2_point(),
        right,
        (0..m).map(|q| q.to_string()).collect(),
        vec![0; m],
        (0..m).map(|q| q % n).collect(),
        |s, q| (q + s * n) % m,
        |q, t| (q + m - (t / k)) % m,
    )
    .expect("a2 tables")
}

/// The same carrier with the right action replaced by `q·(a, y) = q + a`.
pub fn a2_mutated(n: usize) -> Bitorsor {
    let m = 2 * n;
    let mut b = a2_bitorsor(n).with_right_rule(|q, t| (q + t / n) % m);
    b.name = format!("a2-mutated(N={n})");
    b
}

/// `Z_m ⋉ Circle(L)` acting freely by the rotations `x ↦ x + aL/m`.
pub fn rotation_circle(m: usize, circumference: f64, cutoff: usize) -> ActionGroupoid {
    let isos = (0..m)
        .map(|a| Isometry::translation(vec![Rational::new(a as i64, m as i64)]))
        .collect();
    ActionGroupoid::new(
        format!("Z{m}xCircle"),
        FiniteGroup::cyclic(m),
        BaseSpace::circle(circumference, cutoff),
        GroupAction::Isometries(isos),
    )
    .expect("rotation action")
}

/// `Z₄ ⋉ Circle(2π)` acting by `a ↦` rotation through `aπ`; the element 2
/// acts trivially, so the groupoid is not effective.
pub fn noneffective_circle(cutoff: usize) -> ActionGroupoid {
    let isos = (0..4)
        .map(|a| Isometry::translation(vec![Rational::new(a as i64 % 2, 2)]))
        .collect();
    ActionGroupoid::new(
        "Z4xCircle(pi)",
        FiniteGroup::cyclic(4),
        BaseSpace::circle(2.0 * PI, cutoff),
        GroupAction::Isometries(isos),
    )
    .expect("rotation action")
}

/// `Z₂ ⋉ Torus(2π, 2π)` acting by `v ↦ −v`.
pub fn pillowcase(cutoff: usize) -> ActionGroupoid {
    ActionGroupoid::new(
        "Z2xTorus(neg)",
        FiniteGroup::cyclic(2),
        BaseSpace::torus([2.0 * PI, 2.0 * PI], cutoff),
        GroupAction::Isometries(vec![Isometry::identity(2), Isometry::negation(2)]),
    )
    .expect("negation action")
}

/// A base with the trivial group acting.
pub fn trivial_action(base: BaseSpace) -> ActionGroupoid {
    let dim = base.dimension();
    ActionGroupoid::new(
        "trivial",
        FiniteGroup::trivial(),
        base,
        GroupAction::Isometries(vec![Isometry::identity(dim)]),
    )
    .expect("identity action")
}
