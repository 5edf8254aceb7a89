//! Generalized homomorphisms and Morita bitorsors between finite groupoids.

mod bitorsor;
mod compose;
mod fibre;
pub mod io;
mod lift;
mod localize;
mod two_morphism;
mod weak;

pub use bitorsor::{same_structure, validate_generalized_hom, Bitorsor, HomMode};
pub use compose::compose_homs;
pub use fibre::{fibre_partition_report, FibreReport};
pub use lift::{lift_bisection, Bisection, LocalLift, Side};
pub use localize::{cech_bitorsor, localize_cech, LocalizedBitorsor};
pub use two_morphism::{find_two_morphism, is_two_morphism, joint_orbits, TwoMorphism, TwoMorphismSearch, SEARCH_NODE_CAP};
pub use weak::{check_weak_equivalence, weak_equivalence_pair, StrictMorphism, WeakEquivalencePair};
