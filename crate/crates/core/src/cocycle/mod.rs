//! Matrix cocycles on Čech groupoids, their transport along bitorsors, and
//! the equivalence with equivariant vector bundles.

mod bundle;
mod coboundary;
#[allow(clippy::module_inception)]
mod cocycle;
mod induce;
mod io;

pub use bundle::{induced_bundle, induced_bundle_with, reconstruct, EquivariantBundle, InducedBundle};
pub use coboundary::{cohomologous, CoboundarySearch};
pub use cocycle::{validate_cocycle, Cocycle};
pub use induce::{induce_cocycle, SectionComponent, SectionFamily};
pub use io::CocycleFile;
