//! Transport of invariant functions, sections, forms, connections and inner
//! products along a Morita equivalence: exactly over finite groupoids, and
//! through the branches of a free circle covering in the Fourier flavor.

mod circle;
mod finite;

pub use circle::{
    induce_connection, pairing_function, pullback_form, pushforward_form, trivial_fibre_lift, CircleConnection,
    CircleCovering, InvariantForm, Pushed, INVARIANCE_TOL,
};
pub use finite::{
    function_violation, induce_inner_product, pullback_function, pullback_section, pushforward_function,
    pushforward_section, section_violation, InnerProduct, Section,
};
