//! Truncated Dirac operators on Fourier bases, invariant spectra, orbifold
//! integration, and the spectral-triple checks.

mod covering;
mod dirac;
mod integral;
mod triple;

pub use covering::{
    induced_dirac, spin_correspondence, tangent_cocycle_check, InducedDirac, SpinCorrespondence, TangentCocycleCheck,
    TangentEntry,
};
pub use dirac::{
    assemble_dirac, growth_exponent, DiracSpec, InvariantSpectrum, SpectralBlock, TruncatedDirac, INVARIANCE_TOL,
    MIN_CUTOFF,
};
pub use integral::{
    finite_orbifold_integral, orbifold_integral, orbifold_pairing, pairing_mode, principal_rank, FiniteChart,
    FourierChart, OrbifoldMeasure, PARTITION_TOL,
};
pub use triple::{
    check_spectral_triple, divergence_residual, function_gradient, ChiralityCheck, CommutatorCheck, Represented,
    SpectralTripleReport, TripleOptions, DIVERGENCE_SEED,
};
