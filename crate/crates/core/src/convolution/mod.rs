//! The convolution algebra with the counting Haar system, its action on
//! sections, faithfulness probes and the convolution spectral triple.

mod finite;
mod fourier;

pub use finite::{
    act, convolve, finite_faithfulness_probe, representation_matrix, ConvolutionTerm, FiniteConvolution,
    FiniteFaithfulness,
};
pub use fourier::{
    convolution_triple_report, convolve_fourier, fourier_faithfulness_probe, FourierConvolution, FourierFaithfulness,
    KERNEL_TOL,
};
