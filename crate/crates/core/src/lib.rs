//! Morita bitorsors, induced cocycles and invariant spectral triples on finite
//! groupoids and Fourier-truncated circle and torus action groupoids.

pub mod catalog;
pub mod clifford;
pub mod convolution;
pub mod cocycle;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod groupoid;
pub mod linalg;
pub mod morita;
pub mod report;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
pub use report::ValidationReport;
