//! Rotated-polynomial frames on the sphere `S^{d-1}`: spherical harmonics in
//! arbitrary dimension, exact product quadrature on spheres and on `SO(d)`,
//! frame/dual verification from Fourier coefficients, analysis and synthesis,
//! localization diagnostics and the directional wavelet/curvelet generators.

pub mod constructions;
pub mod diagnostics;
pub mod error;
pub mod frames;
pub mod harmonics;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
