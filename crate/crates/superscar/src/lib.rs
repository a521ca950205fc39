//! Numerical laboratory for directional quasimodes on translation surfaces.
//!
//! The pipeline: a rational polygon is unfolded under its dihedral group into
//! a translation surface; periodic cylinders of the straight-line flow are
//! enumerated; Gaussian wave packets are averaged in time along a cylinder to
//! produce approximate Laplace eigenfunctions; and the resulting L2 norms,
//! spectral widths, and momentum-space measures are computed along two
//! independent routes wherever a cross-check is possible.

pub mod cylinders;
pub mod geometry;
pub mod io;
pub mod momentum;
pub mod quad;
pub mod quasimode;
pub mod spectral;
pub mod vec2;
pub mod wavepacket;

pub use vec2::Vec2;
