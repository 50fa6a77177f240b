//! Numerical diagnostics for exact planar Mumford-Shah minimizers.
//!
//! The crate evaluates, on a catalog of explicit minimizers (crack-tip,
//! planar interface, propeller, smooth harmonic fields), every disk-based
//! functional of the 2d regularity theory:
//!
//! * the truncated entropy `F(r, x0)` and the energy density `E(r, x0)`,
//! * the dissipation functional `D(r, x0)` in both of its representations,
//! * the tangential/normal balance relation on circles (`dlms_residual`),
//! * the circle Dirichlet lower bound in terms of crossing tangents,
//! * Fourier harmonic-extension competitor energies on disks and sectors,
//! * the certified two-point angle inequality with its numeric constants.
//!
//! All operations are pure functions of immutable inputs and are safe to
//! evaluate from any number of threads. With the default `parallel` feature
//! the radius scans and certification grids fan out over rayon; disabling
//! the feature compiles the identical sequential code paths.

pub mod competitors;
pub mod diagnostics;
mod error;
mod exec;
pub mod geometry;
pub mod quadrature;
pub mod twopoint;

pub use error::Error;

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
