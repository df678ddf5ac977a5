//! Numerical toolkit for minimal surfaces in R^4 built from holomorphic data.
//!
//! The crate evaluates Weierstrass elliptic functions with two independent
//! routes, assembles period matrices for genus-1 surface data, measures
//! angles between planes under simultaneous rotations, and runs the
//! nonexistence and degree checks for cyclic-cover spectral data.

pub mod cplx;
pub mod quad;
pub mod linalg;
pub mod elliptic;
pub mod rep;
pub mod mesh;
pub mod planes;
pub mod genus1;
pub mod classify;
pub mod cover;
pub mod report;

pub use num_complex::Complex64;

/// Unified error type for all toolkit operations.
#[derive(Debug, thiserror::Error)]
pub enum WlabError {
    /// Input outside the operation's domain (wrong half-plane, bad range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Lattice degenerates: discriminant g2^3 - 27 g3^2 vanishes.
    #[error("degenerate lattice: |discriminant| = {disc_abs:.3e}")]
    DegenerateLattice { disc_abs: f64 },
    /// Evaluation point too close to a lattice point (a pole).
    #[error("pole at lattice point {lattice_point}: distance {distance:.3e}")]
    Pole {
        lattice_point: Complex64,
        distance: f64,
    },
    /// The two independent evaluation routes disagree beyond tolerance.
    #[error("cross-route mismatch: |delta| = {delta:.3e} > tol {tol:.3e}")]
    RouteMismatch { delta: f64, tol: f64 },
    /// A point where a map's numerator and denominator both vanish.
    #[error("degenerate point for map evaluation at z = {z}")]
    DegeneratePoint { z: Complex64 },
    /// Precondition on a derived object failed (e.g. wrong rank).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Numerical slope/order estimation could not settle on an integer.
    #[error("inconclusive estimate: {0}")]
    Inconclusive(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, WlabError>;
