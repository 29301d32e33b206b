//! Discrete Schrödinger operators on `Z^d` and their low-lying spectra.
//!
//! The crate assembles lattice operators of the form
//! `H_N = (N^2/2) Δ + N^{2(1-γ)} V(x/N)` on finite Dirichlet boxes, solves
//! for their lowest eigenvalues, and provides the harmonic-oscillator
//! machinery (Hermite quasimodes, nodal interval decompositions, IMS
//! partitions) used to study the coupled continuum/semiclassical limit
//! `N → ∞` in every scaling regime `γ ∈ R`.
//!
//! Layout:
//!
//! * [`potentials`]: potentials on `R^d`, their wells and scaling parameters.
//! * [`hermite`]: Hermite polynomials, zeros, lattice test functions.
//! * [`lattice`]: boxes, operator assembly, interval decompositions, IMS.
//! * [`eigensolve`]: Sturm bisection, inverse iteration, spectral diagnostics.
//! * [`semiclassics`]: limit spectra and the convergence experiments.

pub mod eigensolve;
pub mod error;
pub mod hermite;
pub mod lattice;
mod numerics;
pub mod potentials;
pub mod quadrature;
pub mod semiclassics;

pub use error::{Error, Result};

pub use eigensolve::{NodalReport, SpectrumResult, Symmetry};
pub use hermite::{HermiteBasis, TestFunction};
pub use lattice::{
    IntervalDecomposition, LatticeBox, ModifiedPotentialParams, SparseSymmetric,
    SymmetricLatticeOperator,
};
pub use potentials::{Potential, ScalingParams, ValidationReport, Well};
pub use semiclassics::{ConvergenceTable, RegimeSweep, SigmaSequence};
