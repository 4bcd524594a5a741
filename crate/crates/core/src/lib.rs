//! Quantized electromagnetic Bessel beams.
//!
//! The crate evaluates the vector Bessel modes of the free electromagnetic
//! field, writes the dynamical observables (energy, momentum, orbital
//! angular momentum, helicity, Stokes operators) as number-conserving
//! quadratic forms in ladder operators on a discretized mode lattice, and
//! checks their commutator algebra against a brute-force truncated Fock
//! space realization. Orthogonality integrals and the plane- and
//! spherical-wave expansions of the modes are checked by quadrature.
//!
//! Module map:
//! - [`specfun`]: Bessel, Legendre and spherical harmonic functions.
//! - [`modes`]: the mode vectors `M`, `N`, potentials and fields.
//! - [`lattice`]: mode lattices, quadratic operators, basis maps, Fock oracle.
//! - [`dynops`]: builders for every observable.
//! - [`verify`]: the relation, basis, quadrature and spherical suites.
//! - [`cli`]: configuration, commands and file formats used by the binary.

// `!(x > 0.0)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynops;
pub mod error;
pub mod lattice;
pub mod modes;
pub mod quad;
pub mod specfun;
pub mod vec3;
pub mod verify;

pub use error::{Error, Result};
pub use vec3::{ComplexVec3, Frame};
