//! Special functions behind every mode evaluation: cylindrical Bessel
//! functions, associated Legendre functions, scalar and vector spherical
//! harmonics, and closed-form finite-radius Bessel overlaps.
//!
//! All functions are pure; none keep state between calls.

mod bessel;
mod harmonics;
mod legendre;

pub use bessel::{
    bessel_j, bessel_j_prime, jn, jn_orders, jn_over_x, jn_prime, lommel_overlap,
    lommel_overlap_equal, MAX_ARGUMENT, MAX_ORDER,
};
pub use harmonics::{
    spherical_harmonic, spherical_harmonic_gradient, vector_spherical_harmonic, HarmonicGradient,
    VshKind,
};
pub use legendre::{
    assoc_legendre, assoc_legendre_deriv, assoc_legendre_dkz, normalized_legendre_column,
    MAX_DEGREE,
};

use crate::error::{Error, Result};

/// Convergence controls for iterative or adaptive numerics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Tolerance {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) || max_terms < 1 {
            return Err(Error::Construction(format!(
                "tolerance needs rel_tol > 0, abs_tol > 0, max_terms >= 1 (got {rel_tol}, {abs_tol}, {max_terms})"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_terms,
        })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_terms: 4000,
        }
    }
}
