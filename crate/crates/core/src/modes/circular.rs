//! Right and left circular Bessel modes.
//!
//! `A_R(m) = A_TM(m-1) + i kappa A_TE(m-1)` and
//! `A_L(m) = A_TM(m+1) - i kappa A_TE(m+1)` with `kappa = c k_z / omega`.
//! Expanded on the helical basis these are
//!
//! ```text
//! A_R(m) = -(c E / omega) [ psi_m e_- + i (k_perp/k_z) psi_{m-1} e_3 ]
//! A_L(m) =  (c E / omega) [ psi_m e_+ - i (k_perp/k_z) psi_{m+1} e_3 ]
//! ```
//!
//! The longitudinal coefficient is fixed by transversality; it carries no
//! factor 1/2.

use num_complex::Complex64;

use super::{eval_potential, psi, CylPoint, Family, ModeIndex, NormalizationConvention};
use crate::error::Result;
use crate::vec3::ComplexVec3;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    R,
    L,
}

/// `A_R(m)` or `A_L(m)` assembled from TM and TE potentials (unit prefactor).
pub fn eval_circular(
    h: Handedness,
    m: i32,
    k_perp: f64,
    k_z: f64,
    p: &CylPoint,
    norm: &NormalizationConvention,
) -> Result<ComplexVec3> {
    let (shift, sign) = match h {
        Handedness::R => (m - 1, 1.0),
        Handedness::L => (m + 1, -1.0),
    };
    let tm = ModeIndex::new(Family::TM, shift, k_perp, k_z)?;
    let te = tm.with_family(Family::TE);
    let kappa = tm.kappa();
    Ok(eval_potential(&tm, p, norm) + eval_potential(&te, p, norm) * (I * sign * kappa))
}

/// Closed helical form of the same mode, Cartesian frame.
pub fn eval_circular_direct(
    h: Handedness,
    m: i32,
    k_perp: f64,
    k_z: f64,
    p: &CylPoint,
    norm: &NormalizationConvention,
) -> Result<ComplexVec3> {
    let k = ModeIndex::new(Family::TM, m, k_perp, k_z)?;
    let a0 = norm.c * norm.amplitude(&k) / k.omega(norm.c);
    let ratio = k_perp / k_z;
    Ok(match h {
        Handedness::R => {
            (ComplexVec3::e_minus() * psi(&k, m, p, norm.c)
                + ComplexVec3::e3() * (I * ratio * psi(&k, m - 1, p, norm.c)))
                * (-a0)
        }
        Handedness::L => {
            (ComplexVec3::e_plus() * psi(&k, m, p, norm.c)
                - ComplexVec3::e3() * (I * ratio * psi(&k, m + 1, p, norm.c)))
                * a0
        }
    })
}
