//! Fields built directly from the Hertz potentials
//! `Theta = J_m(k_perp rho) exp(-i omega t + i k_z z + i m phi)`.
//!
//! For TM modes `Theta_1 = Theta, Theta_2 = 0`; for TE the roles swap. The
//! derivatives are taken analytically, so this path shares nothing with
//! [`eval_m`](super::eval_m) / [`eval_n`](super::eval_n) beyond the Bessel
//! functions themselves.

use num_complex::Complex64;

use super::{phase, CylPoint, Family, ModeIndex, NormalizationConvention};
use crate::error::{Error, Result};
use crate::specfun::{jn, jn_prime};
use crate::vec3::{ComplexVec3, Frame};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(E, B)` in the cylindrical frame with unit Hertz constant.
///
/// Off the axis only; the component formulas carry `1/rho`.
pub fn hertz_fields(k: &ModeIndex, p: &CylPoint, c: f64) -> Result<(ComplexVec3, ComplexVec3)> {
    let (rho, phi) = (p.rho, p.phi);
    if !(rho > 0.0) {
        return Err(Error::Domain(format!(
            "Hertz-potential fields need rho > 0, got {rho}"
        )));
    }
    let omega = k.omega(c);
    let x = k.k_perp * rho;
    let e = phase(k, k.m, p, c);
    let th = e * jn(k.m, x); // Theta
    let th_rho = e * (k.k_perp * jn_prime(k.m, x)); // d Theta / d rho
    let (dz, dphi, dt) = (I * k.k_z, I * k.m as f64, -I * omega);

    // Cylindrical components of the operators acting on the driving potential.
    let lon = [
        dz * th_rho,
        dz * dphi * th / rho,
        (-dt * dt / (c * c) + dz * dz) * th,
    ];
    let rot = [
        dt * dphi * th / (c * rho),
        -dt * th_rho / c,
        Complex64::new(0.0, 0.0),
    ];
    let frame = Frame::Cylindrical { phi };
    let (ev, bv) = match k.family {
        // E = grad-like part of Theta_1, B = rotational part.
        Family::TM => (lon, rot),
        // E_rho = -(1/c rho) d_t d_phi Theta_2, E_phi = (1/c) d_t d_rho Theta_2.
        Family::TE => ([-rot[0], -rot[1], rot[2]], lon),
    };
    Ok((ComplexVec3::new(ev, frame), ComplexVec3::new(bv, frame)))
}

/// Constant mapping the Hertz-path fields onto the normalized mode fields.
pub fn hertz_matching_constant(k: &ModeIndex, norm: &NormalizationConvention) -> f64 {
    norm.amplitude(k) / (k.k_perp * k.k_z)
}
