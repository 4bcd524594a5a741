//! Plane-wave (angular spectrum) representation of the mode vectors.
//!
//! With `theta_k` the cone angle (`cos theta_k = c k_z / omega`) and
//!
//! ```text
//! I[v] = (1 / 2 pi) \oint dphi_k e^{i m phi_k} e^{i k_perp rho cos(phi - phi_k)} v(phi_k)
//! ```
//!
//! the vectors are `M = -(-i)^m (omega / c k_z) I[phi_hat_k] e^{i k_z z - i omega t}`
//! and `N` the same with `theta_hat_k`. The radial and axial deltas are
//! collapsed analytically; the azimuthal integral is a periodic trapezoid,
//! which converges geometrically once the node count exceeds the bandwidth.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{zt_phase, CylPoint, ModeIndex};
use crate::quad::periodic_trapezoid;
use crate::vec3::ComplexVec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    M,
    N,
}

/// Quadrature value plus a warning when the node count is below the
/// bandwidth rule.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    pub value: ComplexVec3,
    pub n_nodes: usize,
    pub warning: Option<String>,
}

/// Recommended node count `8 (|m| + k_perp rho + 8)`.
pub fn min_spectrum_nodes(m: i32, x: f64) -> usize {
    (8.0 * (m.unsigned_abs() as f64 + x + 8.0)).ceil() as usize
}

fn minus_i_pow(m: i32) -> Complex64 {
    match m.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `(-i)^m / 2 pi \oint e^{i m phi_k} e^{i x cos(phi - phi_k)}`, which equals
/// `J_m(x) e^{i m phi}`.
pub fn angular_spectrum_scalar(m: i32, x: f64, phi: f64, n_nodes: usize) -> Complex64 {
    let s = periodic_trapezoid(n_nodes, |fk| {
        Complex64::from_polar(1.0, m as f64 * fk + x * (phi - fk).cos())
    });
    s * minus_i_pow(m) / (2.0 * PI)
}

/// `M` or `N` by quadrature over the plane-wave cone; Cartesian frame.
pub fn angular_spectrum(
    which: VectorKind,
    k: &ModeIndex,
    p: &CylPoint,
    c: f64,
    n_nodes: usize,
) -> SpectrumSample {
    let x = k.k_perp * p.rho;
    let need = min_spectrum_nodes(k.m, x);
    let warning = (n_nodes < need)
        .then(|| format!("{n_nodes} nodes below the recommended {need}; expect reduced accuracy"));
    let (cos_t, sin_t) = (k.kappa(), k.k_perp / k.k());
    let n = n_nodes.max(1);
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    // Explicit sum over the same nodes periodic_trapezoid uses, one pass for all components.
    let h = 2.0 * PI / n as f64;
    for i in 0..n {
        let fk = -PI + h * i as f64;
        let w = Complex64::from_polar(h, k.m as f64 * fk + x * (p.phi - fk).cos());
        let (s, co) = fk.sin_cos();
        let v = match which {
            VectorKind::M => [-s, co, 0.0],
            VectorKind::N => [cos_t * co, cos_t * s, -sin_t],
        };
        for (a, vi) in acc.iter_mut().zip(v) {
            *a += w * vi;
        }
    }
    let pre = -minus_i_pow(k.m) * (k.k() / k.k_z) / (2.0 * PI) * zt_phase(k, p, c);
    SpectrumSample {
        value: ComplexVec3::cartesian(acc.map(|a| a * pre)),
        n_nodes: n,
        warning,
    }
}
