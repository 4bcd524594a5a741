//! Classical geometry of the Bessel modes.
//!
//! A mode is labelled by its family (TM or TE), azimuthal index `m` and the
//! wavenumbers `(k_perp, k_z)`; the frequency is `omega = c |k|`. Every
//! evaluator uses the phase `exp(-i omega t + i k_z z + i m phi)`.
//!
//! The two vector shapes are
//!
//! ```text
//! M = (omega / c k_z) [ m J_m(x)/x e_rho + i J'_m(x) e_phi ] phase
//! N = [ i J'_m(x) e_rho - m J_m(x)/x e_phi + (k_perp/k_z) J_m(x) e_z ] phase
//! ```
//!
//! with `x = k_perp rho`, so that `c k_z M = omega e_z x N`. Potentials and fields follow from these:
//! `A_TM = (c / i omega) E N`, `A_TE = -(c / i omega) E M`,
//! `E = (i omega / c) A`, `B_TM = E M`, `B_TE = E N`, where `E` is the
//! amplitude fixed by [`NormalizationConvention`].

mod circular;
mod hertz;
mod spectrum;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{jn, jn_over_x, jn_prime};
use crate::vec3::{ComplexVec3, Frame};

pub use circular::{eval_circular, eval_circular_direct, Handedness};
pub use hertz::{hertz_fields, hertz_matching_constant};
pub use spectrum::{
    angular_spectrum, angular_spectrum_scalar, min_spectrum_nodes, SpectrumSample, VectorKind,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Polarization family of a Bessel mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Transverse magnetic (`B_z = 0`), generated by the first Hertz potential.
    TM,
    /// Transverse electric (`E_z = 0`), generated by the second Hertz potential.
    TE,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::TM => "tm",
            Family::TE => "te",
        }
    }
}

/// Quantum numbers of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex {
    pub family: Family,
    pub m: i32,
    pub k_perp: f64,
    pub k_z: f64,
}

impl ModeIndex {
    pub fn new(family: Family, m: i32, k_perp: f64, k_z: f64) -> Result<Self> {
        if !(k_perp > 0.0 && k_perp.is_finite()) {
            return Err(Error::Construction(format!(
                "k_perp must be positive and finite, got {k_perp}"
            )));
        }
        if k_z == 0.0 || !k_z.is_finite() {
            return Err(Error::Construction(format!(
                "k_z must be nonzero and finite, got {k_z}"
            )));
        }
        Ok(Self {
            family,
            m,
            k_perp,
            k_z,
        })
    }

    /// Same geometry with another family.
    pub fn with_family(self, family: Family) -> Self {
        Self { family, ..self }
    }

    /// Same family and wavenumbers with another azimuthal index.
    pub fn with_m(self, m: i32) -> Self {
        Self { m, ..self }
    }

    pub fn k(&self) -> f64 {
        self.k_perp.hypot(self.k_z)
    }

    pub fn omega(&self, c: f64) -> f64 {
        c * self.k()
    }

    /// `c k_z / omega`, the cosine of the cone angle.
    pub fn kappa(&self) -> f64 {
        self.k_z / self.k()
    }
}

/// Sample point in cylindrical coordinates plus time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylPoint {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
    pub t: f64,
}

impl CylPoint {
    /// Validates `rho >= 0` and wraps `phi` into `[-pi, pi)`.
    pub fn new(rho: f64, phi: f64, z: f64, t: f64) -> Result<Self> {
        if !(rho >= 0.0 && rho.is_finite()) || !phi.is_finite() || !z.is_finite() || !t.is_finite()
        {
            return Err(Error::Construction(format!(
                "invalid point rho={rho} phi={phi} z={z} t={t}"
            )));
        }
        Ok(Self {
            rho,
            phi: wrap_angle(phi),
            z,
            t,
        })
    }

    pub fn from_cartesian(x: f64, y: f64, z: f64, t: f64) -> Self {
        Self {
            rho: x.hypot(y),
            phi: wrap_angle(y.atan2(x)),
            z,
            t,
        }
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let (s, c) = self.phi.sin_cos();
        [self.rho * c, self.rho * s, self.z]
    }
}

fn wrap_angle(phi: f64) -> f64 {
    let w = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        -PI
    } else {
        w
    }
}

/// Rule for the mode amplitude `E_m(k_perp, k_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeRule {
    /// `k_z c sqrt(hbar k_perp / (2 pi omega))`, one photon of energy
    /// `hbar omega` per unit of the delta normalization.
    Physical,
    /// Amplitude 1; useful for bare geometry.
    Unit,
}

/// Physical scales and amplitude rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationConvention {
    pub hbar: f64,
    pub c: f64,
    pub rule: AmplitudeRule,
}

impl Default for NormalizationConvention {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            rule: AmplitudeRule::Physical,
        }
    }
}

impl NormalizationConvention {
    pub fn new(hbar: f64, c: f64, rule: AmplitudeRule) -> Result<Self> {
        if !(hbar > 0.0 && c > 0.0) {
            return Err(Error::Construction(format!(
                "hbar and c must be positive, got {hbar}, {c}"
            )));
        }
        Ok(Self { hbar, c, rule })
    }

    /// Amplitude of either family; the two families share it.
    pub fn amplitude(&self, k: &ModeIndex) -> f64 {
        match self.rule {
            AmplitudeRule::Unit => 1.0,
            AmplitudeRule::Physical => {
                let omega = k.omega(self.c);
                k.k_z * self.c * (self.hbar * k.k_perp / (2.0 * PI * omega)).sqrt()
            }
        }
    }
}

/// Which formula `N` is assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NPath {
    /// `e_rho, e_phi, e_z` components.
    Cylindrical,
    /// Expansion on `e_+, e_-, e_3`; returned in the Cartesian frame.
    Helical,
}

pub(crate) fn phase(k: &ModeIndex, m: i32, p: &CylPoint, c: f64) -> Complex64 {
    Complex64::from_polar(1.0, -k.omega(c) * p.t + k.k_z * p.z + m as f64 * p.phi)
}

/// Axial and temporal part of the phase only.
fn zt_phase(k: &ModeIndex, p: &CylPoint, c: f64) -> Complex64 {
    Complex64::from_polar(1.0, -k.omega(c) * p.t + k.k_z * p.z)
}

/// `psi_m = J_m(k_perp rho) exp(-i omega t + i k_z z + i m phi)`.
pub fn psi(k: &ModeIndex, m: i32, p: &CylPoint, c: f64) -> Complex64 {
    phase(k, m, p, c) * jn(m, k.k_perp * p.rho)
}

fn e_plus() -> ComplexVec3 {
    ComplexVec3::e_plus()
}

fn e_minus() -> ComplexVec3 {
    ComplexVec3::e_minus()
}

/// The vector `M`; cylindrical frame off the axis, Cartesian on it.
pub fn eval_m(k: &ModeIndex, p: &CylPoint, c: f64) -> ComplexVec3 {
    let pre = k.k() / k.k_z;
    if p.rho == 0.0 {
        return eval_m_helical(k, p, c);
    }
    let x = k.k_perp * p.rho;
    let ph = phase(k, k.m, p, c) * pre;
    ComplexVec3::new(
        [
            ph * jn_over_x(k.m, x),
            ph * I * jn_prime(k.m, x),
            Complex64::new(0.0, 0.0),
        ],
        Frame::Cylindrical { phi: p.phi },
    )
}

/// One term `coef psi_order basis` of a helical expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicalTerm {
    pub coef: Complex64,
    pub order: i32,
    pub basis: ComplexVec3,
}

/// Helical expansion of `M` or `N`:
///
/// ```text
/// M = (omega / 2 c k_z) [psi_{m-1} e_+ + psi_{m+1} e_-]
/// N = (i/2) psi_{m-1} e_+ - (i/2) psi_{m+1} e_- + (k_perp/k_z) psi_m e_3
/// ```
pub fn helical_terms(which: VectorKind, k: &ModeIndex) -> Vec<HelicalTerm> {
    let t = |coef, order, basis| HelicalTerm { coef, order, basis };
    match which {
        VectorKind::M => {
            let pre = Complex64::new(0.5 * k.k() / k.k_z, 0.0);
            vec![t(pre, k.m - 1, e_plus()), t(pre, k.m + 1, e_minus())]
        }
        VectorKind::N => vec![
            t(I * 0.5, k.m - 1, e_plus()),
            t(-I * 0.5, k.m + 1, e_minus()),
            t(
                Complex64::new(k.k_perp / k.k_z, 0.0),
                k.m,
                ComplexVec3::e3(),
            ),
        ],
    }
}

fn sum_helical(which: VectorKind, k: &ModeIndex, p: &CylPoint, c: f64) -> ComplexVec3 {
    helical_terms(which, k)
        .into_iter()
        .fold(ComplexVec3::zero(Frame::Cartesian), |acc, t| {
            acc + t.basis * (t.coef * psi(k, t.order, p, c))
        })
}

/// `M` from its helical expansion, Cartesian frame.
pub fn eval_m_helical(k: &ModeIndex, p: &CylPoint, c: f64) -> ComplexVec3 {
    sum_helical(VectorKind::M, k, p, c)
}

/// The vector `N` by the cylindrical formula (helical on the axis).
pub fn eval_n(k: &ModeIndex, p: &CylPoint, c: f64) -> ComplexVec3 {
    eval_n_with(k, p, c, NPath::Cylindrical)
}

pub fn eval_n_with(k: &ModeIndex, p: &CylPoint, c: f64, path: NPath) -> ComplexVec3 {
    if path == NPath::Helical || p.rho == 0.0 {
        return sum_helical(VectorKind::N, k, p, c);
    }
    let x = k.k_perp * p.rho;
    let ph = phase(k, k.m, p, c);
    ComplexVec3::new(
        [
            ph * I * jn_prime(k.m, x),
            -ph * jn_over_x(k.m, x),
            ph * (k.k_perp / k.k_z * jn(k.m, x)),
        ],
        Frame::Cylindrical { phi: p.phi },
    )
}

/// Vector potential of a TM or TE mode.
pub fn eval_potential(k: &ModeIndex, p: &CylPoint, norm: &NormalizationConvention) -> ComplexVec3 {
    let omega = k.omega(norm.c);
    let pre = Complex64::new(0.0, -norm.c / omega) * norm.amplitude(k); // c / (i omega)
    match k.family {
        Family::TM => eval_n(k, p, norm.c) * pre,
        Family::TE => eval_m(k, p, norm.c) * (-pre),
    }
}

/// Electric field `(i omega / c) A`.
pub fn eval_e(k: &ModeIndex, p: &CylPoint, norm: &NormalizationConvention) -> ComplexVec3 {
    let omega = k.omega(norm.c);
    eval_potential(k, p, norm) * Complex64::new(0.0, omega / norm.c)
}

/// Magnetic field: `E M` for TM, `E N` for TE.
pub fn eval_b(k: &ModeIndex, p: &CylPoint, norm: &NormalizationConvention) -> ComplexVec3 {
    let a = norm.amplitude(k);
    match k.family {
        Family::TM => eval_m(k, p, norm.c) * a,
        Family::TE => eval_n(k, p, norm.c) * a,
    }
}

#[cfg(test)]
mod tests;
