use num_complex::Complex64;

use super::legendre::normalized_legendre_column_sc;
use crate::error::{Error, Result};
use crate::vec3::ComplexVec3;

/// Electric (gradient) or magnetic (rotated gradient) vector harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VshKind {
    E,
    M,
}

/// `Y_jm`, its polar derivative, and `(1/sin theta) dY/dphi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicGradient {
    pub y: Complex64,
    pub d_theta: Complex64,
    pub d_phi_over_sin: Complex64,
}

/// Values for `m >= 0`: `(Pbar_l^m, dPbar_l^m/dtheta, m Pbar_l^m / sin theta)`.
fn legendre_parts(l: u32, m: u32, theta: f64) -> (f64, f64, f64) {
    let (s, x) = theta.sin_cos();
    let col = |mm: u32| normalized_legendre_column_sc(l, mm, x, s.abs())[l as usize];
    let p = col(m);
    let p_up = if m < l { col(m + 1) } else { 0.0 };
    let p_down = if m >= 1 {
        col(m - 1)
    } else {
        -col(1.min(l)) * if l >= 1 { 1.0 } else { 0.0 }
    };
    let (lf, mf) = (l as f64, m as f64);
    let d_theta = 0.5
        * (((lf - mf) * (lf + mf + 1.0)).sqrt() * p_up
            - ((lf + mf) * (lf - mf + 1.0)).sqrt() * p_down);
    let m_over_sin = if m == 0 {
        0.0
    } else if s.abs() > 1e-10 {
        mf * p / s
    } else if m == 1 {
        let n1 = ((2.0 * lf + 1.0) / (4.0 * std::f64::consts::PI * lf * (lf + 1.0))).sqrt();
        let half = 0.5 * lf * (lf + 1.0);
        if x > 0.0 {
            -n1 * half
        } else if l.is_multiple_of(2) {
            n1 * half
        } else {
            -n1 * half
        }
    } else {
        0.0
    };
    (p, d_theta, m_over_sin)
}

fn check_jm(j: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > j {
        return Err(Error::Domain(format!(
            "spherical harmonic needs |m| <= j (got j={j}, m={m})"
        )));
    }
    Ok(())
}

/// Orthonormal spherical harmonic `Y_jm(theta, phi)` with the Condon–Shortley phase.
pub fn spherical_harmonic(j: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    Ok(spherical_harmonic_gradient(j, m, theta, phi)?.y)
}

/// `Y_jm` together with the two tangential derivatives needed for its surface gradient.
pub fn spherical_harmonic_gradient(
    j: u32,
    m: i32,
    theta: f64,
    phi: f64,
) -> Result<HarmonicGradient> {
    check_jm(j, m)?;
    let ma = m.unsigned_abs();
    let (p, dp, mp) = legendre_parts(j, ma, theta);
    let e = Complex64::from_polar(1.0, ma as f64 * phi);
    let i = Complex64::i();
    let pos = HarmonicGradient {
        y: e * p,
        d_theta: e * dp,
        d_phi_over_sin: i * e * mp,
    };
    if m >= 0 {
        return Ok(pos);
    }
    // Y_{j,-m} = (-1)^m conj(Y_{j,m}); the derivatives follow.
    let sign = if ma.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(HarmonicGradient {
        y: pos.y.conj() * sign,
        d_theta: pos.d_theta.conj() * sign,
        d_phi_over_sin: pos.d_phi_over_sin.conj() * sign,
    })
}

/// Transverse vector harmonic on the unit sphere, in Cartesian components.
///
/// `E`: `grad_n Y_jm / (j (j+1))`; `M`: `n x Y^(E)`.
pub fn vector_spherical_harmonic(
    kind: VshKind,
    j: u32,
    m: i32,
    direction: [f64; 3],
) -> Result<ComplexVec3> {
    if j == 0 {
        return Err(Error::Domain(
            "no transverse vector harmonic with j = 0".into(),
        ));
    }
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "direction must be a unit vector (|n| = {norm})"
        )));
    }
    let theta = direction[2].clamp(-1.0, 1.0).acos();
    let phi = direction[1].atan2(direction[0]);
    let g = spherical_harmonic_gradient(j, m, theta, phi)?;
    Ok(vsh_from_gradient(kind, j, theta, phi, &g))
}

pub(crate) fn vsh_from_gradient(
    kind: VshKind,
    j: u32,
    theta: f64,
    phi: f64,
    g: &HarmonicGradient,
) -> ComplexVec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let th_hat = [ct * cp, ct * sp, -st];
    let ph_hat = [-sp, cp, 0.0];
    let jj = (j * (j + 1)) as f64;
    let e = ComplexVec3::cartesian(
        [0, 1, 2].map(|i| (g.d_theta * th_hat[i] + g.d_phi_over_sin * ph_hat[i]) / jj),
    );
    match kind {
        VshKind::E => e,
        VshKind::M => {
            let n = ComplexVec3::cartesian([st * cp, st * sp, ct].map(|v| Complex64::new(v, 0.0)));
            n.cross(&e)
        }
    }
}
