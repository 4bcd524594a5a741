use std::sync::Arc;

use num_complex::Complex64;

use super::{Components, Units};
use crate::error::{Error, Result};
use crate::lattice::{ModeSpace, QuadraticOperator};

/// Orbital angular momentum on spherical vector modes:
///
/// ```text
/// L_+ = hbar/2 sum sqrt((j - m)(j + m + 1)) a+_{j,m+1} a_{j,m}   (coefficient of e_-)
/// L_- = hbar/2 sum sqrt((j + m)(j - m + 1)) a+_{j,m-1} a_{j,m}   (coefficient of e_+)
/// L_3 = hbar sum m N_{j,m}
/// ```
///
/// so that `L_x = L_+ + L_-` and `L_y = i (L_- - L_+)` obey the standard
/// algebra `[L_x, L_y] = i hbar L_z`.
pub fn build_l_spherical(space: &Arc<ModeSpace>, units: &Units) -> Result<Components> {
    let sl = space
        .as_spherical()
        .ok_or_else(|| Error::Construction("operation needs a spherical lattice".into()))?;
    let h = units.hbar;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut z = Vec::new();
    for idx in 0..sl.dim() {
        let s = sl.site(idx);
        let (j, m) = (s.j as f64, s.m as f64);
        if let Some(up) = sl.index(s.family, s.iw, s.j, s.m + 1) {
            plus.push((
                up,
                idx,
                Complex64::new(0.5 * h * ((j - m) * (j + m + 1.0)).sqrt(), 0.0),
            ));
        }
        if let Some(down) = sl.index(s.family, s.iw, s.j, s.m - 1) {
            minus.push((
                down,
                idx,
                Complex64::new(0.5 * h * ((j + m) * (j - m + 1.0)).sqrt(), 0.0),
            ));
        }
        z.push((idx, idx, Complex64::new(h * m, 0.0)));
    }
    Ok(Components {
        plus: QuadraticOperator::from_entries(space, plus)?,
        minus: QuadraticOperator::from_entries(space, minus)?,
        z: QuadraticOperator::from_entries(space, z)?,
    })
}
