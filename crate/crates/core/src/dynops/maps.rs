use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{cylindrical, require_both, Units};
use crate::error::{Error, Result};
use crate::lattice::{BasisMap, ModeSpace};
use crate::modes::Family;

/// `a_+- = (a_TM +- i a_TE) / sqrt 2` at every `(m, k)`.
///
/// The `+` operator takes the TM slot of the index layout, `-` the TE slot.
pub fn make_pm_map(space: &Arc<ModeSpace>) -> Result<BasisMap> {
    let l = cylindrical(space)?;
    require_both(l)?;
    let d = l.dim();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut t = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    let mut labels = vec![String::new(); d];
    for j in 0..d {
        let s = l.site(j);
        let tm = l
            .index(Family::TM, s.m, s.ip, s.iz)
            .expect("both families present");
        let te = l
            .index(Family::TE, s.m, s.ip, s.iz)
            .expect("both families present");
        let sign = if s.family == Family::TM { 1.0 } else { -1.0 };
        t[(j, tm)] = Complex64::new(h, 0.0);
        t[(j, te)] = Complex64::new(0.0, sign * h);
        labels[j] = format!(
            "{}:m={}:kp{}:kz{}",
            if sign > 0.0 { "+" } else { "-" },
            s.m,
            s.ip,
            s.iz
        );
    }
    BasisMap::new(space, t, Some(labels))
}

/// Circular basis with `kappa = c k_z / omega` at each node:
///
/// ```text
/// a_R(m+1) = (a_TM(m) + i kappa a_TE(m)) / sqrt(1 + kappa^2)
/// a_L(m-1) = (a_TM(m) - i kappa a_TE(m)) / sqrt(1 + kappa^2)
/// ```
///
/// Bookkeeping: the row in the TM slot at `m` holds `R` with label `m+1`,
/// the TE slot at `m` holds `L` with label `m-1`. The labels of the two
/// edge values of `m` fall one step outside the lattice range, so the
/// range must contain at least three values. The map is not unitary.
pub fn make_rl_map(space: &Arc<ModeSpace>, units: &Units) -> Result<BasisMap> {
    let l = cylindrical(space)?;
    require_both(l)?;
    if l.m_count() < 3 {
        return Err(Error::Construction(format!(
            "circular basis needs at least three m values to shift into, lattice has {}",
            l.m_count()
        )));
    }
    let d = l.dim();
    let mut t = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    let mut labels = vec![String::new(); d];
    for j in 0..d {
        let s = l.site(j);
        let kappa = units.c * l.mode(j).k_z / l.mode(j).omega(units.c);
        let norm = 1.0 / (1.0 + kappa * kappa).sqrt();
        let tm = l
            .index(Family::TM, s.m, s.ip, s.iz)
            .expect("both families present");
        let te = l
            .index(Family::TE, s.m, s.ip, s.iz)
            .expect("both families present");
        let (sign, tag, shift) = if s.family == Family::TM {
            (1.0, "R", 1)
        } else {
            (-1.0, "L", -1)
        };
        t[(j, tm)] = Complex64::new(norm, 0.0);
        t[(j, te)] = Complex64::new(0.0, sign * kappa * norm);
        labels[j] = format!("{tag}:m={}:kp{}:kz{}", s.m + shift, s.ip, s.iz);
    }
    BasisMap::new(space, t, Some(labels))
}
