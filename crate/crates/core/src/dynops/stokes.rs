use std::sync::Arc;

use num_complex::Complex64;

use super::{cylindrical, require_both};
use crate::error::{Error, Result};
use crate::lattice::{ModeSpace, QuadraticOperator};
use crate::modes::Family;

/// Stokes operators of one `(TM, TE)` pair; TM plays `x`, TE plays `y`.
#[derive(Debug, Clone)]
pub struct Stokes {
    pub s0: QuadraticOperator,
    pub s1: QuadraticOperator,
    pub s2: QuadraticOperator,
    pub s3: QuadraticOperator,
}

impl Stokes {
    pub fn components(&self) -> [&QuadraticOperator; 4] {
        [&self.s0, &self.s1, &self.s2, &self.s3]
    }

    fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            s0: self.s0.plus(&other.s0)?,
            s1: self.s1.plus(&other.s1)?,
            s2: self.s2.plus(&other.s2)?,
            s3: self.s3.plus(&other.s3)?,
        })
    }
}

/// Stokes operators at node `(ip, iz)` and azimuthal index `m`.
pub fn build_stokes(space: &Arc<ModeSpace>, ip: usize, iz: usize, m: i32) -> Result<Stokes> {
    let l = cylindrical(space)?;
    require_both(l)?;
    let x = l
        .index(Family::TM, m, ip, iz)
        .ok_or_else(|| Error::Construction(format!("no mode m={m} at node ({ip}, {iz})")))?;
    let y = l
        .index(Family::TE, m, ip, iz)
        .expect("both families present");
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    Ok(Stokes {
        s0: QuadraticOperator::from_entries(space, [(x, x, one), (y, y, one)])?,
        s1: QuadraticOperator::from_entries(space, [(x, y, one), (y, x, one)])?,
        s2: QuadraticOperator::from_entries(space, [(y, x, i), (x, y, -i)])?,
        s3: QuadraticOperator::from_entries(space, [(x, x, one), (y, y, -one)])?,
    })
}

/// Sum of the per-mode Stokes operators over every `(m, k)` of the lattice.
/// In the discrete dictionary the node weights cancel, so the sum is plain.
pub fn build_stokes_integrated(space: &Arc<ModeSpace>) -> Result<Stokes> {
    let l = cylindrical(space)?;
    require_both(l)?;
    let (m_min, m_max) = l.m_range();
    let mut acc: Option<Stokes> = None;
    for m in m_min..=m_max {
        for ip in 0..l.k_perp_nodes().len() {
            for iz in 0..l.k_z_nodes().len() {
                let s = build_stokes(space, ip, iz, m)?;
                acc = Some(match acc {
                    None => s,
                    Some(a) => a.add(&s)?,
                });
            }
        }
    }
    Ok(acc.expect("lattice has at least one mode"))
}
