use crate::error::{Error, Result};

use super::KNode;

/// Electric or magnetic multipole family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SphericalFamily {
    E,
    M,
}

impl SphericalFamily {
    pub fn label(self) -> &'static str {
        match self {
            SphericalFamily::E => "e",
            SphericalFamily::M => "m",
        }
    }
}

/// Finite set of spherical modes `(family, omega, j, m)` with `|m| <= j`.
///
/// Layout: family-major, then the frequency node, then `j`, then `m` from
/// `-j` to `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalLattice {
    omega: Vec<KNode>,
    j_min: u32,
    j_max: u32,
    families: Vec<SphericalFamily>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphericalSite {
    pub family: SphericalFamily,
    pub iw: usize,
    pub j: u32,
    pub m: i32,
}

impl SphericalLattice {
    pub fn new(
        omega_nodes: &[(f64, f64)],
        j_range: (u32, u32),
        families: &[SphericalFamily],
    ) -> Result<Self> {
        let (j_min, j_max) = j_range;
        if j_min < 1 || j_min > j_max {
            return Err(Error::Construction(format!(
                "spherical j range {j_min}..{j_max} must satisfy 1 <= j_min <= j_max"
            )));
        }
        if omega_nodes.is_empty() || omega_nodes.iter().any(|&(v, w)| !(v > 0.0 && w > 0.0)) {
            return Err(Error::Construction(
                "frequency nodes need positive values and weights".into(),
            ));
        }
        let mut fams = families.to_vec();
        fams.sort();
        fams.dedup();
        if fams.is_empty() {
            return Err(Error::Construction(
                "spherical lattice needs a family".into(),
            ));
        }
        Ok(Self {
            omega: omega_nodes.iter().map(|&(v, w)| KNode::new(v, w)).collect(),
            j_min,
            j_max,
            families: fams,
        })
    }

    pub fn j_range(&self) -> (u32, u32) {
        (self.j_min, self.j_max)
    }

    pub fn omega_nodes(&self) -> &[KNode] {
        &self.omega
    }

    pub fn families(&self) -> &[SphericalFamily] {
        &self.families
    }

    /// Modes per (family, frequency) block: `sum_j (2j + 1)`.
    fn block(&self) -> usize {
        ((self.j_max + 1) * (self.j_max + 1) - self.j_min * self.j_min) as usize
    }

    pub fn dim(&self) -> usize {
        self.families.len() * self.omega.len() * self.block()
    }

    pub fn index(&self, family: SphericalFamily, iw: usize, j: u32, m: i32) -> Option<usize> {
        let f = self.families.iter().position(|&x| x == family)?;
        if iw >= self.omega.len() || j < self.j_min || j > self.j_max || m.unsigned_abs() > j {
            return None;
        }
        let within = (j * j - self.j_min * self.j_min) as usize + (m + j as i32) as usize;
        Some((f * self.omega.len() + iw) * self.block() + within)
    }

    pub fn site(&self, idx: usize) -> SphericalSite {
        assert!(
            idx < self.dim(),
            "spherical index {idx} out of range {}",
            self.dim()
        );
        let b = self.block();
        let within = idx % b;
        let r = idx / b;
        let iw = r % self.omega.len();
        let family = self.families[r / self.omega.len()];
        let off = within + (self.j_min * self.j_min) as usize;
        let j = (off as f64).sqrt() as u32;
        let j = if (j + 1) * (j + 1) <= off as u32 {
            j + 1
        } else {
            j
        };
        let m = off as i32 - (j * j) as i32 - j as i32;
        SphericalSite { family, iw, j, m }
    }
}
