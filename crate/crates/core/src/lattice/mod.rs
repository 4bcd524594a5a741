//! Discretized mode spaces and the algebra of quadratic ladder-operator forms.
//!
//! The continuum of modes is replaced by a finite set of nodes with
//! quadrature weights `w_j`. The dictionary is
//!
//! ```text
//! int dk  ->  sum_j w_j,     delta(k - k')  ->  delta_jk / w_j,     a(k)  ->  b_j / sqrt(w_j)
//! ```
//!
//! so that `[b_j, b_k^dagger] = delta_jk`. A bilinear observable
//! `int dk f(k) a^dagger(k) a(k)` then becomes `sum_j f(k_j) b_j^dagger b_j`:
//! coefficients carry the mode function values and no weights.
//!
//! Number-conserving observables are [`QuadraticOperator`] values
//! `sum_jk X_jk b_j^dagger b_k + s`, and their commutators reduce to matrix
//! commutators `[X, Y]`. [`FockOracle`] realizes the same operators on a
//! truncated Fock space for independent checking.

mod basis;
mod fock;
mod operator;
mod spherical;

use std::fmt;

use crate::error::{Error, Result};
use crate::modes::{Family, ModeIndex};

pub use basis::{apply_basis, BasisMap};
pub use fock::{FockMatrix, FockOracle, FOCK_DIM_BOUND};
pub use operator::{
    coherent_expectation, commutator, CoherentAmplitude, QuadraticOperator, DROP_BELOW,
};
pub use spherical::{SphericalFamily, SphericalLattice, SphericalSite};

/// One quadrature node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KNode {
    pub value: f64,
    pub weight: f64,
}

impl KNode {
    pub fn new(value: f64, weight: f64) -> Self {
        Self { value, weight }
    }
}

/// Finite set of cylindrical modes.
///
/// Index layout: family-major, then `m`, then the `k_perp` node, then the
/// `k_z` node (fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLattice {
    m_min: i32,
    m_max: i32,
    k_perp: Vec<KNode>,
    k_z: Vec<KNode>,
    families: Vec<Family>,
}

/// Coordinates of one lattice index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub family: Family,
    pub m: i32,
    pub ip: usize,
    pub iz: usize,
}

/// Builds a lattice; families are deduplicated and ordered TM before TE.
pub fn build_lattice(
    m_range: (i32, i32),
    k_perp_nodes: &[(f64, f64)],
    k_z_nodes: &[(f64, f64)],
    families: &[Family],
) -> Result<ModeLattice> {
    let (m_min, m_max) = m_range;
    if m_min > m_max {
        return Err(Error::Construction(format!(
            "empty m range {m_min}..{m_max}"
        )));
    }
    if k_perp_nodes.is_empty() || k_z_nodes.is_empty() {
        return Err(Error::Construction(
            "lattice needs at least one k_perp and one k_z node".into(),
        ));
    }
    for &(v, w) in k_perp_nodes {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Construction(format!(
                "k_perp node {v} must be positive"
            )));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Construction(format!(
                "k_perp weight {w} must be positive"
            )));
        }
    }
    for &(v, w) in k_z_nodes {
        if v == 0.0 || !v.is_finite() {
            return Err(Error::Construction(format!("k_z node {v} must be nonzero")));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Construction(format!(
                "k_z weight {w} must be positive"
            )));
        }
    }
    let mut fams: Vec<Family> = families.to_vec();
    fams.sort();
    fams.dedup();
    if fams.is_empty() {
        return Err(Error::Construction(
            "lattice needs at least one family".into(),
        ));
    }
    Ok(ModeLattice {
        m_min,
        m_max,
        k_perp: k_perp_nodes
            .iter()
            .map(|&(v, w)| KNode::new(v, w))
            .collect(),
        k_z: k_z_nodes.iter().map(|&(v, w)| KNode::new(v, w)).collect(),
        families: fams,
    })
}

impl ModeLattice {
    pub fn m_range(&self) -> (i32, i32) {
        (self.m_min, self.m_max)
    }

    pub fn m_count(&self) -> usize {
        (self.m_max - self.m_min + 1) as usize
    }

    pub fn k_perp_nodes(&self) -> &[KNode] {
        &self.k_perp
    }

    pub fn k_z_nodes(&self) -> &[KNode] {
        &self.k_z
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn has_family(&self, f: Family) -> bool {
        self.families.contains(&f)
    }

    /// Number of `(k_perp, k_z)` node pairs.
    pub fn k_count(&self) -> usize {
        self.k_perp.len() * self.k_z.len()
    }

    pub fn dim(&self) -> usize {
        self.families.len() * self.m_count() * self.k_count()
    }

    pub fn index(&self, family: Family, m: i32, ip: usize, iz: usize) -> Option<usize> {
        let f = self.families.iter().position(|&x| x == family)?;
        if m < self.m_min || m > self.m_max || ip >= self.k_perp.len() || iz >= self.k_z.len() {
            return None;
        }
        let mi = (m - self.m_min) as usize;
        Some(((f * self.m_count() + mi) * self.k_perp.len() + ip) * self.k_z.len() + iz)
    }

    pub fn site(&self, j: usize) -> Site {
        assert!(
            j < self.dim(),
            "lattice index {j} out of range {}",
            self.dim()
        );
        let iz = j % self.k_z.len();
        let r = j / self.k_z.len();
        let ip = r % self.k_perp.len();
        let r = r / self.k_perp.len();
        let mi = r % self.m_count();
        let f = r / self.m_count();
        Site {
            family: self.families[f],
            m: self.m_min + mi as i32,
            ip,
            iz,
        }
    }

    /// Mode quantum numbers at an index.
    pub fn mode(&self, j: usize) -> ModeIndex {
        let s = self.site(j);
        ModeIndex {
            family: s.family,
            m: s.m,
            k_perp: self.k_perp[s.ip].value,
            k_z: self.k_z[s.iz].value,
        }
    }

    /// Product weight `w_perp * w_z` of an index.
    pub fn weight(&self, j: usize) -> f64 {
        let s = self.site(j);
        self.k_perp[s.ip].weight * self.k_z[s.iz].weight
    }

    /// Same nodes with every weight multiplied by `factor`.
    pub fn rescaled_weights(&self, factor: f64) -> Result<Self> {
        let kp: Vec<_> = self
            .k_perp
            .iter()
            .map(|n| (n.value, n.weight * factor))
            .collect();
        let kz: Vec<_> = self.k_z.iter().map(|n| (n.value, n.weight)).collect();
        build_lattice((self.m_min, self.m_max), &kp, &kz, &self.families)
    }
}

/// Index set an operator acts on.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeSpace {
    Cylindrical(ModeLattice),
    Spherical(SphericalLattice),
}

impl ModeSpace {
    pub fn dim(&self) -> usize {
        match self {
            ModeSpace::Cylindrical(l) => l.dim(),
            ModeSpace::Spherical(l) => l.dim(),
        }
    }

    /// Short human-readable label of an index.
    pub fn label(&self, j: usize) -> String {
        match self {
            ModeSpace::Cylindrical(l) => {
                let s = l.site(j);
                format!("{}:m={}:kp{}:kz{}", s.family.label(), s.m, s.ip, s.iz)
            }
            ModeSpace::Spherical(l) => {
                let s = l.site(j);
                format!("{}:w{}:j={}:m={}", s.family.label(), s.iw, s.j, s.m)
            }
        }
    }

    pub fn as_cylindrical(&self) -> Option<&ModeLattice> {
        match self {
            ModeSpace::Cylindrical(l) => Some(l),
            ModeSpace::Spherical(_) => None,
        }
    }

    pub fn as_spherical(&self) -> Option<&SphericalLattice> {
        match self {
            ModeSpace::Spherical(l) => Some(l),
            ModeSpace::Cylindrical(_) => None,
        }
    }
}

impl fmt::Display for ModeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeSpace::Cylindrical(l) => write!(
                f,
                "cylindrical lattice m={}..{} k_perp x{} k_z x{} families {:?} (D={})",
                l.m_min,
                l.m_max,
                l.k_perp.len(),
                l.k_z.len(),
                l.families,
                l.dim()
            ),
            ModeSpace::Spherical(l) => write!(f, "spherical lattice (D={})", l.dim()),
        }
    }
}

#[cfg(test)]
mod tests;
