//! Observables of the quantized Bessel field as quadratic forms.
//!
//! Vector observables are stored by their coefficients on the helical
//! basis, `V = V_+ e_- + V_- e_+ + V_3 e_3` with `e_+- = e_1 +- i e_2`. So
//! `V_+` is the coefficient of `e_-`, and the Cartesian components are
//! `V_1 = V_+ + V_-`, `V_2 = i (V_- - V_+)`, i.e. `V_+ = (V_1 + i V_2) / 2`.
//!
//! Family 1 is TM and family 2 is TE. Per `(k_perp, k_z)` node and family:
//!
//! ```text
//! Pi_+ = i sum_m a+_{m-1} a_m            Pi_3 = sum_m N_m
//! Lambda_+ = i sum_m (m - 1/2) a+_{m-1} a_m      Lambda_3 = sum_m m N_m
//! Sigma_+ = 1/2 sum_m (a2+_m a1_{m-1} - a1+_m a2_{m-1})
//! Sigma_3 = i sum_m (a1+_m a2_m - a2+_m a1_m)
//! ```
//!
//! with the `-` components the adjoints. The observables are
//! `P = hbar (k_perp Pi_+, k_perp Pi_-, k_z Pi_3)`,
//! `L = hbar ((k_z/k_perp) Lambda_+, (k_z/k_perp) Lambda_-, Lambda_3)`,
//! `S = hbar (c/omega) (k_perp Sigma_+, k_perp Sigma_-, k_z Sigma_3)` and
//! `E = hbar sum omega N`, summed over families and nodes.
//!
//! Sums over `m` run over the pairs that fit inside the lattice's `m` range.

mod maps;
mod spherical;
mod stokes;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{ModeLattice, ModeSpace, QuadraticOperator};
use crate::modes::Family;

pub use crate::lattice::{SphericalFamily, SphericalLattice};
pub use maps::{make_pm_map, make_rl_map};
pub use spherical::build_l_spherical;
pub use stokes::{build_stokes, build_stokes_integrated, Stokes};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Values of `hbar` and `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub c: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }
}

impl Units {
    pub fn new(hbar: f64, c: f64) -> Result<Self> {
        if !(hbar > 0.0 && c > 0.0) {
            return Err(Error::Construction(format!(
                "hbar and c must be positive, got {hbar}, {c}"
            )));
        }
        Ok(Self { hbar, c })
    }
}

/// Whether symmetrized number operators keep their zero-point constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPoint {
    Include,
    Exclude,
}

/// Helical components of a vector observable.
#[derive(Debug, Clone)]
pub struct Components {
    /// Coefficient of `e_-`.
    pub plus: QuadraticOperator,
    /// Coefficient of `e_+`.
    pub minus: QuadraticOperator,
    pub z: QuadraticOperator,
}

impl Components {
    /// `(V_1, V_2, V_3)`.
    pub fn cartesian(&self) -> Result<[QuadraticOperator; 3]> {
        let x = self.plus.plus(&self.minus)?;
        let y = self.minus.minus(&self.plus)?.scale(I);
        Ok([x, y, self.z.clone()])
    }

    pub fn scale_real(&self, a: f64) -> Self {
        Self {
            plus: self.plus.scale_real(a),
            minus: self.minus.scale_real(a),
            z: self.z.scale_real(a),
        }
    }

    pub fn plus_components(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            plus: self.plus.plus(&other.plus)?,
            minus: self.minus.plus(&other.minus)?,
            z: self.z.plus(&other.z)?,
        })
    }
}

pub(crate) fn cylindrical(space: &Arc<ModeSpace>) -> Result<&ModeLattice> {
    space
        .as_cylindrical()
        .ok_or_else(|| Error::Construction("operation needs a cylindrical mode lattice".into()))
}

fn require_both(l: &ModeLattice) -> Result<()> {
    if l.has_family(Family::TM) && l.has_family(Family::TE) {
        Ok(())
    } else {
        Err(Error::Construction(
            "operation needs both TM and TE families on the lattice".into(),
        ))
    }
}

/// Attaches `1/2 trace(X)`, the constant from symmetric ordering of the
/// diagonal terms.
pub fn with_zero_point(op: QuadraticOperator, zp: ZeroPoint) -> QuadraticOperator {
    match zp {
        ZeroPoint::Exclude => op.with_scalar(re(0.0)),
        ZeroPoint::Include => {
            let tr: Complex64 = op
                .entries()
                .filter(|(r, c, _)| r == c)
                .map(|(_, _, v)| v)
                .sum();
            op.with_scalar(tr * 0.5)
        }
    }
}

/// Which elementary family of operators to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Pi,
    Lambda,
}

/// `Pi^(i)` or `Lambda^(i)` at one `(k_perp, k_z)` node (no physical factors).
pub fn elementary(
    space: &Arc<ModeSpace>,
    which: Elementary,
    family: Family,
    ip: usize,
    iz: usize,
) -> Result<Components> {
    let l = cylindrical(space)?;
    if !l.has_family(family) || ip >= l.k_perp_nodes().len() || iz >= l.k_z_nodes().len() {
        return Err(Error::Construction(format!(
            "no node ({family:?}, {ip}, {iz}) on the lattice"
        )));
    }
    let (m_min, m_max) = l.m_range();
    let idx = |m| l.index(family, m, ip, iz).expect("m inside range");
    let mut plus = Vec::new();
    let mut z = Vec::new();
    for m in m_min..=m_max {
        let mf = m as f64;
        let (coupling, diag) = match which {
            Elementary::Pi => (I, re(1.0)),
            Elementary::Lambda => (I * (mf - 0.5), re(mf)),
        };
        if m > m_min {
            plus.push((idx(m - 1), idx(m), coupling));
        }
        z.push((idx(m), idx(m), diag));
    }
    let plus = QuadraticOperator::from_entries(space, plus)?;
    Ok(Components {
        minus: plus.adjoint(),
        plus,
        z: QuadraticOperator::from_entries(space, z)?,
    })
}

/// `Sigma` at one node; couples TM and TE.
pub fn elementary_sigma(space: &Arc<ModeSpace>, ip: usize, iz: usize) -> Result<Components> {
    let l = cylindrical(space)?;
    require_both(l)?;
    if ip >= l.k_perp_nodes().len() || iz >= l.k_z_nodes().len() {
        return Err(Error::Construction(format!(
            "no node ({ip}, {iz}) on the lattice"
        )));
    }
    let (m_min, m_max) = l.m_range();
    let tm = |m| l.index(Family::TM, m, ip, iz).expect("m inside range");
    let te = |m| l.index(Family::TE, m, ip, iz).expect("m inside range");
    let mut plus = Vec::new();
    let mut z = Vec::new();
    for m in m_min..=m_max {
        if m > m_min {
            plus.push((te(m), tm(m - 1), re(0.5)));
            plus.push((tm(m), te(m - 1), re(-0.5)));
        }
        z.push((tm(m), te(m), I));
        z.push((te(m), tm(m), -I));
    }
    let plus = QuadraticOperator::from_entries(space, plus)?;
    Ok(Components {
        minus: plus.adjoint(),
        plus,
        z: QuadraticOperator::from_entries(space, z)?,
    })
}

fn node_pairs(l: &ModeLattice) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
    let kz = l.k_z_nodes();
    l.k_perp_nodes()
        .iter()
        .enumerate()
        .flat_map(move |(ip, p)| {
            kz.iter()
                .enumerate()
                .map(move |(iz, z)| (ip, iz, p.value, z.value))
        })
}

fn accumulate(space: &Arc<ModeSpace>, parts: Vec<(Components, [f64; 3])>) -> Result<Components> {
    let mut out = Components {
        plus: QuadraticOperator::zero(space),
        minus: QuadraticOperator::zero(space),
        z: QuadraticOperator::zero(space),
    };
    for (c, [a, b, d]) in parts {
        out.plus = out.plus.plus(&c.plus.scale_real(a))?;
        out.minus = out.minus.plus(&c.minus.scale_real(b))?;
        out.z = out.z.plus(&c.z.scale_real(d))?;
    }
    Ok(out)
}

/// Linear momentum `P`.
pub fn build_momentum(space: &Arc<ModeSpace>, units: &Units, zp: ZeroPoint) -> Result<Components> {
    let l = cylindrical(space)?;
    let mut parts = Vec::new();
    for &f in l.families() {
        for (ip, iz, kp, kz) in node_pairs(l) {
            let h = units.hbar;
            parts.push((
                elementary(space, Elementary::Pi, f, ip, iz)?,
                [h * kp, h * kp, h * kz],
            ));
        }
    }
    let mut p = accumulate(space, parts)?;
    p.z = with_zero_point(p.z, zp);
    Ok(p)
}

/// Orbital angular momentum about the origin, `L(0)`.
pub fn build_orbital(space: &Arc<ModeSpace>, units: &Units, zp: ZeroPoint) -> Result<Components> {
    let l = cylindrical(space)?;
    let mut parts = Vec::new();
    for &f in l.families() {
        for (ip, iz, kp, kz) in node_pairs(l) {
            let h = units.hbar;
            parts.push((
                elementary(space, Elementary::Lambda, f, ip, iz)?,
                [h * kz / kp, h * kz / kp, h],
            ));
        }
    }
    let mut o = accumulate(space, parts)?;
    o.z = with_zero_point(o.z, zp);
    Ok(o)
}

/// Helicity `S`.
pub fn build_helicity(space: &Arc<ModeSpace>, units: &Units) -> Result<Components> {
    let l = cylindrical(space)?;
    require_both(l)?;
    let mut parts = Vec::new();
    for (ip, iz, kp, kz) in node_pairs(l) {
        let pre = units.hbar / kp.hypot(kz); // hbar c / omega
        parts.push((
            elementary_sigma(space, ip, iz)?,
            [pre * kp, pre * kp, pre * kz],
        ));
    }
    accumulate(space, parts)
}

/// Energy and total number operators.
pub fn build_energy_number(
    space: &Arc<ModeSpace>,
    units: &Units,
    zp: ZeroPoint,
) -> Result<(QuadraticOperator, QuadraticOperator)> {
    let l = cylindrical(space)?;
    let d = l.dim();
    let energy = QuadraticOperator::from_entries(
        space,
        (0..d).map(|j| (j, j, re(units.hbar * l.mode(j).omega(units.c)))),
    )?;
    let number = QuadraticOperator::from_entries(space, (0..d).map(|j| (j, j, re(1.0))))?;
    Ok((with_zero_point(energy, zp), with_zero_point(number, zp)))
}

/// Number operator of a single mode.
pub fn mode_number(space: &Arc<ModeSpace>, j: usize, zp: ZeroPoint) -> Result<QuadraticOperator> {
    Ok(with_zero_point(
        QuadraticOperator::from_entries(space, [(j, j, re(1.0))])?,
        zp,
    ))
}

/// Every observable on one lattice.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub energy: QuadraticOperator,
    pub number: QuadraticOperator,
    pub p: Components,
    pub l: Components,
    pub s: Components,
}

impl ObservableSet {
    pub fn build(space: &Arc<ModeSpace>, units: &Units, zp: ZeroPoint) -> Result<Self> {
        let (energy, number) = build_energy_number(space, units, zp)?;
        Ok(Self {
            energy,
            number,
            p: build_momentum(space, units, zp)?,
            l: build_orbital(space, units, zp)?,
            s: build_helicity(space, units)?,
        })
    }

    /// `(name, operator)` pairs in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, &QuadraticOperator)> {
        vec![
            ("E", &self.energy),
            ("N", &self.number),
            ("P+", &self.p.plus),
            ("P-", &self.p.minus),
            ("P3", &self.p.z),
            ("L+", &self.l.plus),
            ("L-", &self.l.minus),
            ("L3", &self.l.z),
            ("S+", &self.s.plus),
            ("S-", &self.s.minus),
            ("S3", &self.s.z),
        ]
    }
}

/// `J(r0) = L(0) + S - r0 x P`, Cartesian components.
pub fn angular_momentum_about(obs: &ObservableSet, r0: [f64; 3]) -> Result<[QuadraticOperator; 3]> {
    let l = obs.l.cartesian()?;
    let s = obs.s.cartesian()?;
    let p = obs.p.cartesian()?;
    let [x, y, z] = r0;
    let cross = [
        p[2].scale_real(y).minus(&p[1].scale_real(z))?,
        p[0].scale_real(z).minus(&p[2].scale_real(x))?,
        p[1].scale_real(x).minus(&p[0].scale_real(y))?,
    ];
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        out.push(l[i].plus(&s[i])?.minus(&cross[i])?);
    }
    Ok(out.try_into().expect("three components"))
}
