//! Volume integrals of smeared mode superpositions over a finite cylinder.
//!
//! A wavepacket is a trapezoid sum over a uniform `(k_perp, k_z)` grid of
//! modes weighted by a Gaussian envelope. Each packet is stored as a list
//! of terms `C[a, b] J_mu(k_a rho) rho^r z^p exp(i n phi + i s k_b z) e`
//! with constant Cartesian `e`, taken from the helical expansion of `M` or
//! `N`. A bilinear integral of two terms then factorizes into an azimuthal
//! trapezoid sum (exact), a radial Gauss-Legendre matrix and an axial
//! Gauss-Legendre matrix, contracted with the two coefficient matrices.
//!
//! Grid spacing is chosen so that the period of the discrete superposition
//! (`2 pi / h`) lies beyond the cylinder plus ten envelope widths; the
//! discrete packet is then indistinguishable from the continuous one inside
//! the domain.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{sort_results, RelationResult, Tolerances};
use crate::error::{Error, Result};
use crate::modes::{helical_terms, Family, ModeIndex, NormalizationConvention, VectorKind};
use crate::quad::{gauss_legendre, periodic_trapezoid, PanelRule};
use crate::specfun::{jn, jn_orders, lommel_overlap, lommel_overlap_equal};
use crate::vec3::ComplexVec3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
/// Envelope is truncated at this many widths.
const SPAN: f64 = 7.0;
const PANEL_ORDER: usize = 16;
/// Largest `k Delta` per Gauss-Legendre panel.
const K_DELTA: f64 = 8.0;
const ANALYTIC_NODES: usize = 96;

/// Gaussian envelope in `(k_perp, k_z)` around a center, for one family and `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavepacketSpec {
    pub family: Family,
    pub m: i32,
    pub k_perp: f64,
    pub sigma_perp: f64,
    pub k_z: f64,
    pub sigma_z: f64,
}

impl WavepacketSpec {
    pub fn new(
        family: Family,
        m: i32,
        k_perp: f64,
        sigma_perp: f64,
        k_z: f64,
        sigma_z: f64,
    ) -> Result<Self> {
        if !(sigma_perp > 0.0 && sigma_z > 0.0) {
            return Err(Error::Construction(format!(
                "envelope widths must be positive, got {sigma_perp}, {sigma_z}"
            )));
        }
        if !(k_perp - SPAN * sigma_perp > 0.0)
            || !(k_z.abs() - SPAN * sigma_z > 0.0)
            || !k_perp.is_finite()
            || !k_z.is_finite()
        {
            return Err(Error::Construction(format!(
                "envelope must stay clear of k_perp = 0 and k_z = 0 within {SPAN} widths (centers {k_perp}, {k_z})"
            )));
        }
        Ok(Self {
            family,
            m,
            k_perp,
            sigma_perp,
            k_z,
            sigma_z,
        })
    }

    pub fn envelope(&self, kp: f64, kz: f64) -> f64 {
        (-0.5 * ((kp - self.k_perp) / self.sigma_perp).powi(2)
            - 0.5 * ((kz - self.k_z) / self.sigma_z).powi(2))
        .exp()
    }

    /// `(d/dk_perp, d/dk_z)` of the envelope.
    fn envelope_gradient(&self, kp: f64, kz: f64) -> (f64, f64) {
        let f = self.envelope(kp, kz);
        (
            -(kp - self.k_perp) / self.sigma_perp.powi(2) * f,
            -(kz - self.k_z) / self.sigma_z.powi(2) * f,
        )
    }

    pub fn with_m(self, m: i32) -> Self {
        Self { m, ..self }
    }

    /// Center shifted by the given fractions of the widths.
    pub fn offset(self, fp: f64, fz: f64) -> Self {
        Self {
            k_perp: self.k_perp + fp * self.sigma_perp,
            k_z: self.k_z + fz * self.sigma_z,
            ..self
        }
    }

    /// `k_z -> -k_z`.
    pub fn mirrored(self) -> Self {
        Self {
            k_z: -self.k_z,
            ..self
        }
    }

    pub fn omega(&self, c: f64) -> f64 {
        c * self.k_perp.hypot(self.k_z)
    }

    fn k_box(&self) -> ((f64, f64), (f64, f64)) {
        (
            (
                self.k_perp - SPAN * self.sigma_perp,
                self.k_perp + SPAN * self.sigma_perp,
            ),
            (
                self.k_z - SPAN * self.sigma_z,
                self.k_z + SPAN * self.sigma_z,
            ),
        )
    }
}

/// Finite cylinder `rho <= radius`, `|z| <= half_length`, and its node counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureDomain {
    pub radius: f64,
    pub half_length: f64,
    pub radial_nodes: usize,
    pub axial_nodes: usize,
    pub azimuthal_nodes: usize,
}

impl QuadratureDomain {
    pub fn new(
        radius: f64,
        half_length: f64,
        radial_nodes: usize,
        axial_nodes: usize,
        azimuthal_nodes: usize,
    ) -> Result<Self> {
        if !(radius > 0.0 && half_length > 0.0 && radius.is_finite() && half_length.is_finite()) {
            return Err(Error::Construction(format!(
                "domain extents must be positive, got R={radius}, Z={half_length}"
            )));
        }
        if radial_nodes == 0 || axial_nodes == 0 || azimuthal_nodes == 0 {
            return Err(Error::Construction(
                "domain node counts must be positive".into(),
            ));
        }
        Ok(Self {
            radius,
            half_length,
            radial_nodes,
            axial_nodes,
            azimuthal_nodes,
        })
    }

    /// `R = extent / sigma_perp`, `Z = extent / sigma_z`, with node counts
    /// resolving products of two packets at the top of their envelopes.
    pub fn for_packet(spec: &WavepacketSpec, extent: f64) -> Self {
        let radius = extent / spec.sigma_perp;
        let half_length = extent / spec.sigma_z;
        let kp = 2.0 * (spec.k_perp + (SPAN + 1.0) * spec.sigma_perp);
        let kz = 2.0 * (spec.k_z.abs() + (SPAN + 1.0) * spec.sigma_z);
        let nodes = |len: f64, k: f64| PANEL_ORDER * (len * k / K_DELTA).ceil().max(1.0) as usize;
        Self {
            radius,
            half_length,
            radial_nodes: nodes(radius, kp),
            axial_nodes: nodes(2.0 * half_length, kz),
            azimuthal_nodes: 4 * (spec.m.unsigned_abs() as usize + 8),
        }
    }
}

/// Two settings used to estimate the quadrature error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    Fine,
    /// Coarser k-grid (shorter superposition period) and 80% of the nodes.
    Coarse,
}

impl Resolution {
    fn period_factor(self) -> f64 {
        match self {
            Resolution::Fine => 1.25,
            Resolution::Coarse => 1.1,
        }
    }

    fn node_factor(self) -> f64 {
        match self {
            Resolution::Fine => 1.0,
            Resolution::Coarse => 0.8,
        }
    }
}

type GridKey = (u64, u64, usize);

#[derive(Debug)]
struct Grid {
    key: GridKey,
    nodes: Vec<f64>,
    step: f64,
}

impl Grid {
    /// Uniform grid over `center +- SPAN sigma` with the superposition period
    /// pushed past `extent + 10 / sigma`.
    fn around(center: f64, sigma: f64, extent: f64, res: Resolution) -> Arc<Self> {
        let step = 2.0 * PI / (res.period_factor() * (extent + 10.0 / sigma));
        let half = (SPAN * sigma / step).ceil() as i64;
        let nodes = (-half..=half).map(|i| center + step * i as f64).collect();
        Arc::new(Self {
            key: (center.to_bits(), step.to_bits(), (2 * half + 1) as usize),
            nodes,
            step,
        })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone)]
struct Term {
    coef: DMatrix<Complex64>,
    order: i32,
    az: i32,
    /// Sign of `k_z` in the axial exponent.
    s: i8,
    zpow: u32,
    rpow: u32,
    basis: ComplexVec3,
}

/// Smeared superposition of `M` or `N` modes, or a derived field.
#[derive(Debug, Clone)]
pub struct Packet {
    kp: Arc<Grid>,
    kz: Arc<Grid>,
    terms: Vec<Term>,
    /// Trapezoid sum of `|f|^2`, the photon count of a unit-amplitude packet.
    envelope_norm: f64,
}

impl Packet {
    /// Unit-amplitude packet of `kind` with the envelope and grid of `spec`.
    pub fn new(spec: &WavepacketSpec, kind: VectorKind, engine: &QuadratureEngine) -> Self {
        Self::build(spec, spec, kind, engine, None)
    }

    /// Field packet carrying the physical mode amplitude.
    pub fn physical(
        spec: &WavepacketSpec,
        kind: VectorKind,
        engine: &QuadratureEngine,
        norm: &NormalizationConvention,
    ) -> Self {
        Self::build(spec, spec, kind, engine, Some(norm))
    }

    /// Envelope of `spec` sampled on the grid belonging to `grid_of`.
    pub fn on_grid_of(
        spec: &WavepacketSpec,
        grid_of: &WavepacketSpec,
        kind: VectorKind,
        engine: &QuadratureEngine,
    ) -> Self {
        Self::build(spec, grid_of, kind, engine, None)
    }

    fn build(
        spec: &WavepacketSpec,
        grid_of: &WavepacketSpec,
        kind: VectorKind,
        engine: &QuadratureEngine,
        norm: Option<&NormalizationConvention>,
    ) -> Self {
        let d = &engine.domain;
        let kp = Grid::around(grid_of.k_perp, grid_of.sigma_perp, d.radius, engine.res);
        let kz = Grid::around(grid_of.k_z, grid_of.sigma_z, d.half_length, engine.res);
        let w = kp.step * kz.step;
        let probe = ModeIndex {
            family: spec.family,
            m: spec.m,
            k_perp: kp.nodes[0],
            k_z: kz.nodes[0],
        };
        let shape = helical_terms(kind, &probe);
        let mut terms: Vec<Term> = shape
            .iter()
            .map(|t| Term {
                coef: DMatrix::from_element(kp.len(), kz.len(), ZERO),
                order: t.order,
                az: t.order,
                s: 1,
                zpow: 0,
                rpow: 0,
                basis: t.basis,
            })
            .collect();
        let mut envelope_norm = 0.0;
        for (a, &p) in kp.nodes.iter().enumerate() {
            for (b, &z) in kz.nodes.iter().enumerate() {
                let mode = ModeIndex {
                    family: spec.family,
                    m: spec.m,
                    k_perp: p,
                    k_z: z,
                };
                let f = spec.envelope(p, z);
                envelope_norm += w * f * f;
                let amp = norm.map_or(1.0, |n| n.amplitude(&mode));
                for (term, h) in terms.iter_mut().zip(helical_terms(kind, &mode)) {
                    term.coef[(a, b)] = h.coef * (w * f * amp);
                }
            }
        }
        Self {
            kp,
            kz,
            terms,
            envelope_norm,
        }
    }

    pub fn envelope_norm(&self) -> f64 {
        self.envelope_norm
    }

    /// Complex conjugate field.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef.map(|c| c.conj()),
                az: -t.az,
                s: -t.s,
                basis: t.basis.conj(),
                ..t.clone()
            })
            .collect();
        Self {
            terms,
            ..self.clone()
        }
    }

    /// `L_+ = e^{i phi} [z (d_rho + (i/rho) d_phi) - rho d_z]` applied to
    /// every Cartesian component.
    pub fn raise(&self) -> Result<Self> {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.zpow != 0 || t.rpow != 0 || t.az.abs() != t.order.abs() {
                return Err(Error::Construction(
                    "raise applies to mode superpositions only".into(),
                ));
            }
            // (d_rho - az/rho) J_mu(k rho): -k J_{mu+1} when az = mu, k J_{mu-1} when az = -mu.
            let (order, sign) = if t.az == t.order {
                (t.order + 1, -1.0)
            } else {
                (t.order - 1, 1.0)
            };
            let mut radial = t.coef.clone();
            for (a, &k) in self.kp.nodes.iter().enumerate() {
                radial.row_mut(a).scale_mut(sign * k);
            }
            out.push(Term {
                coef: radial,
                order,
                az: t.az + 1,
                zpow: 1,
                ..t.clone()
            });
            let mut axial = t.coef.clone();
            for (b, &k) in self.kz.nodes.iter().enumerate() {
                let f = -I * (f64::from(t.s) * k);
                axial.column_mut(b).apply(|c| *c *= f);
            }
            out.push(Term {
                coef: axial,
                az: t.az + 1,
                rpow: 1,
                ..t.clone()
            });
        }
        Ok(Self {
            terms: out,
            ..self.clone()
        })
    }

    /// Direct evaluation at `(rho, phi, z)`, Cartesian components.
    pub fn eval(&self, rho: f64, phi: f64, z: f64) -> ComplexVec3 {
        let mut acc = ComplexVec3::cartesian([ZERO; 3]);
        for t in &self.terms {
            let mut s = ZERO;
            for (a, &kp) in self.kp.nodes.iter().enumerate() {
                let j = jn(t.order, kp * rho);
                for (b, &kz) in self.kz.nodes.iter().enumerate() {
                    s += t.coef[(a, b)] * j * Complex64::from_polar(1.0, f64::from(t.s) * kz * z);
                }
            }
            let geo = rho.powi(t.rpow as i32) * z.powi(t.zpow as i32);
            acc = acc + t.basis * (s * geo * Complex64::from_polar(1.0, f64::from(t.az) * phi));
        }
        acc
    }
}

type RadKey = (GridKey, i32, GridKey, i32, u32);
type ZKey = (GridKey, i8, GridKey, i8, u32);

/// Evaluates bilinear volume integrals of packets, caching the radial and
/// axial kernels it builds.
pub struct QuadratureEngine {
    domain: QuadratureDomain,
    res: Resolution,
    rho: PanelRule,
    z: PanelRule,
    /// Bessel tables `J_n(k_a rho_l)` for `n = 0..len-1`, per k_perp grid.
    bessel: HashMap<GridKey, Vec<DMatrix<f64>>>,
    trig: HashMap<GridKey, (DMatrix<f64>, DMatrix<f64>)>,
    rad: HashMap<RadKey, DMatrix<f64>>,
    axial: HashMap<ZKey, DMatrix<Complex64>>,
}

impl QuadratureEngine {
    pub fn new(domain: &QuadratureDomain, res: Resolution) -> Self {
        let panels = |nodes: usize| {
            ((nodes as f64 * res.node_factor()) / PANEL_ORDER as f64)
                .ceil()
                .max(1.0) as usize
        };
        Self {
            domain: *domain,
            res,
            rho: PanelRule::new(0.0, domain.radius, panels(domain.radial_nodes), PANEL_ORDER),
            z: PanelRule::new(
                -domain.half_length,
                domain.half_length,
                panels(domain.axial_nodes),
                PANEL_ORDER,
            ),
            bessel: HashMap::new(),
            trig: HashMap::new(),
            rad: HashMap::new(),
            axial: HashMap::new(),
        }
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn domain(&self) -> &QuadratureDomain {
        &self.domain
    }

    fn bessel_table(&mut self, grid: &Grid, order: i32) -> DMatrix<f64> {
        let n = order.unsigned_abs() as usize;
        let have = self.bessel.get(&grid.key).map_or(0, |v| v.len());
        if have <= n {
            let top = (n + 2).max(have);
            let rho = &self.rho.nodes;
            let rows: Vec<Vec<Vec<f64>>> = grid
                .nodes
                .par_iter()
                .map(|&k| {
                    rho.iter()
                        .map(|&r| jn_orders(0, top as i32, k * r))
                        .collect()
                })
                .collect();
            let tables = (0..=top)
                .map(|o| DMatrix::from_fn(grid.len(), rho.len(), |a, l| rows[a][l][o]))
                .collect();
            self.bessel.insert(grid.key, tables);
        }
        let t = &self.bessel[&grid.key][n];
        if order < 0 && n % 2 == 1 {
            -t
        } else {
            t.clone()
        }
    }

    fn radial(&mut self, g1: &Grid, o1: i32, g2: &Grid, o2: i32, rpow: u32) -> DMatrix<f64> {
        let key = (g1.key, o1, g2.key, o2, rpow);
        if let Some(m) = self.rad.get(&key) {
            return m.clone();
        }
        let t1 = self.bessel_table(g1, o1);
        let mut t2 = self.bessel_table(g2, o2);
        for (l, (&r, &w)) in self.rho.nodes.iter().zip(&self.rho.weights).enumerate() {
            t2.column_mut(l).scale_mut(w * r.powi(1 + rpow as i32));
        }
        let m = t1 * t2.transpose();
        self.rad.insert(key, m.clone());
        m
    }

    fn trig_table(&mut self, grid: &Grid) -> (DMatrix<f64>, DMatrix<f64>) {
        let z = &self.z.nodes;
        self.trig
            .entry(grid.key)
            .or_insert_with(|| {
                (
                    DMatrix::from_fn(grid.len(), z.len(), |b, l| (grid.nodes[b] * z[l]).cos()),
                    DMatrix::from_fn(grid.len(), z.len(), |b, l| (grid.nodes[b] * z[l]).sin()),
                )
            })
            .clone()
    }

    fn axial(&mut self, g1: &Grid, s1: i8, g2: &Grid, s2: i8, zpow: u32) -> DMatrix<Complex64> {
        let key = (g1.key, s1, g2.key, s2, zpow);
        if let Some(m) = self.axial.get(&key) {
            return m.clone();
        }
        let (c1, mut sn1) = self.trig_table(g1);
        let (mut c2, mut sn2) = self.trig_table(g2);
        sn1 *= f64::from(s1);
        sn2 *= f64::from(s2);
        for (l, (&z, &w)) in self.z.nodes.iter().zip(&self.z.weights).enumerate() {
            let f = w * z.powi(zpow as i32);
            c2.column_mut(l).scale_mut(f);
            sn2.column_mut(l).scale_mut(f);
        }
        let re = &c1 * c2.transpose() - &sn1 * sn2.transpose();
        let im = &c1 * sn2.transpose() + &sn1 * c2.transpose();
        let m = DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        });
        self.axial.insert(key, m.clone());
        m
    }

    fn azimuthal(&self, n: i32) -> Complex64 {
        periodic_trapezoid(self.domain.azimuthal_nodes, |phi| {
            Complex64::from_polar(1.0, f64::from(n) * phi)
        })
    }

    fn term_integral(&mut self, p: &Packet, t: &Term, q: &Packet, u: &Term) -> Complex64 {
        let phi = self.azimuthal(t.az + u.az);
        // The trapezoid sum is exact: a vanishing azimuthal factor kills the term.
        if phi.norm() < 1e-9 {
            return ZERO;
        }
        let rad = self.radial(&p.kp, t.order, &q.kp, u.order, t.rpow + u.rpow);
        let ax = self.axial(&p.kz, t.s, &q.kz, u.s, t.zpow + u.zpow);
        let inner = &t.coef * ax * u.coef.transpose();
        let s: Complex64 = rad.iter().zip(inner.iter()).map(|(&r, &c)| c * r).sum();
        phi * s
    }

    /// `int p . q dV`, bilinear; conjugate a packet first for a Hermitian product.
    pub fn dot(&mut self, p: &Packet, q: &Packet) -> Complex64 {
        let mut acc = ZERO;
        for t in &p.terms {
            for u in &q.terms {
                let b = t.basis.dot(&u.basis);
                if b != ZERO {
                    acc += b * self.term_integral(p, t, q, u);
                }
            }
        }
        acc
    }

    /// `int p x q dV`, Cartesian components.
    pub fn cross(&mut self, p: &Packet, q: &Packet) -> ComplexVec3 {
        let mut acc = ComplexVec3::cartesian([ZERO; 3]);
        for t in &p.terms {
            for u in &q.terms {
                let b = t.basis.cross(&u.basis);
                if b.norm_sqr() > 0.0 {
                    acc = acc + b * self.term_integral(p, t, q, u);
                }
            }
        }
        acc
    }

    /// `int |p|^2 dV`.
    pub fn norm_sqr(&mut self, p: &Packet) -> f64 {
        self.dot(p, &p.conj()).re
    }
}

/// Tensor Gauss-Legendre integral over a `(k_perp, k_z)` box.
fn box_integral(kp: (f64, f64), kz: (f64, f64), h: impl Fn(f64, f64) -> Complex64) -> Complex64 {
    let (x, w) = gauss_legendre(ANALYTIC_NODES);
    let map = |(lo, hi): (f64, f64), t: f64| 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
    let (jp, jz) = (0.5 * (kp.1 - kp.0), 0.5 * (kz.1 - kz.0));
    let mut acc = ZERO;
    for (xi, wi) in x.iter().zip(&w) {
        for (xj, wj) in x.iter().zip(&w) {
            acc += h(map(kp, *xi), map(kz, *xj)) * (wi * wj * jp * jz);
        }
    }
    acc
}

fn union_box(a: &WavepacketSpec, b: &WavepacketSpec) -> ((f64, f64), (f64, f64)) {
    let (pa, za) = a.k_box();
    let (pb, zb) = b.k_box();
    (
        (pa.0.min(pb.0), pa.1.max(pb.1)),
        (za.0.min(zb.0), za.1.max(zb.1)),
    )
}

/// `int f g h` over the envelopes of `f` and `g` (same `k`).
fn overlap(f: &WavepacketSpec, g: &WavepacketSpec, h: impl Fn(f64, f64) -> Complex64) -> Complex64 {
    let (kp, kz) = union_box(f, g);
    box_integral(kp, kz, |p, z| {
        h(p, z) * (f.envelope(p, z) * g.envelope(p, z))
    })
}

const TWO_PI_SQ: f64 = 4.0 * PI * PI;

fn relative(num: Complex64, ana: Complex64) -> f64 {
    (num - ana).norm() / ana.norm()
}

fn vec_relative(num: &ComplexVec3, ana: &ComplexVec3) -> f64 {
    num.max_abs_diff(ana) / ana.c.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Runs `f` on both engines.
fn both<T>(
    engines: &mut [QuadratureEngine; 2],
    mut f: impl FnMut(&mut QuadratureEngine) -> Result<T>,
) -> Result<[T; 2]> {
    let [a, b] = engines;
    Ok([f(a)?, f(b)?])
}

fn fmt_c(z: Complex64) -> String {
    format!("({:+.9e}{:+.9e}i)", z.re, z.im)
}

/// Appendix-style integral identities checked on smeared packets.
///
/// `spec` fixes the primary envelope and `m`; partner packets (offset
/// envelopes, neighbouring `m`, mirrored `k_z`) are derived from it. Each
/// relation is computed at two resolutions; their difference is the error
/// estimate. The energy check builds its own narrow packet and domain.
pub fn quadrature_suite(
    spec: &WavepacketSpec,
    domain: &QuadratureDomain,
    norm: &NormalizationConvention,
    tol: &Tolerances,
) -> Result<Vec<RelationResult>> {
    let mut out = Vec::new();
    let mut engines = [
        QuadratureEngine::new(domain, Resolution::Fine),
        QuadratureEngine::new(domain, Resolution::Coarse),
    ];
    let m = spec.m;
    let off = spec.offset(0.5, 0.5);
    let kind_name = |k: VectorKind| if k == VectorKind::M { "M" } else { "N" };
    let scalar_kernel =
        |p: f64, z: f64| Complex64::new(TWO_PI_SQ * (p * p + z * z) / (p * z * z), 0.0);

    // (a) scalar products
    for kind in [VectorKind::M, VectorKind::N] {
        for (label, g) in [("same envelope", *spec), ("offset envelope", off)] {
            let v = both(&mut engines, |e| {
                let f = Packet::new(spec, kind, e);
                let gp = Packet::on_grid_of(&g, spec, kind, e);
                Ok(e.dot(&f, &gp.conj()))
            })?;
            let ana = overlap(spec, &g, scalar_kernel);
            let k = kind_name(kind);
            out.push(RelationResult::converged(
                format!("scalar product {k}.{k}'* ({label})"),
                relative(v[0], ana),
                relative(v[0], v[1]),
                tol.quadrature,
                format!(
                    "quadrature {} vs envelope integral {}",
                    fmt_c(v[0]),
                    fmt_c(ana)
                ),
            ));
        }
    }

    // (b) vanishing scalar products, relative to the Cauchy-Schwarz bound
    let zero_checks: [(&str, VectorKind, VectorKind, i32); 4] = [
        ("scalar product M.N'* = 0", VectorKind::M, VectorKind::N, 0),
        ("scalar product N.M'* = 0", VectorKind::N, VectorKind::M, 0),
        (
            "scalar product M.M'* = 0 for m' = m+1",
            VectorKind::M,
            VectorKind::M,
            1,
        ),
        (
            "scalar product N.N'* = 0 for m' = m+1",
            VectorKind::N,
            VectorKind::N,
            1,
        ),
    ];
    for (name, ka, kb, dm) in zero_checks {
        let g = off.with_m(m + dm);
        let v = both(&mut engines, |e| {
            let f = Packet::new(spec, ka, e);
            let gp = Packet::on_grid_of(&g, spec, kb, e);
            let bound = (e.norm_sqr(&f) * e.norm_sqr(&gp)).sqrt();
            Ok((e.dot(&f, &gp.conj()), bound))
        })?;
        out.push(RelationResult::converged(
            name,
            v[0].0.norm() / v[0].1,
            (v[0].0 - v[1].0).norm() / v[0].1,
            tol.zero,
            format!("|integral| {:.3e}, bound {:.6e}", v[0].0.norm(), v[0].1),
        ));
    }

    // (c) vector products M x N'* and N x M'*
    for dm in [-1, 0, 1] {
        let g = spec.with_m(m + dm);
        let bracket = move |p: f64, z: f64| -> ComplexVec3 {
            match dm {
                1 => ComplexVec3::e_minus() * (I * 0.5),
                -1 => ComplexVec3::e_plus() * (-I * 0.5),
                _ => ComplexVec3::e3() * Complex64::new(z / p, 0.0),
            }
        };
        let comp = |i: usize| {
            overlap(spec, &g, |p, z| {
                bracket(p, z).c[i] * (TWO_PI_SQ * p.hypot(z) / (z * z))
            })
        };
        let rhs = ComplexVec3::cartesian([comp(0), comp(1), comp(2)]);
        for (a, b, sign) in [
            (VectorKind::M, VectorKind::N, -1.0),
            (VectorKind::N, VectorKind::M, 1.0),
        ] {
            let v = both(&mut engines, |e| {
                let f = Packet::new(spec, a, e);
                let gp = Packet::new(&g, b, e);
                Ok(e.cross(&f, &gp.conj()))
            })?;
            let ana = rhs * sign;
            let label = if dm == 0 {
                "m' = m".to_string()
            } else {
                format!("m' = m{dm:+}")
            };
            out.push(RelationResult::converged(
                format!(
                    "vector product {} x {}'* ({label})",
                    kind_name(a),
                    kind_name(b)
                ),
                vec_relative(&v[0], &ana),
                vec_relative(&v[0], &v[1]),
                tol.quadrature,
                format!(
                    "quadrature [{}, {}, {}] vs [{}, {}, {}]",
                    fmt_c(v[0].c[0]),
                    fmt_c(v[0].c[1]),
                    fmt_c(v[0].c[2]),
                    fmt_c(ana.c[0]),
                    fmt_c(ana.c[1]),
                    fmt_c(ana.c[2])
                ),
            ));
        }
    }

    // (d) vanishing vector products
    for kind in [VectorKind::M, VectorKind::N] {
        let v = both(&mut engines, |e| {
            let f = Packet::new(spec, kind, e);
            let gp = Packet::on_grid_of(&off, spec, kind, e);
            let bound = (e.norm_sqr(&f) * e.norm_sqr(&gp)).sqrt();
            Ok((e.cross(&f, &gp.conj()).norm(), bound))
        })?;
        let k = kind_name(kind);
        out.push(RelationResult::converged(
            format!("vector product {k} x {k}'* = 0"),
            v[0].0 / v[0].1,
            (v[0].0 - v[1].0).abs() / v[0].1,
            tol.zero,
            format!("|integral| {:.3e}, bound {:.6e}", v[0].0, v[0].1),
        ));
    }
    // Without conjugation only m' = -m and k_z' = -k_z survive the angular and axial integrals.
    let mirror = spec.mirrored().with_m(-m);
    let v = both(&mut engines, |e| {
        let f_m = Packet::new(spec, VectorKind::M, e);
        let f_n = Packet::new(spec, VectorKind::N, e);
        let g_m = Packet::new(&mirror, VectorKind::M, e);
        let g_n = Packet::new(&mirror, VectorKind::N, e);
        let mxn = e.cross(&f_m, &g_n);
        let nxm = e.cross(&f_n, &g_m);
        let bound = (e.norm_sqr(&f_m) * e.norm_sqr(&g_n))
            .sqrt()
            .max((e.norm_sqr(&f_n) * e.norm_sqr(&g_m)).sqrt());
        let mm = e.dot(&f_m, &g_m);
        let nn = e.dot(&f_n, &g_n);
        Ok(((mxn - nxm).norm(), mxn.norm(), bound, mm, nn))
    })?;
    out.push(RelationResult::converged(
        "vector product M x N' - N x M' = 0",
        v[0].0 / v[0].2,
        (v[0].0 - v[1].0).abs() / v[0].2,
        tol.zero,
        format!(
            "m' = -m, kz' = -kz; |M x N'| alone is {:.6e} of the bound",
            v[0].1 / v[0].2
        ),
    ));
    // Scalar products without conjugation.
    let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
    let nn_ana = overlap(spec, &mirror.mirrored(), scalar_kernel);
    out.push(RelationResult::converged(
        "scalar product M.M' = -N.N' (no conjugation)",
        relative(-v[0].4, v[0].3),
        relative(v[0].3, v[1].3),
        tol.quadrature,
        format!(
            "m' = -m, kz' = -kz; M.M' = {}, N.N' = {}",
            fmt_c(v[0].3),
            fmt_c(v[0].4)
        ),
    ));
    out.push(RelationResult::converged(
        "scalar product N.N' = (2pi)^2 omega^2/(c^2 kperp kz^2) (no conjugation)",
        relative(v[0].4, nn_ana),
        relative(v[0].4, v[1].4),
        tol.quadrature,
        format!(
            "m = {m}; quadrature {} vs printed {}; the integral carries (-1)^(m+1) from J_(-m) = (-1)^m J_m (residual against the signed form {:.3e})",
            fmt_c(v[0].4),
            fmt_c(nn_ana),
            relative(v[0].4, nn_ana * -sign_m)
        ),
    ));

    // (e) L+ matrix elements
    let g_env = spec.offset(-0.5, 0.5);
    let l_plus_rhs = |f: &WavepacketSpec, g: &WavepacketSpec, m_f: i32, m_sign: f64| {
        let (kp, kz) = union_box(f, g);
        box_integral(kp, kz, |p, z| {
            let k = p.hypot(z);
            let q = k / (p * z);
            let fv = f.envelope(p, z);
            let (fp, fz) = f.envelope_gradient(p, z);
            let df = p * fz - z * fp;
            let dq = k * (1.0 / (p * p) - 1.0 / (z * z));
            let val = -(q * df + fv * dq) + m_sign * f64::from(m_f) * (z / p) * fv * q;
            I * (TWO_PI_SQ * g.envelope(p, z) * (k / z) * val)
        })
    };
    let cases: [(&str, i32, f64, bool); 2] = [
        ("L+ element M'.(L+ M*) with m = m'+1", m - 1, 1.0, false),
        ("L+ element M'*.(L+ M) with m = m'-1", m + 1, -1.0, true),
    ];
    for (name, m_g, m_sign, conj_g) in cases {
        let g = g_env.with_m(m_g);
        let v = both(&mut engines, |e| {
            let f = Packet::new(spec, VectorKind::M, e);
            let gp = Packet::on_grid_of(&g, spec, VectorKind::M, e);
            Ok(if conj_g {
                e.dot(&gp.conj(), &f.raise()?)
            } else {
                e.dot(&gp, &f.conj().raise()?)
            })
        })?;
        let ana = l_plus_rhs(spec, &g, m, m_sign);
        out.push(RelationResult::converged(
            name,
            relative(v[0], ana),
            relative(v[0], v[1]),
            tol.quadrature,
            format!(
                "derivatives moved onto the envelope; quadrature {} vs {}",
                fmt_c(v[0]),
                fmt_c(ana)
            ),
        ));
    }

    // (f) without conjugation. Same-sign k_z: the axial integral removes it.
    // Opposite k_z: M*_{m'}(k_z) = (-1)^{m'} M_{-m'}(-k_z) turns it into the
    // conjugated element above.
    for mirrored in [false, true] {
        let g = if mirrored { g_env.mirrored() } else { g_env }.with_m(-(m + 1));
        let partner = g_env.with_m(m + 1);
        let v = both(&mut engines, |e| {
            let f = Packet::new(spec, VectorKind::M, e);
            let lf = f.raise()?;
            let gp = if mirrored {
                Packet::new(&g, VectorKind::M, e)
            } else {
                Packet::on_grid_of(&g, spec, VectorKind::M, e)
            };
            let bound = (e.norm_sqr(&gp) * e.norm_sqr(&lf)).sqrt();
            let conj_element = Packet::on_grid_of(&partner, spec, VectorKind::M, e);
            Ok((e.dot(&gp, &lf), bound, e.dot(&conj_element.conj(), &lf)))
        })?;
        let (name, notes) = if mirrored {
            let sign = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
            (
                "L+ element M'.(L+ M) = 0 (kz' = -kz, m' = -(m+1))",
                format!(
                    "|integral| {:.6e}, bound {:.6e}; equals (-1)^(m+1) times M''*.(L+ M) with m'' = m+1 to {:.3e} relative",
                    v[0].0.norm(),
                    v[0].1,
                    relative(v[0].0, v[0].2 * sign)
                ),
            )
        } else {
            (
                "L+ element M'.(L+ M) = 0 (kz, kz' > 0, m' = -(m+1))",
                format!("|integral| {:.3e}, bound {:.6e}", v[0].0.norm(), v[0].1),
            )
        };
        out.push(RelationResult::converged(
            name,
            v[0].0.norm() / v[0].1,
            (v[0].0 - v[1].0).norm() / v[0].1,
            tol.zero,
            notes,
        ));
    }

    out.push(energy_per_photon(spec, norm, tol)?);
    out.push(hankel_overlap_check(tol.closed_form)?);
    Ok(sort_results(out))
}

/// Energy `(1/4pi) int |E|^2 + |B|^2` of a narrow packet (relative width
/// 0.02) divided by its photon count, against `hbar omega` at the center.
fn energy_per_photon(
    spec: &WavepacketSpec,
    norm: &NormalizationConvention,
    tol: &Tolerances,
) -> Result<RelationResult> {
    let narrow = WavepacketSpec::new(
        spec.family,
        spec.m,
        spec.k_perp,
        0.02 * spec.k_perp,
        spec.k_z,
        0.02 * spec.k_z.abs(),
    )?;
    let domain = QuadratureDomain::for_packet(&narrow, 30.0);
    let target = norm.hbar * narrow.omega(norm.c);
    let mut values = [0.0; 2];
    for (i, res) in [Resolution::Fine, Resolution::Coarse]
        .into_iter()
        .enumerate()
    {
        let mut e = QuadratureEngine::new(&domain, res);
        // TM: E = amp N, B = amp M; TE: E = -amp M, B = amp N.
        let n = Packet::physical(&narrow, VectorKind::N, &e, norm);
        let m = Packet::physical(&narrow, VectorKind::M, &e, norm);
        let energy = (e.norm_sqr(&n) + e.norm_sqr(&m)) / (4.0 * PI);
        values[i] = energy / n.envelope_norm();
    }
    Ok(RelationResult::converged(
        format!(
            "energy per photon of a narrow {} packet = hbar omega",
            narrow.family.label().to_uppercase()
        ),
        (values[0] - target).abs() / target,
        (values[0] - values[1]).abs() / target,
        tol.energy,
        format!(
            "per-photon energy {:.12e}, hbar omega at the center {:.12e}",
            values[0], target
        ),
    ))
}

/// Panel Gauss-Legendre values of `int_0^R J_m(k rho) J_m(k2 rho) rho drho`
/// against the closed-form Lommel integrals.
pub fn hankel_overlap_check(tol: f64) -> Result<RelationResult> {
    let cases: [(i32, f64, f64, f64); 6] = [
        (0, 1.0, 2.0, 10.0),
        (2, 0.7, 0.9, 40.0),
        (5, 1.3, 1.3, 25.0),
        (1, 3.0, 0.5, 60.0),
        (-3, 1.1, 1.2, 80.0),
        (12, 2.0, 2.0, 15.0),
    ];
    let mut worst: f64 = 0.0;
    for (m, k, k2, r) in cases {
        let panels = (r * (k + k2) / 4.0).ceil() as usize + 1;
        let rule = PanelRule::new(0.0, r, panels, PANEL_ORDER);
        let num = rule.integrate(|x| jn(m, k * x) * jn(m, k2 * x) * x);
        let exact = if k == k2 {
            lommel_overlap_equal(m, k, r)?
        } else {
            lommel_overlap(m, k, k2, r)?
        };
        worst = worst.max((num - exact).abs() / exact.abs().max(1.0));
    }
    Ok(RelationResult::check(
        "finite-radius Bessel overlap vs Lommel closed form",
        worst,
        tol,
        format!("{} (m, k, k', R) cases", cases.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> WavepacketSpec {
        WavepacketSpec::new(Family::TM, 1, 1.0, 0.1, 1.5, 0.15).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(WavepacketSpec::new(Family::TM, 0, 0.5, 0.1, 1.0, 0.1).is_err());
        assert!(WavepacketSpec::new(Family::TM, 0, 1.0, 0.0, 1.0, 0.1).is_err());
        assert!(WavepacketSpec::new(Family::TE, 0, 1.0, 0.1, -1.0, 0.1).is_ok());
        assert!(QuadratureDomain::new(0.0, 1.0, 1, 1, 1).is_err());
    }

    #[test]
    fn raise_matches_finite_differences() {
        let spec = small_spec();
        let dom = QuadratureDomain::for_packet(&spec, 2.0);
        let e = QuadratureEngine::new(&dom, Resolution::Coarse);
        let f = Packet::new(&spec, VectorKind::N, &e);
        let lf = f.raise().unwrap();
        let (x, y, z) = (0.7, -0.4, 0.9);
        let at = |x: f64, y: f64, z: f64| f.eval(x.hypot(y), y.atan2(x), z);
        let h = 1e-4;
        let d = |dx: f64, dy: f64, dz: f64| {
            let p = at(x + dx * h, y + dy * h, z + dz * h);
            let m = at(x - dx * h, y - dy * h, z - dz * h);
            (p - m) * Complex64::new(0.5 / h, 0.0)
        };
        let (gx, gy, gz) = (d(1.0, 0.0, 0.0), d(0.0, 1.0, 0.0), d(0.0, 0.0, 1.0));
        // L+ = z (d_x + i d_y) - (x + i y) d_z
        let want = (gx + gy * I) * Complex64::new(z, 0.0) - gz * Complex64::new(x, y);
        let got = lf.eval(x.hypot(y), y.atan2(x), z);
        assert!(
            got.max_abs_diff(&want) < 1e-6 * want.norm(),
            "{:?} vs {:?}",
            got,
            want
        );
    }

    #[test]
    fn engine_matches_pointwise_quadrature() {
        // Tiny domain: compare the factorized integral with a brute-force sum.
        let spec = small_spec();
        let dom = QuadratureDomain::new(3.0, 2.0, 32, 32, 16).unwrap();
        let mut e = QuadratureEngine::new(&dom, Resolution::Fine);
        let f = Packet::new(&spec, VectorKind::M, &e);
        let g = Packet::new(&spec.with_m(2), VectorKind::N, &e);
        let fast = e.cross(&f, &g.conj());
        let rho = PanelRule::new(0.0, 3.0, 2, 16);
        let zr = PanelRule::new(-2.0, 2.0, 2, 16);
        let mut slow = ComplexVec3::cartesian([ZERO; 3]);
        for (&r, &wr) in rho.nodes.iter().zip(&rho.weights) {
            for (&z, &wz) in zr.nodes.iter().zip(&zr.weights) {
                for k in 0..16 {
                    let phi = -PI + 2.0 * PI * k as f64 / 16.0;
                    let v = f.eval(r, phi, z).cross(&g.eval(r, phi, z).conj());
                    slow = slow + v * Complex64::new(wr * wz * r * 2.0 * PI / 16.0, 0.0);
                }
            }
        }
        assert!(
            fast.max_abs_diff(&slow) < 1e-9 * slow.norm().max(1e-3),
            "{:?} vs {:?}",
            fast,
            slow
        );
    }

    #[test]
    fn hankel_overlaps() {
        let r = hankel_overlap_check(1e-10).unwrap();
        assert!(r.pass, "{}", r.residual);
    }
}
