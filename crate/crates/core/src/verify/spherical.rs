//! Plane-wave and spherical-wave expansions of the Bessel vectors.
//!
//! On the cone `cos theta_k = kappa` the angular spectrum of `N` is the
//! tangential field `f = pre e^{i m phi_k} theta_k` with
//! `pre = -(-i)^m (k/k_z) / 2 pi`, and `M` has `phi_k = n x theta_k` in its
//! place. Projecting `f` on the vector harmonics gives
//!
//! ```text
//! N = sum_j  alpha_j W^E_jm + beta_j W^M_jm
//! M = sum_j -beta_j W^E_jm + alpha_j W^M_jm
//! alpha_j = -(-i)^m (k/k_z) dY_jm/dtheta (theta_k, 0)
//! beta_j  = -(-i)^m (k/k_z) (1/sin) dY_jm/dphi (theta_k, 0)
//! ```
//!
//! where `W^(i)_jm(r) = \int dOmega Y^(i)_jm(n) e^{i k n.r}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{sort_results, RelationResult, Tolerances};
use crate::dynops::{build_l_spherical, Units};
use crate::error::{Error, Result};
use crate::lattice::{commutator, ModeSpace, QuadraticOperator, SphericalFamily, SphericalLattice};
use crate::modes::{
    angular_spectrum, angular_spectrum_scalar, eval_m, eval_n, min_spectrum_nodes, CylPoint,
    ModeIndex, VectorKind,
};
use crate::quad::{gauss_legendre, periodic_trapezoid};
use crate::specfun::{
    assoc_legendre, assoc_legendre_dkz, jn, spherical_harmonic_gradient, HarmonicGradient,
};
use crate::vec3::ComplexVec3;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn minus_i_pow(m: i32) -> Complex64 {
    [Complex64::new(1.0, 0.0), -I, Complex64::new(-1.0, 0.0), I][m.rem_euclid(4) as usize]
}

fn i_pow(n: i32) -> Complex64 {
    minus_i_pow(-n)
}

fn j_min(m: i32) -> u32 {
    m.unsigned_abs().max(1)
}

/// Sample point for the reconstruction checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalSample {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
}

impl SphericalSample {
    pub fn new(rho: f64, phi: f64, z: f64) -> Self {
        Self { rho, phi, z }
    }

    fn cartesian(&self) -> [f64; 3] {
        [self.rho * self.phi.cos(), self.rho * self.phi.sin(), self.z]
    }

    fn cyl(&self) -> Result<CylPoint> {
        CylPoint::new(self.rho, self.phi, self.z, 0.0)
    }
}

/// `(alpha_j, beta_j)` of `N` for `j = max(1,|m|)..=j_max`.
pub fn expansion_coefficients(
    k: &ModeIndex,
    j_max: u32,
) -> Result<Vec<(u32, Complex64, Complex64)>> {
    let theta = k.kappa().acos();
    let pre = -minus_i_pow(k.m) * (k.k() / k.k_z);
    (j_min(k.m)..=j_max)
        .map(|j| {
            let g = spherical_harmonic_gradient(j, k.m, theta, 0.0)?;
            Ok((j, pre * g.d_theta, pre * g.d_phi_over_sin))
        })
        .collect()
}

/// Printed closed forms `(u, v)` for `(j, m_j)`, without the frequency delta.
/// Both vanish unless `m_j = m`.
pub fn printed_uv(k: &ModeIndex, j: u32, m_j: i32, c: f64) -> Result<(Complex64, Complex64)> {
    let zero = Complex64::new(0.0, 0.0);
    if m_j != k.m || k.m.unsigned_abs() > j {
        return Ok((zero, zero));
    }
    let ma = k.m.unsigned_abs();
    let omega = k.omega(c);
    let mut ratio = 1.0; // (j-|m|)!/(j+|m|)!
    for f in (j - ma + 1)..=(j + ma) {
        ratio /= f as f64;
    }
    let nj = ((2 * j + 1) as f64 * ratio / (4.0 * PI)).sqrt();
    let sign = if (k.m + (k.m + k.m.abs()) / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let common = i_pow(k.m + j as i32)
        * (4.0 * PI * PI * sign * c.sqrt() * k.k_perp / (k.k_z * omega.sqrt()) * nj);
    let u = -common * assoc_legendre_dkz(j, ma, k.k_z, omega, c)?;
    let v = common
        * I
        * (k.m as f64 * omega / (c * k.k_perp))
        * assoc_legendre(j, ma, c * k.k_z / omega)?;
    Ok((u, v))
}

/// Numerical projection of the cone spectrum of `N` on `Y^E_{j m_j}` and `Y^M_{j m_j}`.
fn project_cone(k: &ModeIndex, j: u32, m_j: i32, n_phi: usize) -> Result<(Complex64, Complex64)> {
    let theta = k.kappa().acos();
    let pre = -minus_i_pow(k.m) * (k.k() / k.k_z) / (2.0 * PI);
    let g0 = spherical_harmonic_gradient(j, m_j, theta, 0.0)?;
    // Y_{j m_j}(theta, phi) = Y_{j m_j}(theta, 0) e^{i m_j phi}
    let a = periodic_trapezoid(n_phi, |p| {
        Complex64::from_polar(1.0, (k.m - m_j) as f64 * p)
    }) * g0.d_theta.conj();
    let b = -periodic_trapezoid(n_phi, |p| {
        Complex64::from_polar(1.0, (k.m - m_j) as f64 * p)
    }) * g0.d_phi_over_sin.conj();
    Ok((a * pre, b * pre))
}

/// Tabulated `W^E_jm, W^M_jm` for one wavenumber and azimuthal index.
#[derive(Debug, Clone)]
pub struct SphericalWaves {
    k: f64,
    m: i32,
    j_max: u32,
    cos_t: Vec<f64>,
    sin_t: Vec<f64>,
    w_t: Vec<f64>,
    n_phi: usize,
    /// `grads[it][j - j_min]` at `phi = 0`.
    grads: Vec<Vec<HarmonicGradient>>,
}

impl SphericalWaves {
    /// Nodes are chosen to resolve `exp(i k n.r)` for `|r| <= r_max`.
    pub fn new(k: f64, m: i32, j_max: u32, r_max: f64) -> Result<Self> {
        if !(k > 0.0) || !(r_max >= 0.0) {
            return Err(Error::Construction(format!(
                "need k > 0 and r_max >= 0 (got {k}, {r_max})"
            )));
        }
        if m.unsigned_abs() > j_max {
            return Err(Error::Construction(format!(
                "j_max {j_max} below |m| = {}",
                m.abs()
            )));
        }
        let kr = k * r_max;
        let n_t = j_max as usize + kr.ceil() as usize + 20;
        let n_phi = 2 * (j_max as usize + m.unsigned_abs() as usize + kr.ceil() as usize + 10);
        let (x, w) = gauss_legendre(n_t);
        let sin_t: Vec<f64> = x.iter().map(|c| ((1.0 - c) * (1.0 + c)).sqrt()).collect();
        let mut grads = Vec::with_capacity(n_t);
        for (c, s) in x.iter().zip(&sin_t) {
            let theta = s.atan2(*c);
            let row = (j_min(m)..=j_max)
                .map(|j| spherical_harmonic_gradient(j, m, theta, 0.0))
                .collect::<Result<Vec<_>>>()?;
            grads.push(row);
        }
        Ok(Self {
            k,
            m,
            j_max,
            cos_t: x,
            sin_t,
            w_t: w,
            n_phi,
            grads,
        })
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    /// `(j, W^E, W^M)` at a Cartesian point for every tabulated `j`.
    pub fn eval(&self, r: [f64; 3]) -> Vec<(u32, ComplexVec3, ComplexVec3)> {
        let nj = (self.j_max - j_min(self.m) + 1) as usize;
        let mut we = vec![[Complex64::new(0.0, 0.0); 3]; nj];
        let mut wm = we.clone();
        let h = 2.0 * PI / self.n_phi as f64;
        for it in 0..self.cos_t.len() {
            let (ct, st) = (self.cos_t[it], self.sin_t[it]);
            for ip in 0..self.n_phi {
                let p = -PI + h * ip as f64;
                let (sp, cp) = p.sin_cos();
                let n = [st * cp, st * sp, ct];
                let th = [ct * cp, ct * sp, -st];
                let ph = [-sp, cp, 0.0];
                let arg = self.k * (n[0] * r[0] + n[1] * r[1] + n[2] * r[2]) + self.m as f64 * p;
                let e = Complex64::from_polar(self.w_t[it] * h, arg);
                for (idx, g) in self.grads[it].iter().enumerate() {
                    let jj = {
                        let j = (j_min(self.m) as usize + idx) as f64;
                        j * (j + 1.0)
                    };
                    let (a, b) = (g.d_theta * e / jj, g.d_phi_over_sin * e / jj);
                    // Y^E = a theta + b phi;  Y^M = n x Y^E = a phi - b theta
                    for c in 0..3 {
                        we[idx][c] += a * th[c] + b * ph[c];
                        wm[idx][c] += a * ph[c] - b * th[c];
                    }
                }
            }
        }
        (0..nj)
            .map(|i| {
                (
                    j_min(self.m) + i as u32,
                    ComplexVec3::cartesian(we[i]),
                    ComplexVec3::cartesian(wm[i]),
                )
            })
            .collect()
    }
}

/// Partial sums of the reconstruction of `which` at `r`, one per `j`.
fn partial_sums(
    which: VectorKind,
    coef: &[(u32, Complex64, Complex64)],
    waves: &[(u32, ComplexVec3, ComplexVec3)],
) -> Vec<(u32, ComplexVec3)> {
    let mut acc = ComplexVec3::cartesian([Complex64::new(0.0, 0.0); 3]);
    coef.iter()
        .zip(waves)
        .map(|(&(j, a, b), (_, we, wm))| {
            let (ce, cm) = match which {
                VectorKind::N => (a, b),
                VectorKind::M => (-b, a),
            };
            acc = acc + *we * ce + *wm * cm;
            (j, acc)
        })
        .collect()
}

fn direct(which: VectorKind, k: &ModeIndex, p: &CylPoint, c: f64) -> ComplexVec3 {
    match which {
        VectorKind::N => eval_n(k, p, c),
        VectorKind::M => eval_m(k, p, c),
    }
    .to_cartesian()
}

fn cart_max(v: &ComplexVec3) -> f64 {
    v.to_cartesian()
        .max_abs_diff(&ComplexVec3::cartesian([Complex64::new(0.0, 0.0); 3]))
}

/// Truncated spherical-wave sum of `N` or `M` at `sample`, Cartesian frame.
pub fn reconstruct(
    which: VectorKind,
    k: &ModeIndex,
    sample: &SphericalSample,
    j_max: u32,
) -> Result<ComplexVec3> {
    let r = sample.cartesian();
    let rn = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let waves = SphericalWaves::new(k.k(), k.m, j_max, rn)?.eval(r);
    let coef = expansion_coefficients(k, j_max)?;
    Ok(partial_sums(which, &coef, &waves)
        .pop()
        .map(|(_, v)| v)
        .expect("at least one j"))
}

/// One row of the coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionRow {
    pub j: u32,
    pub m_j: i32,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    /// Relative error of `N` at the sample with the sum stopped at this `j`.
    pub reconstruction_error: f64,
}

/// Coefficients for `j <= j_max` (only `m_j = m` rows) with the running
/// reconstruction error of `N` at `sample`.
pub fn expansion_table(
    k: &ModeIndex,
    j_max: u32,
    sample: &SphericalSample,
    c: f64,
) -> Result<Vec<ExpansionRow>> {
    let r = sample.cartesian();
    let rn = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let waves = SphericalWaves::new(k.k(), k.m, j_max, rn)?.eval(r);
    let coef = expansion_coefficients(k, j_max)?;
    let want = direct(VectorKind::N, k, &sample.cyl()?, 1.0);
    let scale = cart_max(&want);
    let sums = partial_sums(VectorKind::N, &coef, &waves);
    coef.iter()
        .zip(sums)
        .map(|(&(j, alpha, beta), (_, s))| {
            let (u, v) = printed_uv(k, j, k.m, c)?;
            Ok(ExpansionRow {
                j,
                m_j: k.m,
                alpha,
                beta,
                u,
                v,
                reconstruction_error: s.max_abs_diff(&want) / scale,
            })
        })
        .collect()
}

fn su2_checks(units: &Units, tol: &Tolerances) -> Result<Vec<RelationResult>> {
    let sl = SphericalLattice::new(
        &[(1.0, 1.0), (2.0, 0.5)],
        (1, 4),
        &[SphericalFamily::E, SphericalFamily::M],
    )?;
    let space = Arc::new(ModeSpace::Spherical(sl.clone()));
    let l = build_l_spherical(&space, units)?;
    let h = units.hbar;
    let lx = l.plus.plus(&l.minus)?;
    let ly = l.minus.minus(&l.plus)?.scale(I);
    let lz = l.z.clone();
    let ih = |op: &QuadraticOperator| op.scale(I * h);
    let res = |a: &QuadraticOperator,
               b: &QuadraticOperator,
               c: &QuadraticOperator|
     -> Result<f64> { Ok(commutator(a, b)?.minus(&ih(c))?.max_abs()) };
    let mut out = vec![
        RelationResult::check(
            "spherical L: [Lx, Ly] = i hbar Lz",
            res(&lx, &ly, &lz)?,
            tol.su2,
            "j = 1..4, two frequencies, E and M",
        ),
        RelationResult::check(
            "spherical L: [Ly, Lz] = i hbar Lx",
            res(&ly, &lz, &lx)?,
            tol.su2,
            "j = 1..4, two frequencies, E and M",
        ),
        RelationResult::check(
            "spherical L: [Lz, Lx] = i hbar Ly",
            res(&lz, &lx, &ly)?,
            tol.su2,
            "j = 1..4, two frequencies, E and M",
        ),
    ];
    // One-body Casimir: Lx^2 + Ly^2 + Lz^2 = hbar^2 j (j+1) on every multiplet.
    let cas = lx
        .matrix_product(&lx)?
        .plus(&ly.matrix_product(&ly)?)?
        .plus(&lz.matrix_product(&lz)?)?;
    let mut worst: f64 = 0.0;
    for a in 0..sl.dim() {
        for b in 0..sl.dim() {
            let want = if a == b {
                let j = sl.site(a).j as f64;
                h * h * j * (j + 1.0)
            } else {
                0.0
            };
            worst = worst.max((cas.get(a, b) - want).norm());
        }
    }
    out.push(RelationResult::check(
        "spherical L: one-body Casimir = hbar^2 j(j+1)",
        worst,
        tol.su2 * 10.0,
        "coefficient matrices",
    ));
    Ok(out)
}

/// Default reconstruction samples: `k_perp rho in {0.5, 1, 2}` in the waist
/// plane plus one point off it.
pub fn default_samples(k: &ModeIndex) -> Vec<SphericalSample> {
    let kp = k.k_perp;
    vec![
        SphericalSample::new(0.5 / kp, 0.7, 0.0),
        SphericalSample::new(1.0 / kp, -2.1, 0.0),
        SphericalSample::new(2.0 / kp, 2.9, 0.0),
        SphericalSample::new(1.0 / kp, 0.3, 0.8 / k.k()),
    ]
}

const CONVERGENCE_STEPS: [u32; 4] = [10, 20, 40, 60];

/// Angular-spectrum identities, coefficient checks, reconstruction and
/// spherical su(2) for the mode `k`.
pub fn spherical_suite(
    k: &ModeIndex,
    samples: &[SphericalSample],
    j_max: u32,
    units: &Units,
    tol: &Tolerances,
) -> Result<Vec<RelationResult>> {
    if j_max < k.m.unsigned_abs() + 20 {
        return Err(Error::Construction(format!(
            "j_max = {j_max} must be at least |m| + 20 = {}",
            k.m.abs() + 20
        )));
    }
    if samples.is_empty() {
        return Err(Error::Construction(
            "spherical suite needs at least one sample point".into(),
        ));
    }
    let c = units.c;
    let mut out = Vec::new();

    // (a) angular spectrum
    let mut scalar: f64 = 0.0;
    let mut vector: f64 = 0.0;
    for s in samples {
        let p = s.cyl()?;
        let x = k.k_perp * p.rho;
        let nodes = min_spectrum_nodes(k.m, x);
        for m in [k.m - 1, k.m, k.m + 1] {
            let want = Complex64::from_polar(jn(m, x), m as f64 * p.phi);
            scalar = scalar.max((angular_spectrum_scalar(m, x, p.phi, nodes) - want).norm());
        }
        for which in [VectorKind::M, VectorKind::N] {
            let got = angular_spectrum(which, k, &p, c, nodes).value;
            let want = direct(which, k, &p, c);
            vector = vector.max(got.max_abs_diff(&want) / cart_max(&want).max(1.0));
        }
    }
    out.push(RelationResult::check(
        "angular spectrum: scalar cone integral = J_m e^{i m phi}",
        scalar,
        tol.closed_form,
        format!("orders m-1..m+1 at {} points", samples.len()),
    ));
    out.push(RelationResult::check(
        "angular spectrum: vector cone integrals = M, N",
        vector,
        tol.closed_form,
        "relative to max(|field|, 1)",
    ));

    // (b) coefficients
    let coef = expansion_coefficients(k, j_max)?;
    let n_phi = 4 * (j_max as usize + k.m.unsigned_abs() as usize) + 16;
    let mut proj_err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut off: f64 = 0.0;
    let mut printed_off: f64 = 0.0;
    for &(j, a, b) in &coef {
        let (pa, pb) = project_cone(k, j, k.m, n_phi)?;
        proj_err = proj_err.max((pa - a).norm()).max((pb - b).norm());
        scale = scale.max(a.norm()).max(b.norm());
        for m_j in -(j as i32)..=(j as i32) {
            if m_j == k.m {
                continue;
            }
            let (qa, qb) = project_cone(k, j, m_j, n_phi)?;
            off = off.max(qa.norm()).max(qb.norm());
            let (u, v) = printed_uv(k, j, m_j, c)?;
            printed_off = printed_off.max(u.norm()).max(v.norm());
        }
    }
    out.push(RelationResult::check(
        "spherical coefficients: closed form = projection of the cone spectrum",
        proj_err / scale,
        tol.closed_form,
        format!("j <= {j_max}, relative to the largest coefficient"),
    ));
    out.push(RelationResult::check(
        "selection rule: projections with m_j != m vanish",
        off / scale,
        tol.algebraic,
        "numerical azimuthal projection",
    ));
    out.push(RelationResult::check(
        "selection rule: printed u, v vanish for m_j != m",
        printed_off,
        0.0,
        "closed forms evaluated for every m_j",
    ));

    // printed u, v against the derived coefficients: magnitudes proportional,
    // then the printed pairing used as a reconstruction.
    let mut ru = Vec::new();
    let mut rv = Vec::new();
    for &(j, a, b) in &coef {
        let (u, v) = printed_uv(k, j, k.m, c)?;
        if a.norm() > 1e-8 * scale && u.norm() > 0.0 {
            ru.push(u.norm() / a.norm());
        }
        if b.norm() > 1e-8 * scale && v.norm() > 0.0 {
            rv.push(v.norm() / b.norm());
        }
    }
    let spread = |r: &[f64]| {
        if r.is_empty() {
            return 0.0;
        }
        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = r.iter().cloned().fold(0.0, f64::max);
        (hi - lo) / hi
    };
    out.push(RelationResult::check(
        "printed u, v: |u_j / alpha_j| and |v_j / beta_j| independent of j",
        spread(&ru).max(spread(&rv)),
        tol.closed_form,
        format!(
            "{} u ratios, {} v ratios; relative spread",
            ru.len(),
            rv.len()
        ),
    ));

    // (c) reconstruction
    let r_max = samples
        .iter()
        .map(|s| {
            let r = s.cartesian();
            (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
        })
        .fold(0.0, f64::max);
    let waves = SphericalWaves::new(k.k(), k.m, j_max, r_max)?;
    let steps: Vec<u32> = CONVERGENCE_STEPS
        .iter()
        .cloned()
        .filter(|&s| s < j_max)
        .chain([j_max])
        .collect();
    let mut printed_pair: f64 = 0.0;
    for which in [VectorKind::N, VectorKind::M] {
        let label = match which {
            VectorKind::N => "N",
            VectorKind::M => "M",
        };
        let mut worst: f64 = 0.0;
        let mut tail: f64 = 0.0;
        let mut per_step = vec![0.0_f64; steps.len()];
        for s in samples {
            let w = waves.eval(s.cartesian());
            let want = direct(which, k, &s.cyl()?, c);
            let norm = cart_max(&want);
            let sums = partial_sums(which, &coef, &w);
            for (i, &st) in steps.iter().enumerate() {
                let (_, v) = sums
                    .iter()
                    .find(|(j, _)| *j == st)
                    .expect("step inside the table");
                per_step[i] = per_step[i].max(v.max_abs_diff(&want) / norm);
            }
            let last = &sums[sums.len() - 1].1;
            worst = worst.max(last.max_abs_diff(&want) / norm);
            // last ten terms as the truncation estimate
            let back = sums.len().saturating_sub(11);
            tail = tail.max(last.max_abs_diff(&sums[back].1) / norm);

            // printed pairing: c_j (W^E +- W^M) with c_j the printed coefficient,
            // rescaled by the best single complex factor.
            let mut basis = Vec::new();
            for ((j, we, wm), _) in w.iter().zip(&coef) {
                let (u, v) = printed_uv(k, *j, k.m, c)?;
                basis.push(match which {
                    VectorKind::N => (*we + *wm) * u,
                    VectorKind::M => (*we + *wm * Complex64::new(-1.0, 0.0)) * v,
                });
            }
            let sum = basis.into_iter().fold(
                ComplexVec3::cartesian([Complex64::new(0.0, 0.0); 3]),
                |a, b| a + b,
            );
            printed_pair = printed_pair.max(best_fit_residual(&sum, &want) / norm);
        }
        let table = steps
            .iter()
            .zip(&per_step)
            .map(|(s, e)| format!("j<={s}: {e:.2e}"))
            .collect::<Vec<_>>()
            .join(", ");
        let mut r = RelationResult::converged(
            format!("reconstruction of {label} from spherical waves, j_max = {j_max}"),
            worst,
            tail,
            tol.reconstruction,
            format!(
                "k_perp rho <= {:.2}; {table}; tail {tail:.2e}",
                samples.iter().map(|s| s.rho * k.k_perp).fold(0.0, f64::max)
            ),
        );
        if !r.pass && worst > tol.reconstruction && tail <= tol.reconstruction {
            r.notes = format!("converged to the wrong value; {}", r.notes);
        }
        out.push(r);
    }
    out.push(RelationResult::check(
        "printed pairing: N = sum u (A^E + A^M), M = sum v (A^E - A^M)",
        printed_pair,
        tol.reconstruction,
        "best single complex rescaling of the printed coefficients; both vectors need E and M parts with distinct weights",
    ));

    // (d) su(2)
    out.extend(su2_checks(units, tol)?);
    Ok(sort_results(out))
}

/// `min_s |s a - b|` over complex `s`, max-abs over components.
fn best_fit_residual(a: &ComplexVec3, b: &ComplexVec3) -> f64 {
    let (a, b) = (a.to_cartesian(), b.to_cartesian());
    let den = a.dot_conj(&a);
    let s = if den.norm() > 0.0 {
        b.dot_conj(&a) / den
    } else {
        Complex64::new(0.0, 0.0)
    };
    (a * s).max_abs_diff(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::Family;

    fn mode(m: i32) -> ModeIndex {
        ModeIndex::new(Family::TM, m, 1.0, 1.5).unwrap()
    }

    #[test]
    fn reconstruction_off_the_waist() {
        let k = mode(1);
        let s = SphericalSample::new(0.7, 0.4, 0.2);
        let n = reconstruct(VectorKind::N, &k, &s, 30).unwrap();
        let want = direct(VectorKind::N, &k, &s.cyl().unwrap(), 1.0);
        assert!(n.max_abs_diff(&want) < 1e-10 * cart_max(&want));
    }

    #[test]
    fn printed_uv_selection() {
        let k = mode(2);
        assert_eq!(
            printed_uv(&k, 5, 1, 1.0).unwrap(),
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        );
        let (u, v) = printed_uv(&k, 5, 2, 1.0).unwrap();
        assert!(u.norm() > 0.0 && v.norm() > 0.0);
    }

    #[test]
    fn suite_outcomes() {
        let k = mode(1);
        let res = spherical_suite(
            &k,
            &default_samples(&k),
            60,
            &Units::default(),
            &Tolerances::default(),
        )
        .unwrap();
        for r in &res {
            let should_fail = r.name.starts_with("printed pairing");
            assert_eq!(
                r.pass, !should_fail,
                "{} residual {:.3e} {}",
                r.name, r.residual, r.notes
            );
        }
    }

    #[test]
    fn small_j_max_rejected() {
        let k = mode(3);
        assert!(spherical_suite(
            &k,
            &default_samples(&k),
            22,
            &Units::default(),
            &Tolerances::default()
        )
        .is_err());
    }
}
