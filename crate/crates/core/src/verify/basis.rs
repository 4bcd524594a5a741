use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::{sort_results, RelationResult, Tolerances};
use crate::dynops::{
    build_energy_number, build_stokes, make_pm_map, make_rl_map, ObservableSet, Units, ZeroPoint,
};
use crate::error::{Error, Result};
use crate::lattice::{
    apply_basis, build_lattice, commutator, ModeLattice, ModeSpace, QuadraticOperator,
};
use crate::modes::Family;

/// One point of the paraxial scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParaxialPoint {
    /// `k_perp / k_z`.
    pub ratio: f64,
    pub kappa: f64,
    /// Magnitude of the R/L cross term of the energy at one `(m, k)` block.
    pub off_diagonal: f64,
}

fn cyl(space: &Arc<ModeSpace>) -> Result<&ModeLattice> {
    space
        .as_cylindrical()
        .ok_or_else(|| Error::Construction("basis suite needs a cylindrical lattice".into()))
}

/// `(tm slot, te slot, kappa, omega)` for every `(m, k)` block.
fn blocks(l: &ModeLattice, units: &Units) -> Vec<(usize, usize, f64, f64)> {
    let (lo, hi) = l.m_range();
    let mut out = Vec::new();
    for m in lo..=hi {
        for ip in 0..l.k_perp_nodes().len() {
            for iz in 0..l.k_z_nodes().len() {
                let tm = l.index(Family::TM, m, ip, iz).expect("both families");
                let te = l.index(Family::TE, m, ip, iz).expect("both families");
                let mode = l.mode(tm);
                let omega = mode.omega(units.c);
                out.push((tm, te, units.c * mode.k_z / omega, omega));
            }
        }
    }
    out
}

/// Energy and number operators without zero-point terms, both transformed by `map`.
fn transformed_energy_number(
    space: &Arc<ModeSpace>,
    units: &Units,
    map: &crate::lattice::BasisMap,
) -> Result<(QuadraticOperator, QuadraticOperator)> {
    let (e, n) = build_energy_number(space, units, ZeroPoint::Exclude)?;
    Ok((apply_basis(&e, map)?, apply_basis(&n, map)?))
}

/// Energy R/L cross term at `k_perp = ratio`, `k_z = 1` for each ratio.
pub fn paraxial_scan(units: &Units, ratios: &[f64]) -> Result<Vec<ParaxialPoint>> {
    ratios
        .iter()
        .map(|&ratio| {
            if !(ratio > 0.0 && ratio.is_finite()) {
                return Err(Error::Domain(format!(
                    "paraxial ratio must be positive, got {ratio}"
                )));
            }
            let l = build_lattice(
                (-1, 1),
                &[(ratio, 1.0)],
                &[(1.0, 1.0)],
                &[Family::TM, Family::TE],
            )?;
            let (tm, te) = (
                l.index(Family::TM, 0, 0, 0).unwrap(),
                l.index(Family::TE, 0, 0, 0).unwrap(),
            );
            let kappa = units.c / l.mode(tm).omega(units.c);
            let space = Arc::new(ModeSpace::Cylindrical(l));
            let rl = make_rl_map(&space, units)?;
            let (e, _) = transformed_energy_number(&space, units, &rl)?;
            Ok(ParaxialPoint {
                ratio,
                kappa,
                off_diagonal: e.get(te, tm).norm(),
            })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub(crate) fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Diagonality and basis-change claims.
///
/// (a) In the `+-` basis the energy, `P3`, `L3` and `S3` commute, are
/// diagonal, and carry eigenvalues `hbar omega`, `hbar k_z`, `hbar m` and
/// `+-hbar c k_z/omega`; (b) `S3` stays diagonal under the circular R/L
/// map; (c) the number operator picks up cross terms in that basis;
/// (d) those cross terms vanish quadratically in `k_perp/k_z`.
pub fn basis_suite(
    space: &Arc<ModeSpace>,
    units: &Units,
    tol: &Tolerances,
) -> Result<Vec<RelationResult>> {
    let l = cyl(space)?;
    let t = tol.algebraic;
    let hbar = units.hbar;
    let obs = ObservableSet::build(space, units, ZeroPoint::Exclude)?;
    let mut out = Vec::new();

    // (a)
    let pm = make_pm_map(space)?;
    let ops = [
        apply_basis(&obs.energy, &pm)?,
        apply_basis(&obs.p.z, &pm)?,
        apply_basis(&obs.l.z, &pm)?,
        apply_basis(&obs.s.z, &pm)?,
    ];
    let mut comm: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            comm = comm.max(commutator(&ops[i], &ops[j])?.max_abs());
        }
    }
    out.push(RelationResult::check(
        "+- basis: E, P3, L3, S3 commute",
        comm,
        t,
        "all six pairs",
    ));
    let offd = ops.iter().map(|o| o.max_off_diagonal()).fold(0.0, f64::max);
    out.push(RelationResult::check(
        "+- basis: E, P3, L3, S3 diagonal",
        offd,
        t,
        "largest off-diagonal entry",
    ));

    let mut eig: f64 = 0.0;
    for j in 0..l.dim() {
        let s = l.site(j);
        let mode = l.mode(j);
        let omega = mode.omega(units.c);
        let sign = if s.family == Family::TM { 1.0 } else { -1.0 };
        let want = [
            hbar * omega,
            hbar * mode.k_z,
            hbar * f64::from(s.m),
            sign * hbar * units.c * mode.k_z / omega,
        ];
        for (op, w) in ops.iter().zip(want) {
            eig = eig.max((op.get(j, j) - Complex64::new(w, 0.0)).norm());
        }
    }
    out.push(RelationResult::check(
        "+- basis eigenvalues hbar omega, hbar kz, hbar m, +-hbar c kz/omega",
        eig,
        t,
        "+ takes the TM slot",
    ));

    let pyth = Arc::new(ModeSpace::Cylindrical(build_lattice(
        (1, 1),
        &[(3.0, 1.0)],
        &[(4.0, 1.0)],
        &[Family::TM, Family::TE],
    )?));
    let pl = pyth.as_cylindrical().unwrap();
    let pobs = ObservableSet::build(&pyth, units, ZeroPoint::Exclude)?;
    let ppm = make_pm_map(&pyth)?;
    let s3 = apply_basis(&pobs.s.z, &ppm)?;
    let e = apply_basis(&pobs.energy, &ppm)?;
    let (p, mn) = (
        pl.index(Family::TM, 1, 0, 0).unwrap(),
        pl.index(Family::TE, 1, 0, 0).unwrap(),
    );
    let res = [
        (s3.get(p, p) - Complex64::new(0.8 * hbar, 0.0)).norm(),
        (s3.get(mn, mn) - Complex64::new(-0.8 * hbar, 0.0)).norm(),
        (e.get(p, p) - Complex64::new(5.0 * hbar * units.c, 0.0)).norm(),
        s3.max_off_diagonal(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    out.push(RelationResult::check(
        "+- basis at kperp=3, kz=4: S3 = +-0.8 hbar, E = 5 hbar c",
        res,
        t,
        format!("S3 = {:+.15}, {:+.15}", s3.get(p, p).re, s3.get(mn, mn).re),
    ));

    // (b), (c)
    if l.m_count() >= 3 {
        let rl = make_rl_map(space, units)?;
        let s3 = apply_basis(&obs.s.z, &rl)?;
        let (e, n) = transformed_energy_number(space, units, &rl)?;
        out.push(RelationResult::check(
            "R/L basis: S3 diagonal",
            s3.max_off_diagonal(),
            t,
            "the map is not unitary",
        ));

        let mut printed_s3: f64 = 0.0;
        let mut computed_s3: f64 = 0.0;
        let mut cross_lr: f64 = 0.0;
        let mut cross_rl_printed: f64 = 0.0;
        let mut diag: f64 = 0.0;
        let mut energy_cross: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (r, lf, kappa, omega) in blocks(l, units) {
            let c = 0.25 * (1.0 + kappa * kappa) * (1.0 - 1.0 / (kappa * kappa));
            let d = 0.25 * (1.0 + kappa * kappa) * (1.0 + 1.0 / (kappa * kappa));
            let printed = 0.5 * hbar * (1.0 + 1.0 / (kappa * kappa));
            let computed = 0.5 * hbar * (1.0 + kappa * kappa);
            let sr = s3.get(r, r).re;
            let sl = s3.get(lf, lf).re;
            printed_s3 = printed_s3
                .max((sr - printed).abs())
                .max((sl + printed).abs());
            computed_s3 = computed_s3
                .max((sr - computed).abs())
                .max((sl + computed).abs());
            // X'(j, k) multiplies b'+_j b'_k: (L slot, R slot) is L+ R.
            cross_lr = cross_lr.max((n.get(lf, r) - Complex64::new(c, 0.0)).norm());
            cross_rl_printed =
                cross_rl_printed.max((n.get(r, lf) - Complex64::new(-c, 0.0)).norm());
            diag = diag
                .max((n.get(r, r) - Complex64::new(d, 0.0)).norm())
                .max((n.get(lf, lf) - Complex64::new(d, 0.0)).norm());
            energy_cross =
                energy_cross.max((e.get(lf, r) / (hbar * omega) - Complex64::new(c, 0.0)).norm());
            scale = scale.max(c.abs());
        }
        out.push(RelationResult::check(
            "R/L basis: S3 = hbar (1+(omega/c kz)^2)/2 (N_R - N_L)",
            printed_s3,
            t,
            format!(
                "lattice eigenvalues are +-hbar (1+(c kz/omega)^2)/2 (residual {computed_s3:.3e}); the printed coefficient is larger by (omega/c kz)^2"
            ),
        ));
        out.push(RelationResult::check(
            "R/L basis: number cross term L+R = 1/4 (1+kappa^2)(1-1/kappa^2)",
            cross_lr,
            t,
            format!("kappa = c kz/omega; largest |coefficient| {scale:.6e}"),
        ));
        out.push(RelationResult::check(
            "R/L basis: number cross term R+L = -1/4 (1+kappa^2)(1-1/kappa^2)",
            cross_rl_printed,
            t,
            "the operator is hermitian, so the R+L coefficient equals the L+R one, with a plus sign",
        ));
        out.push(RelationResult::check(
            "R/L basis: number diagonal = 1/4 (1+kappa^2)(1+1/kappa^2)",
            diag,
            t,
            "both R and L occupation terms",
        ));
        out.push(RelationResult::check(
            "R/L basis: energy cross term = hbar omega/4 (1+kappa^2)(1-1/kappa^2)",
            energy_cross,
            t,
            "per (m, k) block; labels R(m+1), L(m-1) both come from a(m)",
        ));
    }

    // (d)
    let pts = paraxial_scan(units, &log_spaced(1e-3, 1e-1, 9))?;
    let xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.ratio, p.off_diagonal)).collect();
    let slope = loglog_slope(&xy);
    out.push(RelationResult::check(
        "paraxial: R/L energy cross term ~ (kperp/kz)^2",
        (slope - 2.0).abs(),
        tol.slope,
        format!("log-log slope {slope:.6} over kperp/kz in [1e-3, 1e-1], 9 points"),
    ));

    out.push(stokes_algebra(space, l, tol.su2)?);
    Ok(sort_results(out))
}

/// `[s_i, s_j] = 2i eps_ijk s_k` and `[s_0, s_i] = 0` at every node.
fn stokes_algebra(space: &Arc<ModeSpace>, l: &ModeLattice, tol: f64) -> Result<RelationResult> {
    let (m_min, m_max) = l.m_range();
    let two_i = Complex64::new(0.0, 2.0);
    let mut worst: f64 = 0.0;
    let mut nodes = 0;
    for m in m_min..=m_max {
        for ip in 0..l.k_perp_nodes().len() {
            for iz in 0..l.k_z_nodes().len() {
                let s = build_stokes(space, ip, iz, m)?;
                let v = [&s.s1, &s.s2, &s.s3];
                for i in 0..3 {
                    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                    worst = worst.max(commutator(v[i], v[j])?.minus(&v[k].scale(two_i))?.max_abs());
                    worst = worst.max(commutator(&s.s0, v[i])?.max_abs());
                }
                nodes += 1;
            }
        }
    }
    Ok(RelationResult::check(
        "Stokes: [s_i, s_j] = 2i eps_ijk s_k",
        worst,
        tol,
        format!("{nodes} nodes, s_0 central"),
    ))
}
