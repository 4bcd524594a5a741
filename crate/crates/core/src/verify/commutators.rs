use std::sync::Arc;

use num_complex::Complex64;

use super::{sort_results, RelationResult};
use crate::dynops::{build_helicity, elementary, Elementary, ObservableSet, Units, ZeroPoint};
use crate::error::{Error, Result};
use crate::lattice::{
    build_lattice, commutator, FockOracle, ModeLattice, ModeSpace, QuadraticOperator,
};
use crate::modes::Family;

/// Relations whose printed right-hand side disagrees with the lattice value.
const FOCK_N_MAX: usize = 3;

struct Ctx {
    space: Arc<ModeSpace>,
    units: Units,
    obs: ObservableSet,
    /// Middle of the m range, used for the single-m reading.
    m_center: i32,
}

impl Ctx {
    fn new(space: &Arc<ModeSpace>, units: &Units) -> Result<Self> {
        let l = lattice(space)?;
        let (lo, hi) = l.m_range();
        Ok(Self {
            space: Arc::clone(space),
            units: *units,
            obs: ObservableSet::build(space, units, ZeroPoint::Exclude)?,
            m_center: lo + (hi - lo) / 2,
        })
    }

    fn zero(&self) -> QuadraticOperator {
        QuadraticOperator::zero(&self.space)
    }

    fn lat(&self) -> &ModeLattice {
        self.space
            .as_cylindrical()
            .expect("checked on construction")
    }

    fn nodes(&self) -> Vec<(usize, usize, f64, f64)> {
        let l = self.lat();
        let mut v = Vec::new();
        for (ip, p) in l.k_perp_nodes().iter().enumerate() {
            for (iz, z) in l.k_z_nodes().iter().enumerate() {
                v.push((ip, iz, p.value, z.value));
            }
        }
        v
    }

    /// `2 hbar^2 sum (k_z/k_perp)^2 Lambda_3`.
    fn lambda3_weighted(&self) -> Result<QuadraticOperator> {
        let mut acc = self.zero();
        let h2 = self.units.hbar * self.units.hbar;
        for &f in self.lat().families() {
            for (ip, iz, kp, kz) in self.nodes() {
                let lam = elementary(&self.space, Elementary::Lambda, f, ip, iz)?;
                acc = acc.plus(&lam.z.scale_real(2.0 * h2 * (kz / kp).powi(2)))?;
            }
        }
        Ok(acc)
    }

    /// `hbar^2 sum k_z a+_{m-1} a_{m+1}`.
    fn double_lowering(&self) -> Result<QuadraticOperator> {
        let l = self.lat();
        let (lo, hi) = l.m_range();
        let h2 = self.units.hbar * self.units.hbar;
        let mut e = Vec::new();
        for &f in l.families() {
            for (ip, iz, _, kz) in self.nodes() {
                for m in lo + 1..hi {
                    let r = l.index(f, m - 1, ip, iz).expect("in range");
                    let c = l.index(f, m + 1, ip, iz).expect("in range");
                    e.push((r, c, Complex64::new(h2 * kz, 0.0)));
                }
            }
        }
        QuadraticOperator::from_entries(&self.space, e)
    }

    /// `coef hbar^2 sum (c k_z/omega) (a2+_{m+1} a1_{m-1} - a1+_{m+1} a2_{m-1})`,
    /// over every interior `m` or only `only_m`.
    fn cross_family_shift(
        &self,
        coef: Complex64,
        only_m: Option<i32>,
    ) -> Result<QuadraticOperator> {
        let l = self.lat();
        let (lo, hi) = l.m_range();
        let h2 = self.units.hbar * self.units.hbar;
        let mut e = Vec::new();
        for (ip, iz, kp, kz) in self.nodes() {
            let kappa = kz / kp.hypot(kz);
            for m in lo + 1..hi {
                if only_m.is_some_and(|x| x != m) {
                    continue;
                }
                let idx = |f, mm| l.index(f, mm, ip, iz).expect("in range");
                let v = coef * (h2 * kappa);
                e.push((idx(Family::TE, m + 1), idx(Family::TM, m - 1), v));
                e.push((idx(Family::TM, m + 1), idx(Family::TE, m - 1), -v));
            }
        }
        QuadraticOperator::from_entries(&self.space, e)
    }
}

fn lattice(space: &Arc<ModeSpace>) -> Result<&ModeLattice> {
    let l = space.as_cylindrical().ok_or_else(|| {
        Error::Construction("commutator suite needs a cylindrical lattice".into())
    })?;
    if !(l.has_family(Family::TM) && l.has_family(Family::TE)) {
        return Err(Error::Construction(
            "commutator suite needs both TM and TE families".into(),
        ));
    }
    if l.m_count() < 5 {
        return Err(Error::Construction(format!(
            "commutator suite needs at least 5 values of m to host |dm| = 2 couplings away from the edges, lattice has {}",
            l.m_count()
        )));
    }
    Ok(l)
}

type Triple = (QuadraticOperator, QuadraticOperator, QuadraticOperator);
type Build = fn(&Ctx) -> Result<Triple>;
type Alt = fn(&Ctx) -> Result<QuadraticOperator>;

struct Relation {
    name: &'static str,
    canonical: bool,
    build: Build,
    /// Right-hand side the lattice actually produces, when the printed one fails.
    alt: Option<(&'static str, Alt)>,
}

fn rel(name: &'static str, canonical: bool, build: Build) -> Relation {
    Relation {
        name,
        canonical,
        build,
        alt: None,
    }
}

fn relations() -> Vec<Relation> {
    vec![
        rel("[P+,P-] = 0", true, |x| {
            Ok((x.obs.p.plus.clone(), x.obs.p.minus.clone(), x.zero()))
        }),
        rel("[P+,P3] = 0", true, |x| {
            Ok((x.obs.p.plus.clone(), x.obs.p.z.clone(), x.zero()))
        }),
        rel("[P-,P3] = 0", true, |x| {
            Ok((x.obs.p.minus.clone(), x.obs.p.z.clone(), x.zero()))
        }),
        rel("[S+,S-] = 0", true, |x| {
            Ok((x.obs.s.plus.clone(), x.obs.s.minus.clone(), x.zero()))
        }),
        rel("[S+,S3] = 0", true, |x| {
            Ok((x.obs.s.plus.clone(), x.obs.s.z.clone(), x.zero()))
        }),
        rel("[S-,S3] = 0", true, |x| {
            Ok((x.obs.s.minus.clone(), x.obs.s.z.clone(), x.zero()))
        }),
        rel("[P+,S+] = 0", true, |x| {
            Ok((x.obs.p.plus.clone(), x.obs.s.plus.clone(), x.zero()))
        }),
        rel("[P+,S-] = 0", true, |x| {
            Ok((x.obs.p.plus.clone(), x.obs.s.minus.clone(), x.zero()))
        }),
        rel("[P+,S3] = 0", true, |x| {
            Ok((x.obs.p.plus.clone(), x.obs.s.z.clone(), x.zero()))
        }),
        rel("[P-,S+] = 0", true, |x| {
            Ok((x.obs.p.minus.clone(), x.obs.s.plus.clone(), x.zero()))
        }),
        rel("[P-,S-] = 0", true, |x| {
            Ok((x.obs.p.minus.clone(), x.obs.s.minus.clone(), x.zero()))
        }),
        rel("[P-,S3] = 0", true, |x| {
            Ok((x.obs.p.minus.clone(), x.obs.s.z.clone(), x.zero()))
        }),
        rel("[P3,S+] = 0", true, |x| {
            Ok((x.obs.p.z.clone(), x.obs.s.plus.clone(), x.zero()))
        }),
        rel("[P3,S-] = 0", true, |x| {
            Ok((x.obs.p.z.clone(), x.obs.s.minus.clone(), x.zero()))
        }),
        rel("[P3,S3] = 0", true, |x| {
            Ok((x.obs.p.z.clone(), x.obs.s.z.clone(), x.zero()))
        }),
        rel("[L+,L3] = hbar L+", true, |x| {
            Ok((
                x.obs.l.plus.clone(),
                x.obs.l.z.clone(),
                x.obs.l.plus.scale_real(x.units.hbar),
            ))
        }),
        rel("[L-,L3] = -hbar L-", true, |x| {
            Ok((
                x.obs.l.minus.clone(),
                x.obs.l.z.clone(),
                x.obs.l.minus.scale_real(-x.units.hbar),
            ))
        }),
        rel("[L+,L-] = 2 hbar^2 (kz/kperp)^2 Lambda3", false, |x| {
            Ok((
                x.obs.l.plus.clone(),
                x.obs.l.minus.clone(),
                x.lambda3_weighted()?,
            ))
        }),
        rel("[L3,P3] = 0", true, |x| {
            Ok((x.obs.l.z.clone(), x.obs.p.z.clone(), x.zero()))
        }),
        rel("[L3,P-] = hbar P-", false, |x| {
            Ok((
                x.obs.l.z.clone(),
                x.obs.p.minus.clone(),
                x.obs.p.minus.scale_real(x.units.hbar),
            ))
        }),
        rel("[L+,P-] = hbar P3", false, |x| {
            Ok((
                x.obs.l.plus.clone(),
                x.obs.p.minus.clone(),
                x.obs.p.z.scale_real(x.units.hbar),
            ))
        }),
        rel("[L+,P3] = 0", false, |x| {
            Ok((x.obs.l.plus.clone(), x.obs.p.z.clone(), x.zero()))
        }),
        rel("[L+,P+] = hbar^2 kz a+_{m-1} a_{m+1}", false, |x| {
            Ok((
                x.obs.l.plus.clone(),
                x.obs.p.plus.clone(),
                x.double_lowering()?,
            ))
        }),
        rel("[S3,L+] = 0", true, |x| {
            Ok((x.obs.s.z.clone(), x.obs.l.plus.clone(), x.zero()))
        }),
        rel("[S3,L-] = 0", true, |x| {
            Ok((x.obs.s.z.clone(), x.obs.l.minus.clone(), x.zero()))
        }),
        rel("[S3,L3] = 0", true, |x| {
            Ok((x.obs.s.z.clone(), x.obs.l.z.clone(), x.zero()))
        }),
        Relation {
            name: "[S+,L+] = -hbar S3",
            canonical: false,
            build: |x| {
                Ok((
                    x.obs.s.plus.clone(),
                    x.obs.l.plus.clone(),
                    x.obs.s.z.scale_real(-x.units.hbar),
                ))
            },
            alt: Some(("+(1/2) hbar S3", |x| {
                Ok(x.obs.s.z.scale_real(0.5 * x.units.hbar))
            })),
        },
        rel("[S+,L3] = -hbar^2 (c kperp/omega) Sigma+", false, |x| {
            // S+ = hbar (c k_perp/omega) Sigma+ node by node.
            Ok((
                x.obs.s.plus.clone(),
                x.obs.l.z.clone(),
                build_helicity(&x.space, &x.units)?
                    .plus
                    .scale_real(-x.units.hbar),
            ))
        }),
        Relation {
            name: "[S+,L-] printed, summed over m",
            canonical: false,
            build: |x| {
                Ok((
                    x.obs.s.plus.clone(),
                    x.obs.l.minus.clone(),
                    x.cross_family_shift(Complex64::new(0.0, -1.0), None)?,
                ))
            },
            alt: Some(("coefficient +i/2 instead of -i", |x| {
                x.cross_family_shift(Complex64::new(0.0, 0.5), None)
            })),
        },
        Relation {
            name: "[S+,L-] printed, single m",
            canonical: false,
            build: |x| {
                let m = x.m_center;
                Ok((
                    x.obs.s.plus.clone(),
                    x.obs.l.minus.clone(),
                    x.cross_family_shift(Complex64::new(0.0, -1.0), Some(m))?,
                ))
            },
            alt: Some(("coefficient +i/2 summed over m", |x| {
                x.cross_family_shift(Complex64::new(0.0, 0.5), None)
            })),
        },
    ]
}

/// Keeps rows and columns whose `m` is strictly inside the lattice range.
fn interior(l: &ModeLattice) -> impl Fn(usize) -> bool + '_ {
    let (lo, hi) = l.m_range();
    move |j| {
        let m = l.site(j).m;
        m > lo && m < hi
    }
}

/// Three central `m` values at the first node, both families: `D = 6`.
fn fock_sublattice(l: &ModeLattice, m_center: i32) -> Result<Arc<ModeSpace>> {
    let p = l.k_perp_nodes()[0];
    let z = l.k_z_nodes()[0];
    let sub = build_lattice(
        (m_center - 1, m_center + 1),
        &[(p.value, p.weight)],
        &[(z.value, z.weight)],
        &[Family::TM, Family::TE],
    )?;
    Ok(Arc::new(ModeSpace::Cylindrical(sub)))
}

/// Every commutator relation of the observable algebra on `space`.
///
/// Residuals are measured on rows and columns with `m` strictly inside the
/// lattice range: at the edges the `m`-shifting operators are truncated and
/// the commutators pick up boundary terms that are artifacts of the finite
/// range. Each lattice commutator is also compared with the commutator of
/// the brute-force Fock realizations on a six-mode sublattice.
pub fn commutator_suite(
    space: &Arc<ModeSpace>,
    units: &Units,
    tol: f64,
) -> Result<Vec<RelationResult>> {
    let ctx = Ctx::new(space, units)?;
    let l = ctx.lat();
    let keep = interior(l);
    let small_space = fock_sublattice(l, ctx.m_center)?;
    let small = Ctx::new_small(&small_space, units, ctx.m_center)?;
    let fock = FockOracle::new(&small_space, FOCK_N_MAX)?;
    let sector = fock.exact_sector();
    let (lo, hi) = l.m_range();

    let mut out = Vec::new();
    for r in relations() {
        let (a, b, rhs) = (r.build)(&ctx)?;
        let lhs = commutator(&a, &b)?;
        let diff = lhs.minus(&rhs)?.restricted(&keep);
        let residual = diff.max_abs();

        let (sa, sb, _) = (r.build)(&small)?;
        let lattice_small = commutator(&sa, &sb)?;
        let fa = fock.realize(&sa)?;
        let fb = fock.realize(&sb)?;
        let oracle = fa
            .commutator(&fb)
            .max_abs_diff_on(&fock.realize(&lattice_small)?, &sector);

        let mut notes = format!(
            "{}interior m {}..{}; Fock oracle residual {:.3e} (D=6, n_max={})",
            if r.canonical { "canonical; " } else { "" },
            lo + 1,
            hi - 1,
            oracle,
            FOCK_N_MAX
        );
        if residual > tol {
            if let Some((desc, alt)) = r.alt {
                let alt_res = lhs.minus(&alt(&ctx)?)?.restricted(&keep).max_abs();
                notes.push_str(&format!(
                    "; printed form fails, lattice value matches {desc} (residual {alt_res:.3e})"
                ));
            } else {
                notes.push_str("; printed form fails");
            }
        }
        let mut res = RelationResult::check(r.name, residual.max(oracle), tol, notes);
        if !res.pass {
            res = res.with_dump(diff.dump_labeled());
        }
        out.push(res);
    }
    Ok(sort_results(out))
}

impl Ctx {
    fn new_small(space: &Arc<ModeSpace>, units: &Units, m_center: i32) -> Result<Self> {
        Ok(Self {
            space: Arc::clone(space),
            units: *units,
            obs: ObservableSet::build(space, units, ZeroPoint::Exclude)?,
            m_center,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(m: (i32, i32), kp: &[f64], kz: &[f64], w: f64) -> Arc<ModeSpace> {
        let kp: Vec<_> = kp.iter().map(|&v| (v, w)).collect();
        let kz: Vec<_> = kz.iter().map(|&v| (v, w)).collect();
        Arc::new(ModeSpace::Cylindrical(
            build_lattice(m, &kp, &kz, &[Family::TM, Family::TE]).unwrap(),
        ))
    }

    #[test]
    fn suite_outcomes() {
        let sp = space((-3, 3), &[0.5, 1.0], &[1.0, 2.0], 1.0);
        let res = commutator_suite(&sp, &Units::default(), 1e-12).unwrap();
        for r in &res {
            let expected_fail = crate::verify::DEFAULT_EXPECTED_FAIL.contains(&r.name.as_str());
            assert_eq!(
                r.pass, !expected_fail,
                "{}: {} ({})",
                r.name, r.residual, r.notes
            );
            assert!(r.notes.contains("Fock oracle residual"));
            if expected_fail {
                assert!(r.residual_dump.is_some());
            }
        }
        let s_l = res.iter().find(|r| r.name == "[S+,L+] = -hbar S3").unwrap();
        assert!(
            s_l.notes.contains("matches +(1/2) hbar S3"),
            "{}",
            s_l.notes
        );
        let names: Vec<_> = res.iter().map(|r| r.name.clone()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn residuals_do_not_depend_on_node_weights() {
        let a = commutator_suite(
            &space((-2, 2), &[0.5, 1.5], &[1.0], 1.0),
            &Units::default(),
            1e-12,
        )
        .unwrap();
        let b = commutator_suite(
            &space((-2, 2), &[0.5, 1.5], &[1.0], 0.37),
            &Units::default(),
            1e-12,
        )
        .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert!(
                (x.residual - y.residual).abs() <= 1e-13 * x.residual.max(1.0),
                "{}",
                x.name
            );
        }
    }

    #[test]
    fn too_narrow_m_range_is_an_error() {
        assert!(commutator_suite(
            &space((-1, 2), &[1.0], &[1.0], 1.0),
            &Units::default(),
            1e-12
        )
        .is_err());
    }
}
