use std::f64::consts::PI;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;
use crate::specfun::{bessel_j, bessel_j_prime};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn origin() -> CylPoint {
    CylPoint::new(0.0, 0.0, 0.0, 0.0).unwrap()
}

fn random_mode(rng: &mut StdRng, family: Family) -> ModeIndex {
    let m = rng.random_range(-6..=6);
    let kp = rng.random_range(0.2..3.0);
    let kz = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    ModeIndex::new(family, m, kp, kz).unwrap()
}

fn random_point(rng: &mut StdRng) -> CylPoint {
    CylPoint::new(
        rng.random_range(0.05..6.0),
        rng.random_range(-PI..PI),
        rng.random_range(-3.0..3.0),
        rng.random_range(-2.0..2.0),
    )
    .unwrap()
}

#[test]
fn construction_rejects_bad_wavenumbers() {
    assert!(ModeIndex::new(Family::TM, 0, 0.0, 1.0).is_err());
    assert!(ModeIndex::new(Family::TM, 0, 1.0, 0.0).is_err());
    assert!(ModeIndex::new(Family::TE, 0, -1.0, 1.0).is_err());
    assert!(CylPoint::new(-0.1, 0.0, 0.0, 0.0).is_err());
    let p = CylPoint::new(1.0, 3.0 * PI, 0.0, 0.0).unwrap();
    assert!((p.phi + PI).abs() < 1e-12);
}

#[test]
fn m_on_axis() {
    let k = ModeIndex::new(Family::TE, 0, 1.3, 0.7).unwrap();
    let m0 = eval_m(&k, &origin(), 1.0);
    assert_eq!(m0.frame, Frame::Cartesian);
    assert!(m0.norm() == 0.0);

    let k = k.with_m(1);
    let got = eval_m(&k, &origin(), 1.0);
    let want = ComplexVec3::e_plus() * (k.k() / (2.0 * k.k_z));
    assert_eq!(got.frame, Frame::Cartesian);
    assert!(got.max_abs_diff(&want) < 1e-15);
}

#[test]
fn m_matches_direct_assembly() {
    let k = ModeIndex::new(Family::TE, 2, 1.0, 1.0).unwrap();
    let p = CylPoint::new(3.0, PI / 4.0, 1.0, 0.0).unwrap();
    let x = 3.0;
    let omega = 2f64.sqrt();
    let ph = Complex64::from_polar(1.0, 2.0 * PI / 4.0 + 1.0);
    let want = ComplexVec3::new(
        [
            ph * (omega * 2.0 / x * bessel_j(2, x).unwrap()),
            ph * c(0.0, omega * bessel_j_prime(2, x).unwrap()),
            c(0.0, 0.0),
        ],
        Frame::Cylindrical { phi: PI / 4.0 },
    );
    assert!(eval_m(&k, &p, 1.0).max_abs_diff(&want) < 1e-13);
}

#[test]
fn n_on_axis() {
    let k = ModeIndex::new(Family::TM, 0, 0.6, 1.5).unwrap();
    let n = eval_n(&k, &origin(), 1.0);
    assert!(n.max_abs_diff(&(ComplexVec3::e3() * (0.6 / 1.5))) < 1e-15);
    let n1 = eval_n(&k.with_m(1), &origin(), 1.0);
    assert!(n1.max_abs_diff(&(ComplexVec3::e_plus() * c(0.0, 0.5))) < 1e-15);
}

#[test]
fn n_paths_agree_and_m_helical_agrees() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let k = random_mode(&mut rng, Family::TM);
        let p = random_point(&mut rng);
        let cyl = eval_n_with(&k, &p, 1.0, NPath::Cylindrical);
        let hel = eval_n_with(&k, &p, 1.0, NPath::Helical);
        assert!(cyl.max_abs_diff(&hel) < 1e-12, "{k:?} {p:?}");
        assert!(eval_m(&k, &p, 1.0).max_abs_diff(&eval_m_helical(&k, &p, 1.0)) < 1e-12);
    }
}

#[test]
fn m_is_e3_cross_n() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..300 {
        let k = random_mode(&mut rng, Family::TM);
        let p = random_point(&mut rng);
        let lhs = eval_m(&k, &p, 1.0) * k.k_z;
        let n = eval_n(&k, &p, 1.0);
        let e3_cross_n = ComplexVec3::e3().cross(&n) * k.k();
        assert!(lhs.max_abs_diff(&e3_cross_n) < 1e-12 * lhs.norm().max(1.0));
        // The opposite orientation differs by an overall sign.
        let n_cross_e3 = n.cross(&ComplexVec3::e3()) * k.k();
        assert!(lhs.max_abs_diff(&(-n_cross_e3)) < 1e-12 * lhs.norm().max(1.0));
    }
}

#[test]
fn potential_on_axis() {
    let norm = NormalizationConvention::default();
    let te = ModeIndex::new(Family::TE, 0, 1.0, 2.0).unwrap();
    assert_eq!(eval_potential(&te, &origin(), &norm).norm(), 0.0);
    let tm = te.with_family(Family::TM);
    let omega = tm.omega(1.0);
    let want = ComplexVec3::e3() * (c(0.0, -1.0 / omega) * norm.amplitude(&tm) * 0.5);
    assert!(eval_potential(&tm, &origin(), &norm).max_abs_diff(&want) < 1e-15);
}

#[test]
fn amplitude_formula() {
    let norm = NormalizationConvention::new(1.3, 2.0, AmplitudeRule::Physical).unwrap();
    let k = ModeIndex::new(Family::TE, 3, 0.8, 1.1).unwrap();
    let omega = 2.0 * (0.8f64 * 0.8 + 1.1 * 1.1).sqrt();
    let want = 1.1 * 2.0 * (1.3 * 0.8 / (2.0 * PI * omega)).sqrt();
    assert!((norm.amplitude(&k) - want).abs() < 1e-15);
    assert!(NormalizationConvention::new(0.0, 1.0, AmplitudeRule::Unit).is_err());
}

#[test]
fn e_is_i_omega_over_c_times_a_and_b_follows_shape() {
    let norm = NormalizationConvention::new(1.0, 1.7, AmplitudeRule::Physical).unwrap();
    let mut rng = StdRng::seed_from_u64(13);
    for fam in [Family::TM, Family::TE] {
        for _ in 0..50 {
            let k = random_mode(&mut rng, fam);
            let p = random_point(&mut rng);
            let a = eval_potential(&k, &p, &norm);
            let e = eval_e(&k, &p, &norm);
            let ratio = c(0.0, k.omega(norm.c) / norm.c);
            for i in 0..3 {
                assert!((e.c[i] - a.c[i] * ratio).norm() <= 1e-15 * e.norm().max(1.0));
            }
            let b = eval_b(&k, &p, &norm);
            let shape = match fam {
                Family::TM => eval_m(&k, &p, norm.c),
                Family::TE => eval_n(&k, &p, norm.c),
            };
            assert!(b.max_abs_diff(&(shape * norm.amplitude(&k))) < 1e-15 * b.norm().max(1.0));
        }
    }
}

fn cart_field(f: impl Fn(&CylPoint) -> ComplexVec3, x: f64, y: f64, z: f64) -> [Complex64; 3] {
    let p = CylPoint::from_cartesian(x, y, z, 0.3);
    f(&p).to_cartesian().c
}

fn divergence(f: &impl Fn(&CylPoint) -> ComplexVec3, r: [f64; 3], h: f64) -> Complex64 {
    let mut d = c(0.0, 0.0);
    for axis in 0..3 {
        let mut a = r;
        let mut b = r;
        a[axis] += h;
        b[axis] -= h;
        let fa = cart_field(f, a[0], a[1], a[2]);
        let fb = cart_field(f, b[0], b[1], b[2]);
        d += (fa[axis] - fb[axis]) / (2.0 * h);
    }
    d
}

#[test]
fn fields_are_divergence_free() {
    let norm = NormalizationConvention::default();
    let mut rng = StdRng::seed_from_u64(14);
    for fam in [Family::TM, Family::TE] {
        for _ in 0..40 {
            let k = random_mode(&mut rng, fam);
            let r = [
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            ];
            let h = 1e-4 / k.k();
            let lambda = 2.0 * PI / k.k();
            let fe = |p: &CylPoint| eval_e(&k, p, &norm);
            let fb = |p: &CylPoint| eval_b(&k, p, &norm);
            let p = CylPoint::from_cartesian(r[0], r[1], r[2], 0.3);
            let scale_e = eval_e(&k, &p, &norm).norm() + norm.amplitude(&k).abs() * 1e-3;
            let scale_b = eval_b(&k, &p, &norm).norm() + norm.amplitude(&k).abs() * 1e-3;
            assert!(
                divergence(&fe, r, h).norm() < 1e-6 * scale_e / lambda,
                "{k:?} {r:?}"
            );
            assert!(
                divergence(&fb, r, h).norm() < 1e-6 * scale_b / lambda,
                "{k:?} {r:?}"
            );
        }
    }
}

#[test]
fn hertz_longitudinal_components() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..50 {
        let k = random_mode(&mut rng, Family::TM);
        let p = random_point(&mut rng);
        let (e, _) = hertz_fields(&k, &p, 1.0).unwrap();
        let theta = psi(&k, k.m, &p, 1.0);
        assert!((e.c[2] - theta * k.k_perp * k.k_perp).norm() < 1e-12);
        let (e_te, b_te) = hertz_fields(&k.with_family(Family::TE), &p, 1.0).unwrap();
        assert_eq!(e_te.c[2], c(0.0, 0.0));
        assert!((b_te.c[2] - theta * k.k_perp * k.k_perp).norm() < 1e-12);
    }
    let k = ModeIndex::new(Family::TM, 1, 1.0, 1.0).unwrap();
    assert!(hertz_fields(&k, &origin(), 1.0).is_err());
}

#[test]
fn hertz_path_matches_mode_path_after_one_point_matching() {
    let norm = NormalizationConvention::default();
    let mut rng = StdRng::seed_from_u64(16);
    for fam in [Family::TM, Family::TE] {
        let k = random_mode(&mut rng, fam);
        // Fit the constant at one reference point from the largest component.
        let p0 = CylPoint::new(1.3, 0.2, 0.1, 0.0).unwrap();
        let (e0, _) = hertz_fields(&k, &p0, 1.0).unwrap();
        let m0 = eval_e(&k, &p0, &norm);
        let i = (0..3)
            .max_by(|&a, &b| e0.c[a].norm().total_cmp(&e0.c[b].norm()))
            .unwrap();
        let cst = m0.to_cylindrical(p0.phi).c[i] / e0.c[i];
        assert!((cst - hertz_matching_constant(&k, &norm)).norm() < 1e-12 * cst.norm());
        for _ in 0..20 {
            let p = random_point(&mut rng);
            let (e, b) = hertz_fields(&k, &p, 1.0).unwrap();
            let me = eval_e(&k, &p, &norm);
            let mb = eval_b(&k, &p, &norm);
            assert!((e * cst).max_abs_diff(&me) < 1e-10 * me.norm().max(1e-3));
            assert!((b * cst).max_abs_diff(&mb) < 1e-10 * mb.norm().max(1e-3));
        }
    }
}

#[test]
fn circular_modes_decompose_into_tm_te() {
    let norm = NormalizationConvention::default();
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..100 {
        let k = random_mode(&mut rng, Family::TM);
        let p = random_point(&mut rng);
        for h in [Handedness::R, Handedness::L] {
            let comb = eval_circular(h, k.m, k.k_perp, k.k_z, &p, &norm).unwrap();
            let direct = eval_circular_direct(h, k.m, k.k_perp, k.k_z, &p, &norm).unwrap();
            assert!(
                comb.max_abs_diff(&direct) < 1e-12 * comb.norm().max(1.0),
                "{h:?} {k:?} {p:?}"
            );
        }
        // The R mode's e_- coefficient is proportional to psi_m, its e_+ coefficient vanishes.
        let r = eval_circular(Handedness::R, k.m, k.k_perp, k.k_z, &p, &norm).unwrap();
        let [ap, am, _] = r.helical_components();
        let want = -psi(&k, k.m, &p, 1.0) * (norm.amplitude(&k) / k.omega(1.0));
        assert!(ap.norm() < 1e-12 && (am - want).norm() < 1e-12);
    }
}

#[test]
fn circular_mode_is_divergence_free() {
    let norm = NormalizationConvention::default();
    let f = |p: &CylPoint| eval_circular_direct(Handedness::L, 2, 0.9, 1.4, p, &norm).unwrap();
    let d = divergence(&f, [0.7, -0.4, 0.3], 1e-5);
    assert!(d.norm() < 1e-8, "{d}");
}

#[test]
fn circular_paraxial_longitudinal_fraction() {
    let norm = NormalizationConvention::default();
    let p = CylPoint::new(0.3, 0.5, 0.2, 0.0).unwrap();
    let (kz, kp) = (1.0, 1e-3);
    let a = eval_circular_direct(Handedness::R, 0, kp, kz, &p, &norm).unwrap();
    let [ap, am, a3] = a.helical_components();
    let transverse = (ap * 2f64.sqrt()).norm().hypot((am * 2f64.sqrt()).norm());
    assert!(
        a3.norm() <= 5e-4 * transverse,
        "{} vs {}",
        a3.norm(),
        transverse
    );
}

#[test]
fn scalar_angular_spectrum() {
    for (m, x, phi) in [
        (0, 0.5, 0.1),
        (3, 4.0, -1.0),
        (-2, 7.5, 2.5),
        (7, 12.0, 0.0),
    ] {
        let n = min_spectrum_nodes(m, x);
        let got = angular_spectrum_scalar(m, x, phi, n);
        let want = Complex64::from_polar(bessel_j(m, x).unwrap(), m as f64 * phi);
        assert!((got - want).norm() < 1e-10, "m={m} x={x}: {got} vs {want}");
    }
}

#[test]
fn vector_angular_spectrum_matches_closed_forms() {
    let mut rng = StdRng::seed_from_u64(18);
    for _ in 0..10 {
        let k = random_mode(&mut rng, Family::TE);
        let p = random_point(&mut rng);
        let n = min_spectrum_nodes(k.m, k.k_perp * p.rho);
        let sm = angular_spectrum(VectorKind::M, &k, &p, 1.0, n);
        assert!(sm.warning.is_none());
        assert!(sm.value.max_abs_diff(&eval_m(&k, &p, 1.0)) < 1e-10);
        let sn = angular_spectrum(VectorKind::N, &k, &p, 1.0, n);
        assert!(sn.value.max_abs_diff(&eval_n(&k, &p, 1.0)) < 1e-10);
    }
    let k = ModeIndex::new(Family::TM, 0, 0.8, 1.6).unwrap();
    let s = angular_spectrum(VectorKind::N, &k, &origin(), 1.0, 64);
    assert!(s.value.max_abs_diff(&(ComplexVec3::e3() * 0.5)) < 1e-14);
}

#[test]
fn angular_spectrum_converges_geometrically() {
    let k = ModeIndex::new(Family::TE, 3, 1.0, 0.5).unwrap();
    let p = CylPoint::new(6.0, 0.3, 0.0, 0.0).unwrap();
    let exact = eval_m(&k, &p, 1.0);
    let err = |n| {
        angular_spectrum(VectorKind::M, &k, &p, 1.0, n)
            .value
            .max_abs_diff(&exact)
    };
    let (e1, e2) = (err(10), err(20));
    assert!(e2 < 1e-2 * e1 || e2 < 1e-12, "{e1} -> {e2}");
    let few = angular_spectrum(VectorKind::M, &k, &p, 1.0, 10);
    assert!(few.warning.is_some());
}

#[test]
fn conjugation_symmetry() {
    // At z = t = 0: V_{-m}(phi) and conj(V_m(phi)) differ by fixed signs in
    // the cylindrical frame, and (m, phi) -> (-m, -phi) is a pure sign map.
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..50 {
        let k = random_mode(&mut rng, Family::TM);
        let p = CylPoint::new(
            rng.random_range(0.1..5.0),
            rng.random_range(-3.0..3.0),
            0.0,
            0.0,
        )
        .unwrap();
        let km = k.with_m(-k.m);
        let s = if k.m % 2 == 0 { 1.0 } else { -1.0 };
        let m_pos = eval_m(&k, &p, 1.0);
        let m_neg = eval_m(&km, &p, 1.0);
        let m_conj = m_pos.conj();
        for i in 0..2 {
            assert!((m_neg.c[i] + m_conj.c[i] * s).norm() < 1e-12);
        }
        let n_pos = eval_n(&k, &p, 1.0).conj();
        let n_neg = eval_n(&km, &p, 1.0);
        let signs = [-s, -s, s];
        for i in 0..3 {
            assert!((n_neg.c[i] - n_pos.c[i] * signs[i]).norm() < 1e-12);
        }

        let q = CylPoint::new(p.rho, -p.phi, 0.0, 0.0).unwrap();
        let m_ref = eval_m(&km, &q, 1.0);
        let m_orig = eval_m(&k, &p, 1.0);
        for (i, sg) in [-s, s].iter().enumerate() {
            assert!((m_ref.c[i] - m_orig.c[i] * *sg).norm() < 1e-12);
        }
        let n_ref = eval_n(&km, &q, 1.0);
        let n_orig = eval_n(&k, &p, 1.0);
        for (i, sg) in [s, -s, s].iter().enumerate() {
            assert!((n_ref.c[i] - n_orig.c[i] * *sg).norm() < 1e-12);
        }
    }
}
