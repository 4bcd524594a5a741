use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Plain space of `d` modes: one family, `d` values of `m`.
fn flat_space(d: usize) -> Arc<ModeSpace> {
    let l = build_lattice(
        (0, d as i32 - 1),
        &[(1.0, 1.0)],
        &[(1.0, 1.0)],
        &[Family::TM],
    )
    .unwrap();
    Arc::new(ModeSpace::Cylindrical(l))
}

fn random_op(space: &Arc<ModeSpace>, rng: &mut StdRng, density: f64) -> QuadraticOperator {
    let d = space.dim();
    let mut entries = Vec::new();
    for r in 0..d {
        for col in 0..d {
            if rng.random_bool(density) {
                entries.push((
                    r,
                    col,
                    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                ));
            }
        }
    }
    QuadraticOperator::from_entries(space, entries)
        .unwrap()
        .with_scalar(c(rng.random_range(-1.0..1.0), 0.0))
}

fn random_hermitian(space: &Arc<ModeSpace>, rng: &mut StdRng, density: f64) -> QuadraticOperator {
    let a = random_op(space, rng, density);
    a.plus(&a.adjoint()).unwrap()
}

#[test]
fn lattice_dimensions_and_layout() {
    let l = build_lattice(
        (-1, 1),
        &[(1.0, 1.0)],
        &[(1.0, 1.0)],
        &[Family::TM, Family::TE],
    )
    .unwrap();
    assert_eq!(l.dim(), 6);
    let l1 = build_lattice((3, 3), &[(0.5, 0.2)], &[(2.0, 0.1)], &[Family::TE]).unwrap();
    assert_eq!(l1.dim(), 1);
    let dup = build_lattice(
        (0, 0),
        &[(1.0, 1.0)],
        &[(1.0, 0.5), (1.0, 0.5)],
        &[Family::TM],
    )
    .unwrap();
    assert_eq!(dup.dim(), 2);

    let l = build_lattice(
        (-2, 2),
        &[(0.5, 1.0), (1.0, 1.0)],
        &[(1.0, 1.0), (-2.0, 0.3), (3.0, 1.0)],
        &[Family::TE, Family::TM],
    )
    .unwrap();
    assert_eq!(l.families(), &[Family::TM, Family::TE]);
    for j in 0..l.dim() {
        let s = l.site(j);
        assert_eq!(l.index(s.family, s.m, s.ip, s.iz), Some(j));
    }
    // k_z is the fastest index, family the slowest.
    assert_eq!(l.index(Family::TM, -2, 0, 1), Some(1));
    assert_eq!(l.index(Family::TM, -2, 1, 0), Some(3));
    assert_eq!(l.index(Family::TM, -1, 0, 0), Some(6));
    assert_eq!(l.index(Family::TE, -2, 0, 0), Some(30));
    assert_eq!(l.index(Family::TE, 3, 0, 0), None);
}

#[test]
fn lattice_rejects_bad_nodes() {
    let fams = [Family::TM];
    assert!(build_lattice((0, 0), &[(1.0, 0.0)], &[(1.0, 1.0)], &fams).is_err());
    assert!(build_lattice((0, 0), &[(1.0, -1.0)], &[(1.0, 1.0)], &fams).is_err());
    assert!(build_lattice((0, 0), &[(1.0, 1.0)], &[(0.0, 1.0)], &fams).is_err());
    assert!(build_lattice((0, 0), &[(-1.0, 1.0)], &[(1.0, 1.0)], &fams).is_err());
    assert!(build_lattice((1, 0), &[(1.0, 1.0)], &[(1.0, 1.0)], &fams).is_err());
    assert!(build_lattice((0, 0), &[(1.0, 1.0)], &[(1.0, 1.0)], &[]).is_err());
}

#[test]
fn spherical_layout_round_trips() {
    let l = SphericalLattice::new(
        &[(1.0, 1.0), (2.0, 0.5)],
        (1, 4),
        &[SphericalFamily::M, SphericalFamily::E],
    )
    .unwrap();
    assert_eq!(l.dim(), 2 * 2 * (3 + 5 + 7 + 9));
    for idx in 0..l.dim() {
        let s = l.site(idx);
        assert!(s.m.unsigned_abs() <= s.j);
        assert_eq!(l.index(s.family, s.iw, s.j, s.m), Some(idx));
    }
    assert!(SphericalLattice::new(&[(1.0, 1.0)], (0, 2), &[SphericalFamily::E]).is_err());
}

#[test]
fn canonical_two_mode_commutator() {
    let sp = flat_space(2);
    let a = QuadraticOperator::from_entries(&sp, [(0, 1, c(1.0, 0.0))]).unwrap();
    let b = QuadraticOperator::from_entries(&sp, [(1, 0, c(1.0, 0.0))]).unwrap();
    let want =
        QuadraticOperator::from_entries(&sp, [(0, 0, c(1.0, 0.0)), (1, 1, c(-1.0, 0.0))]).unwrap();
    assert_eq!(
        commutator(&a, &b).unwrap().max_abs_diff(&want).unwrap(),
        0.0
    );
    assert_eq!(commutator(&a, &a).unwrap().max_abs(), 0.0);
}

#[test]
fn scalar_parts_never_enter_commutators() {
    let sp = flat_space(3);
    let mut rng = StdRng::seed_from_u64(3);
    let a = random_op(&sp, &mut rng, 0.5);
    let b = random_op(&sp, &mut rng, 0.5);
    let shifted = a.clone().with_scalar(c(17.0, 0.0));
    let x = commutator(&a, &b).unwrap();
    assert_eq!(x.scalar(), c(0.0, 0.0));
    assert_eq!(
        x.max_abs_diff(&commutator(&shifted, &b).unwrap()).unwrap(),
        0.0
    );
}

#[test]
fn mismatched_spaces_are_rejected() {
    let a = QuadraticOperator::zero(&flat_space(2));
    let b = QuadraticOperator::zero(&flat_space(3));
    assert_eq!(commutator(&a, &b).unwrap_err(), Error::SpaceMismatch);
    assert!(QuadraticOperator::from_entries(&flat_space(2), [(2, 0, c(1.0, 0.0))]).is_err());
}

#[test]
fn coherent_expectation_basics() {
    let sp = flat_space(2);
    let n0 = QuadraticOperator::from_entries(&sp, [(0, 0, c(1.0, 0.0))]).unwrap();
    let alpha = CoherentAmplitude::vacuum(&sp).with(0, c(2.0, 0.0)).unwrap();
    assert_eq!(coherent_expectation(&n0, &alpha).unwrap(), c(4.0, 0.0));
    let with_s = n0.clone().with_scalar(c(0.25, 0.0));
    assert_eq!(
        coherent_expectation(&with_s, &CoherentAmplitude::vacuum(&sp)).unwrap(),
        c(0.25, 0.0)
    );
    assert!(CoherentAmplitude::vacuum(&sp).with(5, c(1.0, 0.0)).is_err());
}

#[test]
fn dump_is_sorted_and_deterministic() {
    let sp = flat_space(3);
    let op = QuadraticOperator::from_entries(
        &sp,
        [
            (2, 0, c(1.0, -2.0)),
            (0, 1, c(0.5, 0.0)),
            (0, 0, c(1e-17, 0.0)),
        ],
    )
    .unwrap()
    .with_scalar(c(0.5, 0.0));
    let d = op.dump();
    let lines: Vec<&str> = d.lines().collect();
    assert_eq!(lines.len(), 3, "{d}");
    assert!(lines[0].starts_with("0 1 5.0000000000000000e-1 "));
    assert!(lines[1].starts_with("2 0 1.0000000000000000e0 -2.0000000000000000e0"));
    assert_eq!(
        lines[2],
        "scalar 5.0000000000000000e-1 0.0000000000000000e0"
    );
    assert_eq!(d, op.clone().dump());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn commutator_is_bilinear_antisymmetric_and_jacobi(seed in any::<u64>()) {
        let sp = flat_space(8);
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b, x) = (random_op(&sp, &mut rng, 0.3), random_op(&sp, &mut rng, 0.3), random_op(&sp, &mut rng, 0.3));
        let (p, q) = (c(0.7, -0.2), c(-1.3, 0.4));

        let lhs = commutator(&a.scale(p).plus(&b.scale(q)).unwrap(), &x).unwrap();
        let rhs = commutator(&a, &x).unwrap().scale(p).plus(&commutator(&b, &x).unwrap().scale(q)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);

        let anti = commutator(&a, &b).unwrap().plus(&commutator(&b, &a).unwrap()).unwrap();
        prop_assert!(anti.max_abs() < 1e-12);

        let j1 = commutator(&a, &commutator(&b, &x).unwrap()).unwrap();
        let j2 = commutator(&b, &commutator(&x, &a).unwrap()).unwrap();
        let j3 = commutator(&x, &commutator(&a, &b).unwrap()).unwrap();
        prop_assert!(j1.plus(&j2).unwrap().plus(&j3).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn i_commutator_of_hermitians_is_hermitian(seed in any::<u64>()) {
        let sp = flat_space(8);
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_hermitian(&sp, &mut rng, 0.3);
        let b = random_hermitian(&sp, &mut rng, 0.3);
        prop_assert!(a.is_hermitian(1e-14));
        prop_assert!(commutator(&a, &b).unwrap().scale(c(0.0, 1.0)).is_hermitian(1e-13));
    }
}

#[test]
fn fock_ladder_structure() {
    let sp = flat_space(2);
    let fo = FockOracle::new(&sp, 4).unwrap();
    let b = fo.annihilation(0);
    let bd = fo.creation(0);
    let comm = b.commutator(&bd);
    for s in 0..fo.dim() {
        let n0 = fo.occupations(s)[0];
        let want = if n0 < 4 { 1.0 } else { -4.0 };
        assert!((comm.get(s, s) - c(want, 0.0)).norm() < 1e-14, "state {s}");
    }
    // Number operator spectrum 0..=n_max on its mode.
    let n = fo
        .realize(&QuadraticOperator::from_entries(&sp, [(0, 0, c(1.0, 0.0))]).unwrap())
        .unwrap();
    let mut diag: Vec<i64> = (0..fo.dim())
        .map(|s| n.get(s, s).re.round() as i64)
        .collect();
    diag.sort();
    diag.dedup();
    assert_eq!(diag, vec![0, 1, 2, 3, 4]);
    // The direct quadratic-form realization equals the ladder product.
    let q = fo
        .realize(&QuadraticOperator::from_entries(&sp, [(0, 1, c(1.0, 0.0))]).unwrap())
        .unwrap();
    let prod = fo.creation(0).mul(&fo.annihilation(1));
    assert!(q.max_abs_diff_on(&prod, &vec![true; fo.dim()]) < 1e-14);
}

#[test]
fn fock_dimension_bound() {
    assert!(matches!(
        FockOracle::new(&flat_space(8), 3),
        Err(Error::DimensionBound { .. })
    ));
    assert!(FockOracle::new(&flat_space(6), 4).is_ok());
}

#[test]
fn commutator_matches_fock_oracle_on_random_operators() {
    let sp = flat_space(8);
    let fo = FockOracle::new(&sp, 2).unwrap();
    let keep = fo.exact_sector();
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..3 {
        let a = random_op(&sp, &mut rng, 0.3);
        let b = random_op(&sp, &mut rng, 0.3);
        let lattice = fo.realize(&commutator(&a, &b).unwrap()).unwrap();
        let brute = fo.realize(&a).unwrap().commutator(&fo.realize(&b).unwrap());
        assert!(lattice.max_abs_diff_on(&brute, &keep) < 1e-12);
    }
}

#[test]
fn coherent_expectation_matches_fock_oracle() {
    let sp = flat_space(4);
    let fo = FockOracle::new(&sp, 9).unwrap();
    let mut rng = StdRng::seed_from_u64(22);
    let a = random_op(&sp, &mut rng, 0.6);
    let alpha = CoherentAmplitude::vacuum(&sp)
        .with(1, c(0.3, -0.2))
        .unwrap()
        .with(3, c(-0.25, 0.1))
        .unwrap();
    let exact = coherent_expectation(&a, &alpha).unwrap();
    let brute = fo.coherent_expectation(&a, &alpha).unwrap();
    assert!((exact - brute).norm() < 1e-10, "{exact} vs {brute}");
}

#[test]
fn identity_basis_map_changes_nothing() {
    let sp = flat_space(4);
    let mut rng = StdRng::seed_from_u64(23);
    let a = random_op(&sp, &mut rng, 0.5);
    let id = BasisMap::identity(&sp);
    assert!(id.is_unitary());
    assert!(apply_basis(&a, &id).unwrap().max_abs_diff(&a).unwrap() < 1e-15);
}

fn random_unitary(d: usize, rng: &mut StdRng) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(d, d, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    m.qr().q()
}

fn sorted_eigenvalues(x: DMatrix<Complex64>) -> Vec<f64> {
    let mut e: Vec<f64> = x.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn unitary_maps_preserve_spectrum() {
    let sp = flat_space(6);
    let mut rng = StdRng::seed_from_u64(24);
    let a = random_hermitian(&sp, &mut rng, 0.5);
    let t = BasisMap::new(&sp, random_unitary(6, &mut rng), None).unwrap();
    assert!(t.is_unitary());
    let before = sorted_eigenvalues(a.to_dense());
    let after = sorted_eigenvalues(apply_basis(&a, &t).unwrap().to_dense());
    for (x, y) in before.iter().zip(&after) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn singular_maps_are_rejected() {
    let sp = flat_space(2);
    let t = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
    assert!(matches!(
        BasisMap::new(&sp, t, None),
        Err(Error::Singular(_))
    ));
}

#[test]
fn non_unitary_map_preserves_the_abstract_operator() {
    // Realize sum X'_jl b'^dagger_j b'_l with b' = T b built from Fock ladder
    // matrices, and compare with the realization of the original form.
    let sp = flat_space(3);
    let fo = FockOracle::new(&sp, 3).unwrap();
    let mut rng = StdRng::seed_from_u64(25);
    let a = random_op(&sp, &mut rng, 0.6);
    let t = DMatrix::from_fn(3, 3, |r, col| {
        if r == col {
            c(1.0, 0.0)
        } else {
            c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
        }
    });
    let map = BasisMap::new(&sp, t.clone(), None).unwrap();
    assert!(!map.is_unitary());
    let xp = apply_basis(&a, &map).unwrap();

    let bprime: Vec<FockMatrix> = (0..3)
        .map(|j| {
            (0..3).fold(FockMatrix::zeros(fo.dim()), |acc, k| {
                acc.add(&fo.annihilation(k).scale(t[(j, k)]))
            })
        })
        .collect();
    let bprime_dag: Vec<FockMatrix> = (0..3)
        .map(|j| {
            (0..3).fold(FockMatrix::zeros(fo.dim()), |acc, k| {
                acc.add(&fo.creation(k).scale(t[(j, k)].conj()))
            })
        })
        .collect();
    let mut rebuilt = FockMatrix::identity(fo.dim()).scale(xp.scalar());
    for (j, l, v) in xp.entries() {
        rebuilt = rebuilt.add(&bprime_dag[j].mul(&bprime[l]).scale(v));
    }
    let direct = fo.realize(&a).unwrap();
    assert!(rebuilt.max_abs_diff_on(&direct, &fo.exact_sector()) < 1e-12);
}
