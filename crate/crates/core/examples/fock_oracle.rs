//! Check lattice commutators against a brute-force truncated Fock space.

use std::sync::Arc;

use qbessel::dynops::{ObservableSet, Units, ZeroPoint};
use qbessel::lattice::{build_lattice, commutator, FockOracle, ModeSpace};
use qbessel::modes::Family;

fn main() -> qbessel::Result<()> {
    // D = 6: m in -1..1, one k node, both families.
    let lattice = build_lattice(
        (-1, 1),
        &[(0.8, 1.0)],
        &[(1.5, 1.0)],
        &[Family::TM, Family::TE],
    )?;
    let space = Arc::new(ModeSpace::Cylindrical(lattice));
    let obs = ObservableSet::build(&space, &Units::default(), ZeroPoint::Exclude)?;
    let fock = FockOracle::new(&space, 3)?;
    let keep = fock.exact_sector();
    println!(
        "Fock dimension {} ({} states below the cutoff edge)",
        fock.dim(),
        keep.iter().filter(|&&k| k).count()
    );

    let named = obs.named();
    for (i, (na, a)) in named.iter().enumerate() {
        for (nb, b) in named.iter().skip(i + 1) {
            let lattice_side = fock.realize(&commutator(a, b)?)?;
            let brute = fock.realize(a)?.commutator(&fock.realize(b)?);
            let d = brute.max_abs_diff_on(&lattice_side, &keep);
            if d > 1e-12 {
                println!("[{na},{nb}] mismatch {d:.2e}");
            }
        }
    }
    println!(
        "{} commutators compared",
        named.len() * (named.len() - 1) / 2
    );
    Ok(())
}
