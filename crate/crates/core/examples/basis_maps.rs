//! The (+-) basis diagonalizes energy, momentum, orbital angular momentum and
//! helicity together; the circular R/L basis does not diagonalize the energy
//! outside the paraxial limit.

use std::sync::Arc;

use qbessel::dynops::{make_pm_map, ObservableSet, Units, ZeroPoint};
use qbessel::lattice::{apply_basis, build_lattice, ModeSpace};
use qbessel::modes::Family;
use qbessel::verify::{basis_suite, paraxial_scan, Tolerances};

fn main() -> qbessel::Result<()> {
    let units = Units::default();
    let lattice = build_lattice(
        (0, 2),
        &[(3.0, 1.0)],
        &[(4.0, 1.0)],
        &[Family::TM, Family::TE],
    )?;
    let space = Arc::new(ModeSpace::Cylindrical(lattice));
    let obs = ObservableSet::build(&space, &units, ZeroPoint::Exclude)?;
    let pm = make_pm_map(&space)?;
    let s3 = apply_basis(&obs.s.z, &pm)?;
    for j in 0..space.dim() {
        println!("{:<16} S3 = {:+.15}", pm.label(j), s3.get(j, j).re);
    }

    println!();
    for r in basis_suite(&space, &units, &Tolerances::default())? {
        println!(
            "{:>5}  {:.2e}  {}",
            if r.pass { "pass" } else { "fail" },
            r.residual,
            r.name
        );
    }

    println!("\nparaxial scan");
    for p in paraxial_scan(&units, &[1e-3, 1e-2, 1e-1, 0.5])? {
        println!(
            "  kperp/kz = {:<6} kappa = {:.8}  cross term = {:.4e}",
            p.ratio, p.kappa, p.off_diagonal
        );
    }
    Ok(())
}
