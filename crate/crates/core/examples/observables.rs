//! Build every observable on a small lattice and list its nonzero matrix
//! entries.

use std::sync::Arc;

use qbessel::dynops::{ObservableSet, Units, ZeroPoint};
use qbessel::lattice::{build_lattice, ModeSpace};
use qbessel::modes::Family;

fn main() -> qbessel::Result<()> {
    let lattice = build_lattice(
        (-1, 1),
        &[(1.0, 0.5)],
        &[(2.0, 0.5)],
        &[Family::TM, Family::TE],
    )?;
    let space = Arc::new(ModeSpace::Cylindrical(lattice));
    println!("{space}");
    let obs = ObservableSet::build(&space, &Units::default(), ZeroPoint::Include)?;
    for (name, op) in obs.named() {
        println!("\n{name}: {} entries, zero point {}", op.nnz(), op.scalar());
        print!("{}", op.dump_labeled());
    }
    Ok(())
}
