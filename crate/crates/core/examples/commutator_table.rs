//! The full commutator table on a lattice with `m` in -4..4, three `k_perp`
//! and two `k_z` nodes. Relations that fail as stated print their
//! residual operator.

use std::sync::Arc;
use std::time::Instant;

use qbessel::dynops::Units;
use qbessel::lattice::{build_lattice, ModeSpace};
use qbessel::modes::Family;
use qbessel::verify::{commutator_suite, DEFAULT_EXPECTED_FAIL};

fn main() -> qbessel::Result<()> {
    let nodes = |v: &[f64]| v.iter().map(|&x| (x, 1.0)).collect::<Vec<_>>();
    let lattice = build_lattice(
        (-4, 4),
        &nodes(&[0.5, 1.0, 1.5]),
        &nodes(&[1.0, 2.0]),
        &[Family::TM, Family::TE],
    )?;
    let space = Arc::new(ModeSpace::Cylindrical(lattice));
    let t = Instant::now();
    let results = commutator_suite(&space, &Units::default(), 1e-12)?;
    for r in &results {
        let tag = match (r.pass, DEFAULT_EXPECTED_FAIL.contains(&r.name.as_str())) {
            (true, _) => "pass",
            (false, true) => "xfail",
            (false, false) => "FAIL",
        };
        println!("{tag:>5}  {:.2e}  {}", r.residual, r.name);
        if !r.pass {
            println!("         {}", r.notes);
        }
    }
    if let Some(dump) = results.iter().find_map(|r| r.residual_dump.as_ref()) {
        println!("\nfirst residual operator (truncated):");
        for line in dump.lines().take(8) {
            println!("  {line}");
        }
    }
    println!("\n{} relations in {:.2?}", results.len(), t.elapsed());
    Ok(())
}
