//! Expectation values in coherent states, including the polarization
//! (Stokes) parameters of a single node.

use std::sync::Arc;

use num_complex::Complex64;
use qbessel::dynops::{build_stokes, ObservableSet, Units, ZeroPoint};
use qbessel::lattice::{build_lattice, coherent_expectation, CoherentAmplitude, ModeSpace};
use qbessel::modes::Family;

fn main() -> qbessel::Result<()> {
    let kp = 0.8;
    let l = build_lattice(
        (0, 1),
        &[(kp, 1.0)],
        &[(1.5, 1.0)],
        &[Family::TM, Family::TE],
    )?;
    let space = Arc::new(ModeSpace::Cylindrical(l.clone()));
    let obs = ObservableSet::build(&space, &Units::default(), ZeroPoint::Exclude)?;
    let [p1, p2, p3] = obs.p.cartesian()?;

    // Equal amplitudes on m = 0 and m = 1 give transverse momentum 2 hbar k_perp |alpha|^2.
    let one = Complex64::new(1.0, 0.0);
    let alpha = CoherentAmplitude::vacuum(&space)
        .with(l.index(Family::TM, 0, 0, 0).unwrap(), one)?
        .with(l.index(Family::TM, 1, 0, 0).unwrap(), one)?;
    for (name, op) in [("P1", &p1), ("P2", &p2), ("P3", &p3), ("E", &obs.energy)] {
        println!("<{name}> = {:.12}", coherent_expectation(op, &alpha)?.re);
    }

    // Equal TM and TE amplitudes a quarter period apart; with TM as x and TE as y this is s2.
    let pol = CoherentAmplitude::vacuum(&space)
        .with(l.index(Family::TM, 0, 0, 0).unwrap(), one)?
        .with(
            l.index(Family::TE, 0, 0, 0).unwrap(),
            Complex64::new(0.0, 1.0),
        )?;
    let st = build_stokes(&space, 0, 0, 0)?;
    for (i, s) in st.components().iter().enumerate() {
        println!("<s{i}> = {:+.12}", coherent_expectation(s, &pol)?.re);
    }
    Ok(())
}
