//! Expansion of a Bessel mode in spherical vector waves: coefficients,
//! truncation convergence, and the su(2) algebra of the spherical-basis
//! orbital angular momentum.

use qbessel::dynops::Units;
use qbessel::modes::{Family, ModeIndex};
use qbessel::verify::{
    default_samples, expansion_table, spherical_suite, SphericalSample, Tolerances,
};

fn main() -> qbessel::Result<()> {
    let k = ModeIndex::new(Family::TM, 1, 1.0, 1.5)?;
    let sample = SphericalSample::new(2.0, 0.4, 0.0);
    // alpha is imaginary and beta real for m = 1.
    println!(
        "{:>3} {:>14} {:>14} {:>12}",
        "j", "Im alpha_j", "Re beta_j", "error"
    );
    for row in expansion_table(&k, 24, &sample, 1.0)?.iter().step_by(2) {
        println!(
            "{:>3} {:>14.6e} {:>14.6e} {:>12.3e}",
            row.j, row.alpha.im, row.beta.re, row.reconstruction_error
        );
    }
    println!();
    for r in spherical_suite(
        &k,
        &default_samples(&k),
        60,
        &Units::default(),
        &Tolerances::default(),
    )? {
        println!(
            "{:>5}  {:.2e}  {}",
            if r.pass { "pass" } else { "fail" },
            r.residual,
            r.name
        );
    }
    Ok(())
}
