//! Bessel, Legendre and spherical-harmonic values, plus the finite-radius
//! Bessel overlap used as a quadrature oracle.

use qbessel::specfun::{
    assoc_legendre, jn, jn_prime, lommel_overlap, lommel_overlap_equal, spherical_harmonic,
    vector_spherical_harmonic, VshKind,
};

fn main() -> qbessel::Result<()> {
    println!("{:>4} {:>22} {:>22}", "m", "J_m(2.5)", "J'_m(2.5)");
    for m in -3..=3 {
        println!("{m:>4} {:>22.15e} {:>22.15e}", jn(m, 2.5), jn_prime(m, 2.5));
    }

    println!("\nP_5^2(0.3) = {:.15e}", assoc_legendre(5, 2, 0.3)?);
    println!(
        "Y_3,-1(0.8, 1.1) = {:.15e}",
        spherical_harmonic(3, -1, 0.8, 1.1)?
    );

    let n = [0.6, 0.0, 0.8];
    let ye = vector_spherical_harmonic(VshKind::E, 2, 1, n)?;
    let ym = vector_spherical_harmonic(VshKind::M, 2, 1, n)?;
    println!(
        "Y^E_21 . n = {:.2e}, Y^M_21 . n = {:.2e}",
        ye.dot(&real(n)).norm(),
        ym.dot(&real(n)).norm()
    );

    // int_0^R J_2(k rho) J_2(k' rho) rho drho
    let r = 40.0;
    println!(
        "\nLommel overlap (k=1.0, k'=1.3) = {:.15e}",
        lommel_overlap(2, 1.0, 1.3, r)?
    );
    println!(
        "Lommel overlap (k=k'=1.0)     = {:.15e}",
        lommel_overlap_equal(2, 1.0, r)?
    );
    Ok(())
}

fn real(v: [f64; 3]) -> qbessel::ComplexVec3 {
    qbessel::ComplexVec3::cartesian(v.map(|x| num_complex::Complex64::new(x, 0.0)))
}
