//! A Bessel mode as a ring of plane waves on the cone `cos theta_k = c k_z / omega`.

use qbessel::modes::{
    angular_spectrum, angular_spectrum_scalar, eval_n, min_spectrum_nodes, CylPoint, Family,
    ModeIndex, VectorKind,
};
use qbessel::specfun::jn;

fn main() -> qbessel::Result<()> {
    let k = ModeIndex::new(Family::TM, 3, 1.0, 1.5)?;
    let p = CylPoint::new(2.0, 0.9, 0.4, 0.0)?;
    let x = k.k_perp * p.rho;
    let need = min_spectrum_nodes(k.m, x);
    println!("recommended nodes at x = {x}: {need}");
    for n in [8, 16, 32, need] {
        let s = angular_spectrum_scalar(k.m, x, p.phi, n);
        let err = (s - num_complex::Complex64::from_polar(jn(k.m, x), k.m as f64 * p.phi)).norm();
        let v = angular_spectrum(VectorKind::N, &k, &p, 1.0, n);
        let verr = v.value.max_abs_diff(&eval_n(&k, &p, 1.0).to_cartesian());
        println!(
            "  {n:>3} nodes: scalar error {err:.2e}, N error {verr:.2e}{}",
            v.warning.map(|w| format!("  ({w})")).unwrap_or_default()
        );
    }
    Ok(())
}
