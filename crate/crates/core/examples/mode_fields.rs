//! Evaluate the mode vectors and fields of one TM and one TE mode at a few
//! points, and compare the cylindrical and helical forms of `N`.

use qbessel::modes::{
    eval_b, eval_e, eval_m, eval_n_with, CylPoint, Family, ModeIndex, NPath,
    NormalizationConvention,
};

fn main() -> qbessel::Result<()> {
    let norm = NormalizationConvention::default();
    for family in [Family::TM, Family::TE] {
        let k = ModeIndex::new(family, 1, 3.0, 4.0)?;
        println!(
            "{family:?} m=1 k_perp=3 k_z=4  omega = {}  kappa = {}",
            k.omega(norm.c),
            k.kappa()
        );
        for rho in [0.0, 0.4, 1.2] {
            let p = CylPoint::new(rho, 0.3, 0.1, 0.0)?;
            let e = eval_e(&k, &p, &norm).to_cartesian();
            let b = eval_b(&k, &p, &norm).to_cartesian();
            println!(
                "  rho={rho:<4} |E| = {:.6e}  |B| = {:.6e}  Re(E.B*) = {:+.3e}",
                e.norm(),
                b.norm(),
                e.dot_conj(&b).re
            );
        }
    }

    // Same N from two formulas; M from its own evaluator.
    let k = ModeIndex::new(Family::TM, -2, 0.7, 1.9)?;
    let p = CylPoint::new(1.3, -2.0, 0.5, 0.2)?;
    let cyl = eval_n_with(&k, &p, 1.0, NPath::Cylindrical);
    let hel = eval_n_with(&k, &p, 1.0, NPath::Helical);
    println!(
        "\nN: cylindrical vs helical max difference {:.2e}",
        cyl.max_abs_diff(&hel)
    );
    println!(
        "M at the same point: {:?}",
        eval_m(&k, &p, 1.0).to_cartesian().c
    );
    Ok(())
}
