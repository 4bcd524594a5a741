//! Configuration text: defaults, overrides, and the echo written into reports.

use qbessel::cli::RunConfig;

fn main() -> qbessel::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.apply_text(
        "lattice.m_range = -2..2\nlattice.kperp = 0.5:0.25, 1.0:0.25\ntol.algebraic = 1e-11\n",
        "inline",
    )?;
    print!("{}", cfg.to_text());
    Ok(())
}
