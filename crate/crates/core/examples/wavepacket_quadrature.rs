//! Orthogonality integrals of wavepacket-smeared modes over a finite
//! cylinder, compared with the envelope overlaps. Run with `--release`;
//! pass a smaller extent (e.g. `30`) for a faster, looser run.

use std::time::Instant;

use qbessel::modes::{Family, NormalizationConvention};
use qbessel::verify::{quadrature_suite, QuadratureDomain, Tolerances, WavepacketSpec};

fn main() -> qbessel::Result<()> {
    let extent: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(60.0);
    let spec = WavepacketSpec::new(Family::TM, 2, 1.0, 0.1, 1.5, 0.15)?;
    let domain = QuadratureDomain::for_packet(&spec, extent);
    println!(
        "R = {}, Z = {}, nodes {} x {} x {}",
        domain.radius,
        domain.half_length,
        domain.radial_nodes,
        domain.axial_nodes,
        domain.azimuthal_nodes
    );
    let t = Instant::now();
    let results = quadrature_suite(
        &spec,
        &domain,
        &NormalizationConvention::default(),
        &Tolerances::default(),
    )?;
    for r in &results {
        let est = r
            .error_estimate
            .map(|e| format!("{e:.1e}"))
            .unwrap_or_else(|| "-".into());
        println!("{:?}  {:.2e} (est {est})  {}", r.status, r.residual, r.name);
    }
    println!("{:.2?}", t.elapsed());
    Ok(())
}
