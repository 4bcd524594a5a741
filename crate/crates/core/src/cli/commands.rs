use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{parse_f64, parse_family, Format, RunConfig};
use super::format::{field_columns, fmt_num, Grid, Quantity};
use super::{
    AmplitudeArg, BasisArg, Common, ExpandArgs, ExpectArgs, FamilyArg, FieldArgs, LatticeArgs,
    Suite, VerifyArgs,
};
use super::{EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK};
use crate::dynops::{build_stokes, make_pm_map, ObservableSet, Units, ZeroPoint};
use crate::error::{Error, Result};
use crate::lattice::{
    build_lattice, coherent_expectation, BasisMap, CoherentAmplitude, ModeLattice, ModeSpace,
    QuadraticOperator,
};
use crate::modes::{
    eval_b, eval_e, eval_m, eval_n, eval_potential, AmplitudeRule, CylPoint, Family, ModeIndex,
    NormalizationConvention,
};
use crate::vec3::ComplexVec3;
use crate::verify::{
    basis_suite, commutator_suite, default_samples, expansion_table, quadrature_suite,
    spherical_suite, Outcome, QuadratureDomain, RelationResult, SphericalSample, WavepacketSpec,
};

/// Rendered output of a command.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
    /// Human-readable lines for standard error.
    pub log: Vec<String>,
    /// Destination: `--out`, else `output.path`, else standard output.
    pub out: Option<PathBuf>,
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(common.config.as_deref())?;
    if let Some(h) = common.hbar {
        cfg.set("units.hbar", &h.to_string())?;
    }
    if let Some(c) = common.c {
        cfg.set("units.c", &c.to_string())?;
    }
    if let Some(p) = &common.out {
        cfg.out = Some(p.clone());
    }
    Ok(cfg)
}

fn apply_lattice(cfg: &mut RunConfig, a: &LatticeArgs) -> Result<()> {
    if let Some(v) = &a.m_range {
        cfg.set("lattice.m_range", v)?;
    }
    if let Some(v) = &a.kperp {
        cfg.set("lattice.kperp", v)?;
    }
    if let Some(v) = &a.kz {
        cfg.set("lattice.kz", v)?;
    }
    Ok(())
}

fn units(cfg: &RunConfig) -> Result<Units> {
    Units::new(cfg.hbar, cfg.c)
}

fn lattice(cfg: &RunConfig) -> Result<(ModeLattice, Arc<ModeSpace>)> {
    let l = build_lattice(
        cfg.m_range,
        &cfg.k_perp,
        &cfg.k_z,
        &[Family::TM, Family::TE],
    )?;
    Ok((l.clone(), Arc::new(ModeSpace::Cylindrical(l))))
}

fn metadata(command: &str, cfg: &RunConfig, extra: Value) -> Value {
    let mut m = json!({
        "tool": "qbessel",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg,
    });
    if let (Some(obj), Value::Object(more)) = (m.as_object_mut(), extra) {
        obj.extend(more);
    }
    m
}

fn to_json_text(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `field`: grid of E/B, M/N or A samples.
pub fn cmd_field(a: &FieldArgs) -> Result<CommandOutput> {
    let cfg = load(&a.common)?;
    let family = match a.family {
        FamilyArg::Tm => Family::TM,
        FamilyArg::Te => Family::TE,
    };
    let k = ModeIndex::new(family, a.m, a.kperp, a.kz).map_err(|e| Error::Config(e.to_string()))?;
    let grid = Grid::parse(&a.plane, &a.grid, a.extent)?;
    if !a.t.is_finite() {
        return Err(Error::Config("t must be finite".into()));
    }
    let rule = match a.amplitude {
        AmplitudeArg::Physical => AmplitudeRule::Physical,
        AmplitudeArg::Unit => AmplitudeRule::Unit,
    };
    let norm = NormalizationConvention::new(cfg.hbar, cfg.c, rule)?;
    let format = a.format.or(cfg.format).unwrap_or(Format::Csv);
    let q = a.quantity;
    let t = a.t;

    let sample = |r: [f64; 3]| -> Vec<f64> {
        let p = CylPoint::from_cartesian(r[0], r[1], r[2], t);
        let vecs: Vec<ComplexVec3> = match q {
            Quantity::Fields => vec![eval_e(&k, &p, &norm), eval_b(&k, &p, &norm)],
            Quantity::Mn => vec![eval_m(&k, &p, norm.c), eval_n(&k, &p, norm.c)],
            Quantity::Potential => vec![eval_potential(&k, &p, &norm)],
        };
        let mut row = vec![r[0], r[1], r[2], t];
        for v in vecs {
            for c in v.to_cartesian().c {
                row.push(c.re);
                row.push(c.im);
            }
        }
        row
    };
    let rows: Vec<Vec<Vec<f64>>> = (0..grid.n2)
        .into_par_iter()
        .map(|i2| grid.row(i2).into_iter().map(sample).collect())
        .collect();
    let cols = field_columns(q);
    let text = match format {
        Format::Csv => {
            let mut s = cols.join(",");
            s.push('\n');
            for row in rows.iter().flatten() {
                s.push_str(
                    &row.iter()
                        .map(|&x| fmt_num(x))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let meta = metadata(
                "field",
                &cfg,
                json!({"mode": {"family": family, "m": a.m, "kperp": a.kperp, "kz": a.kz}, "quantity": format!("{q:?}").to_lowercase(),
                       "plane": a.plane, "grid": a.grid, "extent": a.extent, "t": t}),
            );
            let data: Vec<&Vec<f64>> = rows.iter().flatten().collect();
            to_json_text(&json!({"metadata": meta, "columns": cols, "rows": data}))?
        }
    };
    Ok(CommandOutput {
        text,
        exit_code: EXIT_OK,
        log: vec![format!("{} points", grid.len())],
        out: cfg.out,
    })
}

fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<(&'static str, RelationResult)>> {
    let u = units(cfg)?;
    let mut out = Vec::new();
    let tag = |name: &'static str, v: Vec<RelationResult>| v.into_iter().map(move |r| (name, r));
    if matches!(suite, Suite::Commutators | Suite::All) {
        let (_, space) = lattice(cfg)?;
        out.extend(tag(
            "commutators",
            commutator_suite(&space, &u, cfg.tol.algebraic)?,
        ));
    }
    if matches!(suite, Suite::Basis | Suite::All) {
        let (_, space) = lattice(cfg)?;
        out.extend(tag("basis", basis_suite(&space, &u, &cfg.tol)?));
    }
    if matches!(suite, Suite::Quadrature | Suite::All) {
        let q = &cfg.quadrature;
        let spec = WavepacketSpec::new(q.family, q.m, q.k_perp, q.sigma_perp, q.k_z, q.sigma_z)?;
        let dom = QuadratureDomain::for_packet(&spec, q.extent);
        let norm = NormalizationConvention::new(cfg.hbar, cfg.c, AmplitudeRule::Physical)?;
        out.extend(tag(
            "quadrature",
            quadrature_suite(&spec, &dom, &norm, &cfg.tol)?,
        ));
    }
    if matches!(suite, Suite::Spherical | Suite::All) {
        let s = &cfg.spherical;
        let k = ModeIndex::new(Family::TM, s.m, s.k_perp, s.k_z)?;
        out.extend(tag(
            "spherical",
            spherical_suite(&k, &default_samples(&k), s.j_max, &u, &cfg.tol)?,
        ));
    }
    Ok(out)
}

/// `verify`: runs the selected suites; the exit code reflects the outcomes.
pub fn cmd_verify(a: &VerifyArgs) -> Result<CommandOutput> {
    let mut cfg = load(&a.common)?;
    apply_lattice(&mut cfg, &a.lattice)?;
    if let Some(t) = a.tol {
        cfg.set("tol.algebraic", &t.to_string())?;
    }
    if let Some(j) = a.j_max {
        cfg.spherical.j_max = j;
    }
    if a.strict {
        cfg.expected_fail.clear();
    }
    cfg.expected_fail.extend(a.expected_fail.iter().cloned());

    let results = run_suite(a.suite, &cfg)?;
    let mut log = Vec::new();
    let (mut fails, mut xfails, mut inconclusive, mut passes) =
        (Vec::new(), Vec::new(), Vec::new(), 0usize);
    for (suite, r) in &results {
        let o = r.outcome(&cfg.expected_fail);
        let tag = match o {
            Outcome::Pass => {
                passes += 1;
                "PASS"
            }
            Outcome::ExpectedFail => {
                xfails.push(r.name.clone());
                "XFAIL"
            }
            Outcome::Fail => {
                fails.push(r.name.clone());
                "FAIL"
            }
            Outcome::Inconclusive => {
                inconclusive.push(r.name.clone());
                "INCONCLUSIVE"
            }
        };
        log.push(format!(
            "{tag:<12} [{suite}] {}  residual {:.3e} (tol {:.1e})",
            r.name, r.residual, r.tolerance
        ));
    }
    let exit_code = if !fails.is_empty() {
        EXIT_FAIL
    } else if !inconclusive.is_empty() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    log.push(format!(
        "{} relations: {passes} pass, {} expected fail, {} fail, {} inconclusive",
        results.len(),
        xfails.len(),
        fails.len(),
        inconclusive.len()
    ));
    let meta = metadata(
        "verify",
        &cfg,
        json!({
            "suite": a.suite.label(),
            "summary": {"pass": passes, "expected_fail": xfails, "fail": fails, "inconclusive": inconclusive},
            "exit_code": exit_code,
        }),
    );
    let list: Vec<&RelationResult> = results.iter().map(|(_, r)| r).collect();
    let text = to_json_text(&json!({"metadata": meta, "results": list}))?;
    Ok(CommandOutput {
        text,
        exit_code,
        log,
        out: cfg.out,
    })
}

/// One `--amp` entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub family: Family,
    pub m: i32,
    pub ip: usize,
    pub iz: usize,
    pub value: Complex64,
}

impl Amplitude {
    /// `FAMILY:M:IP:IZ=RE[,IM]`; in the `+-` basis `+`/`-` stand for `tm`/`te`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = |why: &str| Error::Config(format!("amplitude {s:?}: {why}"));
        let (lhs, rhs) = s
            .split_once('=')
            .ok_or_else(|| err("expected FAMILY:M:IP:IZ=RE[,IM]"))?;
        let parts: Vec<&str> = lhs.split(':').collect();
        if parts.len() != 4 {
            return Err(err("expected FAMILY:M:IP:IZ"));
        }
        let family = match parts[0].trim() {
            "+" | "plus" => Family::TM,
            "-" | "minus" => Family::TE,
            f => parse_family("family", f).map_err(|_| err("family must be tm, te, + or -"))?,
        };
        let m = parts[1].trim().parse().map_err(|_| err("bad m"))?;
        let ip = parts[2]
            .trim()
            .parse()
            .map_err(|_| err("bad k_perp node index"))?;
        let iz = parts[3]
            .trim()
            .parse()
            .map_err(|_| err("bad k_z node index"))?;
        let (re, im) = match rhs.split_once(',') {
            Some((r, i)) => (parse_f64("amp", r)?, parse_f64("amp", i)?),
            None => (parse_f64("amp", rhs)?, 0.0),
        };
        Ok(Self {
            family,
            m,
            ip,
            iz,
            value: Complex64::new(re, im),
        })
    }
}

/// `expect`: coherent-state expectations. Each `--amp` gives the continuum
/// amplitude on a node; the discrete mode amplitude is that times `sqrt(w)`.
pub fn cmd_expect(a: &ExpectArgs) -> Result<CommandOutput> {
    let mut cfg = load(&a.common)?;
    apply_lattice(&mut cfg, &a.lattice)?;
    let u = units(&cfg)?;
    let (l, space) = lattice(&cfg)?;
    let amps = a
        .amps
        .iter()
        .map(|s| Amplitude::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let mut alpha = CoherentAmplitude::vacuum(&space);
    for am in &amps {
        let j = l.index(am.family, am.m, am.ip, am.iz).ok_or_else(|| {
            Error::Config(format!(
                "no mode {}:m={}:kp{}:kz{} on the lattice (m {}..{}, {} k_perp and {} k_z nodes)",
                am.family.label(),
                am.m,
                am.ip,
                am.iz,
                l.m_range().0,
                l.m_range().1,
                l.k_perp_nodes().len(),
                l.k_z_nodes().len()
            ))
        })?;
        alpha.set(j, alpha.get(j) + am.value * l.weight(j).sqrt())?;
    }
    let (alpha, basis_label) = match a.basis {
        BasisArg::Natural => (alpha, "natural"),
        BasisArg::Pm => {
            let map: BasisMap = make_pm_map(&space)?;
            (map.pull_back(&alpha)?, "pm")
        }
    };

    let with_zp = ObservableSet::build(&space, &u, ZeroPoint::Include)?;
    let mut rows: Vec<(String, Complex64, f64)> = Vec::new();
    let mut push = |name: String, op: &QuadraticOperator| -> Result<()> {
        let zp = op.scalar();
        let v = coherent_expectation(op, &alpha)? - zp;
        rows.push((name, v, zp.re));
        Ok(())
    };
    push("E".into(), &with_zp.energy)?;
    push("N".into(), &with_zp.number)?;
    for (label, c) in [("P", &with_zp.p), ("L", &with_zp.l), ("S", &with_zp.s)] {
        let cart = c.cartesian()?;
        for (i, op) in cart.iter().enumerate() {
            push(format!("{label}{}", i + 1), op)?;
        }
    }
    // Stokes operators of every node that carries amplitude.
    let mut nodes: Vec<(i32, usize, usize)> = alpha
        .support()
        .map(|(j, _)| {
            let s = l.site(j);
            (s.m, s.ip, s.iz)
        })
        .collect();
    nodes.sort();
    nodes.dedup();
    for (m, ip, iz) in nodes {
        let st = build_stokes(&space, ip, iz, m)?;
        for (i, op) in st.components().into_iter().enumerate() {
            push(format!("stokes:m={m}:kp{ip}:kz{iz}:s{i}"), op)?;
        }
    }

    let format = a.format.or(cfg.format).unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => {
            let mut s = String::from("observable,re,im,zero_point\n");
            for (n, v, z) in &rows {
                s.push_str(&format!(
                    "{n},{},{},{}\n",
                    fmt_num(v.re),
                    fmt_num(v.im),
                    fmt_num(*z)
                ));
            }
            s
        }
        Format::Json => {
            let meta = metadata(
                "expect",
                &cfg,
                json!({"basis": basis_label, "amplitudes": a.amps}),
            );
            let list: Vec<Value> = rows
                .iter()
                .map(|(n, v, z)| json!({"observable": n, "re": v.re, "im": v.im, "zero_point": z}))
                .collect();
            to_json_text(&json!({"metadata": meta, "results": list}))?
        }
    };
    Ok(CommandOutput {
        text,
        exit_code: EXIT_OK,
        log: vec![format!("{} observables", rows.len())],
        out: cfg.out,
    })
}

/// `expand`: `u, v` and the derived coefficients for `j <= j_max`, with the
/// running reconstruction error of `N` at one sample point.
pub fn cmd_expand(a: &ExpandArgs) -> Result<CommandOutput> {
    let cfg = load(&a.common)?;
    let s = &cfg.spherical;
    let k = ModeIndex::new(
        Family::TM,
        a.m.unwrap_or(s.m),
        a.kperp.unwrap_or(s.k_perp),
        a.kz.unwrap_or(s.k_z),
    )
    .map_err(|e| Error::Config(e.to_string()))?;
    let j_max = a.j_max.unwrap_or(s.j_max);
    if j_max < k.m.unsigned_abs().max(1) {
        return Err(Error::Config(format!(
            "j_max = {j_max} is below max(1, |m|) = {}",
            k.m.unsigned_abs().max(1)
        )));
    }
    let rho = a.rho.unwrap_or(0.5 / k.k_perp);
    if !(rho >= 0.0 && rho.is_finite()) || !a.phi.is_finite() || !a.z.is_finite() {
        return Err(Error::Config(
            "sample point must be finite with rho >= 0".into(),
        ));
    }
    let sample = SphericalSample::new(rho, a.phi, a.z);
    let rows = expansion_table(&k, j_max, &sample, cfg.c)?;
    let r = rho.hypot(a.z);
    let kr = k.k() * r;
    let mut log = vec![format!(
        "k r = {kr:.4} at the sample point; {} rows with m_j = {}",
        rows.len(),
        k.m
    )];
    if let Some(row) = rows
        .iter()
        .find(|row| row.reconstruction_error < cfg.tol.reconstruction)
    {
        log.push(format!(
            "reconstruction error below {:.0e} from j = {}",
            cfg.tol.reconstruction, row.j
        ));
    }
    let format = a.format.or(cfg.format).unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => {
            let mut out = String::from("j,m_j,u_re,u_im,v_re,v_im,alpha_re,alpha_im,beta_re,beta_im,reconstruction_error\n");
            for row in &rows {
                let nums = [row.u, row.v, row.alpha, row.beta]
                    .iter()
                    .flat_map(|c| [c.re, c.im])
                    .map(fmt_num)
                    .collect::<Vec<_>>();
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    row.j,
                    row.m_j,
                    nums.join(","),
                    fmt_num(row.reconstruction_error)
                ));
            }
            out
        }
        Format::Json => {
            let meta = metadata(
                "expand",
                &cfg,
                json!({"mode": {"m": k.m, "kperp": k.k_perp, "kz": k.k_z}, "j_max": j_max, "sample": {"rho": rho, "phi": a.phi, "z": a.z}}),
            );
            let list: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({"j": row.j, "m_j": row.m_j, "u": [row.u.re, row.u.im], "v": [row.v.re, row.v.im],
                           "alpha": [row.alpha.re, row.alpha.im], "beta": [row.beta.re, row.beta.im],
                           "reconstruction_error": row.reconstruction_error})
                })
                .collect();
            to_json_text(&json!({"metadata": meta, "results": list}))?
        }
    };
    Ok(CommandOutput {
        text,
        exit_code: EXIT_OK,
        log,
        out: cfg.out,
    })
}
