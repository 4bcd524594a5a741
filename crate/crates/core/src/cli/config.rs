//! Run configuration: defaults, a flat `key = value` file, then flags.
//!
//! ```text
//! # comment
//! units.hbar = 1
//! lattice.m_range = -4..4
//! lattice.kperp = 0.5, 1.0, 1.5      # value or value:weight
//! quadrature.extent = 60
//! tol.algebraic = 1e-12
//! verify.expected_fail = [S+,L+] = -hbar S3; ...
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::Family;
use crate::verify::{Tolerances, DEFAULT_EXPECTED_FAIL};

/// Environment variable naming a default configuration file.
pub const CONFIG_ENV: &str = "QBESSEL_CONFIG";

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketConfig {
    pub family: Family,
    pub m: i32,
    pub k_perp: f64,
    pub sigma_perp: f64,
    pub k_z: f64,
    pub sigma_z: f64,
    /// Domain size in units of the envelope widths.
    pub extent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphericalConfig {
    pub m: i32,
    pub k_perp: f64,
    pub k_z: f64,
    pub j_max: u32,
}

/// Everything a command needs besides its own flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub hbar: f64,
    pub c: f64,
    pub m_range: (i32, i32),
    /// `(value, weight)` nodes.
    pub k_perp: Vec<(f64, f64)>,
    pub k_z: Vec<(f64, f64)>,
    pub quadrature: PacketConfig,
    pub spherical: SphericalConfig,
    pub tol: Tolerances,
    pub expected_fail: Vec<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            m_range: (-4, 4),
            k_perp: vec![(0.5, 1.0), (1.0, 1.0), (1.5, 1.0)],
            k_z: vec![(1.0, 1.0), (2.0, 1.0)],
            quadrature: PacketConfig {
                family: Family::TM,
                m: 2,
                k_perp: 1.0,
                sigma_perp: 0.1,
                k_z: 1.5,
                sigma_z: 0.15,
                extent: 60.0,
            },
            spherical: SphericalConfig {
                m: 1,
                k_perp: 1.0,
                k_z: 1.5,
                j_max: 60,
            },
            tol: Tolerances::default(),
            expected_fail: DEFAULT_EXPECTED_FAIL
                .iter()
                .map(|s| s.to_string())
                .collect(),
            out: None,
            format: None,
        }
    }
}

fn bad(key: &str, value: &str, what: &str) -> Error {
    Error::Config(format!("{key} = {value:?}: {what}"))
}

pub fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| bad(key, v, "expected a number"))?;
    if !x.is_finite() {
        return Err(bad(key, v, "must be finite"));
    }
    Ok(x)
}

fn parse_positive(key: &str, v: &str) -> Result<f64> {
    let x = parse_f64(key, v)?;
    if x <= 0.0 {
        return Err(bad(key, v, "must be positive"));
    }
    Ok(x)
}

fn parse_i32(key: &str, v: &str) -> Result<i32> {
    v.trim()
        .parse()
        .map_err(|_| bad(key, v, "expected an integer"))
}

/// `lo..hi`, inclusive.
pub fn parse_range(key: &str, v: &str) -> Result<(i32, i32)> {
    let (a, b) = v
        .split_once("..")
        .ok_or_else(|| bad(key, v, "expected lo..hi"))?;
    let (lo, hi) = (parse_i32(key, a)?, parse_i32(key, b)?);
    if lo > hi {
        return Err(bad(key, v, "empty range"));
    }
    Ok((lo, hi))
}

/// Comma-separated `value` or `value:weight` (weight 1 by default).
pub fn parse_nodes(key: &str, v: &str) -> Result<Vec<(f64, f64)>> {
    let nodes = v
        .split(',')
        .map(|item| match item.split_once(':') {
            Some((a, w)) => Ok((parse_f64(key, a)?, parse_positive(key, w)?)),
            None => Ok((parse_f64(key, item)?, 1.0)),
        })
        .collect::<Result<Vec<_>>>()?;
    if nodes.is_empty() {
        return Err(bad(key, v, "no nodes"));
    }
    Ok(nodes)
}

pub fn parse_family(key: &str, v: &str) -> Result<Family> {
    match v.trim().to_ascii_lowercase().as_str() {
        "tm" => Ok(Family::TM),
        "te" => Ok(Family::TE),
        _ => Err(bad(key, v, "expected tm or te")),
    }
}

impl RunConfig {
    /// Sets one key; unknown keys are errors.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let q = &mut self.quadrature;
        let s = &mut self.spherical;
        let t = &mut self.tol;
        match key {
            "units.hbar" => self.hbar = parse_positive(key, v)?,
            "units.c" => self.c = parse_positive(key, v)?,
            "lattice.m_range" => self.m_range = parse_range(key, v)?,
            "lattice.kperp" => self.k_perp = parse_nodes(key, v)?,
            "lattice.kz" => self.k_z = parse_nodes(key, v)?,
            "quadrature.family" => q.family = parse_family(key, v)?,
            "quadrature.m" => q.m = parse_i32(key, v)?,
            "quadrature.kperp" => q.k_perp = parse_positive(key, v)?,
            "quadrature.sigma_perp" => q.sigma_perp = parse_positive(key, v)?,
            "quadrature.kz" => q.k_z = parse_f64(key, v)?,
            "quadrature.sigma_z" => q.sigma_z = parse_positive(key, v)?,
            "quadrature.extent" => q.extent = parse_positive(key, v)?,
            "spherical.m" => s.m = parse_i32(key, v)?,
            "spherical.kperp" => s.k_perp = parse_positive(key, v)?,
            "spherical.kz" => s.k_z = parse_f64(key, v)?,
            "spherical.j_max" => {
                s.j_max = v
                    .trim()
                    .parse()
                    .map_err(|_| bad(key, v, "expected a non-negative integer"))?
            }
            "tol.algebraic" => t.algebraic = parse_positive(key, v)?,
            "tol.su2" => t.su2 = parse_positive(key, v)?,
            "tol.quadrature" => t.quadrature = parse_positive(key, v)?,
            "tol.zero" => t.zero = parse_positive(key, v)?,
            "tol.closed_form" => t.closed_form = parse_positive(key, v)?,
            "tol.energy" => t.energy = parse_positive(key, v)?,
            "tol.reconstruction" => t.reconstruction = parse_positive(key, v)?,
            "tol.slope" => t.slope = parse_positive(key, v)?,
            "verify.expected_fail" => {
                self.expected_fail = v
                    .split(';')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(String::from)
                    .collect()
            }
            "output.path" => self.out = Some(PathBuf::from(v.trim())),
            "output.format" => {
                self.format = Some(match v.trim() {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(bad(key, v, "expected csv or json")),
                })
            }
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("{origin}:{}: expected key = value", n + 1))
            })?;
            self.set(k.trim(), v.trim())
                .map_err(|e| Error::Config(format!("{origin}:{}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut c = Self::default();
        c.apply_text(&text, &path.display().to_string())?;
        Ok(c)
    }

    /// Defaults, then `explicit` or else the file named by [`CONFIG_ENV`].
    pub fn load(explicit: Option<&Path>) -> Result<Self> {
        match explicit {
            Some(p) => Self::from_file(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    /// The configuration as `key = value` text that [`Self::apply_text`] reads back.
    pub fn to_text(&self) -> String {
        let nodes = |v: &[(f64, f64)]| {
            v.iter()
                .map(|(a, w)| format!("{a:?}:{w:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let q = &self.quadrature;
        let s = &self.spherical;
        let t = &self.tol;
        let mut o = String::new();
        let _ = writeln!(o, "units.hbar = {:?}\nunits.c = {:?}", self.hbar, self.c);
        let _ = writeln!(
            o,
            "lattice.m_range = {}..{}",
            self.m_range.0, self.m_range.1
        );
        let _ = writeln!(
            o,
            "lattice.kperp = {}\nlattice.kz = {}",
            nodes(&self.k_perp),
            nodes(&self.k_z)
        );
        let _ = writeln!(
            o,
            "quadrature.family = {}\nquadrature.m = {}",
            q.family.label(),
            q.m
        );
        let _ = writeln!(
            o,
            "quadrature.kperp = {:?}\nquadrature.sigma_perp = {:?}",
            q.k_perp, q.sigma_perp
        );
        let _ = writeln!(
            o,
            "quadrature.kz = {:?}\nquadrature.sigma_z = {:?}",
            q.k_z, q.sigma_z
        );
        let _ = writeln!(o, "quadrature.extent = {:?}", q.extent);
        let _ = writeln!(
            o,
            "spherical.m = {}\nspherical.kperp = {:?}\nspherical.kz = {:?}",
            s.m, s.k_perp, s.k_z
        );
        let _ = writeln!(o, "spherical.j_max = {}", s.j_max);
        for (k, v) in [
            ("algebraic", t.algebraic),
            ("su2", t.su2),
            ("quadrature", t.quadrature),
            ("zero", t.zero),
            ("closed_form", t.closed_form),
            ("energy", t.energy),
            ("reconstruction", t.reconstruction),
            ("slope", t.slope),
        ] {
            let _ = writeln!(o, "tol.{k} = {v:?}");
        }
        let _ = writeln!(
            o,
            "verify.expected_fail = {}",
            self.expected_fail.join("; ")
        );
        o
    }
}
