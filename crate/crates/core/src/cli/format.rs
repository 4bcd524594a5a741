use std::str::FromStr;

use clap::ValueEnum;

use crate::error::{Error, Result};

/// What a field file holds besides the coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// `E` and `B`.
    Fields,
    /// The bare vectors `M` and `N`.
    Mn,
    /// Vector potential `A`.
    Potential,
}

/// Column names of a field file, Cartesian components only.
pub fn field_columns(q: Quantity) -> Vec<String> {
    let vecs: &[&str] = match q {
        Quantity::Fields => &["E", "B"],
        Quantity::Mn => &["M", "N"],
        Quantity::Potential => &["A"],
    };
    let mut cols: Vec<String> = ["x", "y", "z", "t"].iter().map(|s| s.to_string()).collect();
    for v in vecs {
        for c in ["x", "y", "z"] {
            cols.push(format!("{v}{c}_re"));
            cols.push(format!("{v}{c}_im"));
        }
    }
    cols
}

/// Seventeen significant digits, `1.2345678901234567e0`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Sampling plane `axis = value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plane {
    X(f64),
    Y(f64),
    Z(f64),
}

impl FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (axis, v) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("plane {s:?}: expected x=, y= or z=")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("plane {s:?}: bad coordinate")))?;
        if !v.is_finite() {
            return Err(Error::Config(format!(
                "plane {s:?}: coordinate must be finite"
            )));
        }
        match axis.trim() {
            "x" => Ok(Plane::X(v)),
            "y" => Ok(Plane::Y(v)),
            "z" => Ok(Plane::Z(v)),
            _ => Err(Error::Config(format!(
                "plane {s:?}: axis must be x, y or z"
            ))),
        }
    }
}

/// `N x M` points on `[-extent, extent]^2` in a plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub plane: Plane,
    pub n1: usize,
    pub n2: usize,
    pub extent: f64,
}

impl Grid {
    pub fn parse(plane: &str, grid: &str, extent: f64) -> Result<Self> {
        let plane: Plane = plane.parse()?;
        let (a, b) = grid
            .split_once('x')
            .ok_or_else(|| Error::Config(format!("grid {grid:?}: expected NxM")))?;
        let parse = |s: &str| -> Result<usize> {
            match s.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(Error::Config(format!(
                    "grid {grid:?}: counts must be positive integers"
                ))),
            }
        };
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::Config(format!("extent {extent} must be positive")));
        }
        Ok(Self {
            plane,
            n1: parse(a)?,
            n2: parse(b)?,
            extent,
        })
    }

    fn coord(&self, i: usize, n: usize) -> f64 {
        if n == 1 {
            0.0
        } else {
            -self.extent + 2.0 * self.extent * i as f64 / (n - 1) as f64
        }
    }

    /// Points of one row (fixed second in-plane index), first axis fastest.
    /// Rows in increasing order give z-major, then y, then x.
    pub fn row(&self, i2: usize) -> Vec<[f64; 3]> {
        let b = self.coord(i2, self.n2);
        (0..self.n1)
            .map(|i1| {
                let a = self.coord(i1, self.n1);
                match self.plane {
                    Plane::Z(z) => [a, b, z],
                    Plane::Y(y) => [a, y, b],
                    Plane::X(x) => [x, a, b],
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
