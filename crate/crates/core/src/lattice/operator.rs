use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ModeSpace;
use crate::error::{Error, Result};

/// Entries with modulus below this are not stored.
pub const DROP_BELOW: f64 = 1e-15;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum_jk X_jk b_j^dagger b_k + s` over a mode space.
#[derive(Debug, Clone)]
pub struct QuadraticOperator {
    space: Arc<ModeSpace>,
    x: BTreeMap<(usize, usize), Complex64>,
    s: Complex64,
}

fn same_space(a: &Arc<ModeSpace>, b: &Arc<ModeSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl QuadraticOperator {
    pub fn zero(space: &Arc<ModeSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            x: BTreeMap::new(),
            s: ZERO,
        }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions add up.
    pub fn from_entries(
        space: &Arc<ModeSpace>,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        let mut op = Self::zero(space);
        for (r, c, v) in entries {
            op.add_entry(r, c, v)?;
        }
        op.prune();
        Ok(op)
    }

    /// Dense coefficient matrix to operator, dropping tiny entries.
    pub fn from_dense(
        space: &Arc<ModeSpace>,
        x: &DMatrix<Complex64>,
        s: Complex64,
    ) -> Result<Self> {
        let d = space.dim();
        if x.nrows() != d || x.ncols() != d {
            return Err(Error::Construction(format!(
                "dense matrix {}x{} on a space of dimension {d}",
                x.nrows(),
                x.ncols()
            )));
        }
        let mut op = Self::zero(space);
        for r in 0..d {
            for c in 0..d {
                let v = x[(r, c)];
                if v.norm() >= DROP_BELOW {
                    op.x.insert((r, c), v);
                }
            }
        }
        op.s = s;
        Ok(op)
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn scalar(&self) -> Complex64 {
        self.s
    }

    pub fn with_scalar(mut self, s: Complex64) -> Self {
        self.s = s;
        self
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Complex64) -> Result<()> {
        let d = self.dim();
        if r >= d || c >= d {
            return Err(Error::Construction(format!(
                "entry ({r}, {c}) outside dimension {d}"
            )));
        }
        *self.x.entry((r, c)).or_insert(ZERO) += v;
        Ok(())
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.x.get(&(r, c)).copied().unwrap_or(ZERO)
    }

    /// Stored entries in `(row, col)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.x.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.x.len()
    }

    fn prune(&mut self) {
        self.x.retain(|_, v| v.norm() >= DROP_BELOW);
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&k, &v) in &other.x {
            *out.x.entry(k).or_insert(ZERO) += v;
        }
        out.s += other.s;
        out.prune();
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = Self {
            space: Arc::clone(&self.space),
            x: self.x.iter().map(|(&k, &v)| (k, v * a)).collect(),
            s: self.s * a,
        };
        out.prune();
        out
    }

    pub fn scale_real(&self, a: f64) -> Self {
        self.scale(Complex64::new(a, 0.0))
    }

    /// `sum_k c_k O_k`; all operators must share a space.
    pub fn linear_combination(
        space: &Arc<ModeSpace>,
        terms: &[(Complex64, &Self)],
    ) -> Result<Self> {
        let mut out = Self::zero(space);
        for (c, op) in terms {
            out = out.plus(&op.scale(*c))?;
        }
        Ok(out)
    }

    /// Hermitian adjoint: `X -> X^dagger`, `s -> conj(s)`.
    pub fn adjoint(&self) -> Self {
        Self {
            space: Arc::clone(&self.space),
            x: self
                .x
                .iter()
                .map(|(&(r, c), &v)| ((c, r), v.conj()))
                .collect(),
            s: self.s.conj(),
        }
    }

    /// Matrix part only (scalar dropped).
    pub fn matrix_part(&self) -> Self {
        Self {
            space: Arc::clone(&self.space),
            x: self.x.clone(),
            s: ZERO,
        }
    }

    /// Sparse matrix product of the coefficient matrices; scalar zero.
    pub fn matrix_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut rows: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (&(r, c), &v) in &other.x {
            rows.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zero(&self.space);
        for (&(i, k), &a) in &self.x {
            if let Some(row) = rows.get(&k) {
                for &(j, b) in row {
                    *out.x.entry((i, j)).or_insert(ZERO) += a * b;
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Largest modulus over matrix entries and the scalar.
    pub fn max_abs(&self) -> f64 {
        self.x
            .values()
            .map(|v| v.norm())
            .fold(self.s.norm(), f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.minus(other)?.max_abs())
    }

    /// `X = X^dagger` and `s` real, within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.s.im.abs() <= tol
            && self
                .x
                .iter()
                .all(|(&(r, c), &v)| (v - self.get(c, r).conj()).norm() <= tol)
            && self
                .adjoint()
                .x
                .iter()
                .all(|(&(r, c), &v)| (v - self.get(r, c)).norm() <= tol)
    }

    /// Whether all stored entries with modulus above `tol` are diagonal.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.x.iter().all(|(&(r, c), v)| r == c || v.norm() <= tol)
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        self.x
            .iter()
            .filter(|(&(r, c), _)| r != c)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, ZERO);
        for (&(r, c), &v) in &self.x {
            m[(r, c)] = v;
        }
        m
    }

    /// Keeps only entries whose row and column both satisfy `keep`.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            space: Arc::clone(&self.space),
            x: self
                .x
                .iter()
                .filter(|(&(r, c), _)| keep(r) && keep(c))
                .map(|(&k, &v)| (k, v))
                .collect(),
            s: self.s,
        }
    }

    /// Plain-text dump: one `row col re im` line per entry in `(row, col)`
    /// order, then `scalar re im`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (&(r, c), v) in &self.x {
            let _ = writeln!(out, "{r} {c} {:.16e} {:.16e}", v.re, v.im);
        }
        let _ = writeln!(out, "scalar {:.16e} {:.16e}", self.s.re, self.s.im);
        out
    }

    /// Dump with symbolic index labels, for reports.
    pub fn dump_labeled(&self) -> String {
        let mut out = String::new();
        for (&(r, c), v) in &self.x {
            let _ = writeln!(
                out,
                "{} <- {}: {:.16e} {:+.16e}i",
                self.space.label(r),
                self.space.label(c),
                v.re,
                v.im
            );
        }
        let _ = writeln!(out, "scalar {:.16e} {:+.16e}i", self.s.re, self.s.im);
        out
    }
}

/// `[A, B] = sum (XY - YX)_jk b_j^dagger b_k`; scalar parts drop out.
pub fn commutator(a: &QuadraticOperator, b: &QuadraticOperator) -> Result<QuadraticOperator> {
    a.matrix_product(b)?.minus(&b.matrix_product(a)?)
}

/// Coherent-state amplitudes keyed by mode index.
#[derive(Debug, Clone)]
pub struct CoherentAmplitude {
    space: Arc<ModeSpace>,
    amps: BTreeMap<usize, Complex64>,
}

impl CoherentAmplitude {
    pub fn vacuum(space: &Arc<ModeSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            amps: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, j: usize, alpha: Complex64) -> Result<()> {
        if j >= self.space.dim() {
            return Err(Error::Construction(format!(
                "amplitude index {j} outside dimension {}",
                self.space.dim()
            )));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::Construction(format!(
                "amplitude {alpha} is not finite"
            )));
        }
        if alpha == ZERO {
            self.amps.remove(&j);
        } else {
            self.amps.insert(j, alpha);
        }
        Ok(())
    }

    pub fn with(mut self, j: usize, alpha: Complex64) -> Result<Self> {
        self.set(j, alpha)?;
        Ok(self)
    }

    pub fn get(&self, j: usize) -> Complex64 {
        self.amps.get(&j).copied().unwrap_or(ZERO)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.amps.iter().map(|(&j, &a)| (j, a))
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn total_number(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }
}

/// `<alpha| O |alpha> = conj(alpha) X alpha + s`.
pub fn coherent_expectation(
    op: &QuadraticOperator,
    alpha: &CoherentAmplitude,
) -> Result<Complex64> {
    if !same_space(op.space(), alpha.space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut acc = op.scalar();
    for (&(r, c), &v) in &op.x {
        let (ar, ac) = (alpha.get(r), alpha.get(c));
        if ar != ZERO && ac != ZERO {
            acc += ar.conj() * v * ac;
        }
    }
    Ok(acc)
}
