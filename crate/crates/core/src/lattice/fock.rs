//! Brute-force realization on a truncated Fock space.
//!
//! Each mode keeps occupations `0..=n_max`; states are indexed in mixed
//! radix with mode 0 fastest. A number-conserving operator never leaves the
//! sector of total photon number `N`, and inside the sector `N <= n_max`
//! the truncation is never felt, so products and commutators of realized
//! operators are exact there.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{CoherentAmplitude, ModeSpace, QuadraticOperator};
use crate::error::{Error, Result};

/// Upper bound on `(n_max + 1)^D`.
pub const FOCK_DIM_BOUND: usize = 20_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sparse square matrix on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    rows: Vec<BTreeMap<usize, Complex64>>,
}

impl FockMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            rows: vec![BTreeMap::new(); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.rows[i].insert(i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.rows[r].get(&c).copied().unwrap_or(ZERO)
    }

    fn add_to(&mut self, r: usize, c: usize, v: Complex64) {
        *self.rows[r].entry(c).or_insert(ZERO) += v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.dim());
        for (r, row) in self.rows.iter().enumerate() {
            for (&k, &a) in row {
                for (&c, &b) in &other.rows[k] {
                    out.add_to(r, c, a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, row) in other.rows.iter().enumerate() {
            for (&c, &v) in row {
                out.add_to(r, c, v);
            }
        }
        out
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(&c, &v)| (c, v * a)).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(&c, &a)| a * v[c]).sum())
            .collect()
    }

    /// Largest `|A_rc - B_rc|` over rows and columns with `keep` set.
    pub fn max_abs_diff_on(&self, other: &Self, keep: &[bool]) -> f64 {
        let mut worst = 0.0f64;
        for r in (0..self.dim()).filter(|&r| keep[r]) {
            for (&c, &v) in &self.rows[r] {
                if keep[c] {
                    worst = worst.max((v - other.get(r, c)).norm());
                }
            }
            for (&c, &v) in &other.rows[r] {
                if keep[c] && !self.rows[r].contains_key(&c) {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }
}

/// Truncated Fock space over a mode space.
#[derive(Debug, Clone)]
pub struct FockOracle {
    space: Arc<ModeSpace>,
    modes: usize,
    n_max: usize,
    dim: usize,
}

impl FockOracle {
    pub fn new(space: &Arc<ModeSpace>, n_max: usize) -> Result<Self> {
        let modes = space.dim();
        let base = n_max + 1;
        let mut dim: usize = 1;
        for _ in 0..modes {
            dim = dim.saturating_mul(base);
            if dim > FOCK_DIM_BOUND {
                return Err(Error::DimensionBound {
                    dim,
                    bound: FOCK_DIM_BOUND,
                });
            }
        }
        Ok(Self {
            space: Arc::clone(space),
            modes,
            n_max,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn occupations(&self, state: usize) -> Vec<usize> {
        let base = self.n_max + 1;
        let mut s = state;
        (0..self.modes)
            .map(|_| {
                let n = s % base;
                s /= base;
                n
            })
            .collect()
    }

    fn stride(&self, j: usize) -> usize {
        (self.n_max + 1).pow(j as u32)
    }

    fn occupation(&self, state: usize, j: usize) -> usize {
        (state / self.stride(j)) % (self.n_max + 1)
    }

    /// States whose total photon number is at most `n_max`.
    pub fn exact_sector(&self) -> Vec<bool> {
        (0..self.dim)
            .map(|s| self.occupations(s).iter().sum::<usize>() <= self.n_max)
            .collect()
    }

    pub fn annihilation(&self, j: usize) -> FockMatrix {
        let mut m = FockMatrix::zeros(self.dim);
        for s in 0..self.dim {
            let n = self.occupation(s, j);
            if n > 0 {
                m.add_to(
                    s - self.stride(j),
                    s,
                    Complex64::new((n as f64).sqrt(), 0.0),
                );
            }
        }
        m
    }

    pub fn creation(&self, j: usize) -> FockMatrix {
        let mut m = FockMatrix::zeros(self.dim);
        for s in 0..self.dim {
            let n = self.occupation(s, j);
            if n < self.n_max {
                m.add_to(
                    s + self.stride(j),
                    s,
                    Complex64::new(((n + 1) as f64).sqrt(), 0.0),
                );
            }
        }
        m
    }

    /// `sum X_jk b_j^dagger b_k + s` applied state by state.
    pub fn realize(&self, op: &QuadraticOperator) -> Result<FockMatrix> {
        if **op.space() != *self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut m = FockMatrix::identity(self.dim).scale(op.scalar());
        for s in 0..self.dim {
            for (j, k, v) in op.entries() {
                let nk = self.occupation(s, k);
                if nk == 0 {
                    continue;
                }
                let mid = s - self.stride(k);
                let nj = self.occupation(mid, j);
                if nj >= self.n_max {
                    continue;
                }
                let out = mid + self.stride(j);
                m.add_to(out, s, v * ((nk as f64) * (nj + 1) as f64).sqrt());
            }
        }
        Ok(m)
    }

    /// Normalized truncated product coherent state.
    pub fn coherent_vector(&self, alpha: &CoherentAmplitude) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(1.0, 0.0); self.dim];
        for (s, amp) in v.iter_mut().enumerate() {
            for (j, n) in self.occupations(s).into_iter().enumerate() {
                let a = alpha.get(j);
                let mut f = Complex64::new(1.0, 0.0);
                for k in 1..=n {
                    f *= a / (k as f64).sqrt();
                }
                *amp *= f;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter().map(|z| z / norm).collect()
    }

    pub fn expectation(&self, m: &FockMatrix, psi: &[Complex64]) -> Complex64 {
        let mv = m.apply(psi);
        psi.iter().zip(mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn coherent_expectation(
        &self,
        op: &QuadraticOperator,
        alpha: &CoherentAmplitude,
    ) -> Result<Complex64> {
        let m = self.realize(op)?;
        Ok(self.expectation(&m, &self.coherent_vector(alpha)))
    }
}
