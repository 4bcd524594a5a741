use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CoherentAmplitude, ModeSpace, QuadraticOperator};
use crate::error::{Error, Result};

/// Largest condition number accepted as invertible.
const MAX_CONDITION: f64 = 1e13;

/// New ladder operators `b' = T b`.
#[derive(Debug, Clone)]
pub struct BasisMap {
    space: Arc<ModeSpace>,
    t: DMatrix<Complex64>,
    t_inv: DMatrix<Complex64>,
    unitary: bool,
    condition: f64,
    labels: Vec<String>,
}

impl BasisMap {
    /// Validates invertibility; `labels` names each new index (defaults to
    /// the space labels).
    pub fn new(
        space: &Arc<ModeSpace>,
        t: DMatrix<Complex64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let d = space.dim();
        if t.nrows() != d || t.ncols() != d {
            return Err(Error::Construction(format!(
                "basis map is {}x{}, space has dimension {d}",
                t.nrows(),
                t.ncols()
            )));
        }
        let sv = t.clone().svd(false, false).singular_values;
        let (smax, smin) = sv
            .iter()
            .fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
        let condition = if smin > 0.0 {
            smax / smin
        } else {
            f64::INFINITY
        };
        if !(condition.is_finite() && condition < MAX_CONDITION) {
            return Err(Error::Singular(condition));
        }
        let t_inv = t.clone().try_inverse().ok_or(Error::Singular(condition))?;
        let gram = t.adjoint() * &t;
        let unitary = (0..d).all(|r| {
            (0..d).all(|c| {
                let want = if r == c { 1.0 } else { 0.0 };
                (gram[(r, c)] - Complex64::new(want, 0.0)).norm() <= 1e-12
            })
        });
        let labels = match labels {
            Some(l) if l.len() == d => l,
            Some(l) => {
                return Err(Error::Construction(format!(
                    "{} labels for dimension {d}",
                    l.len()
                )))
            }
            None => (0..d).map(|j| space.label(j)).collect(),
        };
        Ok(Self {
            space: Arc::clone(space),
            t,
            t_inv,
            unitary,
            condition,
            labels,
        })
    }

    pub fn identity(space: &Arc<ModeSpace>) -> Self {
        Self::new(space, DMatrix::identity(space.dim(), space.dim()), None)
            .expect("identity is invertible")
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.t
    }

    pub fn inverse(&self) -> &DMatrix<Complex64> {
        &self.t_inv
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    /// Meaning of new index `j`.
    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    /// Amplitudes in the new basis: `alpha' = T alpha`.
    pub fn push_forward(&self, alpha: &CoherentAmplitude) -> Result<CoherentAmplitude> {
        self.map_amplitude(alpha, &self.t)
    }

    /// Amplitudes in the old basis from new-basis ones: `alpha = T^-1 alpha'`.
    pub fn pull_back(&self, alpha_new: &CoherentAmplitude) -> Result<CoherentAmplitude> {
        self.map_amplitude(alpha_new, &self.t_inv)
    }

    fn map_amplitude(
        &self,
        alpha: &CoherentAmplitude,
        m: &DMatrix<Complex64>,
    ) -> Result<CoherentAmplitude> {
        let d = self.space.dim();
        let mut out = CoherentAmplitude::vacuum(&self.space);
        for r in 0..d {
            let v: Complex64 = alpha.support().map(|(c, a)| m[(r, c)] * a).sum();
            if v.norm() >= super::DROP_BELOW {
                out.set(r, v)?;
            }
        }
        Ok(out)
    }
}

/// Rewrites an operator in the ladder operators of `map`.
///
/// With `b = T^-1 b'` the coefficient matrix becomes `(T^-1)^dagger X T^-1`
/// and the scalar part is unchanged.
pub fn apply_basis(op: &QuadraticOperator, map: &BasisMap) -> Result<QuadraticOperator> {
    if !(Arc::ptr_eq(op.space(), map.space()) || **op.space() == **map.space()) {
        return Err(Error::SpaceMismatch);
    }
    let ti = map.inverse();
    let x = ti.adjoint() * op.to_dense() * ti;
    QuadraticOperator::from_dense(op.space(), &x, op.scalar())
}
