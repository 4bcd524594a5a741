//! Verification suites.
//!
//! Each suite evaluates a list of claimed relations numerically and returns
//! one [`RelationResult`] per relation, sorted by name. A relation whose
//! stated form disagrees with the computation is reported as failing with
//! its residual; nothing is adjusted to make it pass.

mod basis;
mod commutators;
mod quadrature;
mod spherical;

use serde::Serialize;

pub use basis::{basis_suite, paraxial_scan, ParaxialPoint};
pub use commutators::commutator_suite;
pub use quadrature::{
    hankel_overlap_check, quadrature_suite, Packet, QuadratureDomain, QuadratureEngine, Resolution,
    WavepacketSpec,
};
pub use spherical::{
    default_samples, expansion_coefficients, expansion_table, printed_uv, reconstruct,
    spherical_suite, ExpansionRow, SphericalSample, SphericalWaves,
};

/// Relations known to fail as stated; a failure of one of these does not
/// count against a run.
pub const DEFAULT_EXPECTED_FAIL: &[&str] = &[
    "[S+,L+] = -hbar S3",
    "[S+,L-] printed, single m",
    "[S+,L-] printed, summed over m",
    "R/L basis: S3 = hbar (1+(omega/c kz)^2)/2 (N_R - N_L)",
    "R/L basis: number cross term R+L = -1/4 (1+kappa^2)(1-1/kappa^2)",
    "scalar product N.N' = (2pi)^2 omega^2/(c^2 kperp kz^2) (no conjugation)",
    "L+ element M'.(L+ M) = 0 (kz' = -kz, m' = -(m+1))",
    "printed pairing: N = sum u (A^E + A^M), M = sum v (A^E - A^M)",
];

/// How a result counts in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    ExpectedFail,
    Fail,
    Inconclusive,
}

/// Outcome class of one relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The numerics did not converge well enough to decide.
    Inconclusive,
}

/// One checked relation.
#[derive(Debug, Clone, Serialize)]
pub struct RelationResult {
    pub name: String,
    /// Max-abs residual (relative for quadrature relations).
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: String,
    #[serde(skip)]
    pub status: Status,
    /// Convergence estimate from two resolutions, when there is one.
    #[serde(skip)]
    pub error_estimate: Option<f64>,
    /// Residual operator in normal form for failed algebraic relations.
    #[serde(skip)]
    pub residual_dump: Option<String>,
}

impl RelationResult {
    pub fn check(
        name: impl Into<String>,
        residual: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        let pass = residual <= tolerance;
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass,
            notes: notes.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            error_estimate: None,
            residual_dump: None,
        }
    }

    /// Pass needs both the residual and the convergence estimate below tolerance;
    /// an estimate above tolerance makes the result inconclusive.
    pub fn converged(
        name: impl Into<String>,
        residual: f64,
        estimate: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        let mut r = Self::check(name, residual, tolerance, notes);
        r.error_estimate = Some(estimate);
        if !(estimate <= tolerance) {
            r.pass = false;
            r.status = Status::Inconclusive;
            r.notes = format!(
                "inconclusive: convergence estimate {estimate:.3e} exceeds tolerance; {}",
                r.notes
            );
        }
        r
    }

    pub fn outcome<S: AsRef<str>>(&self, expected_fail: &[S]) -> Outcome {
        match self.status {
            Status::Pass => Outcome::Pass,
            Status::Inconclusive => Outcome::Inconclusive,
            Status::Fail if expected_fail.iter().any(|e| e.as_ref() == self.name) => {
                Outcome::ExpectedFail
            }
            Status::Fail => Outcome::Fail,
        }
    }

    pub fn with_dump(mut self, dump: String) -> Self {
        self.residual_dump = Some(dump);
        self
    }
}

/// Tolerances used by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Lattice commutator and basis relations.
    pub algebraic: f64,
    /// Stokes and spherical su(2) algebra.
    pub su2: f64,
    /// Relative error of quadrature against analytic envelope integrals.
    pub quadrature: f64,
    /// Integrals that must vanish, relative to the Cauchy-Schwarz bound.
    pub zero: f64,
    /// Closed-form checks (angular spectrum, finite-radius Bessel overlaps).
    pub closed_form: f64,
    /// Energy per photon relative to the centre frequency.
    pub energy: f64,
    /// Relative error of the spherical-wave reconstruction.
    pub reconstruction: f64,
    /// Allowed deviation of the paraxial log-log slope from 2.
    pub slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-12,
            su2: 1e-13,
            quadrature: 1e-3,
            zero: 1e-6,
            closed_form: 1e-10,
            energy: 1e-2,
            reconstruction: 1e-3,
            slope: 0.05,
        }
    }
}

pub(crate) fn sort_results(mut v: Vec<RelationResult>) -> Vec<RelationResult> {
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_classes() {
        let xf = ["known"];
        assert_eq!(
            RelationResult::check("a", 1e-3, 1e-2, "").outcome(&xf),
            Outcome::Pass
        );
        assert_eq!(
            RelationResult::check("a", 1e-1, 1e-2, "").outcome(&xf),
            Outcome::Fail
        );
        assert_eq!(
            RelationResult::check("known", 1e-1, 1e-2, "").outcome(&xf),
            Outcome::ExpectedFail
        );
        // small residual but unconverged
        let r = RelationResult::converged("a", 1e-4, 5e-2, 1e-2, "");
        assert!(!r.pass);
        assert_eq!(r.outcome(&xf), Outcome::Inconclusive);
        assert!(r.notes.starts_with("inconclusive"));
        assert_eq!(
            RelationResult::converged("a", 1e-4, f64::NAN, 1e-2, "").status,
            Status::Inconclusive
        );
        assert_eq!(
            RelationResult::converged("a", 1e-4, 1e-5, 1e-2, "").outcome(&xf),
            Outcome::Pass
        );
    }
}
