use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the default relative rank threshold.
pub const TOL_ENV_VAR: &str = "QSLOCC_TOL";

/// Every numerical threshold used by the classifier, in one place.
///
/// All thresholds are relative: `rank_rel` to the largest singular value,
/// `form_zero` to the cube of the generator scale, `root_cluster` and
/// `newton_residual` to unit-normalized polynomial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Singular values `<= rank_rel * sigma_1` count as zero.
    pub rank_rel: f64,
    /// Residual bound for accepting a group of polynomial roots as one
    /// multiple root: every derivative below the multiplicity must vanish
    /// at the group mean to this relative level.
    pub root_cluster: f64,
    pub tol_unitary: f64,
    pub tol_recon: f64,
    /// A determinant form whose coefficients are all below this (relative)
    /// is treated as identically zero.
    pub form_zero: f64,
    /// Acceptance residual for Newton-refined points on a locus.
    pub newton_residual: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rel: 1e-9,
            root_cluster: 1e-10,
            tol_unitary: 1e-11,
            tol_recon: 1e-11,
            form_zero: 1e-10,
            newton_residual: 1e-10,
        }
    }
}

impl TolerancePolicy {
    /// Default policy with `rank_rel` replaced, validated.
    pub fn with_rank_rel(rank_rel: f64) -> Result<Self> {
        let p = Self {
            rank_rel,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    /// Default policy, honouring `QSLOCC_TOL` when it is set to a valid value.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV_VAR) {
            Ok(v) => {
                let r: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidTolerance(format!("{TOL_ENV_VAR}={v}")))?;
                Self::with_rank_rel(r)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_rel", self.rank_rel),
            ("root_cluster", self.root_cluster),
            ("tol_unitary", self.tol_unitary),
            ("tol_recon", self.tol_recon),
            ("form_zero", self.form_zero),
            ("newton_residual", self.newton_residual),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}
