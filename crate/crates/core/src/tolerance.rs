use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds behind every floating-point judgment (rank, positivity,
/// residuals). All three must lie in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTolerance")]
pub struct ToleranceConfig {
    /// Singular values below `rank_rtol * sigma_max` count as zero.
    pub rank_rtol: f64,
    /// Eigenvalue floor, scaled by `max(1, ||M||)`.
    pub psd_atol: f64,
    /// Residual threshold for equation and identity checks, scaled by
    /// `max(1, ||rhs||)`.
    pub residual_atol: f64,
}

impl ToleranceConfig {
    pub const DEFAULT_RANK_RTOL: f64 = 1e-10;
    pub const DEFAULT_PSD_ATOL: f64 = 1e-10;
    pub const DEFAULT_RESIDUAL_ATOL: f64 = 1e-9;

    pub fn new(rank_rtol: f64, psd_atol: f64, residual_atol: f64) -> Result<Self> {
        for (name, value) in [
            ("rank_rtol", rank_rtol),
            ("psd_atol", psd_atol),
            ("residual_atol", residual_atol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must lie in (0, 1), got {value}"
                )));
            }
        }
        Ok(Self {
            rank_rtol,
            psd_atol,
            residual_atol,
        })
    }

    /// Absolute residual threshold for a quantity of magnitude `scale`.
    pub fn residual_bound(&self, scale: f64) -> f64 {
        self.residual_atol * scale.max(1.0)
    }

    /// Most negative eigenvalue tolerated for a matrix of norm `scale`.
    pub fn psd_floor(&self, scale: f64) -> f64 {
        -self.psd_atol * scale.max(1.0)
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rtol: Self::DEFAULT_RANK_RTOL,
            psd_atol: Self::DEFAULT_PSD_ATOL,
            residual_atol: Self::DEFAULT_RESIDUAL_ATOL,
        }
    }
}

#[derive(Deserialize)]
struct RawTolerance {
    rank_rtol: f64,
    psd_atol: f64,
    residual_atol: f64,
}

impl TryFrom<RawTolerance> for ToleranceConfig {
    type Error = Error;

    fn try_from(raw: RawTolerance) -> Result<Self> {
        Self::new(raw.rank_rtol, raw.psd_atol, raw.residual_atol)
    }
}
