use serde::{Deserialize, Serialize};

use crate::error::{Result, WradonError};

/// Numerical policy for the quadrature routines.
///
/// `points_per_oscillation / gauss_order` sets the panel cap so the
/// oscillatory phase advances at most that fraction of pi per Gauss panel.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuadratureConfig {
    pub target_rel_tol: f64,
    pub max_evals: u64,
    pub points_per_oscillation: u32,
    pub gauss_order: u32,
    /// Monte-Carlo sample count, used by randomized oracles only.
    pub mc_samples: u64,
    pub rng_seed: u64,
    /// Use interpolated weight profiles instead of fresh integration.
    /// Off for certification runs, on for plotting runs.
    pub interpolate_profiles: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            target_rel_tol: 1e-9,
            max_evals: 500_000_000,
            points_per_oscillation: 12,
            gauss_order: 16,
            mc_samples: 10_000,
            rng_seed: 0x5eed_cafe,
            interpolate_profiles: false,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_rel_tol > 0.0) {
            return Err(WradonError::Config("target_rel_tol must be > 0".into()));
        }
        if self.points_per_oscillation < 4 {
            return Err(WradonError::Config(
                "points_per_oscillation must be >= 4".into(),
            ));
        }
        if !(2..=32).contains(&self.gauss_order) {
            return Err(WradonError::Config("gauss_order must be in 2..=32".into()));
        }
        Ok(())
    }

    /// Phase advance allowed per Gauss panel, in radians.
    pub fn phase_per_panel(&self) -> f64 {
        self.points_per_oscillation as f64 / self.gauss_order as f64 * std::f64::consts::PI
    }
}

/// Full configuration for weight construction and the verification suite.
///
/// Every key is optional in the TOML file; missing keys take the defaults
/// below.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Truncation order of the shell series.
    pub k_max: u32,
    pub quad: QuadratureConfig,
    /// Hard limit on the number of local-weight windows in the cover.
    pub n_max: usize,
    /// Worker threads for the verification suite (0 = all cores).
    pub workers: usize,
    /// Output directory for reports and CSV curves.
    pub out_dir: String,
    /// Grid sizes for the certification sweeps.
    pub grid: GridConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    /// Points per partition-sum grid.
    pub partition_points: usize,
    /// Offsets for the W0 zero test.
    pub w0_zero_points: usize,
    /// Offsets for the assembled zero test.
    pub assembled_zero_points: usize,
    /// Random (r, s) samples for the positivity sweep.
    pub positivity_samples: usize,
    /// Random lines for the sign-change sweep.
    pub line_checks: usize,
    /// Random d-planes per dimension for the reduction check.
    pub dplane_cases: usize,
    /// Points per band in the delta0 certification grid.
    pub delta0_band_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            partition_points: 10_000,
            w0_zero_points: 50,
            assembled_zero_points: 200,
            positivity_samples: 100_000,
            line_checks: 100,
            dplane_cases: 10,
            delta0_band_points: 200,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k_max: 8,
            quad: QuadratureConfig::default(),
            n_max: 16_384,
            workers: 0,
            out_dir: "out".into(),
            grid: GridConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(s).map_err(|e| WradonError::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(WradonError::Config("k_max must be >= 1".into()));
        }
        self.quad.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_roundtrip_overrides() {
        let cfg = RunConfig::from_toml_str(
            r#"
            k_max = 6
            n_max = 128
            [quad]
            rng_seed = 7
            gauss_order = 8
            "#,
        )
        .unwrap();
        assert_eq!(cfg.k_max, 6);
        assert_eq!(cfg.n_max, 128);
        assert_eq!(cfg.quad.rng_seed, 7);
        assert_eq!(cfg.quad.gauss_order, 8);
        // untouched keys keep defaults
        assert_eq!(cfg.quad.points_per_oscillation, 12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let mut cfg = RunConfig::default();
        cfg.quad.target_rel_tol = 0.0;
        assert!(cfg.validate().is_err());
    }
}
