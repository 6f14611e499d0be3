//! Job configuration: an optional JSON file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use mixhypo::estimate::Method;
use mixhypo::family::DEFAULT_SEP_MIN;
use mixhypo::{Family, FamilySpec};
use serde::Deserialize;

use crate::CliError;

/// Every key the JSON config file may hold. Keys not used by the running
/// command are ignored; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub family: Option<Family>,
    pub shared: Option<f64>,
    pub vector: Option<Vec<f64>>,
    pub sep_min: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    // eval
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    // sample
    pub count: Option<usize>,
    // fit
    pub data: Option<PathBuf>,
    pub method: Option<Method>,
    pub n_components: Option<usize>,
    pub fixed_shared: Option<f64>,
    pub init: Option<Vec<f64>>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub restarts: Option<usize>,
    // check
    pub tolerance: Option<f64>,
    pub grid: Option<usize>,
    pub samples: Option<usize>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($field:ident),* $(,)?) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field; } )*
    };
}

impl JobConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: JobConfig) -> Self {
        overlay!(self, flags;
            family, shared, vector, sep_min, seed, output, t_min, t_max, points, count,
            data, method, n_components, fixed_shared, init, max_iter, tol, restarts,
            tolerance, grid, samples,
        );
        self
    }

    pub fn require_family(&self) -> Result<Family, CliError> {
        self.family.ok_or_else(|| CliError::Config("missing family".into()))
    }

    pub fn sep_min(&self) -> Result<f64, CliError> {
        let s = self.sep_min.unwrap_or(DEFAULT_SEP_MIN);
        if !(s > 0.0 && s.is_finite()) {
            return Err(CliError::Config(format!("sep_min must be positive, got {s}")));
        }
        Ok(s)
    }

    /// The family member named by `family`, `shared` and `vector`.
    pub fn spec(&self) -> Result<FamilySpec, CliError> {
        let family = self.require_family()?;
        let shared = self.shared.ok_or_else(|| CliError::Config("missing shared parameter".into()))?;
        let vector = self.vector.clone().ok_or_else(|| CliError::Config("missing vector parameter".into()))?;
        Ok(FamilySpec::with_separation(family, shared, vector, self.sep_min()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<JobConfig>(r#"{"family": "MHW", "shape": 2}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let file: JobConfig = serde_json::from_str(r#"{"family": "MHW", "shared": 1.0, "seed": 3}"#).unwrap();
        let flags = JobConfig { seed: Some(4), ..Default::default() };
        let cfg = file.overlay(flags);
        assert_eq!(cfg.seed, Some(4));
        assert_eq!(cfg.shared, Some(1.0));
        assert_eq!(cfg.family, Some(Family::Weibull));
    }
}
