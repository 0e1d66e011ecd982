//! Run configuration: a JSON file, overridden by command-line flags, resolved
//! to concrete parameters before anything runs.

use dkz_core::{Complex, DkzParams, Error, Result, ToleranceSpec};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub u: Option<Vec<[f64; 2]>>,
    pub kappa: Option<[f64; 2]>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub permissive: bool,
    /// Base separations for check-holonomy.
    pub separations: Option<Vec<f64>>,
    /// ξ points for check-isomonodromy.
    pub grid: Option<Vec<Vec<f64>>>,
    pub chamber: Option<usize>,
    /// `"diagonal"` (default) or `"strict"`.
    pub gauge: Option<String>,
    /// Overrides `q = e^{πi/κ}`.
    pub q: Option<[f64; 2]>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
    }

    /// Fills every unset field the command needs with its default.
    pub fn resolve(mut self, command: &str) -> Result<Self> {
        self.command = Some(command.to_string());
        let m = match (self.m, &self.u) {
            (Some(m), Some(u)) if u.len() != m => {
                return Err(Error::InvalidParameter(format!("m = {m} but u has {} entries", u.len())))
            }
            (Some(m), _) => m,
            (None, Some(u)) => u.len(),
            (None, None) => 2,
        };
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
        }
        self.m = Some(m);
        if self.u.is_none() {
            // evenly spaced on the imaginary axis, i..-i
            self.u = Some((0..m).map(|a| [0.0, 1.0 - 2.0 * a as f64 / (m - 1) as f64]).collect());
        }
        self.kappa.get_or_insert([3.0, 0.0]);
        self.seed.get_or_insert(0);
        let default_n = match command {
            "check-braid" => Some(4),
            "check-holonomy" | "check-isomonodromy" => Some(3),
            _ => None,
        };
        if self.n.is_none() {
            self.n = default_n;
        }
        let t = self.tolerance()?;
        self.tolerances = ToleranceOverrides { rel_tol: Some(t.rel_tol), abs_tol: Some(t.abs_tol), max_steps: Some(t.max_steps) };
        Ok(self)
    }

    pub fn params(&self) -> Result<DkzParams> {
        let u = self.u.as_ref().ok_or_else(|| Error::InvalidParameter("u is not set".into()))?;
        let k = self.kappa.ok_or_else(|| Error::InvalidParameter("kappa is not set".into()))?;
        DkzParams::new(u.iter().map(|z| Complex::new(z[0], z[1])).collect(), Complex::new(k[0], k[1]), self.permissive)
    }

    pub fn tolerance(&self) -> Result<ToleranceSpec> {
        let d = ToleranceSpec::default();
        let t = &self.tolerances;
        ToleranceSpec::new(t.rel_tol.unwrap_or(d.rel_tol), t.abs_tol.unwrap_or(d.abs_tol), t.max_steps.unwrap_or(d.max_steps))
    }

    pub fn n_or(&self, fallback: usize) -> usize {
        self.n.unwrap_or(fallback)
    }
}
