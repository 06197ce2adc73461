use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::solver::{IntegratorConfig, Method};
use crate::{Error, Result};

pub const DEFAULT_C1: f64 = 0.05;

fn default_c1() -> f64 {
    DEFAULT_C1
}

fn default_tail_decay() -> f64 {
    0.5
}

/// Initial datum descriptor, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialDatum {
    /// Radial datum `(k,0,0)`, `2 <= k <= N/2`, of the Dirac-minus-Maxwellian example.
    DiracExample,
    SingleMode {
        n: u32,
        l: u32,
        m: i32,
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// Coefficient CSV (`n,l,m,re,im`); relative paths resolve against the
    /// config file's directory.
    File { path: PathBuf },
    /// Seeded real-valued datum orthogonal to the collision invariants.
    Random {
        seed: u64,
        s2_norm: f64,
        #[serde(default = "default_tail_decay")]
        tail_decay: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub diagnostics_csv: PathBuf,
    pub final_state_csv: PathBuf,
    /// Optional per-mode dump with columns `t,n,l,m,re,im`.
    #[serde(default)]
    pub trajectory_csv: Option<PathBuf>,
}

/// A single JSON run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub truncation: u32,
    pub alpha: f64,
    #[serde(default = "default_c1")]
    pub c1: f64,
    pub t_final: f64,
    pub dt: f64,
    #[serde(default)]
    pub method: Method,
    pub initial: InitialDatum,
    pub output: OutputPaths,
    #[serde(default)]
    pub tensor_cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it are resolved against
    /// the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut cfg = RunConfig::from_json(&text)?;
        if let Some(base) = path.parent() {
            cfg.rebase(base);
        }
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output.diagnostics_csv);
        fix(&mut self.output.final_state_csv);
        if let Some(p) = self.output.trajectory_csv.as_mut() {
            fix(p);
        }
        if let Some(p) = self.tensor_cache_dir.as_mut() {
            fix(p);
        }
        if let InitialDatum::File { path } = &mut self.initial {
            fix(path);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 2 {
            return Err(Error::Config(format!("truncation must be >= 2, got {}", self.truncation)));
        }
        self.integrator().validate()
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig { method: self.method, dt: self.dt, t_final: self.t_final, c1: self.c1, alpha: self.alpha }
    }
}
