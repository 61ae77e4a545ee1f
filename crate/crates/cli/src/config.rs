//! Optional TOML run configuration. Every key mirrors a long command-line
//! flag (dashes become underscores); flags given on the command line win.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: Option<PathBuf>,
    pub profiles: Option<PathBuf>,
    pub generator: Option<String>,
    pub incidence: Option<PathBuf>,
    pub attributes: Option<usize>,
    pub seeds: Option<PathBuf>,
    pub set_size: Option<usize>,
    pub candidates: Option<usize>,
    pub per_group: Option<usize>,
    pub skills: Option<PathBuf>,
    pub project: Option<PathBuf>,
    pub projects: Option<usize>,
    pub skill_threshold: Option<u64>,
    #[serde(default)]
    pub variant: Vec<String>,
    #[serde(default)]
    pub k: Vec<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub weight_norm: Option<String>,
    pub repeats: Option<usize>,
    pub timing: Option<bool>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
