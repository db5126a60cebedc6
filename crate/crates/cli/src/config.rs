use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// Operation parameters; every field can come from the config file or a flag.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(rename = "K")]
    pub k: Option<usize>,
    #[serde(rename = "S")]
    pub s: Option<usize>,
    pub trials: Option<usize>,
    pub graphs: Option<usize>,
    pub rounds: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub seeds: Option<usize>,
    pub tol: Option<f64>,
    pub sizes: Option<Vec<usize>>,
    pub taus: Option<Vec<f64>>,
    pub dim: Option<usize>,
    pub h_grid: Option<Vec<f64>>,
    pub deltas: Option<Vec<f64>>,
    pub avg_degree: Option<f64>,
    pub tau: Option<f64>,
    pub mode: Option<String>,
}

macro_rules! prefer {
    ($a:expr, $b:expr, $($f:ident),*) => {
        Params { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Params {
    /// Fields set in `self` win over `fallback`.
    pub fn over(self, fallback: Params) -> Params {
        prefer!(
            self, fallback, k, s, trials, graphs, rounds, dims, seeds, tol, sizes, taus, dim,
            h_grid, deltas, avg_degree, tau, mode
        )
    }
}

/// The JSON run configuration.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `spectrum`, `verify`, `heterophily-sweep`, `generate` or `refine`.
    pub command: Option<String>,
    /// Check id for `verify`.
    pub check: Option<String>,
    pub graph: Option<PathBuf>,
    pub generate: Option<String>,
    pub laplacian: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub deterministic: bool,
    #[serde(default)]
    pub params: Params,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        // relative graph paths resolve against the config file
        let base = path.parent().unwrap_or(Path::new("."));
        Ok(RunConfig {
            graph: cfg.graph.map(|g| if g.is_relative() { base.join(g) } else { g }),
            ..cfg
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win() {
        let flag = Params { k: Some(3), ..Default::default() };
        let file = Params { k: Some(1), trials: Some(7), ..Default::default() };
        let merged = flag.over(file);
        assert_eq!((merged.k, merged.trials), (Some(3), Some(7)));
    }

    #[test]
    fn parses_config() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"command": "verify", "check": "thm2", "seed": 4, "params": {"K": 2, "dims": [8, 16]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.params.k, Some(2));
        assert_eq!(cfg.params.dims, Some(vec![8, 16]));
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
