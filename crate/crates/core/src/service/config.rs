use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aco::AcoParams;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{var}={value:?} is not valid: {reason}")]
    Env {
        var: &'static str,
        value: String,
        reason: String,
    },
}

/// Server settings. Loaded from TOML, then overridden by `SERVICE_PORT` and
/// `GRAPH_PATH` from the environment.
///
/// ```toml
/// port = 8080
/// graph_path = "fixtures/case_study/snapshot.json"
/// sessions_dir = "/var/lib/learning-path/sessions"
///
/// [aco]
/// n_ants = 20
/// max_iterations = 50
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub host: String,
    pub port: u16,
    pub graph_path: Option<PathBuf>,
    pub sessions_dir: Option<PathBuf>,
    pub aco: AcoParams,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            host: "127.0.0.1".into(),
            port: 8080,
            graph_path: None,
            sessions_dir: None,
            aco: AcoParams::default(),
        }
    }
}

impl ServiceConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Reads `path` if given (defaults otherwise) and applies the process
    /// environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                    path: path.to_path_buf(),
                    source,
                })?;
                Self::from_toml(&text, path)?
            }
            None => ServiceConfig::default(),
        };
        config.apply_env(|var| std::env::var(var).ok())?;
        Ok(config)
    }

    pub fn apply_env(
        &mut self,
        lookup: impl Fn(&str) -> Option<String>,
    ) -> Result<(), ConfigError> {
        if let Some(value) = lookup("SERVICE_PORT") {
            self.port =
                value
                    .trim()
                    .parse()
                    .map_err(|e: std::num::ParseIntError| ConfigError::Env {
                        var: "SERVICE_PORT",
                        value: value.clone(),
                        reason: e.to_string(),
                    })?;
        }
        if let Some(value) = lookup("GRAPH_PATH") {
            if !value.is_empty() {
                self.graph_path = Some(PathBuf::from(value));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_with_partial_aco_table() {
        let text = "port = 9000\ngraph_path = \"g.json\"\n[aco]\nn_ants = 5\n";
        let c = ServiceConfig::from_toml(text, Path::new("x.toml")).unwrap();
        assert_eq!(c.port, 9000);
        assert_eq!(c.graph_path.as_deref(), Some(Path::new("g.json")));
        assert_eq!(c.aco.n_ants, 5);
        assert_eq!(c.aco.max_iterations, 50);
    }

    #[test]
    fn env_overrides_file() {
        let mut c = ServiceConfig::default();
        c.apply_env(|v| match v {
            "SERVICE_PORT" => Some("7001".into()),
            "GRAPH_PATH" => Some("/tmp/g.json".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(c.port, 7001);
        assert_eq!(c.graph_path.as_deref(), Some(Path::new("/tmp/g.json")));

        let err = c.apply_env(|v| (v == "SERVICE_PORT").then(|| "http".to_string()));
        assert!(matches!(
            err,
            Err(ConfigError::Env {
                var: "SERVICE_PORT",
                ..
            })
        ));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ServiceConfig::from_toml("prot = 1", Path::new("x.toml")).is_err());
    }
}
