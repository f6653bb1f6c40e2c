use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    profiles: Option<String>,
    #[serde(rename = "snapshot", default)]
    snapshots: Vec<SnapshotEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotEntry {
    pub label: String,
    pub path: String,
}

/// Ordered snapshot list plus optional profile table. Relative paths are
/// taken from the manifest's directory.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub source: String,
    pub snapshots: Vec<SnapshotEntry>,
    pub profiles: Option<String>,
    base: PathBuf,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read manifest {}: {e}", path.display()))
        })?;
        let parsed: ManifestFile = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("invalid manifest {}: {e}", path.display())))?;
        if parsed.snapshots.len() < 2 {
            return Err(CliError::config(format!(
                "manifest {} lists {} snapshot(s); at least 2 are required",
                path.display(),
                parsed.snapshots.len()
            )));
        }
        Ok(Manifest {
            source: path.display().to_string(),
            snapshots: parsed.snapshots,
            profiles: parsed.profiles,
            base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        })
    }

    pub fn resolve(&self, relative: &str) -> PathBuf {
        self.base.join(relative)
    }
}
