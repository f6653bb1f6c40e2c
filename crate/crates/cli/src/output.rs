use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Report files built in memory and written together at the end.
#[derive(Debug, Default)]
pub struct Outputs {
    files: BTreeMap<String, String>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.insert(name.into(), contents);
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let mut written: Vec<PathBuf> = Vec::new();
        let result = (|| -> std::io::Result<()> {
            std::fs::create_dir_all(dir)?;
            for (name, contents) in &self.files {
                let path = dir.join(name);
                written.push(path.clone());
                std::fs::write(&path, contents)?;
            }
            Ok(())
        })();
        result.map_err(|e| {
            for path in &written {
                let _ = std::fs::remove_file(path);
            }
            CliError {
                kind: triad_core::ErrorKind::Resource,
                message: format!("writing reports to {}: {e}", dir.display()),
            }
        })
    }
}
