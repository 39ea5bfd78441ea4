use std::fs;
use std::path::{Path, PathBuf};

use dqi_core::DqiConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of_file(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
        Ok(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderSelection {
    pub sentence: String,
    pub word: String,
    pub tagger: String,
}

/// Written once per output directory. JSON artifacts carry its file name
/// in a `manifest` field; every artifact is listed here with its digest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<FileDigest>,
    pub config_path: Option<String>,
    pub providers: ProviderSelection,
    pub out_dir: String,
    pub timestamp: String,
    pub config: DqiConfig,
    pub artifacts: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Collects artifacts for one output directory and writes the manifest last.
pub struct OutputDir {
    root: PathBuf,
    artifacts: Vec<FileDigest>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| {
            CliError::runtime(format!(
                "cannot create output directory {}: {e}",
                root.display()
            ))
        })?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.root.join(name);
        fs::write(&path, bytes)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
        self.artifacts.push(FileDigest {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Writes `{"manifest": "manifest.json", <key>: value}`.
    pub fn write_json<T: Serialize>(
        &mut self,
        name: &str,
        key: &str,
        value: &T,
    ) -> Result<(), CliError> {
        let mut doc = serde_json::Map::new();
        doc.insert("manifest".into(), MANIFEST_FILE.into());
        doc.insert(
            key.into(),
            serde_json::to_value(value).map_err(CliError::runtime)?,
        );
        let mut text = serde_json::to_string_pretty(&doc).map_err(CliError::runtime)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn finish(self, mut manifest: RunManifest) -> Result<RunManifest, CliError> {
        manifest.out_dir = self.root.display().to_string();
        manifest.artifacts = self.artifacts;
        let mut text = serde_json::to_string_pretty(&manifest).map_err(CliError::runtime)?;
        text.push('\n');
        let path = self.root.join(MANIFEST_FILE);
        fs::write(&path, text)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(manifest)
    }
}
