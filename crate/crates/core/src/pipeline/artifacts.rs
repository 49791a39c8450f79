use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{PipelineError, Result};
use crate::{sha256_file, sha256_hex};

/// Sidecar written next to every artifact as `<name>.meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactMeta {
    pub artifact: String,
    pub sha256: String,
    /// Content hashes of every input this artifact depends on, directly or
    /// through upstream artifacts, keyed by role or artifact name.
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

pub fn meta_path(artifact: &Path) -> PathBuf {
    let mut name = artifact.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    artifact.with_file_name(name)
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Tracks the inputs of one stage.
#[derive(Debug, Default)]
pub struct Provenance {
    inputs: BTreeMap<String, String>,
}

impl Provenance {
    /// Records a raw input file under `role`.
    pub fn input(&mut self, role: &str, path: &Path) -> Result<()> {
        let hash = sha256_file(path).map_err(io(path))?;
        self.inputs.insert(role.to_string(), hash);
        Ok(())
    }

    /// Records an upstream artifact and everything it depended on.
    pub fn artifact(&mut self, path: &Path) -> Result<()> {
        let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        self.input(&name, path)?;
        let meta = meta_path(path);
        if meta.exists() {
            let text = fs::read_to_string(&meta).map_err(io(&meta))?;
            let upstream: ArtifactMeta = serde_json::from_str(&text)
                .map_err(|e| PipelineError::Config(format!("{}: {e}", meta.display())))?;
            self.inputs.extend(upstream.inputs);
        }
        Ok(())
    }

    #[cfg(test)]
    pub fn hashes(&self) -> &BTreeMap<String, String> {
        &self.inputs
    }

    /// Writes `bytes` to `path` and its sidecar.
    pub fn write(&self, path: &Path, bytes: &[u8], details: serde_json::Value) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(io(dir))?;
        }
        fs::write(path, bytes).map_err(io(path))?;
        let meta = ArtifactMeta {
            artifact: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            sha256: sha256_hex(bytes),
            inputs: self.inputs.clone(),
            details,
        };
        let mut text = serde_json::to_string_pretty(&meta).expect("meta serializes");
        text.push('\n');
        let mp = meta_path(path);
        fs::write(&mp, text).map_err(io(&mp))?;
        Ok(())
    }
}

pub fn require(path: PathBuf) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(PipelineError::MissingArtifact(path))
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io(path))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    text.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upstream_hashes_propagate() {
        let dir = tempfile::tempdir().unwrap();
        let raw = dir.path().join("raw.txt");
        fs::write(&raw, "x").unwrap();
        let mut first = Provenance::default();
        first.input("raw", &raw).unwrap();
        let a = dir.path().join("a.csv");
        first.write(&a, b"1\n", serde_json::Value::Null).unwrap();

        let mut second = Provenance::default();
        second.artifact(&a).unwrap();
        assert_eq!(second.hashes()["raw"], sha256_hex("x"));
        assert_eq!(second.hashes()["a.csv"], sha256_hex("1\n"));
        assert!(meta_path(&a).ends_with("a.csv.meta.json"));
    }

    #[test]
    fn missing_artifact() {
        assert!(matches!(
            require(PathBuf::from("/nonexistent/x")),
            Err(PipelineError::MissingArtifact(_))
        ));
    }
}
