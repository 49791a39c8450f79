use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::{Answer, GatewayError, PromptVariant, Result};
use crate::corpus::normalize_whitespace;
use crate::sha256_hex;

/// Content hash of everything that determines a model reply.
///
/// Each component is whitespace-normalized and length-prefixed before
/// hashing, so no two distinct inputs share a preimage.
pub fn cache_key(
    model_id: &str,
    variant: PromptVariant,
    startup_desc: &str,
    occupation_desc: &str,
) -> String {
    let mut buf = String::new();
    for part in [
        model_id.to_string(),
        variant.id().to_string(),
        normalize_whitespace(startup_desc),
        normalize_whitespace(occupation_desc),
    ] {
        buf.push_str(&part.len().to_string());
        buf.push(':');
        buf.push_str(&part);
        buf.push('\n');
    }
    sha256_hex(buf)
}

/// One cached reply; also the on-disk record, one JSON object per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub variant: PromptVariant,
    pub model_id: String,
    pub answer: Answer,
    pub raw_response: String,
    pub timestamp: u64,
}

/// Append-only verdict log with an in-memory index.
///
/// Readers share the index; writers are serialized and each record is
/// appended with a single write. A torn trailing line left by an interrupted
/// run is skipped on reopen.
#[derive(Debug)]
pub struct VerdictCache {
    path: Option<PathBuf>,
    index: RwLock<HashMap<String, CacheEntry>>,
    writer: Mutex<Option<File>>,
}

impl VerdictCache {
    pub fn in_memory() -> Self {
        VerdictCache {
            path: None,
            index: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
        }
    }

    /// Opens (creating if needed) a cache file and rebuilds its index.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let io = |source| GatewayError::Cache {
            path: path.display().to_string(),
            source,
        };
        let mut index = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheEntry>(&line) {
                    Ok(entry) => {
                        index.insert(entry.key.clone(), entry);
                    }
                    Err(e) => log::warn!("{}:{}: skipping bad cache record: {e}", path.display(), i + 1),
                }
            }
        }
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(io)?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io)?;
        // Terminate a torn trailing record so the next append starts cleanly.
        let len = file.metadata().map_err(io)?.len();
        if len > 0 {
            let bytes = std::fs::read(&path).map_err(io)?;
            if bytes.last() != Some(&b'\n') {
                file.write_all(b"\n").map_err(io)?;
            }
        }
        Ok(VerdictCache {
            path: Some(path),
            index: RwLock::new(index),
            writer: Mutex::new(Some(file)),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, key: &str) -> Option<CacheEntry> {
        self.index.read().expect("cache index poisoned").get(key).cloned()
    }

    pub fn len(&self) -> usize {
        self.index.read().expect("cache index poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends `entry` to the log, then publishes it to readers.
    pub fn put(&self, entry: CacheEntry) -> Result<()> {
        let mut writer = self.writer.lock().expect("cache writer poisoned");
        if let Some(file) = writer.as_mut() {
            let mut line = serde_json::to_vec(&entry).expect("cache entry serializes");
            line.push(b'\n');
            file.write_all(&line)
                .and_then(|_| file.flush())
                .map_err(|source| GatewayError::Cache {
                    path: self
                        .path
                        .as_ref()
                        .map(|p| p.display().to_string())
                        .unwrap_or_default(),
                    source,
                })?;
        }
        self.index
            .write()
            .expect("cache index poisoned")
            .insert(entry.key.clone(), entry);
        Ok(())
    }
}
