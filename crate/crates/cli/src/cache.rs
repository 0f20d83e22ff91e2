//! Content-addressed result store.
//!
//! Entries live at `<dir>/<sha256>.json`. Writes go to a temporary file in
//! the same directory and are renamed into place, so concurrent writers of
//! the same key race harmlessly.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    key: String,
    engine_version: String,
    created_unix_ms: u128,
    value: Value,
}

/// Hex SHA-256 of the engine version and the canonical request.
pub fn key_for(request: &Value) -> String {
    let mut h = Sha256::new();
    h.update(bogomolov::VERSION.as_bytes());
    h.update([0]);
    h.update(serde_json::to_string(request).expect("request serializes").as_bytes());
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: PathBuf,
}

fn is_entry_name(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "json")
        && p.file_stem()
            .and_then(|s| s.to_str())
            .is_some_and(|s| s.len() == 64 && s.bytes().all(|b| b.is_ascii_hexdigit()))
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored value; unreadable or mismatched entries count as misses.
    pub fn get(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.engine_version == bogomolov::VERSION).then_some(entry.value)
    }

    pub fn put(&self, key: &str, value: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            key: key.into(),
            engine_version: bogomolov::VERSION.into(),
            created_unix_ms: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis()),
            value: value.clone(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    fn entries(&self) -> std::io::Result<Vec<PathBuf>> {
        match fs::read_dir(&self.dir) {
            Ok(rd) => {
                let mut out: Vec<PathBuf> =
                    rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| is_entry_name(p)).collect();
                out.sort();
                Ok(out)
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(e),
        }
    }

    /// `(entries, total bytes)`.
    pub fn stats(&self) -> std::io::Result<(usize, u64)> {
        let entries = self.entries()?;
        let bytes = entries.iter().filter_map(|p| fs::metadata(p).ok()).map(|m| m.len()).sum();
        Ok((entries.len(), bytes))
    }

    /// Removes every entry; returns how many were removed.
    pub fn clear(&self) -> std::io::Result<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}
