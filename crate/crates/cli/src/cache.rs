//! On-disk result cache: serialized report bytes keyed by command and format.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const CACHE_VERSION: &str = "binsum-cache/1";

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    version: String,
    entries: BTreeMap<String, String>,
}

#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    entries: BTreeMap<String, String>,
    dirty: bool,
}

impl ResultCache {
    /// Loads `path`; a missing file gives an empty cache, an unreadable or
    /// stale one gives an empty cache plus a warning.
    pub fn open(path: &Path) -> (Self, Option<String>) {
        let mut cache = ResultCache {
            path: path.to_path_buf(),
            entries: BTreeMap::new(),
            dirty: false,
        };
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return (cache, None),
            Err(e) => {
                return (
                    cache,
                    Some(format!(
                        "cache {} unreadable ({e}); recomputing",
                        path.display()
                    )),
                )
            }
        };
        let warning = match serde_json::from_str::<CacheFile>(&text) {
            Ok(file) if file.version == CACHE_VERSION => {
                cache.entries = file.entries;
                None
            }
            Ok(file) => Some(format!(
                "cache version {} does not match {CACHE_VERSION}; recomputing",
                file.version
            )),
            Err(e) => Some(format!(
                "cache {} is malformed ({e}); recomputing",
                path.display()
            )),
        };
        (cache, warning)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn insert(&mut self, key: String, bytes: String) {
        self.entries.insert(key, bytes);
        self.dirty = true;
    }

    /// Writes through a sibling temporary file and a rename.
    pub fn save(&self) -> std::io::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let file = CacheFile {
            version: CACHE_VERSION.to_string(),
            entries: self.entries.clone(),
        };
        let text = serde_json::to_string_pretty(&file).map_err(std::io::Error::other)? + "\n";
        let mut tmp = self.path.clone().into_os_string();
        tmp.push(".tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &self.path)
    }
}
