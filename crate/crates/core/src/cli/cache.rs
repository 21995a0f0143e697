//! On-disk cache of irreducible characters, one JSON object per line.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::characters::{irr_character, seed_irreducible, CharacterError};
use crate::rootsystem::{RootSystem, Weight};

/// Current cache format; entries with any other version are ignored.
pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "FACEKOSZUL_CACHE_DIR";

const CACHE_FILE: &str = "characters.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub weights: Vec<(Weight, i64)>,
    pub version: u32,
}

/// Key of the character of `V(λ)` for the given root system.
pub fn cache_key(rs: &RootSystem, lam: &Weight) -> String {
    format!("{}|{}", rs.datum().canonical_key(), lam)
}

/// `$FACEKOSZUL_CACHE_DIR`, else `$XDG_DATA_HOME/facekoszul`, else `~/.local/share/facekoszul`.
pub fn default_cache_dir() -> Option<PathBuf> {
    let non_empty = |v: &str| std::env::var_os(v).filter(|s| !s.is_empty()).map(PathBuf::from);
    if let Some(dir) = non_empty(CACHE_DIR_ENV) {
        return Some(dir);
    }
    if let Some(dir) = non_empty("XDG_DATA_HOME") {
        return Some(dir.join("facekoszul"));
    }
    non_empty("HOME").map(|h| h.join(".local").join("share").join("facekoszul"))
}

#[derive(Clone, Debug)]
pub struct CharacterCache {
    dir: PathBuf,
}

impl CharacterCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CharacterCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file(&self) -> PathBuf {
        self.dir.join(CACHE_FILE)
    }

    /// Latest valid entry for `key`; unreadable lines and other versions are skipped.
    pub fn get(&self, key: &str) -> io::Result<Option<CacheEntry>> {
        let file = match File::open(self.file()) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut found = None;
        for line in BufReader::new(file).lines() {
            let Ok(line) = line else { continue };
            let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) else {
                continue;
            };
            if entry.key == key && entry.version == CACHE_VERSION {
                found = Some(entry);
            }
        }
        Ok(found)
    }

    /// Append an entry under an exclusive file lock.
    pub fn put(&self, entry: &CacheEntry) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut file = OpenOptions::new().create(true).append(true).open(self.file())?;
        file.lock()?;
        let mut line = serde_json::to_string(entry).map_err(io::Error::other)?;
        line.push('\n');
        let written = file.write_all(line.as_bytes()).and_then(|_| file.flush());
        file.unlock()?;
        written
    }

    /// Seed the in-memory table for `V(λ)` from the cache, computing and
    /// storing it on a miss. Returns whether it was a hit.
    pub fn load(&self, rs: &std::sync::Arc<RootSystem>, lam: &Weight) -> Result<bool, CacheError> {
        let key = cache_key(rs, lam);
        if let Some(entry) = self.get(&key)? {
            if let Some(mults) = usable(rs, lam, &entry) {
                seed_irreducible(rs, lam, mults);
                return Ok(true);
            }
        }
        let ch = irr_character(rs, lam)?;
        self.put(&CacheEntry {
            key,
            weights: ch.mults().iter().map(|(w, &m)| (w.clone(), m)).collect(),
            version: CACHE_VERSION,
        })?;
        Ok(false)
    }
}

/// Entries that fail basic sanity checks are treated as corrupt.
fn usable(rs: &RootSystem, lam: &Weight, entry: &CacheEntry) -> Option<BTreeMap<Weight, i64>> {
    let mults: BTreeMap<Weight, i64> = entry.weights.iter().cloned().collect();
    let sane = mults.len() == entry.weights.len()
        && mults.get(lam) == Some(&1)
        && mults.iter().all(|(w, &m)| m > 0 && w.rank() == rs.rank());
    sane.then_some(mults)
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Character(#[from] CharacterError),
}
