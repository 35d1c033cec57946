// SPDX-License-Identifier: Apache-2.0

//! Optional on-disk class number cache: one `D,h` line per discriminant in
//! `$QUADCLASS_CACHE_DIR/classnumbers.csv`. The file is only ever appended to.

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use quadclass::ClassGroupCache;

pub const ENV_VAR: &str = "QUADCLASS_CACHE_DIR";
pub const FILE_NAME: &str = "classnumbers.csv";

/// Parses cache text. Malformed lines are returned separately, by line number.
pub fn parse(text: &str) -> (Vec<(i128, u64)>, Vec<usize>) {
    let mut entries = Vec::new();
    let mut bad = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = line
            .split_once(',')
            .and_then(|(d, h)| {
                Some((
                    d.trim().parse::<i128>().ok()?,
                    h.trim().parse::<u64>().ok()?,
                ))
            })
            .filter(|&(d, h)| d < 0 && h > 0);
        match parsed {
            Some(e) => entries.push(e),
            None => bad.push(i + 1),
        }
    }
    (entries, bad)
}

/// A cache file bound to a directory, remembering which entries it holds.
#[derive(Debug)]
pub struct DiskCache {
    path: PathBuf,
    known: HashSet<i128>,
}

impl DiskCache {
    /// From `$QUADCLASS_CACHE_DIR`, if set and nonempty.
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(ENV_VAR).filter(|v| !v.is_empty())?;
        Some(Self::open(Path::new(&dir)))
    }

    pub fn open(dir: &Path) -> Self {
        Self {
            path: dir.join(FILE_NAME),
            known: HashSet::new(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Loads the file into `cache`. Problems are reported as warnings.
    pub fn load_into(&mut self, cache: &ClassGroupCache) -> Vec<String> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Vec::new(),
            Err(e) => return vec![format!("cannot read {}: {e}", self.path.display())],
        };
        let (entries, bad) = parse(&text);
        self.known.extend(entries.iter().map(|&(d, _)| d));
        cache.preload(entries);
        bad.into_iter()
            .map(|n| format!("{}:{n}: malformed cache line skipped", self.path.display()))
            .collect()
    }

    /// Appends every entry of `cache` not yet in the file.
    pub fn save_from(&mut self, cache: &ClassGroupCache) -> std::io::Result<usize> {
        let fresh: Vec<_> = cache
            .counts()
            .into_iter()
            .filter(|(d, _)| !self.known.contains(d))
            .collect();
        if fresh.is_empty() {
            return Ok(0);
        }
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut text = String::new();
        for &(d, h) in &fresh {
            text.push_str(&format!("{d},{h}\n"));
        }
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?
            .write_all(text.as_bytes())?;
        self.known.extend(fresh.iter().map(|&(d, _)| d));
        Ok(fresh.len())
    }
}
