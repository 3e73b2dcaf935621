//! On-disk memo of scored design spaces, keyed by `(N, L, bound, version)`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::search::Landscape;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "MLPA_CACHE_DIR";

/// Version stamp written into every entry.
pub const CACHE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    version: String,
    total_elements: u32,
    levels: u32,
    max_count_bound: Option<u32>,
    landscape: Landscape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// The entry existed but could not be used and was rewritten.
    Replaced,
}

#[derive(Debug, Clone)]
pub struct ResultCache {
    dir: PathBuf,
    version: String,
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::with_version(dir, CACHE_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> Self {
        ResultCache {
            dir: dir.into(),
            version: version.to_string(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, total_elements: u32, levels: u32, bound: Option<u32>) -> PathBuf {
        let bound = bound.map_or_else(|| "none".to_string(), |b| b.to_string());
        self.dir.join(format!(
            "v{}-L{levels}-N{total_elements}-b{bound}.json",
            self.version
        ))
    }

    /// Reads a cached design space, returning `Ok(None)` when absent.
    /// Unreadable or mismatched entries are reported as errors.
    pub fn read(
        &self,
        total_elements: u32,
        levels: u32,
        bound: Option<u32>,
    ) -> io::Result<Option<Landscape>> {
        let path = self.path(total_elements, levels, bound);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let entry: Entry = serde_json::from_str(&text)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        if entry.version != self.version
            || entry.total_elements != total_elements
            || entry.levels != levels
            || entry.max_count_bound != bound
            || entry.landscape.total_elements != total_elements
            || entry.landscape.levels != levels
        {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "cache entry key does not match its file name",
            ));
        }
        Ok(Some(entry.landscape))
    }

    pub fn write(&self, landscape: &Landscape) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            version: self.version.clone(),
            total_elements: landscape.total_elements,
            levels: landscape.levels,
            max_count_bound: landscape.max_count_bound,
            landscape: landscape.clone(),
        };
        let path = self.path(
            landscape.total_elements,
            landscape.levels,
            landscape.max_count_bound,
        );
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec(&entry).map_err(io::Error::other)?)?;
        fs::rename(tmp, path)
    }

    /// Returns the cached design space or computes and stores it. Corrupt
    /// entries are recomputed and overwritten with a warning on stderr.
    pub fn get_or_explore(
        &self,
        total_elements: u32,
        levels: u32,
        bound: Option<u32>,
    ) -> (Landscape, Lookup) {
        let status = match self.read(total_elements, levels, bound) {
            Ok(Some(l)) => return (l, Lookup::Hit),
            Ok(None) => Lookup::Miss,
            Err(e) => {
                eprintln!(
                    "warning: discarding cache entry for N={total_elements}, L={levels}: {e}"
                );
                Lookup::Replaced
            }
        };
        let landscape = Landscape::explore(total_elements, levels, bound);
        if let Err(e) = self.write(&landscape) {
            eprintln!(
                "warning: could not write cache in {}: {e}",
                self.dir.display()
            );
        }
        (landscape, status)
    }
}
