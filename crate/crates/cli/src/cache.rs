//! On-disk cache for partition tables, keyed by (k, n_max).
//!
//! Location: `$KINDIV_CACHE_DIR`, else `$XDG_CACHE_HOME/kindiv`, else
//! `$HOME/.cache/kindiv`, else `./.kindiv-cache`. Files use the binary
//! codec from the core crate; a corrupt file is ignored and rebuilt.

use std::fs;
use std::path::PathBuf;

use kindiv_core::exact::{build_pkx_table_with_cap, PartitionTable};
use kindiv_core::table_io;
use kindiv_core::Result;

pub fn cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("KINDIV_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Ok(xdg) = std::env::var("XDG_CACHE_HOME") {
        return PathBuf::from(xdg).join("kindiv");
    }
    if let Ok(home) = std::env::var("HOME") {
        return PathBuf::from(home).join(".cache").join("kindiv");
    }
    PathBuf::from(".kindiv-cache")
}

fn table_path(k: u32, n_max: usize) -> PathBuf {
    cache_dir().join(format!("pkx_k{k}_n{n_max}.tbl"))
}

/// Load the cached table for (k, n_max) or build and persist it.
pub fn load_or_build(
    k: u32,
    n_max: usize,
    n_cap: usize,
    use_cache: bool,
) -> Result<PartitionTable> {
    let path = table_path(k, n_max);
    if use_cache {
        if let Ok(bytes) = fs::read(&path) {
            if let Ok(table) = table_io::decode(&bytes) {
                if table.k() == k && table.n_max() == n_max {
                    return Ok(table);
                }
            }
            eprintln!("warning: ignoring unreadable cache file {}", path.display());
        }
    }
    let table = build_pkx_table_with_cap(k, n_max, n_cap)?;
    if use_cache && fs::create_dir_all(cache_dir()).is_ok() {
        let _ = fs::write(&path, table_io::encode(&table));
    }
    Ok(table)
}
