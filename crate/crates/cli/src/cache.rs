//! On-disk Bott cache: a version line, then one `key<TAB>json` entry per line.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fano5_core::engine::{BottResult, Engine};

pub const VERSION_LINE: &str = "fano5-bott-cache v1";

/// `$FANO5_CACHE`, else `$XDG_CACHE_HOME/fano5/bott.tsv`, else `~/.cache/fano5/bott.tsv`.
pub fn default_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("FANO5_CACHE") {
        return (!p.is_empty()).then(|| PathBuf::from(p));
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("fano5").join("bott.tsv"))
}

/// Entries of a cache file. A missing file is empty; a wrong version or a bad line is skipped
/// with a warning, since every entry can be recomputed.
pub fn load(path: &Path, warnings: &mut Vec<String>) -> BTreeMap<String, BottResult> {
    let mut out = BTreeMap::new();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return out,
        Err(e) => {
            warnings.push(format!("cache {} unreadable: {e}", path.display()));
            return out;
        }
    };
    let mut lines = text.lines();
    if lines.next() != Some(VERSION_LINE) {
        warnings.push(format!("cache {} has a different version, ignored", path.display()));
        return out;
    }
    for (n, line) in lines.enumerate() {
        let parsed = line.split_once('\t').and_then(|(k, v)| Some((k, serde_json::from_str::<BottResult>(v).ok()?)));
        match parsed {
            Some((k, v)) => {
                out.insert(k.to_string(), v);
            }
            None => warnings.push(format!("cache {} line {}: malformed, skipped", path.display(), n + 2)),
        }
    }
    out
}

/// Merges `entries` into the file at `path` and replaces it atomically.
pub fn store(path: &Path, entries: &BTreeMap<String, BottResult>) -> io::Result<()> {
    let mut ignored = Vec::new();
    let mut all = load(path, &mut ignored);
    let before = all.len();
    all.extend(entries.iter().map(|(k, v)| (k.clone(), v.clone())));
    if all.len() == before && ignored.is_empty() && path.exists() {
        return Ok(());
    }
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    writeln!(tmp, "{VERSION_LINE}")?;
    for (k, v) in &all {
        writeln!(tmp, "{k}\t{}", serde_json::to_string(v).map_err(io::Error::other)?)?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn preload(engine: &Engine, path: &Path, warnings: &mut Vec<String>) {
    engine.preload_bott(load(path, warnings));
}

pub fn save(engine: &Engine, path: &Path, warnings: &mut Vec<String>) {
    let entries: BTreeMap<_, _> = engine.bott_entries().into_iter().collect();
    if let Err(e) = store(path, &entries) {
        warnings.push(format!("cache {} not written: {e}", path.display()));
    }
}
