//! On-disk τ tables in the TAU1 format, one file per window.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read};
use std::path::{Path, PathBuf};

use crate::divisor::{tau, tau_sieve, TauTable};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "DIVLAB_CACHE_DIR";
const EXT: &str = "tau1";

pub fn file_name(lo: u64, hi: u64) -> String {
    format!("tau_{lo}_{hi}.{EXT}")
}

/// Sieves [lo, hi] and writes it into `dir`, creating the directory if needed.
pub fn build(dir: &Path, lo: u64, hi: u64) -> Result<PathBuf> {
    let table = tau_sieve(lo, hi)?;
    fs::create_dir_all(dir)?;
    let path = dir.join(file_name(lo, hi));
    let tmp = path.with_extension("partial");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        table.write_to(&mut w)?;
        std::io::Write::flush(&mut w)?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn read(path: &Path) -> Result<TauTable> {
    TauTable::read_from(BufReader::new(File::open(path)?))
}

/// Reads the cached window [lo, hi] if present.
pub fn load(dir: &Path, lo: u64, hi: u64) -> Result<Option<TauTable>> {
    let path = dir.join(file_name(lo, hi));
    if !path.exists() {
        return Ok(None);
    }
    read(&path).map(Some)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    pub path: PathBuf,
    pub lo: u64,
    pub len: u64,
}

/// Headers of every `.tau1` file in `dir`, sorted by path.
pub fn list(dir: &Path) -> Result<Vec<CacheEntry>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == EXT))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let mut head = [0u8; 20];
            File::open(&path)?
                .read_exact(&mut head)
                .map_err(|_| Error::Cache(format!("{}: truncated header", path.display())))?;
            if &head[..4] != b"TAU1" {
                return Err(Error::Cache(format!("{}: bad magic", path.display())));
            }
            let lo = u64::from_le_bytes(head[4..12].try_into().expect("8 bytes"));
            let len = u64::from_le_bytes(head[12..20].try_into().expect("8 bytes"));
            Ok(CacheEntry { path, lo, len })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub path: PathBuf,
    pub checked: usize,
    pub error: Option<String>,
}

/// Parses every cached table and compares up to `samples` evenly spaced entries
/// against trial division.
pub fn verify(dir: &Path, samples: usize) -> Result<Vec<VerifyOutcome>> {
    let mut out = Vec::new();
    for entry in list(dir)? {
        let path = entry.path;
        let outcome = match read(&path) {
            Err(e) => VerifyOutcome { path, checked: 0, error: Some(e.to_string()) },
            Ok(table) => {
                let n = table.len();
                let stride = n.div_ceil(samples.max(1)).max(1);
                let mut checked = 0;
                let mut error = None;
                for i in (0..n).step_by(stride).chain(std::iter::once(n - 1)) {
                    let x = table.lo() + i as u64;
                    let expect = tau(x)?;
                    checked += 1;
                    if table.values()[i] != expect {
                        error = Some(format!("tau({x}) = {expect}, cached {}", table.values()[i]));
                        break;
                    }
                }
                VerifyOutcome { path, checked, error }
            }
        };
        out.push(outcome);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_list_verify_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = build(dir.path(), 1000, 1999).unwrap();
        assert!(path.ends_with("tau_1000_1999.tau1"));
        let entries = list(dir.path()).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!((entries[0].lo, entries[0].len), (1000, 1000));
        let table = load(dir.path(), 1000, 1999).unwrap().unwrap();
        assert_eq!(table.get(1024), Some(11));
        let v = verify(dir.path(), 100).unwrap();
        assert_eq!(v[0].error, None);
        assert!(v[0].checked >= 100);
        assert_eq!(load(dir.path(), 1, 2).unwrap(), None);
    }

    #[test]
    fn corrupt_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = build(dir.path(), 1, 50).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 2);
        fs::write(&path, bytes).unwrap();
        let v = verify(dir.path(), 10).unwrap();
        assert!(v[0].error.as_deref().unwrap().contains("truncated"));
    }

    #[test]
    fn missing_dir_lists_nothing() {
        let dir = tempfile::tempdir().unwrap();
        assert!(list(&dir.path().join("absent")).unwrap().is_empty());
    }
}
