use std::io::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{scan_with, ScanConfig, ScanReport};
use crate::error::{Error, Result};
use crate::par::Execution;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "NODAL_KSTAB_CACHE_DIR";

pub fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// SHA-256 of the canonical JSON of the result-determining parameters.
pub fn cache_key(config: &ScanConfig) -> String {
    let canonical = serde_json::json!({
        "schema_version": super::SCHEMA_VERSION,
        "crate_version": env!("CARGO_PKG_VERSION"),
        "spec": config.spec(),
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn cache_path(config: &ScanConfig, dir: &Path) -> PathBuf {
    dir.join(format!("scan-{}.json", cache_key(config)))
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// The cached report, if present and readable for this exact configuration.
pub fn load_cached(config: &ScanConfig, dir: &Path) -> Result<Option<ScanReport>> {
    let path = cache_path(config, dir);
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io(&path)(e)),
    };
    match serde_json::from_slice::<ScanReport>(&bytes) {
        Ok(r) if r.config == config.spec() => Ok(Some(r)),
        _ => Ok(None),
    }
}

/// Write to a temporary file in `dir`, then rename over the final name.
pub fn store_cached(config: &ScanConfig, dir: &Path, report: &ScanReport) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let path = cache_path(config, dir);
    let tmp = dir.join(format!(".{}.{}.tmp", cache_key(config), std::process::id()));
    let body = serde_json::to_vec_pretty(report)?;
    let mut file = std::fs::File::create(&tmp).map_err(io(&tmp))?;
    file.write_all(&body).map_err(io(&tmp))?;
    file.sync_all().map_err(io(&tmp))?;
    drop(file);
    std::fs::rename(&tmp, &path).map_err(io(&path))?;
    Ok(path)
}

/// Serve from the cache when possible; otherwise scan and store. Reports
/// with failed rows are not stored.
pub fn cached_scan(config: &ScanConfig, dir: &Path, exec: Execution) -> Result<ScanReport> {
    if let Some(r) = load_cached(config, dir)? {
        return Ok(r);
    }
    let report = scan_with(config, exec)?;
    if report.failed_rows() == 0 {
        store_cached(config, dir, &report)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn key_ignores_cache_dir_but_not_mode() {
        let a = ScanConfig::exact(int(1), int(2), rat(1, 4));
        let b = a.clone().with_cache_dir("/tmp/elsewhere");
        assert_eq!(cache_key(&a), cache_key(&b));
        let c = ScanConfig::sample(int(1), int(2), rat(1, 4), 1);
        assert_ne!(cache_key(&a), cache_key(&c));
        assert_eq!(cache_key(&a).len(), 64);
    }

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let c = ScanConfig::exact(int(1), int(3), rat(1, 4));
        assert!(load_cached(&c, dir.path()).unwrap().is_none());
        let first = cached_scan(&c, dir.path(), Execution::Serial).unwrap();
        let second = load_cached(&c, dir.path()).unwrap().unwrap();
        assert_eq!(first, second);
        let leftovers: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty());
    }

    #[test]
    fn corrupt_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let c = ScanConfig::exact(int(1), int(2), rat(1, 2));
        std::fs::write(cache_path(&c, dir.path()), b"{ not json").unwrap();
        assert!(load_cached(&c, dir.path()).unwrap().is_none());
        let r = cached_scan(&c, dir.path(), Execution::Serial).unwrap();
        assert_eq!(load_cached(&c, dir.path()).unwrap().unwrap(), r);
    }
}
