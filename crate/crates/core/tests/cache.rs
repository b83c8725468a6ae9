use nodal_kstab::exactnum::{int, rat};
use nodal_kstab::par::Execution;
use nodal_kstab::scan::{cache_key, cached_scan, load_cached, scan_with, store_cached, to_csv, ScanConfig};

fn config() -> ScanConfig {
    ScanConfig::exact(int(1), int(7), rat(1, 4))
}

#[test]
fn warm_cache_returns_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    assert!(load_cached(&config(), dir.path()).unwrap().is_none());
    let cold = cached_scan(&config(), dir.path(), Execution::default()).unwrap();
    let warm = load_cached(&config(), dir.path()).unwrap().expect("stored");
    assert_eq!(cold, warm);
    assert_eq!(to_csv(&warm), to_csv(&scan_with(&config(), Execution::Serial).unwrap()));
}

#[test]
fn key_depends_on_every_parameter() {
    let base = cache_key(&config());
    assert_eq!(base, cache_key(&config()));
    assert_ne!(base, cache_key(&ScanConfig::exact(int(1), int(7), rat(1, 8))));
    assert_ne!(base, cache_key(&ScanConfig::exact(int(2), int(7), rat(1, 4))));
    assert_ne!(base, cache_key(&ScanConfig::sample(int(1), int(7), rat(1, 4), 2)));
    assert_ne!(
        cache_key(&ScanConfig::sample(int(1), int(7), rat(1, 4), 2)),
        cache_key(&ScanConfig::sample(int(1), int(7), rat(1, 4), 3))
    );
    // the directory is not part of the key
    assert_eq!(base, cache_key(&config().with_cache_dir("/elsewhere")));
}

#[test]
fn corrupt_entry_is_a_miss_and_gets_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let report = scan_with(&config(), Execution::Serial).unwrap();
    let path = store_cached(&config(), dir.path(), &report).unwrap();
    std::fs::write(&path, b"{ not json").unwrap();
    assert!(load_cached(&config(), dir.path()).unwrap().is_none());
    let again = cached_scan(&config(), dir.path(), Execution::Serial).unwrap();
    assert_eq!(again, report);
    assert!(load_cached(&config(), dir.path()).unwrap().is_some());
    let leftovers = std::fs::read_dir(dir.path()).unwrap().filter(|e| {
        e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp")
    });
    assert_eq!(leftovers.count(), 0);
}

#[test]
fn entry_for_another_config_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let other = ScanConfig::exact(int(1), int(3), rat(1, 2));
    let report = scan_with(&other, Execution::Serial).unwrap();
    // a report stored under the wrong name must not be served
    let path = store_cached(&other, dir.path(), &report).unwrap();
    let target = dir.path().join(format!("scan-{}.json", cache_key(&config())));
    std::fs::rename(path, &target).unwrap();
    assert!(load_cached(&config(), dir.path()).unwrap().is_none());
}
