use std::fs;
use std::process::Command;
use std::sync::{Arc, Barrier};

use pcl_core::classgroup::{class_coordinates, class_group, ClassGroupConfig};
use pcl_core::numberfield::{build_cubic_order, build_sextic_order, sextic_special_ideals};
use pcl_core::predictor::predict;
use pcl_core::veritool::cache::{Cache, CacheEntry, Lookup, SCHEMA_VERSION};
use pcl_core::veritool::{Analyzer, FieldSelection, Outcome, Provenance, Verdict, VerificationReport};

fn cfg(seed: u64) -> ClassGroupConfig {
    ClassGroupConfig { seed, ..ClassGroupConfig::default() }
}

fn pcl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pcl")).args(args).env_remove("PCL_CACHE_DIR").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn store_then_load_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let o = build_sextic_order(61).unwrap();
    let cg = class_group(&o, &cfg(1)).unwrap();
    let entry = CacheEntry::new(&o, cg.clone());
    cache.store(&entry).unwrap();
    let Lookup::Hit(back) = cache.load(&o) else { panic!("expected a hit") };
    assert_eq!(*back, entry);
    // identical SNF coordinates from the reloaded group
    let s = sextic_special_ideals(&o).unwrap();
    for ideal in [&s.p.ideal, &s.q.ideal, &s.i.as_ref().unwrap().ideal] {
        assert_eq!(class_coordinates(&o, &back.class_group, ideal).unwrap(), class_coordinates(&o, &cg, ideal).unwrap());
    }
    assert!(matches!(cache.load(&build_sextic_order(67).unwrap()), Lookup::Miss));
}

#[test]
fn version_bump_and_corruption_are_misses() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let o = build_cubic_order(7).unwrap();
    let mut entry = CacheEntry::new(&o, class_group(&o, &cfg(1)).unwrap());
    entry.schema_version = SCHEMA_VERSION + 1;
    cache.store(&entry).unwrap();
    assert!(matches!(cache.load(&o), Lookup::Stale(v) if v == SCHEMA_VERSION + 1));

    fs::write(cache.path(o.label), "{\"schema_version\": 1, \"field\": ").unwrap();
    assert!(matches!(cache.load(&o), Lookup::Corrupt(_)));

    // an entry for another field stored under this name
    let other = build_cubic_order(13).unwrap();
    let foreign = CacheEntry::new(&other, class_group(&other, &cfg(1)).unwrap());
    fs::write(cache.path(o.label), serde_json::to_string(&foreign).unwrap()).unwrap();
    assert!(matches!(cache.load(&o), Lookup::Corrupt(_)));

    // the analyzer warns, recomputes and repairs the entry
    let an = Analyzer::new(cfg(1), Some(cache.clone()));
    let a = an.analyze(7, FieldSelection::L).unwrap();
    assert_eq!(a.meta.warnings.len(), 1);
    assert_eq!(a.meta.provenance, vec![(o.label, Provenance::Computed)]);
    assert!(matches!(cache.load(&o), Lookup::Hit(_)));
    let again = an.analyze(7, FieldSelection::L).unwrap();
    assert_eq!(again.meta.provenance, vec![(o.label, Provenance::Cache)]);
    assert_eq!(again.cl3_l, a.cl3_l);
}

#[test]
fn concurrent_writers_leave_one_whole_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let o = build_cubic_order(61).unwrap();
    let entries: Vec<CacheEntry> = (1..=8).map(|s| CacheEntry::new(&o, class_group(&o, &cfg(s)).unwrap())).collect();
    for round in 0..5 {
        let barrier = Arc::new(Barrier::new(entries.len()));
        std::thread::scope(|scope| {
            for e in &entries {
                let (barrier, cache) = (barrier.clone(), cache.clone());
                scope.spawn(move || {
                    barrier.wait();
                    cache.store(e).unwrap();
                });
            }
        });
        let Lookup::Hit(got) = cache.load(&o) else { panic!("round {round}: no whole entry") };
        assert!(entries.contains(&got), "round {round}");
    }
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 1, "{leftovers:?}");
}

#[test]
fn verification_of_table_primes() {
    let an = Analyzer::new(cfg(1), None);
    for (p, u) in [(7, 1), (61, 3), (13, 1), (67, 3)] {
        let v = an.verify(p).unwrap();
        assert_eq!(v.outcome, Outcome::Match, "p={p}");
        assert!(v.claims.iter().all(|c| c.verdict == Verdict::Match), "p={p}");
        assert_eq!(v.computed.u(), Some(u));
    }
    // p ≡ 1 (mod 9): the rank is computed but not predicted
    let v = an.verify(271).unwrap();
    assert_eq!(v.outcome, Outcome::Match);
    assert_eq!(v.computed.rank3, Some(2));
    let rank = v.claims.iter().find(|c| c.claim == "rank3").unwrap();
    assert_eq!(rank.verdict, Verdict::NotPredicted);
    assert_eq!(an.verify(307).unwrap().computed.rank3, Some(1));
}

#[test]
fn doctored_reports_are_flagged() {
    let an = Analyzer::new(cfg(1), None);
    let mut a = an.analyze(61, FieldSelection::Both).unwrap();
    a.principal_p = Some(true);
    let v = VerificationReport::new(predict(61).unwrap(), a.clone(), cfg(1));
    assert_eq!(v.outcome, Outcome::Mismatch);
    assert_eq!(v.outcome.exit_code(), 1);
    a.principal_p = None;
    a.incomplete = Some("k: effort exhausted".into());
    let v = VerificationReport::new(predict(61).unwrap(), a, cfg(1));
    assert_eq!(v.outcome, Outcome::Incomplete);
    assert_eq!(v.outcome.exit_code(), 3);
}

#[test]
fn cli_exit_codes() {
    assert_eq!(pcl(&["predict", "211"]).0, 0);
    assert_eq!(pcl(&["predict", "4"]).0, 2);
    assert_eq!(pcl(&["predict", "abc"]).0, 2);
    assert_eq!(pcl(&["frobnicate"]).0, 2);
    assert_eq!(pcl(&["table", "4"]).0, 2);
    assert_eq!(pcl(&["verify", "--range", "9..3"]).0, 2);
    assert_eq!(pcl(&["verify", "--range", "3..20", "--mod9", "2"]).0, 2);
    assert_eq!(pcl(&["analyze", "7", "--bound-mult", "-1"]).0, 2);
    assert_eq!(pcl(&["analyze", "7", "--effort", "0"]).0, 2);
    let (code, out, _) = pcl(&["verify", "--range", "7..100", "--mod9", "4,7"]);
    assert_eq!(code, 0);
    assert!(out.contains("summary: 8 primes, 8 MATCH, 0 MISMATCH, 0 INCOMPLETE"), "{out}");
}

#[test]
fn cli_field_names_are_fixed() {
    let header = "p\tresidue9\tsymbol3\tcl3_L\tcl3_k\trank3\ts\tu\tprincipal_I0\tprincipal_I\tprincipal_P0\tprincipal_P\tprincipal_Q";
    for args in [&["--format", "tsv", "predict", "61"][..], &["--format", "tsv", "analyze", "61"], &["--format", "tsv", "verify", "61"]] {
        let (code, out, _) = pcl(args);
        assert_eq!(code, 0);
        assert!(out.starts_with(header), "{args:?}: {out}");
    }
    let (_, out, _) = pcl(&["--format", "json", "analyze", "61"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["cl3_k"], serde_json::json!([3, 3]));
    assert_eq!(v["u"], 3);
    assert_eq!(v["principal_P"], false);
    let (_, out, _) = pcl(&["--format", "json", "analyze", "2", "--pure", "--field", "L"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["class_number"], 1);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for format in ["text", "json", "tsv"] {
        let args = ["--format", format, "verify", "67", "--seed", "5", "--effort", "2"];
        let cold = pcl(&[&["--cache-dir", d][..], &args].concat());
        let warm = pcl(&[&["--cache-dir", d][..], &args].concat());
        let uncached = pcl(&args);
        assert_eq!(cold.0, 0);
        assert_eq!(cold.1, warm.1, "{format}");
        assert_eq!(cold.1, uncached.1, "{format}");
    }
    let (code, out, _) = pcl(&["table", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, pcl(&["table", "3"]).1);
    assert_eq!(out.lines().count(), 17);
    assert!(out.lines().nth(10).unwrap().starts_with("223\t1\t≠1\t[3]\t[3]\t≠[0]\t≠[0]\t[0]\t[0]"));
}

#[test]
fn cache_dir_from_environment_and_corrupt_entry_warning() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_pcl"))
            .args(["analyze", "13", "--field", "L"])
            .env("PCL_CACHE_DIR", dir.path())
            .output()
            .unwrap();
        (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
    };
    let first = run();
    assert_eq!(first.0, 0);
    let path = dir.path().join("L-13.json");
    assert!(path.exists());
    fs::write(&path, "not json").unwrap();
    let second = run();
    assert_eq!(second.0, 0);
    assert!(second.2.contains("warning: ignoring corrupt cache entry"), "{}", second.2);
    assert_eq!(first.1, second.1);
    assert!(serde_json::from_str::<serde_json::Value>(&fs::read_to_string(&path).unwrap()).is_ok());
}
