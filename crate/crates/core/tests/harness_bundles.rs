use std::fs;

use wsaic::harness::{compare, read_bundle, run_batch, CompareMetric, ExperimentConfig};
use wsaic::metrics::Verdict;

fn config(dir: &std::path::Path, extra: &str) -> ExperimentConfig {
    let text = format!(
        "function = [\"F6\", \"F5\"]\nbudget = 3000\nruns = 30\nbase_seed = 11\nworkers = 2\n{extra}\n[algorithm]\nid = \"wsa-ic\"\n"
    );
    let mut cfg = ExperimentConfig::from_toml(&text).unwrap();
    cfg.output = Some(dir.to_path_buf());
    cfg
}

#[test]
fn summary_round_trips_from_run_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs = run_batch(&config(tmp.path(), "")).unwrap();
    assert_eq!(dirs.len(), 2);
    for d in dirs {
        let b = read_bundle(&d).unwrap();
        let s = &b.summary;
        let r = b.recomputed().unwrap();
        assert_eq!(b.runs.len(), 30);
        assert_eq!(b.runs[0].seed, 11);
        assert_eq!(b.runs[29].seed, 40);
        for (x, y) in [
            (s.success_rate, r.success_rate),
            (s.anof_mean, r.anof_mean),
            (s.anof_std, r.anof_std),
            (s.quality.unwrap().0, r.quality.unwrap().0),
            (s.quality.unwrap().1, r.quality.unwrap().1),
        ] {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
        }
        let traces = fs::read_dir(d.join("traces")).unwrap().count();
        assert_eq!(traces, 30);
    }
}

#[test]
fn reruns_are_byte_identical_regardless_of_workers() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_batch(&config(a.path(), "")).unwrap();
    let mut cfg = config(b.path(), "");
    cfg.workers = Some(1);
    run_batch(&cfg).unwrap();
    for bundle in ["F6-wsa-ic", "F5-wsa-ic"] {
        for file in ["runs.csv", "summary.csv", "archives/run_20.csv", "traces/run_11.csv"] {
            let x = fs::read(a.path().join(bundle).join(file)).unwrap();
            let y = fs::read(b.path().join(bundle).join(file)).unwrap();
            assert_eq!(x, y, "{bundle}/{file}");
        }
    }
}

#[test]
fn identical_results_compare_equal_and_tally_partitions() {
    let a = tempfile::tempdir().unwrap();
    run_batch(&config(a.path(), "")).unwrap();
    let table = compare(a.path(), a.path(), CompareMetric::Anof).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows.iter().all(|r| r.result.verdict == Verdict::Equal));
    let (p, e, m) = table.tally();
    assert_eq!(p + e + m, table.rows.len());
    let csv = table.to_csv();
    assert!(csv.lines().last().unwrap().starts_with("tally,+,0,=,2,-,0"));
}

#[test]
fn mismatched_run_counts_are_rejected() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_batch(&config(a.path(), "")).unwrap();
    let mut cfg = config(b.path(), "");
    cfg.runs = Some(31);
    run_batch(&cfg).unwrap();
    assert!(compare(a.path(), b.path(), CompareMetric::Anof).is_err());
}

#[test]
fn failed_write_leaves_no_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), "");
    run_batch(&cfg).unwrap();
    let bundle = tmp.path().join("F6-wsa-ic");
    assert!(bundle.join("summary.csv").exists());
    // a file where the trace directory should be makes the rewrite fail midway
    fs::remove_dir_all(bundle.join("traces")).unwrap();
    fs::write(bundle.join("traces"), b"blocker").unwrap();
    assert!(run_batch(&cfg).is_err());
    assert!(!bundle.join("summary.csv").exists());
    assert!(read_bundle(&bundle).is_err());
}

#[test]
fn unwritable_output_fails_before_running() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let mut cfg = config(tmp.path(), "");
    cfg.output = Some(blocker.join("sub"));
    cfg.budget = Some(u64::MAX / 2);
    assert!(run_batch(&cfg).is_err());
}
