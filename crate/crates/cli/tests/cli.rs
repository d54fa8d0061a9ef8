//! End-to-end tests of the `sptdiff` binary: determinism, report emission,
//! exit code categories, provenance headers.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sptdiff"))
}

fn run_in(dir: &Path, arguments: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(arguments)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn simulate_is_bit_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = run_in(
            dir.path(),
            &[
                "simulate", "--mixture", "--m", "24", "--m0-frac", "0.5", "-n", "25", "--seed",
                "11", "-o", name,
            ],
        );
        assert_ok(&out);
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "same seed must give identical bytes");

    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# format=spt-traj v1"));
    // labelled corpus: h0/h1/h2 column present with the right composition
    let h0 = text.lines().filter(|l| l.ends_with(",h0")).count();
    let h1 = text.lines().filter(|l| l.ends_with(",h1")).count();
    let h2 = text.lines().filter(|l| l.ends_with(",h2")).count();
    assert_eq!((h0, h1, h2), (12 * 26, 6 * 26, 6 * 26));
}

#[test]
fn simulate_single_process_and_count_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "simulate", "--process", "drift", "--velocity", "0.5,0.1", "-n", "40", "--count",
            "3", "--seed", "2", "-o", "d.csv",
        ],
    );
    assert_ok(&out);
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3 * 41);

    // zero tracks still writes a parsable header-only file
    let out = run_in(
        dir.path(),
        &[
            "simulate", "--process", "brownian", "--count", "0", "-o", "empty.csv",
        ],
    );
    assert_ok(&out);
    let text = fs::read_to_string(dir.path().join("empty.csv")).unwrap();
    assert!(text.lines().all(|l| l.starts_with('#')));
}

#[test]
fn classify_modes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "simulate", "--mixture", "--m", "40", "--m0-frac", "0.5", "-n", "24", "--seed",
            "5", "-o", "mix.csv",
        ],
    );
    assert_ok(&out);

    for mode in ["single", "bh", "adaptive-bh", "msd"] {
        let out_dir = format!("out-{mode}");
        let out = run_in(
            dir.path(),
            &[
                "classify", "-i", "mix.csv", "--mode", mode, "--table-replicates", "2000",
                "--out-dir", &out_dir,
            ],
        );
        assert_ok(&out);
        let decisions = fs::read_to_string(dir.path().join(&out_dir).join("decisions.csv")).unwrap();
        assert!(decisions.starts_with("# format=spt-report v1"));
        assert_eq!(decisions.lines().count(), 2 + 40, "mode {mode}");
        assert!(dir.path().join(&out_dir).join("summary.txt").exists());
        let svg = fs::read_to_string(dir.path().join(&out_dir).join("map.svg")).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 40);
    }

    // the calibration table was cached once and reused
    let tables: Vec<_> = fs::read_dir(dir.path().join("tables")).unwrap().collect();
    assert_eq!(tables.len(), 1);
}

#[test]
fn classify_applies_filters() {
    let dir = tempfile::tempdir().unwrap();
    // one healthy track, one with too few distinct positions
    let mut text = String::from("# dt=0.5\n");
    for i in 0..30 {
        text.push_str(&format!("good,{i},{}.0,0.0\n", i));
    }
    for i in 0..30 {
        text.push_str(&format!("still,{i},1.0,1.0\n"));
    }
    fs::write(dir.path().join("in.csv"), text).unwrap();
    let out = run_in(
        dir.path(),
        &["classify", "-i", "in.csv", "--mode", "msd", "--out-dir", "r"],
    );
    assert_ok(&out);
    let decisions = fs::read_to_string(dir.path().join("r/decisions.csv")).unwrap();
    assert!(decisions.contains("good"));
    assert!(!decisions.contains("still"));
    let skipped = fs::read_to_string(dir.path().join("r/skipped.txt")).unwrap();
    assert!(skipped.contains("still") && skipped.contains("distinct"));
}

#[test]
fn exit_codes_by_category() {
    let dir = tempfile::tempdir().unwrap();
    // missing input file -> I/O error (4)
    let out = run_in(dir.path(), &["classify", "-i", "nope.csv"]);
    assert_eq!(out.status.code(), Some(4));

    // malformed data row -> parse error (3)
    fs::write(dir.path().join("bad.csv"), "a,0,zzz,0\n").unwrap();
    let out = run_in(dir.path(), &["classify", "-i", "bad.csv"]);
    assert_eq!(out.status.code(), Some(3));

    // unknown flag -> usage error from the parser (2)
    let out = run_in(dir.path(), &["classify", "--does-not-exist"]);
    assert_eq!(out.status.code(), Some(2));

    // invalid parameter -> 2
    let out = run_in(
        dir.path(),
        &["simulate", "--process", "fbm", "--hurst", "1.5", "-o", "x.csv"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_command_persists_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "table", "-n", "12", "-N", "2000", "--seed", "9", "--out-dir", "t",
    ];
    let first = run_in(dir.path(), &args);
    assert_ok(&first);
    let entries: Vec<_> = fs::read_dir(dir.path().join("t")).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let bytes = fs::read(entries[0].as_ref().unwrap().path()).unwrap();

    // second run loads the cached file and reports identical quantiles
    let second = run_in(dir.path(), &args);
    assert_ok(&second);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(bytes, fs::read(entries[0].as_ref().unwrap().path()).unwrap());
}

#[test]
fn bench_outputs_carry_provenance_and_reproduce() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bench", "donsker", "-n", "100", "--replicates", "2000", "--seed", "31", "--out-dir",
        "b",
    ];
    assert_ok(&run_in(dir.path(), &args));
    let csv = fs::read_to_string(dir.path().join("b/donsker_cdf.csv")).unwrap();
    assert!(csv.starts_with("# tool=sptdiff v"));
    assert!(csv.contains("# seed=31"));
    assert!(csv.contains("t,ecdf,asymptotic_cdf"));
    let summary = fs::read_to_string(dir.path().join("b/donsker_summary.txt")).unwrap();
    assert!(summary.contains("Kolmogorov distance"));

    // byte-reproducible given the seed
    assert_ok(&run_in(dir.path(), &args));
    let again = fs::read_to_string(dir.path().join("b/donsker_cdf.csv")).unwrap();
    assert_eq!(csv, again);
}

#[test]
fn bench_fdr_sweep_emits_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench", "fdr-sweep", "--m", "16", "--m0-fracs", "0,0.5", "-n", "16",
            "--replicates", "60", "--table-replicates", "2000", "--seed", "8", "--out-dir", "f",
        ],
    );
    assert_ok(&out);
    let csv = fs::read_to_string(dir.path().join("f/fdr_sweep.csv")).unwrap();
    assert!(csv.contains("m,m0_frac,mode,fdr_pct"));
    // two fractions x two modes
    assert_eq!(csv.lines().filter(|l| l.contains(",standard,") || l.contains(",adaptive,")).count(), 4);
    assert!(dir.path().join("f/pvalue_quartiles.csv").exists());
}

#[test]
fn bench_quantile_and_power_fast() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench", "quantile-table", "--sizes", "10", "--replicates", "150000", "--fast",
            "--out-dir", "q",
        ],
    );
    assert_ok(&out);
    let csv = fs::read_to_string(dir.path().join("q/quantile_table.csv")).unwrap();
    assert!(csv.contains("# replicates=1500"));
    assert!(csv.contains("asymptotic,,"));

    let out = run_in(
        dir.path(),
        &[
            "bench", "power-single", "--model", "drift", "--grid", "0.4,0.8", "--sizes",
            "10,20", "--replicates", "400", "--table-replicates", "2000", "--out-dir", "p",
        ],
    );
    assert_ok(&out);
    let csv = fs::read_to_string(dir.path().join("p/power_drift.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#') && !l.starts_with("param")).count(), 4);
    // stronger drift is easier to detect
    let grab = |needle: &str| -> f64 {
        csv.lines()
            .find(|l| l.starts_with(needle))
            .unwrap()
            .split(',')
            .next_back()
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(grab("0.8,20") >= grab("0.4,10"));
}
