//! End-to-end runs of the `expsum` binary and the table cache.

use std::path::Path;
use std::process::{Command, Output};

use expsum::families::{master_table, member_table};
use expsum::report::RunManifest;
use expsum::report::{cache_table, load_table, read_table, TableKey, CACHE_ENV, MAGIC};
use expsum::{Error, FamilySpec, OddPrime, SignConvention, TransformMethod};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expsum"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove(CACHE_ENV)
        .output()
        .unwrap()
}

#[test]
fn sum_prints_six_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "sum",
            "--family",
            "kloosterman",
            "--a",
            "1",
            "--b",
            "1",
            "--p",
            "5",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "0.170820");
    assert!(dir.path().join("sum.csv").exists());
    assert!(dir.path().join("sum.manifest.json").exists());
}

#[test]
fn maxscan_all_has_a_row_per_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["maxscan", "--family", "birch-dilate", "--p", "101", "--all"],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("maxscan.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a,M,argmax_H"));
    assert_eq!(lines.count(), 100);
}

#[test]
fn bad_input_exits_one_with_a_single_line() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["sum", "--family", "kloosterman", "--a", "1", "--p", "91"][..],
        &[
            "sum",
            "--family",
            "kloosterman",
            "--a",
            "1",
            "--p",
            "5",
            "--frobnicate",
        ],
        &["maxscan", "--family", "kloosterman", "--p", "2", "--all"],
    ] {
        let o = run(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    }
}

#[test]
fn manifests_describe_the_same_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "moments",
        "--family",
        "kloosterman",
        "--p",
        "101",
        "--k",
        "1,2",
    ];
    let read = || -> RunManifest {
        assert!(run(&args, dir.path()).status.success());
        serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("moments.manifest.json")).unwrap(),
        )
        .unwrap()
    };
    let (a, b) = (read(), read());
    assert!(a.same_run(&b));
    assert_eq!(a.p, Some(101));
    assert!(a.command_line.iter().any(|s| s == "moments"));
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), a);
}

#[test]
fn selftest_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["selftest"], dir.path());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(
        stdout
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count()
            >= 13
    );
    // the constant-term bound does not hold numerically, so the run is red
    let failed = stdout.lines().any(|l| l.starts_with("FAIL"));
    assert_eq!(o.status.code(), Some(if failed { 2 } else { 0 }));
    assert!(dir.path().join("selftest.json").exists());
}

#[test]
fn cache_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = OddPrime::new(101).unwrap();
    for table in [
        member_table(&FamilySpec::kloosterman(1), 7, p, TransformMethod::ChirpDft).unwrap(),
        member_table(&FamilySpec::birch(), 3, p, TransformMethod::ChirpDft).unwrap(),
        master_table(&FamilySpec::kloosterman(1), p).unwrap(),
    ] {
        let key = TableKey::of(&table);
        cache_table(dir.path(), &table).unwrap();
        let back = load_table(dir.path(), &key).unwrap().unwrap();
        let bits = |t: &expsum::SumTable| {
            t.values
                .iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&back), bits(&table));
        assert_eq!(back.source, table.source);
    }
}

#[test]
fn cache_file_names_separate_families() {
    let p = OddPrime::new(101).unwrap();
    let names: Vec<String> = [
        member_table(&FamilySpec::kloosterman(1), 7, p, TransformMethod::ChirpDft).unwrap(),
        member_table(&FamilySpec::kloosterman(1), 8, p, TransformMethod::ChirpDft).unwrap(),
        member_table(&FamilySpec::kloosterman(2), 7, p, TransformMethod::ChirpDft).unwrap(),
        member_table(
            &FamilySpec::kloosterman(1).with_sign(SignConvention::Plus),
            7,
            p,
            TransformMethod::ChirpDft,
        )
        .unwrap(),
        member_table(&FamilySpec::birch(), 7, p, TransformMethod::ChirpDft).unwrap(),
        member_table(
            &FamilySpec::kloosterman_dilate(),
            7,
            p,
            TransformMethod::ChirpDft,
        )
        .unwrap(),
    ]
    .iter()
    .map(|t| TableKey::of(t).file_name())
    .collect();
    let mut unique = names.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), names.len(), "{names:?}");
}

#[test]
fn damaged_cache_files_are_integrity_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = OddPrime::new(101).unwrap();
    let table = member_table(&FamilySpec::kloosterman(1), 7, p, TransformMethod::ChirpDft).unwrap();
    let key = TableKey::of(&table);
    let path = cache_table(dir.path(), &table).unwrap();
    let good = std::fs::read(&path).unwrap();
    assert_eq!(&good[..8], MAGIC);

    std::fs::write(&path, &good[..good.len() - 16]).unwrap();
    assert!(matches!(read_table(&path, &key), Err(Error::Integrity(_))));

    let mut bad = good.clone();
    bad[0] = b'X';
    std::fs::write(&path, &bad).unwrap();
    assert!(matches!(read_table(&path, &key), Err(Error::Integrity(_))));

    // every entry far outside the Weil bound, so any spot check trips
    let mut wild = good[..45].to_vec();
    for _ in 0..101 {
        wild.extend_from_slice(&5.0f64.to_le_bytes());
        wild.extend_from_slice(&0.0f64.to_le_bytes());
    }
    std::fs::write(&path, &wild).unwrap();
    assert!(matches!(read_table(&path, &key), Err(Error::Integrity(_))));
}

#[test]
fn cli_cache_honours_env_and_rejects_corruption() {
    let cache = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let args = [
        "table",
        "--family",
        "kloosterman",
        "--a",
        "7",
        "--p",
        "101",
        "--cache",
        "--out",
    ];
    let table = |out: &Path| {
        Command::new(env!("CARGO_BIN_EXE_expsum"))
            .args(args)
            .arg(out)
            .env(CACHE_ENV, cache.path())
            .output()
            .unwrap()
    };
    assert!(table(out.path()).status.success());
    let files: Vec<_> = std::fs::read_dir(cache.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 1);
    let first = std::fs::read(out.path().join("table.csv")).unwrap();

    assert!(table(out.path()).status.success());
    let m: RunManifest = serde_json::from_str(
        &std::fs::read_to_string(out.path().join("table.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m.cache_hits, 1);
    assert_eq!(std::fs::read(out.path().join("table.csv")).unwrap(), first);

    let bytes = std::fs::read(&files[0]).unwrap();
    std::fs::write(&files[0], &bytes[..bytes.len() / 2]).unwrap();
    assert_eq!(table(out.path()).status.code(), Some(2));
}
