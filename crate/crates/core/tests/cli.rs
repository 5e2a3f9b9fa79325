use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn telescoping(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telescoping"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn blocks_list_shows_every_block() {
    let out = telescoping(&["blocks", "list"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    let want: [[&str; 6]; 5] = [
        ["A", "5", "-1", "7", "1", "ok"],
        ["B_g", "6+4g", "-2", "6", "1", "ok"],
        ["C", "7", "-3", "5", "1", "ok"],
        ["D", "8", "-4", "4", "1", "ok"],
        ["F", "10", "-6", "2", "1", "ok"],
    ];
    assert_eq!(rows.len(), want.len(), "{text}");
    for w in want {
        assert!(rows.iter().any(|r| r[..] == w[..]), "missing {w:?} in\n{text}");
    }
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["--primes", "3,9", "verify", "theorem1"][..],
        &["--primes", "2", "verify", "theorem1"],
        &["--n-max", "0", "enumerate"],
    ] {
        let out = telescoping(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"blocks\": [").unwrap();
    let out = telescoping(&["--registry", bad.to_str().unwrap(), "blocks", "list"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
}

#[test]
fn verify_prints_ndjson() {
    let out = telescoping(&["--n-max", "2", "--m-max", "2", "--g-max", "1", "verify", "theorem1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(!text.is_empty());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
    }
}

#[test]
fn botany_refuses_single_block_without_override() {
    let base = ["botany", "--family", "1", "--n", "1", "--p", "3"];
    let out = telescoping(&base);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--override-hk"), "{}", stderr(&out));

    let mut forced = base.to_vec();
    forced.push("--override-hk");
    let out = telescoping(&forced);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let first: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(first["hk_applicable"], false);
}

#[test]
fn botany_members() {
    let out = telescoping(&["botany", "--family", "1", "--n", "2", "--p", "5", "--members", "1..3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let members: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(members.len(), 3);
    for (i, m) in members.iter().enumerate() {
        assert_eq!(m["pi1"], "Z_5 + Z_5");
        assert_eq!(m["symplectic"], i == 0);
        assert_eq!((m["e"].as_i64(), m["sigma"].as_i64()), (Some(10), Some(-2)));
        assert_eq!((m["prototype_b2_plus"].as_i64(), m["prototype_b2_minus"].as_i64()), (Some(3), Some(5)));
    }
}

#[test]
fn enumerate_matches_golden_csv() {
    let out = telescoping(&["--n-max", "1", "--m-max", "1", "--g-max", "0", "enumerate"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/enumerate_1_1_0.csv");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&golden, &out.stdout).unwrap();
    }
    assert_eq!(stdout(&out), fs::read_to_string(&golden).unwrap());
}

#[test]
fn catalog_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("catalog.ndjson");
    let cat_s = cat.to_str().unwrap();
    let args = ["--n-max", "1", "--m-max", "1", "--g-max", "0", "--catalog", cat_s, "enumerate"];

    let first = telescoping(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let written = fs::read_to_string(&cat).unwrap();
    let n = written.lines().count();
    assert!(stderr(&first).contains(&format!("{n} new entries")));

    let again = telescoping(&args);
    assert_eq!(again.status.code(), Some(0), "{}", stderr(&again));
    assert!(stderr(&again).contains("0 new entries"));
    assert_eq!(fs::read_to_string(&cat).unwrap(), written);

    let tampered = written.replacen("\"symplectic\":true", "\"symplectic\":false", 1);
    assert_ne!(tampered, written);
    fs::write(&cat, tampered).unwrap();
    let out = telescoping(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("checksum mismatch"), "{}", stderr(&out));
}
