//! Reports are stable text. Each case runs the binary inside the core
//! fixtures directory and compares exit status plus stdout with a checked-in
//! file. `UPDATE_GOLDEN=1 cargo test` rewrites the files.

use std::path::PathBuf;
use std::process::Command;

const CASES: &[(&str, &[&str])] = &[
    ("verify_stable_m", &["verify", "stable", "sample.lcsm", "M.matching"]),
    ("verify_stable_mprime", &["verify", "stable", "sample.lcsm", "Mprime.matching"]),
    ("verify_feasible_m", &["verify", "feasible", "sample.lcsm", "M.matching"]),
    ("compare_m_mprime", &["compare", "sample.lcsm", "M.matching", "Mprime.matching"]),
    ("compare_m_mdoubleprime", &["compare", "sample.lcsm", "M.matching", "Mdoubleprime.matching"]),
    ("compare_m_mprime_json", &["--json", "compare", "sample.lcsm", "M.matching", "Mprime.matching"]),
    ("solve_stable", &["solve", "stable", "sample.lcsm"]),
    ("solve_max_popular", &["solve", "max-popular", "sample.lcsm"]),
    ("solve_popular_maxcard", &["solve", "popular-maxcard", "sample.lcsm"]),
    ("verify_popular_m", &["verify", "popular", "sample.lcsm", "M.matching"]),
    ("verify_popular_mprime", &["verify", "popular", "sample.lcsm", "Mprime.matching"]),
    ("verify_popular_rival", &["verify", "popular", "sample.lcsm", "M.matching", "Mprime.matching"]),
    ("verify_charc_mdoubleprime", &["verify", "charc", "sample.lcsm", "Mdoubleprime.matching"]),
    ("verify_charc_gap", &["verify", "charc", "charc_gap.lcsm", "charc_gap_M.matching"]),
    ("reduce_s2", &["reduce", "--s", "2", "sample.lcsm"]),
    ("reduce_spa", &["reduce", "--spa", "sample.lcsm"]),
    ("gen_seed1", &["gen", "--seed", "1"]),
    (
        "gen_partition",
        &["gen", "--seed", "6", "--residents", "4", "--hospitals", "2", "--branching", "3", "--partition"],
    ),
    ("oracle_count", &["oracle", "--threads", "2", "count", "sample.lcsm"]),
    ("oracle_stable", &["oracle", "stable", "sample.lcsm"]),
    ("oracle_popular_mprime", &["oracle", "popular", "sample.lcsm", "Mprime.matching"]),
    ("oracle_max_popular", &["oracle", "max-popular", "sample.lcsm"]),
    ("bad_level_count", &["reduce", "--s", "9", "sample.lcsm"]),
    ("missing_file", &["solve", "stable", "nope.lcsm"]),
];

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_lcsm"))
        .args(args)
        .current_dir(fixtures())
        .env_remove("LCSM_ORACLE_GUARD")
        .output()
        .unwrap();
    let mut text = format!("exit: {}\n", out.status.code().unwrap_or(-1));
    text.push_str(&String::from_utf8(out.stdout).unwrap());
    if !out.status.success() && out.status.code() == Some(2) {
        text.push_str("--- stderr\n");
        text.push_str(&String::from_utf8(out.stderr).unwrap());
    }
    text
}

#[test]
fn goldens() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut stale = Vec::new();
    for (name, args) in CASES {
        let got = run(args);
        let path = dir.join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        if got != want {
            eprintln!("--- {name}: expected\n{want}--- got\n{got}");
            stale.push(*name);
        }
    }
    assert!(stale.is_empty(), "golden mismatch: {stale:?}");
}

#[test]
fn guard_override_is_logged_and_applied() {
    let out = Command::new(env!("CARGO_BIN_EXE_lcsm"))
        .args(["oracle", "count", "sample.lcsm"])
        .current_dir(fixtures())
        .env("LCSM_ORACLE_GUARD", "3")
        .env_remove("RUST_LOG")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("LCSM_ORACLE_GUARD=3") && err.contains("TOO_LARGE"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_lcsm")).args(["solve", "quickest", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
