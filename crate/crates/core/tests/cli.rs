use std::path::PathBuf;
use std::process::{Command, Output};

fn whrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(rel)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn rank_exit_codes() {
    let o = whrank(&["rank", "--family", "cpm:11,5,3"]);
    assert_eq!(o.status.code(), Some(3));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split('\t').collect();
    assert_eq!((cols[7], cols[8]), ("1", "1"));

    assert_eq!(whrank(&["rank", "--family", "alt:5"]).status.code(), Some(0));
    assert_eq!(
        whrank(&["rank", "--family", "psl:2,11", "--aut", "explicit"]).status.code(),
        Some(3)
    );
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["rank"][..],
        &["rank", "--family", "cyc:5", "--group", "x.group"],
        &["rank", "--family", "cyc:5", "--bogus"],
        &["rank", "--family", "cyc:5", "--cap", "0"],
        &["rank", "--family", "cyc:5", "--aut", "sideways"],
        &["rank", "--family", "zzz:5"],
        &["frobnicate"],
        &["family", "cpm"],
    ] {
        let o = whrank(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(whrank(&["--help"]).status.code(), Some(0));
    assert_eq!(whrank(&["--version"]).status.code(), Some(0));
}

#[test]
fn computation_errors_exit_2() {
    let o = whrank(&["rank", "--family", "sym:8", "--cap", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("building group"));
    let o = whrank(&["rank", "--family", "cyc:4", "--aut", "explicit"]);
    assert_eq!(o.status.code(), Some(2));
    let o = whrank(&["rank", "--family", "sym:5", "--aut", "search", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("automorphisms"));
    let o = whrank(&["rank", "--group", "/nonexistent.group"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_reports_round_trip() {
    let o = whrank(&["rank", "--family", "psl:2,13", "--format", "json"]);
    let r: whrank::RankReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.is_consistent());
    assert!(r.n > 0);
    let again: whrank::RankReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn classdata_subcommand() {
    let o = whrank(&["classdata", &data("classdata/j1.ctbl")]);
    assert_eq!(o.status.code(), Some(3));
    let o = whrank(&["classdata", &data("classdata/suz.ctbl"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: whrank::RankReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((r.bass_rank, r.n), (3, 0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ctbl");
    std::fs::write(&bad, "%classtable X order 2\nclass 1A order 1 size 1\nclass 2A order 2 size 2\n")
        .unwrap();
    let o = whrank(&["classdata", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn family_sweep_reports_predictions() {
    let o = whrank(&["family", "cpm:3..7", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let n: Vec<&str> = text.lines().skip(1).map(|l| l.split('\t').nth(2).unwrap()).collect();
    assert_eq!(n, ["0", "0", "1", "0", "2"]);
    assert!(text.lines().skip(1).all(|l| l.ends_with("\tyes")));
}

#[test]
fn survey_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    for spec in ["cyc:6", "dih:5", "cpm:11,5,3", "ab:2x2"] {
        let g = spec.parse::<whrank::FamilySpec>().unwrap().build(1000).unwrap();
        let name = format!("{}.group", spec.replace([':', ','], "_"));
        std::fs::write(dir.path().join(name), whrank::io::format_group(&g, spec)).unwrap();
    }
    std::fs::write(dir.path().join("zz_broken.group"), "%group broken\n%perm 2\ngen (1 3)\n").unwrap();
    let path = dir.path().to_str().unwrap();
    let one = whrank(&["survey", path, "--jobs", "1"]);
    let four = whrank(&["survey", path, "--jobs", "4"]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.status.code(), Some(2));
    let text = stdout(&one);
    assert!(text.contains("# first order with N > 0: 55"), "{text}");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);

    let empty = tempfile::tempdir().unwrap();
    let o = whrank(&["survey", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn aut_file_policy() {
    let dir = tempfile::tempdir().unwrap();
    let aut = dir.path().join("q8.aut");
    let q8 = data("groups/q8.group");
    let o = whrank(&["aut", "--group", &q8, "--output", aut.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert_eq!(row.split('\t').nth(2), Some("24"));
    let policy = format!("file:{}", aut.display());
    let o = whrank(&["rank", "--group", &q8, "--aut", &policy]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Aut-file"));
}

#[test]
fn classes_output_parses_as_class_data() {
    let o = whrank(&["classes", "--family", "psl:2,7"]);
    assert_eq!(o.status.code(), Some(0));
    let t: whrank::ClassTable = stdout(&o).parse().unwrap();
    assert_eq!(t.len(), 6);
    assert_eq!(t.aut_action.len(), 1);
}

#[test]
fn selftest_passes() {
    let o = whrank(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
