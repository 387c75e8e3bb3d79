use std::process::{Command, Output};

fn donorspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_donorspin")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn freq_reports_nu_a() {
    let o = donorspin(&["freq", "--B", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "B,nu_A,nu_A_asymptotic,nu_A_plus,nu_A_minus");
    let nu_a: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((nu_a - 92.6).abs() / 92.6 < 0.005);
}

#[test]
fn levels_json() {
    let o = donorspin(&["levels", "--X", "1", "--format", "json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.trim_start().starts_with('['));
    assert_eq!(out.matches("energy_MHz").count(), 4);
}

#[test]
fn report_topics() {
    let o = donorspin(&["report", "nu_A", "--B", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("published") && out.contains("deviation"));
    let o = donorspin(&["report", "crossing", "--B", "2", "--material", "si"]);
    assert!(stdout(&o).contains("1.43"));
    let o = donorspin(&["report", "nu_J", "--B", "2", "--J", "30e3", "--format", "json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"published\": 0.075"));
}

#[test]
fn unknown_topic_is_usage_error() {
    let o = donorspin(&["report", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonsense"));
}

#[test]
fn sweep_preset_is_deterministic() {
    let a = donorspin(&["sweep", "--preset", "fig2"]);
    let b = donorspin(&["sweep", "--preset", "fig2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 202);
}

#[test]
fn sweep_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let flagged = dir.path().join("flagged.toml");
    std::fs::write(&flagged, "target = \"gate_potential\"\n[variable]\nname = \"z\"\nfrom = -1\nto = 1\npoints = 5\n").unwrap();
    let o = donorspin(&["sweep", "--spec", flagged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).lines().count(), 6);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "target = \"nu_a\"\n[variable]\nname = \"B\"\nfrom = 1\nto = 1\npoints = 5\n").unwrap();
    assert_eq!(donorspin(&["sweep", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(donorspin(&["sweep", "--spec", "/does/not/exist.toml"]).status.code(), Some(2));
    assert_eq!(donorspin(&["sweep", "--preset", "fig99"]).status.code(), Some(2));
}

#[test]
fn sweep_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stark.json");
    let o = donorspin(&["sweep", "--preset", "stark", "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"constants\": \"paper-1\""));
    assert!(text.contains("\"delta_nu\""));
}

#[test]
fn constants_flag_changes_stamp() {
    let o = donorspin(&["sweep", "--preset", "exchange", "--constants", "codata", "--format", "json"]);
    assert!(stdout(&o).contains("codata-2018"));
}

#[test]
fn stark_strong_field_flags() {
    assert_eq!(donorspin(&["stark", "--V", "0.5"]).status.code(), Some(0));
    assert_eq!(donorspin(&["stark", "--V", "4"]).status.code(), Some(3));
}

#[test]
fn two_donor_views() {
    let o = donorspin(&["two-donor", "--J", "30e3", "--view", "spectrum"]);
    assert_eq!(stdout(&o).lines().count(), 17);
    let o = donorspin(&["two-donor", "--view", "blocks"]);
    assert_eq!(stdout(&o).lines().count(), 17);
    let o = donorspin(&["two-donor", "--view", "reduced", "--A-a", "120", "--A-b", "100"]);
    assert_eq!(stdout(&o).lines().count(), 17);
    let o = donorspin(&["two-donor", "--view", "nu-j", "--A-a", "120", "--A-b", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn track_and_exchange() {
    let o = donorspin(&["track", "--points", "1000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("|1,-1;0,0>,|0,0;1,-1>"));
    assert_eq!(donorspin(&["track", "--points", "10"]).status.code(), Some(2));
    let o = donorspin(&["exchange", "--l", "15", "--material", "ge"]);
    assert_eq!(o.status.code(), Some(3)); // 15 nm < 3 a_t for Ge
    assert!(donorspin(&["exchange", "--l", "15"]).status.success());
}

#[test]
fn bad_flag_values_exit_2() {
    assert_eq!(donorspin(&["freq", "--material", "diamond"]).status.code(), Some(2));
    assert_eq!(donorspin(&["freq", "--donor", "as75"]).status.code(), Some(2));
}
