use donorspin::constants::PhysicalConstants;
use donorspin::sweep::{
    export, preset, run_sweep, run_sweep_with, ExportFormat, SweepSpec, SweepTable, FLAG_COLUMN, SIG_DIGITS,
};
use donorspin::{Error, ExecMode};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const C: PhysicalConstants = PhysicalConstants::PAPER;

fn three_point() -> SweepSpec {
    r#"
target = "exchange_coupling"
outputs = ["J"]
[variable]
name = "l"
from = 10
to = 20
points = 3
"#
    .parse()
    .unwrap()
}

#[test]
fn fig2_matches_breit_rabi_formula() {
    let t = run_sweep(&preset("fig2").unwrap()).unwrap();
    assert_eq!(t.rows(), 201);
    let (a, g_n) = (116.0, 2.26);
    // X = (2μ_B + g_N μ_N) B / A, recomputed directly
    let per_tesla = (2.0 * C.mu_b + g_n * C.mu_n) / C.h * 1e-6;
    let xs = t.column("X").unwrap();
    for (r, &x) in xs.iter().enumerate() {
        let b = x * a / per_tesla;
        let nz = g_n * C.mu_n * b / C.h * 1e-6;
        let expect = [
            a / 4.0 - nz + a / 2.0 * x,
            -a / 4.0 + a / 2.0 * (1.0 + x * x).sqrt(),
            a / 4.0 + nz - a / 2.0 * x,
            -a / 4.0 - a / 2.0 * (1.0 + x * x).sqrt(),
        ];
        for (name, e) in ["E_1_+1", "E_1_0", "E_1_-1", "E_0_0"].iter().zip(expect) {
            let got = t.column(name).unwrap()[r];
            assert!((got - e).abs() < 1e-9 * a, "{name} at X = {x}: {got} vs {e}");
        }
    }
    for name in ["E_1_+1", "E_1_0"] {
        assert!(t.column(name).unwrap().windows(2).all(|w| w[1] > w[0]), "{name}");
    }
    for name in ["E_1_-1", "E_0_0"] {
        assert!(t.column(name).unwrap().windows(2).all(|w| w[1] < w[0]), "{name}");
    }
}

#[test]
fn stark_preset_quadratic_in_voltage() {
    let t = run_sweep(&preset("stark").unwrap()).unwrap();
    assert!(!t.has_flagged());
    let v = t.column("V").unwrap();
    let d = t.column("delta_nu").unwrap();
    for (v, d) in v.iter().zip(d).skip(1) {
        let expect = -17.5 * v * v;
        assert!(((d - expect) / expect).abs() < 0.07, "V = {v}: {d}");
    }
}

#[test]
fn empty_range_is_spec_error() {
    let mut s = three_point();
    s.variable.to = s.variable.from;
    assert!(matches!(run_sweep(&s), Err(Error::Spec(_))));
}

#[test]
fn csv_shape() {
    let t = run_sweep(&three_point()).unwrap();
    let csv = t.to_csv();
    assert!(csv.ends_with('\n'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], format!("l,J,{FLAG_COLUMN}"));
    assert!(lines[1].starts_with("10,"));
}

#[test]
fn json_round_trip() {
    for name in ["fig2", "fig3-vs-J", "anticross"] {
        let t = run_sweep(&preset(name).unwrap()).unwrap();
        let back = SweepTable::from_json(&t.to_json()).unwrap();
        assert!(back.same_at_precision(&t, SIG_DIGITS), "{name}");
        assert_eq!(back.to_csv(), t.to_csv());
    }
    assert!(SweepTable::from_json("{}").is_err());
}

#[test]
fn json_nulls_for_failed_rows() {
    let s: SweepSpec = r#"
target = "gate_potential"
[variable]
name = "z"
from = -1
to = 1
points = 3
"#
    .parse()
    .unwrap();
    let t = run_sweep(&s).unwrap();
    let v = t.to_json_value();
    assert!(v["columns"]["phi"][0].is_null());
    assert_eq!(v["columns"][FLAG_COLUMN][0], 1.0);
    let back = SweepTable::from_json(&t.to_json()).unwrap();
    assert!(back.same_at_precision(&t, SIG_DIGITS));
}

#[test]
fn meta_stamps_constant_set() {
    let t = run_sweep(&three_point()).unwrap();
    assert_eq!(t.meta.constants, "paper-1");
    assert_eq!(t.to_json_value()["meta"]["constants"], "paper-1");
    let mut s = three_point();
    s.constants = Some("codata".into());
    assert_eq!(run_sweep(&s).unwrap().meta.constants, "codata-2018");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for name in ["fig2", "fig3-vs-B", "fig3-vs-J", "stark", "exchange", "anticross"] {
        let s = preset(name).unwrap();
        let a = run_sweep_with(&s, ExecMode::Parallel).unwrap().to_csv();
        let b = run_sweep_with(&s, ExecMode::Parallel).unwrap().to_csv();
        let c = run_sweep_with(&s, ExecMode::Sequential).unwrap().to_csv();
        assert_eq!(a, b, "{name}");
        assert_eq!(a, c, "{name}");
    }
}

#[test]
fn shuffled_row_order_gives_same_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["fig3-vs-B", "stark"] {
        let prepared = preset(name).unwrap().prepare().unwrap();
        let mut order: Vec<usize> = (0..prepared.grid().len()).collect();
        order.shuffle(&mut rng);
        let mut rows: Vec<(usize, _)> = order.iter().map(|&i| (i, prepared.evaluate_row(i))).collect();
        rows.sort_by_key(|r| r.0);
        let shuffled = prepared.assemble(rows.into_iter().map(|r| r.1).collect());
        assert_eq!(shuffled.to_csv(), prepared.run(ExecMode::Sequential).to_csv(), "{name}");
    }
}

#[test]
fn export_writes_files_and_reports_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let t = run_sweep(&three_point()).unwrap();
    let csv = dir.path().join("t.csv");
    export(&t, ExportFormat::Csv, &csv).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), t.to_csv());
    let json = dir.path().join("t.json");
    export(&t, ExportFormat::Json, &json).unwrap();
    let back = SweepTable::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(back.same_at_precision(&t, SIG_DIGITS));
    let bad = dir.path().join("missing").join("t.csv");
    assert!(matches!(export(&t, ExportFormat::Csv, &bad), Err(Error::Io(_))));
}

#[test]
fn spec_file_loading() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, "target = \"nu_a\"\n[fixed]\nA = 116\n[variable]\nname = \"B\"\nfrom = 0.5\nto = 4\npoints = 8\nspacing = \"log\"\n").unwrap();
    let t = run_sweep(&SweepSpec::from_file(&path).unwrap()).unwrap();
    assert_eq!(t.rows(), 8);
    assert_eq!(t.column("B").unwrap()[7], 4.0);
}
