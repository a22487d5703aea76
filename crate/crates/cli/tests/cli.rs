use std::fs;
use std::process::{Command, Output};

fn kaonbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kaonbell"))
        .args(args)
        .env_remove("KAONBELL_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("stdout is json")
}

#[test]
fn asymmetry_golden() {
    let o = kaonbell(&["asymmetry", "--dtau", "1.37"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0.634461\n");
}

#[test]
fn lr_bounds_golden() {
    let o = kaonbell(&["lr-bounds", "--tau1", "0.55", "--tau2", "0.55"]);
    assert_eq!(stdout(&o), "[0.85925, 1]\n");
    let o = kaonbell(&["lr-bounds", "--tau1", "0.55", "--tau2", "1.92"]);
    assert_eq!(stdout(&o), "[0.330477, 0.471227]\n");
}

#[test]
fn qm_prob_joint_and_single() {
    let o = kaonbell(&[
        "qm-prob", "--o1", "K0", "--o2", "K0bar", "--tau1", "0", "--tau2", "0",
    ]);
    assert_eq!(stdout(&o), "0.5\n");
    let o = kaonbell(&["qm-prob", "--o1", "KS", "--tau1", "0"]);
    assert_eq!(stdout(&o), "0.5\n");
}

#[test]
fn chsh_scan_reports_minimum() {
    let o = kaonbell(&[
        "chsh-scan",
        "--renormalized",
        "--range",
        "0:3",
        "--steps",
        "2000",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    let min = v["min"]["value"].as_f64().unwrap();
    assert!((min + 1.087).abs() < 1e-3, "{min}");
}

#[test]
fn scan_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wigner.csv");
    let o = kaonbell(&[
        "wigner-scan",
        "--p",
        "1.5",
        "--steps",
        "400",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("tau,tau1,tau2,tau3,p12,p13,p32,w\n"));
    assert_eq!(text.lines().count(), 401);
    assert!(!text.contains('\r'));
    let again = kaonbell::ScanTable::from_csv_str(&text)
        .unwrap()
        .to_csv_string();
    assert_eq!(text, again);
    let max = json(&o)["value"].as_f64().unwrap();
    assert!((0.002..0.003).contains(&max));
}

#[test]
fn asymmetry_scan_leaves_small_gaps_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.csv");
    let o = kaonbell(&[
        "asymmetry-scan",
        "--alpha",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert!((v["value"].as_f64().unwrap() - 0.27).abs() < 0.02);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.ends_with(',')));
}

#[test]
fn spin_wigner_peaks_at_third_of_pi() {
    let o = kaonbell(&["wigner-scan", "--spin"]);
    let loc = json(&o)["location"].as_f64().unwrap();
    assert!((loc - std::f64::consts::FRAC_PI_3).abs() < 1e-3);
}

#[test]
fn cplear_report() {
    let o = kaonbell(&["cplear-compare"]);
    let text = stdout(&o);
    assert!(o.status.success());
    assert!(text.contains("space-like OK"));
    assert_eq!(text.matches("yes").count(), 4);
    let v = json(&kaonbell(&["cplear-compare", "--json"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn mc_validate_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mc.json");
    let args = [
        "mc-validate",
        "--tau1",
        "0.5",
        "--tau2",
        "1",
        "--n",
        "50000",
        "--seed",
        "4",
    ];
    let o = kaonbell(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert!(stdout(&o).contains("validation: PASS"));
    let first = fs::read_to_string(&path).unwrap();
    let o = kaonbell(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert_eq!(first, fs::read_to_string(&path).unwrap());
}

#[test]
fn infeasible_model_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    fs::write(
        &path,
        r#"{"tau1": 0.5, "tau2": 1.0, "p111_norm": 0.9, "p112_norm": 0.9, "p333_norm": 0.1, "p334_norm": 0.1}"#,
    )
    .unwrap();
    let o = kaonbell(&[
        "mc-validate",
        "--tau1",
        "0.5",
        "--tau2",
        "1",
        "--model",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(
        kaonbell(&["asymmetry", "--dtau", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kaonbell(&["lr-bounds", "--tau1", "2", "--tau2", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kaonbell(&["asymmetry", "--nope"]).status.code(), Some(64));
    assert_eq!(kaonbell(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(kaonbell(&["--help"]).status.code(), Some(0));
    assert_eq!(kaonbell(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stable.conf");
    fs::write(&path, "# stable kaons\ngamma_s = 0\ngamma_l = 0\n").unwrap();
    let o = kaonbell(&[
        "--config",
        path.to_str().unwrap(),
        "asymmetry",
        "--dtau",
        "0",
    ]);
    assert_eq!(stdout(&o), "1\n");
    let o = Command::new(env!("CARGO_BIN_EXE_kaonbell"))
        .args(["qm-prob", "--o1", "KS", "--tau1", "3"])
        .env("KAONBELL_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "0.5\n");

    fs::write(&path, "colour = 3\n").unwrap();
    let o = kaonbell(&[
        "--config",
        path.to_str().unwrap(),
        "asymmetry",
        "--dtau",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
