use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use edsim::stochastics::Profile;

fn edsim(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edsim"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("EDSIM_PROFILE")
        .output()
        .expect("spawn edsim")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_writes_one_log_per_replication_and_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let o = edsim(
        &[
            "run",
            "--scenario",
            "F.1",
            "--replications",
            "3",
            "--days",
            "3",
            "--seed",
            "7",
        ],
        tmp.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for i in 0..3 {
        let log = fs::read_to_string(tmp.path().join(format!("eventlog_rep{i:02}.csv"))).unwrap();
        assert!(log.starts_with("rep_id,time_min,patient_id,event,detail\n"));
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "F.1");
    assert_eq!(report["tuple"], "(-,-,-,-,-,-,1,-)");
    assert_eq!(report["kpis"]["replications"], 3);
    assert_eq!(
        report["kpis"]["per_replication"]["los"]
            .as_array()
            .unwrap()
            .len(),
        3
    );
}

#[test]
fn single_short_run_is_low_sample() {
    let tmp = tempfile::tempdir().unwrap();
    let o = edsim(&["run", "--days", "1", "--replications", "1"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("low-sample"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["kpis"]["low_sample"], true);
}

#[test]
fn tuple_and_json_scenarios_are_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("s.json");
    fs::write(&file, r#"{"name":"mine","t":null,"p":null,"tau_g":120,"tau_w":null,"e":5,"l":null,"a":null,"r":10}"#).unwrap();
    let o = edsim(
        &[
            "run",
            "--scenario",
            file.to_str().unwrap(),
            "--days",
            "2",
            "--replications",
            "1",
        ],
        &tmp.path().join("a"),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with("mine:"));
    let o = edsim(
        &[
            "run",
            "--scenario",
            "(-, -, 120, -, 5, -, -, 10)",
            "--days",
            "2",
            "--replications",
            "1",
        ],
        &tmp.path().join("b"),
    );
    assert_eq!(o.status.code(), Some(0));
    let a = fs::read(tmp.path().join("a/eventlog_rep00.csv")).unwrap();
    let b = fs::read(tmp.path().join("b/eventlog_rep00.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn full_sweep_has_a_row_per_catalog_entry_plus_baseline() {
    let tmp = tempfile::tempdir().unwrap();
    let o = edsim(
        &["sweep", "--replications", "2", "--days", "1", "--svg"],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "scenario,in,wt_first,wt_last,los,outlier_green,outlier_white,flags"
    );
    assert_eq!(lines.len(), 1 + 1 + 42);
    assert!(lines[1].starts_with("baseline,"));
    assert!(lines.iter().all(|l| l.split(',').count() == 8));
    let svg = fs::read_to_string(tmp.path().join("sweep.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("Cb.15"));
}

#[test]
fn unknown_scenario_fails_before_running() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("never");
    let o = edsim(&["sweep", "--scenario", "C.1,Z.9"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn bad_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.json");
    let o = edsim(
        &["validate", "--profile", missing.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(2));

    let bad = tmp.path().join("bad.json");
    let mut v: serde_json::Value = serde_json::from_str(&Profile::builtin().to_json()).unwrap();
    v["mixes"]["needs_lab"] = serde_json::json!(2.0);
    fs::write(&bad, v.to_string()).unwrap();
    let o = edsim(&["run", "--profile", bad.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("needs_lab"));

    let o = edsim(&["run", "--replications", "0"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let o = edsim(&["run", "--scenario", "(1,2,3)"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn profile_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_edsim"))
        .args(["validate", "--days", "1", "--replications", "1"])
        .env("EDSIM_PROFILE", tmp.path().join("nope.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    let o = edsim(&["run", "--days", "1", "--replications", "1"], &file);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn validate_passes_builtin_and_fails_slow_profile() {
    let tmp = tempfile::tempdir().unwrap();
    let o = edsim(&["validate"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let slow = tmp.path().join("slow.json");
    fs::write(&slow, Profile::builtin().with_service_scale(2.0).to_json()).unwrap();
    let o = edsim(
        &["validate", "--profile", slow.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let los = text.lines().find(|l| l.starts_with("los")).unwrap();
    assert!(los.ends_with("FAIL"), "{los}");
}

#[test]
fn zero_budget_calibration_fails_immediately() {
    let tmp = tempfile::tempdir().unwrap();
    let o = edsim(&["calibrate", "--budget", "0"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));
    let trace = fs::read_to_string(tmp.path().join("calibration_trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1);
    assert!(Profile::load(&tmp.path().join("profile.json")).is_ok());
}

#[test]
fn calibration_trace_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "calibrate",
        "--budget",
        "5",
        "--replications",
        "2",
        "--days",
        "2",
        "--seed",
        "3",
    ];
    let a = edsim(&args, &tmp.path().join("a"));
    let b = edsim(&args, &tmp.path().join("b"));
    assert_eq!(a.status.code(), b.status.code());
    let ta = fs::read_to_string(tmp.path().join("a/calibration_trace.csv")).unwrap();
    let tb = fs::read_to_string(tmp.path().join("b/calibration_trace.csv")).unwrap();
    assert_eq!(ta, tb);
    assert_eq!(ta.lines().count(), 1 + 5);
}
