use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hlrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlrc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("job.json");
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn params_table_for_additive_preset() {
    let o = hlrc(&["params", "--preset", "as-p3-maxdim"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in ["n            60", "k            16", "d            >= 8", "(n1 >= 15, k1 = 4, d1 >= 8)", "(n2 = 3, k2 = 2, d2 = 2)"] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
}

#[test]
fn params_json_format() {
    let o = hlrc(&["params", "--preset", "kummer-q5-sharp", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 1440);
    assert_eq!(v["k"], 2);
    assert_eq!(v["d_lower"], 1380);
}

#[test]
fn sharpness_job_passes() {
    let o = hlrc(&["verify", "--preset", "kummer-q5-sharp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("measured 1380 vs bound 1380"), "{text}");
    assert!(text.contains("[PASS] the structured witness has weight exactly 1380"));
}

#[test]
fn invalid_rho_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"surface": {"kind": "artin_schreier_example", "p": 3},
            "code": {"eta": 5, "rho1": 4, "rho2": 1, "rho3": 1},
            "actions": ["params"]}"#,
    );
    let o = hlrc(&["params", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rho2 = 1 is outside the valid range [2, 3]"));
}

#[test]
fn unknown_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"surface": {"kind": "hermitian_cone", "q": 2}, "actions": ["params"], "colour": 1}"#);
    assert_eq!(hlrc(&["run", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(hlrc(&["params", "--preset", "no-such-preset"]).status.code(), Some(2));
}

#[test]
fn build_writes_artifacts_deterministically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = dir.path().to_str().unwrap();
        let o = hlrc(&["run", "--preset", "as-p3-maxdim", "--out", out, "--seed", "5", "--trials", "200"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let files = ["params.json", "generator.json", "generator.csv", "evaluation_set.csv", "simulation.json", "distance.json", "census.json"];
    for f in files {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs between identical runs");
    }
    let manifest = |dir: &Path| {
        let mut v: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("manifest.json")).unwrap()).unwrap();
        v["config"]["output"]["dir"] = serde_json::Value::Null;
        v
    };
    assert_eq!(manifest(a.path()), manifest(b.path()));
    let manifest = manifest(a.path());
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["field"]["modulus"], serde_json::json!([1, 0, 1]));
    let csv = fs::read_to_string(a.path().join("generator.csv")).unwrap();
    assert_eq!(csv.lines().count(), 16);
    assert!(csv.lines().all(|l| l.split(',').count() == 60));
    let points = fs::read_to_string(a.path().join("evaluation_set.csv")).unwrap();
    assert_eq!(points.lines().next(), Some("index,x,y,z"));
}

#[test]
fn sweep_over_rho3() {
    let o = hlrc(&["sweep", "--preset", "as-p3-maxdim", "--rho1", "4", "--rho2", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho1,rho2,rho3,valid,n,k,d_bound,rate,rel_distance,branch,violation"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let k: Vec<&str> = rows.iter().map(|r| r[5]).collect();
    let d: Vec<&str> = rows.iter().map(|r| r[6]).collect();
    assert_eq!(k, ["16", "12", "8", "4"]);
    assert_eq!(d, ["8", "16", "24", "32"]);
}

#[test]
fn sweep_empty_range_is_header_only() {
    let o = hlrc(&["sweep", "--preset", "as-p3-maxdim", "--rho1", "5..4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn sweep_flags_kummer_rho1_below_lambda() {
    let o = hlrc(&["sweep", "--preset", "kummer-q5-maxdim", "--rho1", "4", "--rho2", "2", "--rho3", "1"]);
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("4,2,1,false"), "{row}");
    assert!(row.contains("rho1 = 4 is outside the valid range [6, 10]"));
}

#[test]
fn census_presets() {
    let o = hlrc(&["verify", "--preset", "kummer-q2-pointcount"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("9 points per fiber (formula 9)"));
}

#[test]
fn simulate_explicit_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"surface": {"kind": "artin_schreier_example", "p": 3},
            "code": {"eta": 5, "rho1": 4, "rho2": 2, "rho3": 1},
            "actions": ["simulate"],
            "options": {"pattern": {"explicit": [0, 1, 2]}, "trials": 10}}"#,
    );
    let o = hlrc(&["simulate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("middle 30  failed 0  incorrect 0"), "{}", stdout(&o));
}

#[test]
fn presets_listing_and_dump() {
    let o = hlrc(&["presets"]);
    let text = stdout(&o);
    for name in ["as-p3-maxdim", "as-p3-rho3", "kummer-q5-sharp", "kummer-q5-maxdim", "kummer-q2-pointcount", "hermitian-cone-q2"] {
        assert!(text.contains(name));
    }
    let o = hlrc(&["presets", "hermitian-cone-q2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["surface"]["kind"], "hermitian_cone");
}
