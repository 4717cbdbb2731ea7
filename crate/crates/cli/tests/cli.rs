use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn uncert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uncert")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn curve_writes_outputs_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |sub: &str| {
        let out = path(dir.path(), sub);
        let o = uncert(&["curve", "--metric-z", "std", "--metric-t", "cho", "--points", "12", "--out", &out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(dir.path().join(sub).join("curve.csv")).unwrap()
    };
    let (a, b) = (run("a"), run("b"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("t,x,y,E0,E1,gap,n_max\n"));
    assert_eq!(text.lines().count(), 13);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "curve");
    assert!(manifest["results"]["identity_defect"].as_f64().unwrap() < 1e-9);
    for f in ["states.json", "excited.csv", "wavefunctions.csv"] {
        assert!(dir.path().join("a").join(f).exists(), "{f}");
    }
    let excited = fs::read_to_string(dir.path().join("a/excited.csv")).unwrap();
    for row in excited.lines().skip(1) {
        let v: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        // the excited pair lies above the tangent line through the ground pair
        assert!(v[4] + v[0] * v[3] > v[2] + v[0] * v[1]);
    }
}

#[test]
fn single_point_curve() {
    let dir = TempDir::new().unwrap();
    let out = path(dir.path(), "one");
    let o = uncert(&["curve", "--metric-z", "disc", "--metric-t", "cho", "--tmin", "1", "--tmax", "1", "--points", "1", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("one/curve.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(dir.path().join("one/closedform.csv").exists());
}

#[test]
fn curve_rejects_bad_grid() {
    let dir = TempDir::new().unwrap();
    let out = path(dir.path(), "bad");
    let o = uncert(&["curve", "--metric-z", "std", "--metric-t", "arc", "--tmin", "5", "--tmax", "1", "--out", &out]);
    assert_eq!(code(&o), 2);
    let o = uncert(&["curve", "--metric-z", "std", "--metric-t", "arc", "--nmax", "4", "--out", &out]);
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("bad/manifest.json").exists());
}

#[test]
fn truncation_cap_exit_code() {
    let dir = TempDir::new().unwrap();
    let out = path(dir.path(), "cap");
    let o = Command::new(env!("CARGO_BIN_EXE_uncert"))
        .args(["curve", "--metric-z", "disc", "--metric-t", "arc", "--tmin", "1", "--tmax", "1", "--points", "1", "--out", &out])
        .env("UNCERT_NMAX_CAP", "160")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("cap/curve.csv").exists());
}

#[test]
fn bounds_outputs() {
    let dir = TempDir::new().unwrap();
    let out = path(dir.path(), "b");
    let o = uncert(&["bounds", "--pair", "std-cho", "--curves", "judge,cn,second", "--xgrid", "40", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["bound_judge.csv", "bound_cn.csv", "bound_second.csv", "dominance.csv", "sweep.csv", "manifest.json"] {
        assert!(dir.path().join("b").join(f).exists(), "{f}");
    }
    let cn = fs::read_to_string(dir.path().join("b/bound_cn.csv")).unwrap();
    assert!(cn.starts_with("source,x,y\nbound:"));
    let dom = fs::read_to_string(dir.path().join("b/dominance.csv")).unwrap();
    let header: Vec<&str> = dom.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "second_le_sweep").unwrap();
    assert!(dom.lines().skip(1).all(|l| l.split(',').nth(col) == Some("true")));
}

#[test]
fn bounds_rejects_bad_curve_lists() {
    let dir = TempDir::new().unwrap();
    let out = path(dir.path(), "x");
    for (pair, curves) in [("std-cho", ""), ("std-cho", "judge,bogus"), ("std-arc", "cn"), ("std-arc", "second")] {
        let o = uncert(&["bounds", "--pair", pair, "--curves", curves, "--out", &out]);
        assert_eq!(code(&o), 2, "{pair} {curves:?}");
    }
}

#[test]
fn verify_identities_passes() {
    let dir = TempDir::new().unwrap();
    let out = path(dir.path(), "v");
    let o = uncert(&["verify", "--suite", "identities", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("v/report.json")).unwrap()).unwrap();
    assert_eq!(report["failed"], 0);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let scan = fs::read_to_string(dir.path().join("v/arc_boundary.csv")).unwrap();
    assert_eq!(scan.lines().count(), 402);
}

#[test]
fn transport_commands() {
    let dir = TempDir::new().unwrap();
    let mu = dir.path().join("mu.json");
    let nu = dir.path().join("nu.json");
    fs::write(&mu, r#"{"space":"Z","atoms":[[0,0.5],[2,0.5]]}"#).unwrap();
    fs::write(&nu, r#"{"space":"Z","atoms":[[1,1.0]]}"#).unwrap();
    let coupling = path(dir.path(), "coupling.json");
    let (mu, nu) = (mu.to_str().unwrap(), nu.to_str().unwrap());

    let o = uncert(&["transport", "--space", "Z", "--metric", "std", "--alpha", "1", "--mu", mu, "--nu", mu, "--out", &coupling]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim().parse::<f64>().unwrap(), 0.0);

    let o = uncert(&["transport", "--space", "z", "--metric", "std", "--alpha", "2", "--mu", mu, "--nu", nu, "--out", &coupling]);
    assert_eq!(code(&o), 0);
    assert!((String::from_utf8_lossy(&o.stdout).trim().parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    let t: serde_json::Value = serde_json::from_str(&fs::read_to_string(&coupling).unwrap()).unwrap();
    assert_eq!(t["coupling"]["gamma"][1][0], 0.5);

    let o = uncert(&["transport", "--space", "t", "--metric", "arc", "--mu", mu, "--nu", nu, "--out", &coupling]);
    assert_eq!(code(&o), 2);
    let o = uncert(&["transport", "--space", "z", "--metric", "cho", "--mu", mu, "--nu", nu, "--out", &coupling]);
    assert_eq!(code(&o), 2);
    let missing = path(dir.path(), "missing.json");
    let o = uncert(&["transport", "--space", "z", "--metric", "std", "--mu", &missing, "--nu", nu, "--out", &coupling]);
    assert_eq!(code(&o), 2);
}

#[test]
fn transport_on_circle() {
    let dir = TempDir::new().unwrap();
    let mu = dir.path().join("mu.json");
    let nu = dir.path().join("nu.json");
    fs::write(&mu, r#"{"space":"T","grid_size":4,"atoms":[1.0,0.0,0.0,0.0]}"#).unwrap();
    fs::write(&nu, r#"{"space":"T","grid_size":4,"atoms":[0.0,0.0,1.0,0.0]}"#).unwrap();
    let coupling = path(dir.path(), "c.json");
    let o = uncert(&["transport", "--space", "t", "--metric", "cho", "--alpha", "1", "--mu", mu.to_str().unwrap(), "--nu", nu.to_str().unwrap(), "--out", &coupling]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!((String::from_utf8_lossy(&o.stdout).trim().parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
}
