use std::path::Path;
use std::process::{Command, Output};

use tpsi_core::verify::WeightTensor;

fn tpsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpsi"))
        .args(args)
        .env_remove("TPSI_THREADS")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn fermat_suite_passes() {
    let out = tpsi(&["--suite", "fermat", "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["n"], 3);
    for id in r["identities"].as_array().unwrap() {
        assert!(id["report"]["max_abs_diff"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn planar_dual_at_n5() {
    let out = tpsi(&["--suite", "planar-dual", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for id in r["identities"].as_array().unwrap() {
        assert!(id["report"]["rel_diff"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn degenerate_angles_exit_3() {
    let out = tpsi(&["--suite", "vertex-te", "--n", "2", "--angles", "30,30,30,30,30,30", "--degrees"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["--n", "9"][..],
        &["--suite", "nope"],
        &["--angles", "1,2,3"],
        &["--tolerance", "-1"],
        &["--samples", "0"],
        &["dump", "--tensor", "Q"],
    ] {
        assert_eq!(tpsi(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tight_tolerance_fails_with_exit_1() {
    let out = tpsi(&["--suite", "vertex-te", "--n", "2", "--seed", "3", "--tolerance", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn explicit_angles_are_used() {
    let regular = (1.0f64 / 3.0).acos().to_degrees();
    let arg = vec![format!("{regular}"); 6].join(",");
    let out = tpsi(&["--suite", "irc-te", "--n", "2", "--angles", &arg, "--degrees"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let interior: Vec<f64> = r["angles"]["interior"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for x in interior {
        assert!((x - (1.0f64 / 3.0).acos()).abs() < 1e-12);
    }
    assert!(r["angles"]["vertices"].is_null());
}

#[test]
fn inconsistent_angles_exit_3() {
    let out = tpsi(&["--suite", "irc-te", "--angles", "1.2,1.1,1.3,1.0,1.4,1.2"]);
    assert_eq!(out.status.code(), Some(3));
}

fn without_wall_time(out: &Output) -> serde_json::Value {
    let mut r = report(out);
    r["wall_time_s"] = 0.into();
    r
}

#[test]
fn report_independent_of_threads() {
    let args = ["--suite", "all", "--n", "2", "--seed", "5", "--samples", "300"];
    let one = Command::new(env!("CARGO_BIN_EXE_tpsi")).args(args).env("TPSI_THREADS", "1").output().unwrap();
    let four = tpsi(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(
        serde_json::to_string(&without_wall_time(&one)).unwrap(),
        serde_json::to_string(&without_wall_time(&four)).unwrap()
    );
}

fn dump(dir: &Path, name: &str, tensor: &str, n: &str) -> Vec<u8> {
    let path = dir.join(name);
    let out = tpsi(&["dump", "--tensor", tensor, "--n", n, "--seed", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn dumps_round_trip_and_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let a = dump(dir.path(), "a.bin", "R", "2");
    let b = dump(dir.path(), "b.bin", "R", "2");
    assert_eq!(a, b);
    let t = WeightTensor::read_from(&a[..]).unwrap();
    assert_eq!(t.modulus(), 2);
    assert_eq!(t.rank(), 6);
    assert_eq!(t.data().len(), 64);
    assert_eq!(t.to_bytes(), a);
    for sel in ["R'", "R''", "R'''", "planar-R"] {
        let bytes = dump(dir.path(), "c.bin", sel, "3");
        let t = WeightTensor::read_from(&bytes[..]).unwrap();
        assert_eq!(t.data().len(), 729);
        assert_eq!(t.labels(), ["j1", "j2", "j3", "i1", "i2", "i3"]);
    }
}
