use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tistates"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn payload(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
    assert_eq!(v["schema_version"], "1");
    v["payload"].clone()
}

#[test]
fn gen_lists_every_state() {
    let p = payload(&["gen", "--n", "3"]);
    let states = p["states"].as_array().unwrap();
    assert_eq!(states.len(), 8);
    let t1 = states.iter().find(|s| s["unit"] == "001" && s["m"] == 1).unwrap();
    assert_eq!(t1["period"], 3);
    let ev = t1["eigenvalue"].as_array().unwrap();
    assert!((ev[0].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert!((ev[1].as_f64().unwrap() + 0.75f64.sqrt()).abs() < 1e-12);
    assert!(t1.get("amplitudes").is_none());
}

#[test]
fn payload_is_deterministic() {
    for args in [
        &["gen", "--n", "4", "--full"][..],
        &["spectrum", "--n", "5", "--h", "h0+h1"],
        &["witness", "--n", "4"],
    ] {
        assert_eq!(payload(args), payload(args));
    }
}

#[test]
fn full_basis_round_trips_through_decompose() {
    let p = payload(&["gen", "--n", "4", "--full"]);
    let dir = std::env::temp_dir().join(format!("tistates-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for s in p["states"].as_array().unwrap() {
        let file = dir.join("state.json");
        let body = serde_json::json!({ "n": 4, "amplitudes": s["amplitudes"] });
        std::fs::write(&file, body.to_string()).unwrap();
        let d = payload(&["decompose", "--state", file.to_str().unwrap()]);
        let coeffs = d["coefficients"].as_array().unwrap();
        assert_eq!(coeffs.len(), 1);
        let id = format!("{}:{}", s["unit"].as_str().unwrap(), s["m"]);
        assert_eq!(coeffs[0]["state"], id.as_str());
        let c = coeffs[0]["coefficient"].as_array().unwrap();
        assert!((c[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(c[1].as_f64().unwrap().abs() < 1e-12);
        assert_eq!(d["is_ti"], true);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_check_passes_for_all_sizes() {
    for n in ["3", "4", "5", "6"] {
        let p = payload(&["energies", "--n", n, "--check"]);
        assert_eq!(p["check"]["passed"], true, "n = {n}");
    }
}

#[test]
fn blank_cells_are_null_unless_filled() {
    let p = payload(&["energies", "--n", "6", "--h", "h0,h1,h2"]);
    let rows = p["table1"]["rows"].as_array().unwrap();
    assert!(rows[0]["cells"][1]["shown"].is_null());
    let h2: Vec<i64> = rows[1..7]
        .iter()
        .map(|r| r["cells"][2]["shown"].as_f64().unwrap() as i64)
        .collect();
    assert_eq!(h2, [-6, -2, 2, 2, 6, -2]);
    let filled = payload(&["energies", "--n", "6", "--fill"]);
    assert!(filled["table1"]["rows"][0]["cells"][1]["shown"].is_number());
}

#[test]
fn table2_values() {
    let p = payload(&["energies", "--n", "4", "--table2"]);
    assert_eq!(p["check"]["passed"], true);
    let rows = p["table2"]["rows"].as_array().unwrap();
    let hnl = |name: &str| {
        rows.iter().find(|r| r["state"] == name).unwrap()["hnl"]
            .as_f64()
            .unwrap()
    };
    assert!((hnl("GHZ_1") - 1.0).abs() < 1e-12);
    assert!(hnl("|0>^N").abs() < 1e-12);
}

#[test]
fn spectrum_schema() {
    let p = payload(&["spectrum", "--n", "4", "--h", "h0"]);
    assert_eq!(p["eigenvalues"].as_array().unwrap().len(), 16);
    let degs = p["degeneracies"].as_array().unwrap();
    assert_eq!(degs.len(), 3);
    assert_eq!(degs[1][1], 12);
}

#[test]
fn scan_accepts_symbolic_angles() {
    let p = payload(&["scan", "--n", "3", "--phis", "-2pi/3,0,2pi/3"]);
    let winners: Vec<&str> = p["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["argmin"][0].as_str().unwrap())
        .collect();
    assert_eq!(winners, ["001:1", "001:0", "001:2"]);
}

#[test]
fn witness_schema_and_counterexamples() {
    let p = payload(&["witness", "--n", "3", "--counterexamples"]);
    assert_eq!(p["n"], 3);
    assert!(p["hamiltonian"].is_string());
    let entries = p["entries"].as_array().unwrap();
    let ghz = entries.iter().find(|e| e["state"] == "GHZ_1").unwrap();
    assert!((ghz["w_ent"].as_f64().unwrap() - 3.0).abs() < 1e-10);
    assert_eq!(ghz["verdict"], "no-conclusion");
    assert!(entries.iter().all(|e| e["state"] != "001:0"));
}

#[test]
fn classify_reports_orbits_and_classes() {
    let p = payload(&["classify", "--n", "6"]);
    assert_eq!(p["orbits"].as_array().unwrap().len(), 14);
    assert_eq!(p["classes"].as_array().unwrap().len(), 8);
    let o = &p["orbits"][1];
    assert!(o["repr"].is_string() && o["period"].is_number() && o["members"].is_array());
}

#[test]
fn verify_exits_zero() {
    let out = run(&["verify", "--n", "6"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["payload"]["failed"], 0);
}

#[test]
fn usage_error_exits_two() {
    let out = run(&["gen", "--n", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_error_exits_one_with_json() {
    let out = run(&["energies", "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "table_range");
    assert_eq!(err["module"], "tables");

    let out = run(&["witness", "--n", "3", "--h", "h2"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "unsupported_hamiltonian");
}

#[test]
fn csv_and_table_formats() {
    let out = run(&["gen", "--n", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "unit,m,period,momentum,eigenvalue,spin");
    assert_eq!(text.lines().count(), 5);
    let out = run(&["energies", "--n", "3", "--format", "table"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("-3"));
}
