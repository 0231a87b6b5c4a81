use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattice-extremals")).args(args).env_remove("LATTICE_EXTREMALS_THREADS").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_theta_reports_value_error_and_terms() {
    let o = run(&["eval", "theta", "--alpha", "1", "--z", "0+1i"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // θ(1, i) = ϑ₃(1)²
    assert!((v["value"].as_f64().unwrap() - 1.180340599016).abs() < 1e-11);
    assert!(v["err_estimate"].as_f64().unwrap() < 1e-12);
    assert!(v["terms_used"].as_u64().unwrap() > 0);
}

#[test]
fn eval_methods_agree() {
    let a = json(&run(&["eval", "zeta", "--s", "2", "--z", "0.3+1.1i"]));
    let b = json(&run(&["eval", "zeta", "--s", "2", "--z", "0.3+1.1i", "--method", "direct", "--cutoff", "400"]));
    let (a, b) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
    assert!(((a - b) / a).abs() < 1e-9);
}

#[test]
fn numbers_have_twelve_significant_digits() {
    let v = json(&run(&["eval", "theta3", "--x", "1"]));
    assert_eq!(v["value"].to_string(), "1.08643481121");
}

#[test]
fn validation_errors_exit_2_with_usage_on_stderr() {
    for args in [
        &["eval", "theta", "--z", "0+1i"][..],
        &["eval", "theta", "--alpha", "1", "--z", "nonsense"],
        &["eval", "theta", "--alpha", "-1", "--z", "0+1i"],
        &["eval", "theta", "--alpha", "1", "--z", "0-1i"],
        &["frobnicate"],
        &["scan", "ThetaRatio(1)"],
        &["verify", "no_such_suite"],
        &["find", "ThetaRatio(1,2)", "--mode", "sideways"],
        &["scan", "ThetaRatio(1,2)", "--grid", "0x3"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"), "{args:?}");
    }
}

#[test]
fn computation_failure_exits_1() {
    let o = run(&["eval", "theta", "--alpha", "1e-9", "--z", "0.2+0.9i", "--method", "direct", "--max-terms", "16"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invariant_quantities_accept_unreduced_points() {
    let a = json(&run(&["eval", "eta", "--z", "0.1+0.0001i"]));
    let b = json(&run(&["eval", "eta", "--z", "0.1+0.0001i", "--method", "direct"]));
    let (a, b) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-10);
    let z = json(&run(&["eval", "zeta", "--s", "2", "--z", "0.3+0.00001i"]));
    assert!(z["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn reduce_lands_in_fundamental_domain() {
    let v = json(&run(&["reduce", "--z", "3.7+0.2i"]));
    let (x, y) = (v["x"].as_f64().unwrap(), v["y"].as_f64().unwrap());
    assert!((0.0..=0.5).contains(&x) && x * x + y * y >= 1.0 - 1e-12);
    assert_eq!(v["map"].as_array().unwrap().len(), 4);
}

#[test]
fn scan_csv_round_trips_byte_identically() {
    let o = run(&["scan", "ZetaThetaRatio(2,6,4)", "--grid", "7x5", "--x-range", "0,0.5", "--y-range", "0.9,1.7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("x,y,value\n") && !text.contains('\r'));
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    wr.write_record(rd.headers().unwrap()).unwrap();
    let mut n = 0;
    for rec in rd.records() {
        let rec = rec.unwrap();
        let nums: Vec<f64> = rec.iter().map(|f| f.parse().unwrap()).collect();
        wr.write_record(nums.iter().map(|v| format!("{v}"))).unwrap();
        n += 1;
    }
    assert_eq!(n, 35);
    assert_eq!(String::from_utf8(wr.into_inner().unwrap()).unwrap(), text);
}

#[test]
fn output_is_deterministic_across_runs_and_thread_counts() {
    let args = ["find", "ZetaThetaRatio(2,6,4)", "--mode", "min"];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    let c = Command::new(env!("CARGO_BIN_EXE_lattice-extremals"))
        .args(args)
        .env("LATTICE_EXTREMALS_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v = json(&a);
    assert!(v["distance_to_hexagonal"].as_f64().unwrap() < 1e-6);
    let s1 = run(&["scan", "PartitionZTc(4)", "--grid", "6x6"]);
    let s2 = run(&["scan", "PartitionZTc(4)", "--grid", "6x6", "--threads", "2"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn bad_thread_env_is_a_validation_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_lattice-extremals"))
        .args(["eval", "theta3", "--x", "1"])
        .env("LATTICE_EXTREMALS_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn find_reports_escape_and_heuristic_probe() {
    let v = json(&run(&["find", "ThetaPowerRatio(1,2,0.5)", "--mode", "max", "--probe", "2,5,10,20,40"]));
    assert_eq!(v["converged"], Value::Bool(false));
    assert!(v["diagnosis"].as_str().unwrap().contains("cusp"));
    assert_eq!(v["probe"]["verdict"], "escapes_to_cusp");
    assert!(v["probe"]["note"].as_str().unwrap().contains("not a proof"));
}

#[test]
fn verify_lemma3b_passes_with_full_report() {
    let o = run(&["verify", "lemma3b", "--s", "2", "--alpha", "6", "--grid", "128x128"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["lemma_id"], "lemma3b_dx");
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["grid_shape"], serde_json::json!([128, 128]));
    for k in ["worst_point", "worst_margin", "params", "hypotheses"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert!(v["worst_margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_minimum_principle_small_grid() {
    let o = run(&["verify", "minimum-principle", "--grid", "12x12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["hypotheses"].as_array().unwrap().len(), 4);
}

#[test]
fn reproduce_eta_identity_passes() {
    let o = run(&["reproduce", "eta-identity"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], Value::Bool(true));
}

#[test]
fn reproduce_table1_reports_eight_rows() {
    let o = run(&["reproduce", "table1"]);
    let v = json(&o);
    let rows = v["bundles"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let all_pass = rows.iter().all(|r| r["passed"] == Value::Bool(true));
    // Exit status mirrors the checks: 0 when all rows pass, 3 otherwise.
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 3 }));
    for r in rows {
        let d = r["abs_diff"].as_f64().unwrap();
        assert!(d < 1e-6, "{r}");
    }
}
