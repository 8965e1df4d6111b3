use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mayer-zeta")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).take_while(|l| !l.is_empty()).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn trace_three_methods_agree() {
    let v = json(&run(&["trace", "--s", "2", "--methods", "closed,matrix,kernel"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let methods: Vec<&str> = rows.iter().map(|r| r["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["ClosedForm", "MatrixTrace", "KernelIntegral"]);
    let deltas = v["deltas"].as_array().unwrap();
    assert_eq!(deltas.len(), 3);
    for d in deltas {
        assert!(num(&d["delta"]) < 1e-8, "{d}");
    }
}

#[test]
fn trace_below_half_plane_is_a_config_error() {
    let o = run(&["trace", "--s", "0.4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DomainError"));
}

#[test]
fn capped_orbit_trace_reports_tail() {
    let v = json(&run(&["trace", "--s", "1", "--n", "2", "--method", "orbit", "--max-digit", "100"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["method"], "OrbitSum");
    assert_eq!(rows[0]["n"], 2);
    let tail = num(&rows[0]["tail_bound"]);
    assert!(tail > 0.0 && tail.is_finite());
    // the completed sum must lie within the certified bound
    let full = json(&run(&["trace", "--s", "1", "--n", "2", "--method", "orbit"]));
    let a = num(&rows[0]["value"][0]);
    let b = num(&full["rows"][0]["value"][0]);
    assert!((a - b).abs() <= tail);
}

#[test]
fn closed_form_route_needs_first_power() {
    assert_eq!(run(&["trace", "--s", "2", "--n", "2", "--methods", "closed"]).status.code(), Some(2));
}

#[test]
fn oracle_precision_matches_standard() {
    let a = json(&run(&["trace", "--s", "1.5+2i", "--methods", "closed"]));
    let b = json(&run(&["--precision", "oracle", "trace", "--s", "1.5+2i", "--methods", "closed"]));
    for i in 0..2 {
        assert!((num(&a["rows"][0]["value"][i]) - num(&b["rows"][0]["value"][i])).abs() < 1e-14);
    }
}

#[test]
fn det_grid_single_point() {
    let o = run(&["--format", "csv", "det-grid", "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text
        .starts_with("s_re,s_im,z_re,z_im,det_minus_re,det_minus_im,det_plus_re,det_plus_im,order,half_order_delta\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let z_re: f64 = rows[0][2].parse().unwrap();
    let z_im: f64 = rows[0][3].parse().unwrap();
    assert!(z_re > 0.0 && z_im == 0.0);
}

#[test]
fn det_grid_degenerate_segment() {
    let v = json(&run(&["det-grid", "--from", "1.5", "--to", "1.5", "--count", "1"]));
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn critical_line_scan_shows_the_zero() {
    let o = run(&["--format", "csv", "det-grid", "--from", "0.5+8i", "--to", "0.5+11i", "--count", "61"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 61);
    let point = |r: &Vec<String>| -> (f64, f64, f64) {
        let p: Vec<f64> = r.iter().take(4).map(|x| x.parse().unwrap()).collect();
        (p[1], p[2], p[3])
    };
    let (t_min, _, _) = rows.iter().map(point).min_by(|a, b| a.1.hypot(a.2).total_cmp(&b.1.hypot(b.2))).unwrap();
    assert!((t_min - 9.53).abs() < 0.05, "smallest |Z| at t = {t_min}");
    // the real part changes sign across the zero
    let signs: Vec<bool> = rows.iter().map(point).filter(|p| (p.0 - 9.53).abs() < 0.2).map(|p| p.1 > 0.0).collect();
    assert!(signs.windows(2).any(|w| w[0] != w[1]));
}

#[test]
fn find_zeros_rows() {
    let v = json(&run(&["find-zeros", "--start", "1.05", "--start", "0.5+9.5i", "--start", "0.5+30i"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["status"], "OK");
    assert!((num(&rows[0]["root"][0]) - 1.0).abs() < 1e-8);
    assert!(num(&rows[0]["root"][1]).abs() < 1e-8);
    assert_eq!(rows[1]["status"], "OK");
    assert!(num(&rows[1]["displacement"]) < 1e-4);
    assert!((num(&rows[1]["root"][1]) - 9.5337).abs() < 1e-3);
    assert_eq!(rows[2]["status"], "NONCONV");
    assert!(rows[2]["root"].is_null());
}

#[test]
fn find_zeros_start_below_line_is_a_config_error() {
    assert_eq!(run(&["find-zeros", "--start", "0.3+1i"]).status.code(), Some(2));
}

#[test]
fn census_rows() {
    let o = run(&["--format", "csv", "census", "--norm-cap", "100"]);
    let text = stdout(&o);
    assert!(text.starts_with("word,trace,norm,length_l,primitivity_k,geodesic_length\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows[0][0], "1-1");
    let norms: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    let square = rows.iter().find(|r| r[0] == "1-1-1-1").expect("non-primitive class listed");
    assert_eq!(square[4], "2");
}

#[test]
fn census_empty_below_smallest_norm() {
    let o = run(&["--format", "csv", "census", "--norm-cap", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "word,trace,norm,length_l,primitivity_k,geodesic_length\n");
}

#[test]
fn verify_negative_control_exits_one() {
    let o = run(&["verify", "--fast", "--inject-sign-fault", "--only", "matrix_vs_direct"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL matrix_vs_direct_taylor_coefficients"));
}

#[test]
fn verify_subset_passes() {
    let o = run(&["verify", "--fast", "--only", "trace_concordance"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS trace_concordance"));
}

#[test]
fn verify_full_fast_suite_passes() {
    let o = run(&["verify", "--fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["trace", "--s", "2+"]).status.code(), Some(2));
    assert_eq!(run(&["det-grid", "--s", "2", "--order", "1"]).status.code(), Some(2));
    assert_eq!(run(&["det-grid", "--from", "1", "--to", "2", "--count", "0"]).status.code(), Some(2));
    assert_eq!(run(&["census"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let dir = std::env::temp_dir().join(format!("mayer-zeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "--format".to_string(),
            "csv".into(),
            "--output".into(),
            p.to_string_lossy().into_owned(),
            "det-grid".into(),
            "--from".into(),
            "1.2".into(),
            "--to".into(),
            "0.6+5i".into(),
            "--count".into(),
            "9".into(),
            "--order".into(),
            "32".into(),
        ]
    };
    let bin = env!("CARGO_BIN_EXE_mayer-zeta");
    assert!(Command::new(bin).args(args(&a)).status().unwrap().success());
    assert!(Command::new(bin).args(args(&b)).env("MAYER_ZETA_THREADS", "1").status().unwrap().success());
    let x = std::fs::read(&a).unwrap();
    assert!(!x.is_empty());
    assert_eq!(x, std::fs::read(&b).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}
