use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genhyp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn values(v: &Value) -> Vec<f64> {
    v.as_object()
        .expect("value map")
        .values()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn triangle_from_zero_lengths() {
    let out = run(&["triangle", "--type", "0,0,0", "--given", "lengths", "--values", "0,0,0"]);
    assert_eq!(code(&out), 0);
    let angles = report(&out)["triangle"]["angles"].clone();
    for a in angles.as_array().unwrap() {
        assert!((a.as_f64().unwrap() - 2.0).abs() < 1e-14);
    }
}

#[test]
fn triangle_sas_right_angle() {
    let out = run(&["triangle", "--type", "1,1,1", "--given", "sas", "--values", "1,1,1.5707963"]);
    assert_eq!(code(&out), 0);
    let third = report(&out)["triangle"]["lengths"][2].as_f64().unwrap();
    // arccosh(cosh² 1) with the angle truncated to 1.5707963.
    let exact = (1f64.cosh().powi(2) - 1f64.sinh().powi(2) * (1.5707963f64).cos()).acosh();
    assert!((third - exact).abs() < 1e-12, "{third} vs {exact}");
    assert!((third - 1.513374).abs() < 1e-6);
}

#[test]
fn triangle_sas_unrealizable_exits_2() {
    let out = run(&["triangle", "--type", "-1,-1,0", "--given", "sas", "--values", "0,0,1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not realizable"));
}

#[test]
fn triangle_bad_values_exit_1() {
    for args in [
        ["triangle", "--type", "1,1", "--given", "angles", "--values", "1,1,1"],
        ["triangle", "--type", "1,1,2", "--given", "angles", "--values", "1,1,1"],
        ["triangle", "--type", "1,1,1", "--given", "angles", "--values", "1,x,1"],
        ["triangle", "--type", "1,1,1", "--given", "angles", "--values", "1,1,nan"],
        ["triangle", "--type", "1,1,1", "--given", "nope", "--values", "1,1,1"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 1, "{args:?}");
    }
}

#[test]
fn verify_laws_single_sample() {
    let out = run(&["verify-laws", "--types", "1,1,1", "--samples", "1", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let rep = report(&out);
    let det = rep["types"][0]["det_lengths"].as_f64().unwrap();
    assert!(det <= 1e-9);
    assert_eq!(rep["pass"], Value::Bool(true));
}

#[test]
fn verify_laws_full_suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("laws.json");
    let out = run(&[
        "verify-laws", "--types", "all", "--samples", "1000", "--seed", "7", "--tol", "1e-9", "--json",
        path_str(&json),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(file["types"].as_array().unwrap().len(), 10);
    assert!(file["checks"].as_array().unwrap().iter().all(|c| c["max_error"].is_number()));
}

#[test]
fn verify_laws_unreachable_tolerance_exits_1() {
    let out = run(&["verify-laws", "--samples", "20", "--tol", "1e-30"]);
    assert_eq!(code(&out), 1);
    assert!(!report(&out)["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_laws_bad_flags_exit_1() {
    for args in [
        vec!["verify-laws", "--samples", "0"],
        vec!["verify-laws", "--samples", "-3"],
        vec!["verify-laws", "--types", "1,1,7"],
        vec!["verify-laws", "--tol", "abc"],
        vec!["verify-laws", "--unknown"],
    ] {
        assert_eq!(code(&run(&args)), 1, "{args:?}");
    }
}

#[test]
fn penner_map_solve_and_polytope() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = data("punctured_torus.json");
    let z = dir.path().join("z.json");
    let out = run(&["penner", "map", "--mesh", path_str(&mesh), "--lengths", "0", "--out", path_str(&z)]);
    assert_eq!(code(&out), 0);
    assert!(values(&report(&out)["z"]).iter().all(|&x| (x - 2.0).abs() < 1e-14));

    let out = run(&["penner", "solve", "--mesh", path_str(&mesh), "--z", path_str(&z)]);
    assert_eq!(code(&out), 0);
    assert!(values(&report(&out)["lengths"]).iter().all(|&x| x.abs() <= 1e-10));

    let out = run(&["penner", "check-polytope", "--mesh", path_str(&mesh), "--z", "0"]);
    assert_eq!(code(&out), 2);
    let rep = report(&out);
    assert_eq!(rep["outcome"], "infeasible");
    assert!(rep["witness"].as_str().is_some_and(|w| !w.is_empty()));
}

#[test]
fn penner_solve_infeasible_and_nonconvergent() {
    let mesh = data("thrice_punctured_sphere.json");
    let out = run(&["penner", "solve", "--mesh", path_str(&mesh), "--z", "-1"]);
    assert_eq!(code(&out), 2);
    assert!(report(&out)["witness"].is_string());

    let out = run(&["penner", "solve", "--mesh", path_str(&mesh), "--z", "0.7", "--max-iter", "1", "--tol", "1e-15"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn penner_malformed_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let weights = dir.path().join("w.json");
    std::fs::write(&weights, r#"{"edge_weights":{"e1":1,"e2":1}}"#).unwrap();
    let mesh = data("punctured_torus.json");
    for args in [
        vec!["penner", "map", "--mesh", path_str(&bad), "--lengths", "0"],
        vec!["penner", "map", "--mesh", "/nonexistent/mesh.json", "--lengths", "0"],
        vec!["penner", "map", "--mesh", path_str(&mesh), "--lengths", path_str(&bad)],
        vec!["penner", "map", "--mesh", path_str(&mesh), "--lengths", path_str(&weights)],
        vec!["penner", "map", "--mesh", path_str(&mesh)],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn packing_ideal_curvature_and_solve() {
    let mesh = data("tetrahedron.json");
    let base = ["--mesh", path_str(&mesh), "--eps", "0", "--delta", "0", "--phi", "2"];
    let out = run(&[&["packing", "curvature"][..], &base, &["--r", "0"]].concat());
    assert_eq!(code(&out), 0);
    assert!(values(&report(&out)["curvature"]).iter().all(|&k| (k - 6.0).abs() < 1e-12));

    let out = run(&[&["packing", "solve"][..], &base, &["--target", "3"]].concat());
    assert_eq!(code(&out), 0);
    let ln2 = std::f64::consts::LN_2;
    assert!(values(&report(&out)["radii"]).iter().all(|&r| (r - ln2).abs() < 1e-14));
}

#[test]
fn packing_classic_only_for_interior() {
    let mesh = data("tetrahedron.json");
    let out = run(&[
        "packing", "curvature", "--mesh", path_str(&mesh), "--eps", "0", "--delta", "0", "--phi", "2", "--r", "0",
        "--classic",
    ]);
    assert_eq!(code(&out), 1);

    let out = run(&[
        "packing", "curvature", "--mesh", path_str(&mesh), "--eps", "1", "--delta", "1", "--phi", "1.5707963267948966",
        "--r", "1", "--classic",
    ]);
    assert_eq!(code(&out), 0);
    let rep = report(&out);
    assert_eq!(rep["classic"], Value::Bool(true));
    let tilde = run(&[
        "packing", "curvature", "--mesh", path_str(&mesh), "--eps", "1", "--delta", "1", "--phi", "1.5707963267948966",
        "--r", "1",
    ]);
    let (k, kt) = (values(&rep["curvature"]), values(&report(&tilde)["curvature"]));
    for (a, b) in k.iter().zip(&kt) {
        assert!((a + b - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}

#[test]
fn packing_flow_reaches_solution() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = data("tetrahedron.json");
    let trace = dir.path().join("trace.csv");
    let cfg = ["--mesh", path_str(&mesh), "--eps", "-1", "--delta", "1", "--phi", "1.5707963267948966"];
    let out = run(&[
        &["packing", "flow"][..],
        &cfg,
        &["--r", "1.3", "--target", "1", "--dt", "0.05", "--steps", "4000", "--stop-tol", "1e-9", "--trace", path_str(&trace)],
    ]
    .concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    assert!(rep["gradnorm"].as_f64().unwrap() <= 1e-9);
    assert_eq!(rep["monotone"], Value::Bool(true));
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("t,r_0,r_1,r_2,r_3,K_0,K_1,K_2,K_3,gradnorm\n"));

    let solved = run(&[&["packing", "solve"][..], &cfg, &["--target", "1"]].concat());
    assert_eq!(code(&solved), 0);
    let (a, b) = (values(&rep["radii"]), values(&report(&solved)["radii"]));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
}

#[test]
fn packing_unsupported_case_exits_2() {
    let mesh = data("tetrahedron.json");
    let out = run(&[
        "packing", "solve", "--mesh", path_str(&mesh), "--eps", "1", "--delta", "0", "--phi", "1", "--target", "1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn pattern_flow_at_equilibrium_is_stationary() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = data("cube.json");
    let k = dir.path().join("k.json");
    let trace = dir.path().join("trace.csv");
    let cfg = ["--mesh", path_str(&mesh), "--eps", "1", "--delta", "1", "--h", "0.5", "--theta", "1.5707963267948966"];
    let out = run(&[&["pattern", "curvature"][..], &cfg, &["--r", "1.3", "--out", path_str(&k)]].concat());
    assert_eq!(code(&out), 0);
    let out = run(&[
        &["pattern", "flow"][..],
        &cfg,
        &["--r", "1.3", "--target", path_str(&k), "--steps", "20", "--trace", path_str(&trace)],
    ]
    .concat());
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&trace).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 21);
    for row in rows {
        let cols: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(cols[1..7].iter().all(|&r| r == 1.3), "{row}");
        assert_eq!(*cols.last().unwrap(), 0.0);
    }
}

#[test]
fn pattern_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = data("digon_pair.json");
    let k = dir.path().join("k.json");
    let r = dir.path().join("r.json");
    std::fs::write(&r, r#"{"face_values":{"f0":1.2,"f1":1.7}}"#).unwrap();
    let cfg = ["--mesh", path_str(&mesh), "--eps", "-1", "--delta", "1", "--h", "2", "--theta", "1.5707963267948966"];
    let out = run(&[&["pattern", "curvature"][..], &cfg, &["--r", path_str(&r), "--out", path_str(&k)]].concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&[&["pattern", "solve"][..], &cfg, &["--target", path_str(&k)]].concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let radii = values(&report(&out)["radii"]);
    assert!((radii[0] - 1.2).abs() < 1e-8 && (radii[1] - 1.7).abs() < 1e-8, "{radii:?}");
}

#[test]
fn pattern_flag_misuse_exits_1() {
    let mesh = data("cube.json");
    let m = path_str(&mesh);
    for args in [
        vec!["pattern", "curvature", "--mesh", m, "--eps", "1", "--delta", "1", "--theta", "1", "--r", "1"],
        vec!["pattern", "curvature", "--mesh", m, "--eps", "1", "--delta", "1", "--h", "0", "--phi", "1", "--r", "1"],
        vec!["pattern", "curvature", "--mesh", m, "--eps", "1", "--delta", "1", "--h", "0", "--theta", "1"],
        vec!["pattern", "curvature", "--mesh", m, "--eps", "3", "--delta", "1", "--h", "0", "--theta", "1", "--r", "1"],
        vec!["pattern", "spin", "--mesh", m, "--eps", "1", "--delta", "1", "--h", "0", "--theta", "1", "--r", "1"],
        vec!["pattern", "flow", "--mesh", m, "--eps", "1", "--delta", "1", "--h", "0", "--theta", "1", "--target", "1", "--dt", "0"],
    ] {
        assert_eq!(code(&run(&args)), 1, "{args:?}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let mesh = data("octahedron.json");
    let args = [
        "packing", "solve", "--mesh", path_str(&mesh), "--eps", "-1", "--delta", "0", "--phi", "2", "--target", "0.7",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);

    let laws = ["verify-laws", "--samples", "50", "--seed", "11"];
    assert_eq!(run(&laws).stdout, run(&laws).stdout);
}

#[test]
fn digest_tracks_file_contents() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = data("punctured_torus.json");
    let w = dir.path().join("w.json");
    let digest = |x: f64| {
        std::fs::write(&w, format!(r#"{{"edge_weights":{{"e1":{x},"e2":0,"e3":0}}}}"#)).unwrap();
        let out = run(&["penner", "map", "--mesh", path_str(&mesh), "--lengths", path_str(&w)]);
        report(&out)["inputs_digest"].as_str().unwrap().to_string()
    };
    let (a, b, c) = (digest(0.0), digest(0.5), digest(0.0));
    assert_eq!(a, c);
    assert_ne!(a, b);
}
