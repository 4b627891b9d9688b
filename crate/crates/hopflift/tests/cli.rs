//! End-to-end tests of the command-line interface: exit-code contract,
//! byte-identical reproducibility, golden solutions through the JSON
//! output, and the CSV surfaces.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hopflift"))
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("hopflift-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn iterate_seed_example1_exits_zero_and_writes_outputs() {
    let dir = tempdir("it1");
    let status = bin()
        .args(["iterate", "--seed", "example1", "--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let trace: serde_json::Value = serde_json::from_str(&read(&dir.join("trace.json"))).unwrap();
    assert_eq!(trace["status"], "converged");
    assert!(trace["steps"].as_array().unwrap().len() <= 3);
    assert!(dir.join("solution.json").exists());
}

#[test]
fn iterate_inline_example3_matches_registry_solution() {
    let dir = tempdir("it3");
    let status = bin()
        .args([
            "iterate", "--hx", "x*y*z", "--hy", "0", "--hz", "0", "--system", "sw", "--out-dir",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let solution: serde_json::Value =
        serde_json::from_str(&read(&dir.join("solution.json"))).unwrap();
    // re-ingest the printed solution and compare against the closed form
    let hx = solution["h"][0].as_str().unwrap();
    let got = hopflift::expr::parse_expression(hx).unwrap();
    let want = hopflift::expr::parse_expression("-(1/y^2 + 1/z^2)").unwrap();
    for p in [[0.5, 0.7, 1.1], [1.3, 0.4, 0.8]] {
        let mut b = hopflift::expr::Binding::new();
        b.set_point(p);
        let g = got.evaluate_real(&b).unwrap();
        let w = want.evaluate_real(&b).unwrap();
        assert!((g - w).abs() < 1e-9 * w.abs(), "at {p:?}: {g} vs {w}");
    }
}

#[test]
fn solution_output_reingests_through_the_cli() {
    // components of exported solutions routinely start with '-('; the CLI
    // must accept them as expression values
    let dir = tempdir("reingest");
    let status = bin()
        .args(["iterate", "--seed", "example4", "--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let solution: serde_json::Value =
        serde_json::from_str(&read(&dir.join("solution.json"))).unwrap();
    let h: Vec<&str> = (0..3)
        .map(|k| solution["h"][k].as_str().unwrap())
        .collect();
    assert!(h[0].starts_with('-'), "expected a hyphen-leading component");
    let status = bin()
        .args(["verify", "--hx", h[0], "--hy", h[1], "--hz", h[2], "--system", "sw", "--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn malformed_expression_exits_two() {
    let out = bin()
        .args(["iterate", "--hx", "x +* y", "--hy", "0", "--hz", "0", "--system", "sw"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("1:4"), "stderr: {stderr}");
}

#[test]
fn generic_seed_exits_three_on_blowup() {
    let dir = tempdir("blowup");
    let status = bin()
        .args(["iterate", "--seed", "generic", "--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
    let trace: serde_json::Value = serde_json::from_str(&read(&dir.join("trace.json"))).unwrap();
    assert_eq!(trace["status"], "size_blowup");
}

#[test]
fn verify_expected_tuple_passes_and_perturbation_fails() {
    let dir = tempdir("verify");
    let status = bin()
        .args(["verify", "--seed", "example4", "--use-expected", "--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&read(&dir.join("report.json"))).unwrap();
    assert_eq!(report["pass"], true);
    assert!(read(&dir.join("report.txt")).contains("overall: pass"));

    let status = bin()
        .args([
            "verify",
            "--seed",
            "example4",
            "--use-expected",
            "--perturb",
            "1e-3",
            "--out-dir",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn verify_non_solution_fails() {
    let dir = tempdir("verify-bad");
    let status = bin()
        .args([
            "verify", "--hx", "x", "--hy", "y", "--hz", "z", "--system", "sw", "--out-dir",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn liouville_alt_square_matches_planar_closed_form() {
    let dir = tempdir("liouville");
    let status = bin()
        .args(["liouville", "--alt", "--g", "zeta^2", "--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = read(&dir.join("liouville.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "u,v,omega,B,residual");
    let mut checked = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let (u, v, b) = (cols[0], cols[1], cols[3]);
        let want = 1.0 / (u * u) + 1.0 / (v * v);
        assert!(
            (b - want).abs() < 1e-9 * want,
            "B mismatch at ({u}, {v}): {b} vs {want}"
        );
        checked += 1;
    }
    assert_eq!(checked, 400);
}

#[test]
fn liouville_rejects_non_half_integer_order() {
    let out = bin().args(["liouville", "--zn", "0.7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("half-integer"));
}

#[test]
fn liouville_zn_and_ns_pass() {
    let dir = tempdir("liouville2");
    for args in [
        vec!["liouville", "--zn", "3/2"],
        vec!["liouville", "--ns", "--g", "zeta"],
    ] {
        let status = bin().args(&args).arg("--out-dir").arg(&dir).status().unwrap();
        assert_eq!(status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir_a = tempdir("det-a");
    let dir_b = tempdir("det-b");
    for dir in [&dir_a, &dir_b] {
        let status = bin()
            .args([
                "iterate",
                "--seed",
                "example2",
                "--no-timings",
                "--out-dir",
            ])
            .arg(dir)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        let status = bin()
            .args(["sample", "--hx", "x", "--hy", "y", "--hz", "z", "--out-dir"])
            .arg(dir)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    for file in ["trace.json", "solution.json", "samples.csv"] {
        let a = read(&dir_a.join(file));
        let b = read(&dir_b.join(file));
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn seeds_listing_is_stable_and_complete() {
    let out = bin().arg("seeds").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "example1+",
        "example1-",
        "example2+",
        "example2-",
        "example2cosh+",
        "example3+",
        "example3-",
        "example4+",
        "example4-",
        "generic",
    ] {
        assert!(text.contains(name), "missing {name} in listing");
    }
    // both sign branches appear, and the listing is deterministic
    let again = String::from_utf8(bin().arg("seeds").output().unwrap().stdout).unwrap();
    assert_eq!(text, again);
}

#[test]
fn config_file_applies_and_flags_override() {
    let dir = tempdir("config");
    let cfg_path = dir.join("run.cfg");
    std::fs::write(&cfg_path, "max_iterations = 1\nparam.kappa = 1.0\n").unwrap();
    // with only one iteration the sinh seed cannot converge
    let status = bin()
        .args(["iterate", "--seed", "example2", "--config"])
        .arg(&cfg_path)
        .args(["--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
    // the flag overrides the file and the run converges again
    let status = bin()
        .args(["iterate", "--seed", "example2", "--config"])
        .arg(&cfg_path)
        .args(["--max-iterations", "10", "--out-dir"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn thread_cap_env_var_is_honored() {
    // HOPFLIFT_THREADS caps internal parallelism; a capped run must still
    // produce identical output
    let dir_a = tempdir("threads-a");
    let dir_b = tempdir("threads-b");
    for (dir, threads) in [(&dir_a, "1"), (&dir_b, "4")] {
        let status = bin()
            .env("HOPFLIFT_THREADS", threads)
            .args(["iterate", "--seed", "example3", "--no-timings", "--out-dir"])
            .arg(dir)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    assert_eq!(
        read(&dir_a.join("trace.json")),
        read(&dir_b.join("trace.json"))
    );
}

#[test]
fn sample_csv_round_trips_17_digits() {
    let dir = tempdir("sample");
    let status = bin()
        .args([
            "sample", "--hx", "x", "--hy", "y", "--hz", "z", "--samples", "25", "--out-dir",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = read(&dir.join("samples.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x,y,z");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    for row in rows {
        for cell in row.split(',') {
            let v: f64 = cell.parse().unwrap();
            assert!((0.3..1.7).contains(&v));
            // 17 significant digits in scientific notation
            assert!(cell.contains('e'));
        }
    }
}
