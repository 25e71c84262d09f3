use std::fs;

use serde_json::Value;
use snft::interference::{amplitude_function, fourier_unitary, ScatteringSetup};
use snft::Complex64;
use snft_cli::{ingest_unitary, parse_matrix, run, UnitarySource, INGEST_TOL, SCHEMA};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["snft"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn invoke_json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn irreps_character_table_s3() {
    let v = invoke_json(&["irreps", "3"]);
    assert_eq!(v["schema"], SCHEMA);
    let parts: Vec<&str> = v["partitions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    let row = parts.iter().position(|p| *p == "(2,1)").unwrap();
    let classes: Vec<&str> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    let chars = &v["characters"][row];
    let at = |c: &str| {
        chars[classes.iter().position(|x| *x == c).unwrap()]
            .as_i64()
            .unwrap()
    };
    assert_eq!(at("(1,1,1)"), 2);
    assert_eq!(at("(2,1)"), 0);
    assert_eq!(at("(3)"), -1);
    assert_eq!(v["dimensions"][row], 2);
}

#[test]
fn irreps_csv_and_matrices() {
    let (code, out, _) = invoke(&["--format", "csv", "irreps", "3"]);
    assert_eq!(code, 0);
    assert!(out
        .lines()
        .next()
        .unwrap()
        .starts_with("partition,dimension"));
    assert_eq!(out.lines().count(), 4);
    let v = invoke_json(&["irreps", "3", "--matrices"]);
    let reps = v["matrices"].as_array().unwrap();
    assert_eq!(reps.len(), 3);
    assert!(reps
        .iter()
        .all(|r| r["elements"].as_array().unwrap().len() == 6));
}

#[test]
fn hom_dip_through_cli() {
    let v = invoke_json(&[
        "counting",
        "--fourier",
        "--n",
        "2",
        "--m",
        "2",
        "--model",
        "boson",
        "--in",
        "0,1",
        "--event",
        "1,1",
    ]);
    assert!(v["probability"].as_f64().unwrap().abs() < 1e-12);
    let v = invoke_json(&[
        "counting",
        "--unitary",
        "beamsplitter",
        "--model",
        "dist",
        "--in",
        "0,1",
        "--event",
        "1,1",
    ]);
    assert!((v["probability"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let v = invoke_json(&[
        "counting",
        "--unitary",
        "beamsplitter",
        "--model",
        "fermion",
        "--in",
        "0,1",
        "--event",
        "1,1",
    ]);
    assert!((v["probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn counting_distribution_sums_to_one() {
    let v = invoke_json(&[
        "counting",
        "--unitary",
        "fourier:3",
        "--model",
        "boson",
        "--in",
        "0,1,2",
    ]);
    assert_eq!(v["events"].as_array().unwrap().len(), 10);
    assert!((v["total"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn verify_passes() {
    let (code, out, err) = invoke(&["verify", "--n", "4"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn builtin_unitaries() {
    let f = ingest_unitary(&UnitarySource::Fourier(2), INGEST_TOL).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let expected = [s, s, s, -s];
    for r in 0..2 {
        for c in 0..2 {
            assert!((f[(r, c)] - Complex64::new(expected[2 * r + c], 0.0)).norm() < 1e-15);
        }
    }
    let id = ingest_unitary(&UnitarySource::Identity(4), INGEST_TOL).unwrap();
    for r in 0..4 {
        for c in 0..4 {
            let want = if r == c { 1.0 } else { 0.0 };
            assert_eq!(id[(r, c)], Complex64::new(want, 0.0));
        }
    }
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_tmp(&dir, "bad.json", "[[[1,0],[1,0]],[[0,0],[1,0]]]");
    let (code, _, err) = invoke(&[
        "amplitude",
        "--unitary",
        &bad,
        "--in",
        "0,1",
        "--out",
        "0,1",
    ]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());

    let (code, _, _) = invoke(&[
        "amplitude",
        "--unitary",
        "/nonexistent/u.json",
        "--in",
        "0,1",
        "--out",
        "0,1",
    ]);
    assert_eq!(code, 2);

    let (code, _, err) = invoke(&["irreps", "8"]);
    assert_eq!(code, 2);
    assert!(err.contains("--unsafe-large"));

    let gram = write_tmp(&dir, "gram.json", "[[[1,0],[2,0]],[[2,0],[1,0]]]");
    let (code, _, _) = invoke(&["distinguishability", "--gram", &gram]);
    assert_eq!(code, 2);

    let (code, _, _) = invoke(&["counting", "--model", "boson", "--in", "0,1"]);
    assert_eq!(code, 2);
    let (code, _, _) = invoke(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("scan"));
}

#[test]
fn file_unitary_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let v = invoke_json(&[
        "amplitude",
        "--unitary",
        "fourier:3",
        "--in",
        "0,1,2",
        "--out",
        "0,0,0",
    ]);
    let text = serde_json::to_string(&serde_json::json!({ "matrix": v["unitary"] })).unwrap();
    let parsed = parse_matrix(&text).unwrap();
    let u = fourier_unitary(3);
    for (a, b) in parsed.iter().zip(u.iter()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
    let path = write_tmp(&dir, "u.json", &text);
    let w = invoke_json(&[
        "amplitude",
        "--unitary",
        &path,
        "--in",
        "0,1,2",
        "--out",
        "0,0,0",
    ]);
    assert_eq!(v["amplitudes"], w["amplitudes"]);
}

#[test]
fn amplitude_values_are_exact_in_both_formats() {
    let setup = ScatteringSetup::new(fourier_unitary(3), vec![0, 1, 2], vec![0, 1, 1]).unwrap();
    let a = amplitude_function(&setup);
    let v = invoke_json(&[
        "amplitude",
        "--unitary",
        "fourier:3",
        "--in",
        "0,1,2",
        "--out",
        "0,1,1",
    ]);
    let amps = v["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 6);
    for (entry, z) in amps.iter().zip(a.values()) {
        assert_eq!(
            entry["value"][0].as_f64().unwrap().to_bits(),
            z.re.to_bits()
        );
        assert_eq!(
            entry["value"][1].as_f64().unwrap().to_bits(),
            z.im.to_bits()
        );
    }
    assert_eq!(amps[0]["permutation"], "id");

    let (code, out, _) = invoke(&[
        "--format",
        "csv",
        "amplitude",
        "--unitary",
        "fourier:3",
        "--in",
        "0,1,2",
        "--out",
        "0,1,1",
    ]);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    for (rec, z) in reader.records().zip(a.values()) {
        let rec = rec.unwrap();
        assert_eq!(rec[2].parse::<f64>().unwrap().to_bits(), z.re.to_bits());
        assert_eq!(rec[3].parse::<f64>().unwrap().to_bits(), z.im.to_bits());
    }
}

#[test]
fn distinguishability_overlap() {
    let v = invoke_json(&["distinguishability", "--overlap", "0.5"]);
    let w = &v["weights"];
    assert!((w["(2)"].as_f64().unwrap() - 0.625).abs() < 1e-12);
    assert!((w["(1,1)"].as_f64().unwrap() - 0.375).abs() < 1e-12);
    assert!((v["purity"].as_f64().unwrap() - (1.0 + 0.5f64.powi(4)) / 2.0).abs() < 1e-12);
    assert_eq!(v["positivity"]["passed"], true);
    let v = invoke_json(&["distinguishability", "--labels", "0,0,1"]);
    let total: f64 = v["weights"]
        .as_object()
        .unwrap()
        .values()
        .map(|x| x.as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn ft_delta_identity_gives_identity_blocks() {
    let v = invoke_json(&["ft", "--n", "3", "--function", "delta:id"]);
    for b in v["blocks"].as_array().unwrap() {
        let d = b["dimension"].as_u64().unwrap() as usize;
        for r in 0..d {
            for c in 0..d {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((b["block"][r][c][0].as_f64().unwrap() - want).abs() < 1e-14);
            }
        }
    }
    let fast = invoke_json(&["ft", "--n", "3", "--function", "sign", "--fast"]);
    let blocks = fast["blocks"].as_array().unwrap();
    let nonzero: Vec<_> = blocks
        .iter()
        .filter(|b| b["weight"].as_f64().unwrap() > 1e-12)
        .collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0]["partition"], "(1,1,1)");
}

#[test]
fn scan_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let summary = dir.path().join("s.json");
    let (code, _, err) = invoke(&[
        "--threads",
        "1",
        "scan",
        "--fourier",
        "--n",
        "3",
        "--out",
        a.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("N=3 M=3"));
    let (code, _, _) = invoke(&[
        "--threads",
        "2",
        "scan",
        "--fourier",
        "--n",
        "3",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let ta = fs::read_to_string(&a).unwrap();
    assert_eq!(ta, fs::read_to_string(&b).unwrap());
    assert!(ta.starts_with("input,output,lambda,weight,status,witness,multiplicity"));
    let s: Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["schema"], SCHEMA);
    assert_eq!(s["rows"], 100);
}

#[test]
fn scan_dedupe_reduces_rows() {
    let (code, out, _) = invoke(&["scan", "--fourier", "--n", "3", "--dedupe", "bogus"]);
    assert_eq!(code, 2, "{out}");
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let (code, _, err) = invoke(&[
        "scan",
        "--fourier",
        "--n",
        "3",
        "--dedupe",
        "dihedral",
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let s: Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(s["rows"].as_u64().unwrap() < 100);
    assert_eq!(s["raw_pairs"], 100);
}

#[test]
fn cloud_outputs() {
    let (code, out, _) = invoke(&[
        "cloud",
        "--unitary",
        "fourier:2",
        "--in",
        "0,1",
        "--out",
        "0,1",
    ]);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let total: u64 = reader
        .records()
        .map(|r| r.unwrap()[2].parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 2);
    let v = invoke_json(&[
        "--format",
        "json",
        "cloud",
        "--unitary",
        "fourier:2",
        "--in",
        "0,1",
        "--out",
        "0,1",
    ]);
    assert_eq!(v["command"], "cloud");
    let sum: f64 = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["value"][0].as_f64().unwrap() * p["multiplicity"].as_f64().unwrap())
        .sum();
    assert!(sum.abs() < 1e-12);
}

#[test]
fn bench_reports_agreement() {
    let v = invoke_json(&["bench", "--n", "4"]);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-10);
}
