//! Black-box checks of the command-line surface: exit codes, artifact
//! layout, and the documented example invocations.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_holoctf");

fn holoctf(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn write_phantom(dir: &Path, json: &str) -> String {
    let p = dir.join("phantom.json");
    std::fs::write(&p, json).unwrap();
    p.display().to_string()
}

#[test]
fn zeros_phase_f1_first_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = holoctf(&[
        "zeros", "--kind", "phase", "--fresnel", "1", "--max-radius", "5",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("zeros.csv")).unwrap();
    let first = csv.lines().nth(1).unwrap();
    let cols: Vec<&str> = first.split(',').collect();
    assert_eq!(cols[1], "0.5");
    assert_eq!(cols[2], "0");
    assert!(dir.path().join("validation.json").exists());
    assert!(dir.path().join("run_manifest.json").exists());
}

#[test]
fn zeros_attenuation_f3_first_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = holoctf(&[
        "zeros", "--kind", "attenuation", "--fresnel", "3", "--max-radius", "4",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("zeros.csv")).unwrap();
    let lam2: Vec<&str> =
        csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(lam2, ["3", "6", "9", "12"]);
}

#[test]
fn zeros_attenuation_f2_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let out = holoctf(&[
        "zeros", "--kind", "attenuation", "--fresnel", "2",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_zero_phantom_gives_unit_intensity() {
    let dir = tempfile::tempdir().unwrap();
    let phantom = write_phantom(dir.path(), r#"{"components":[]}"#);
    let out = holoctf(&[
        "simulate", "--phantom", &phantom, "--fresnel", "3", "--grid", "32",
        "--extent", "4", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bytes = std::fs::read(dir.path().join("hologram.raw")).unwrap();
    for chunk in bytes.chunks_exact(8) {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        assert!((v - 1.0).abs() < 1e-15);
    }
}

#[test]
fn simulate_rejects_phantom_outside_support() {
    let dir = tempfile::tempdir().unwrap();
    let phantom = write_phantom(
        dir.path(),
        r#"{"components":[{"shape":"disk","center":[0.5,0.0],"radius":0.2,"mu":0.1}]}"#,
    );
    let out = holoctf(&[
        "simulate", "--phantom", &phantom, "--fresnel", "3", "--grid", "32",
        "--extent", "4", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_full_vs_linear_weak_object() {
    let dir = tempfile::tempdir().unwrap();
    let phantom = write_phantom(
        dir.path(),
        r#"{"components":[{"shape":"rect","center":[0.1,0.05],"size":[0.15,0.1],"phi":0.01}]}"#,
    );
    let read_raw = |sub: &str| {
        std::fs::read(dir.path().join(sub).join("hologram.raw"))
            .unwrap()
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect::<Vec<f64>>()
    };
    for model in ["linear", "full"] {
        let out_dir = dir.path().join(model);
        let out = holoctf(&[
            "simulate", "--phantom", &phantom, "--fresnel", "3", "--grid", "128",
            "--extent", "4", "--model", model, "--out", out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let worst = read_raw("linear")
        .iter()
        .zip(read_raw("full"))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-3, "full vs linear max diff {worst}");
}

#[test]
fn reconstruct_analytic_meets_error_bound() {
    let dir = tempfile::tempdir().unwrap();
    let phantom = write_phantom(
        dir.path(),
        r#"{"components":[{"shape":"rect","center":[0.1,0.05],"size":[0.15,0.1],"phi":1.0}]}"#,
    );
    let out = holoctf(&[
        "reconstruct", "--analytic", &phantom, "--fresnel", "3", "--channel", "sin",
        "--directions", "64", "--grid", "128", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    let rel = metrics["rel_l2_error"].as_f64().unwrap();
    assert!(rel <= 5e-2, "rel L2 {rel}");
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("recon_manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["kind"], "phase");
    assert_eq!(manifest["f"], 3);
    assert_eq!(manifest["sampler"], "analytic");
    assert!(dir.path().join("profile.csv").exists());
}

#[test]
fn reconstruct_cos_channel_on_mu_phantom() {
    let dir = tempfile::tempdir().unwrap();
    let phantom = write_phantom(
        dir.path(),
        r#"{"components":[{"shape":"rect","center":[0.1,0.05],"size":[0.15,0.1],"mu":1.0}]}"#,
    );
    let out = holoctf(&[
        "reconstruct", "--analytic", &phantom, "--fresnel", "3", "--channel", "cos",
        "--directions", "64", "--grid", "128", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    assert!(metrics["rel_l2_error"].as_f64().unwrap() <= 5e-2);
}

#[test]
fn reconstruct_missing_manifest_fails() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("orphan.raw");
    std::fs::write(&raw, [0u8; 32]).unwrap();
    let out = holoctf(&[
        "reconstruct", "--hologram", raw.to_str().unwrap(), "--channel", "sin",
        "--grid", "32", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reconstruct_even_fresnel_suggests_refresnel() {
    let dir = tempfile::tempdir().unwrap();
    let phantom = write_phantom(
        dir.path(),
        r#"{"components":[{"shape":"rect","center":[0.0,0.0],"size":[0.1,0.1],"mu":1.0}]}"#,
    );
    let out = holoctf(&[
        "reconstruct", "--analytic", &phantom, "--fresnel", "6", "--channel", "cos",
        "--grid", "64", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--refresnel"));
}

#[test]
fn verify_passes_and_corrupt_hook_fails() {
    let ok = holoctf(&["verify", "--fresnel", "1,3,5,7,9", "--kinds", "both"]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));

    let bad = holoctf(&["verify", "--fresnel", "3", "--kinds", "phase", "--corrupt"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn wks_error_decreases_with_order() {
    let max_err = |n: &str| -> f64 {
        let dir = tempfile::tempdir().unwrap();
        let out = holoctf(&["wks-demo", "--n", n, "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success());
        String::from_utf8_lossy(&out.stdout)
            .split('=')
            .next_back()
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    let e8 = max_err("8");
    let e32 = max_err("32");
    let e0 = max_err("0");
    assert!(e32 <= e8, "{e32} vs {e8}");
    assert!(e0 > e8, "{e0} vs {e8}");
}
