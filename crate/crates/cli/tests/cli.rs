use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn exlag(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exlag"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1, "{}", path.display());
    v
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn poly_seed_matches_shifted_xi() {
    let dir = TempDir::new().unwrap();
    let o = exlag(
        dir.path(),
        &[
            "poly", "--family", "L1", "--ell", "1", "--g", "1/1", "--nmax", "2",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&dir.path().join("poly.json"));
    let polys = v["polynomials"].as_array().unwrap();
    assert_eq!(polys.len(), 3);
    assert_eq!(polys[0]["coeffs"], v["xi"]["xi(g+1)"]);
    // xi_1(eta; 2) = eta + 5/2
    assert_eq!(polys[0]["coeffs"], serde_json::json!(["5/2", "1/1"]));
    for (n, p) in polys.iter().enumerate() {
        assert_eq!(p["degree"], 1 + n);
    }
    let m = json(&dir.path().join("manifest.json"));
    assert_eq!(m["outputs"][0]["file"], "poly.json");
}

#[test]
fn poly_classical_limit_is_laguerre() {
    let dir = TempDir::new().unwrap();
    let o = exlag(
        dir.path(),
        &["poly", "--ell", "0", "--g", "1/2", "--nmax", "2"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&dir.path().join("poly.json"));
    assert_eq!(v["classical_limit"], true);
    // L_2^(0)(eta) = 1 - 2 eta + eta^2 / 2
    assert_eq!(
        v["polynomials"][2]["coeffs"],
        serde_json::json!(["1/1", "-2/1", "1/2"])
    );
}

#[test]
fn poly_csv_header() {
    let dir = TempDir::new().unwrap();
    let o = exlag(dir.path(), &["poly", "--format", "csv", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = fs::read_to_string(dir.path().join("poly.csv")).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("n,eta,value"));
    assert_eq!(lines.count(), 4 * 3);
}

#[test]
fn invalid_coupling_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    for g in ["1/0", "2", "-3/2"] {
        let o = exlag(dir.path(), &["poly", "--g", g]);
        assert_eq!(o.status.code(), Some(2), "g = {g}");
    }
}

#[test]
fn verify_default_passes() {
    let dir = TempDir::new().unwrap();
    let o = exlag(dir.path(), &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&dir.path().join("verify.json"));
    assert_eq!(v["passed"], true);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
}

#[test]
fn verify_perturbed_states_fail() {
    let dir = TempDir::new().unwrap();
    let o = exlag(dir.path(), &["verify", "--perturb", "1e-3"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&dir.path().join("verify.json"));
    assert_eq!(v["failures"], serde_json::json!(["residual_exact"]));
}

#[test]
fn verify_classical_limit() {
    let dir = TempDir::new().unwrap();
    let o = exlag(dir.path(), &["verify", "--ell", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("classical limit"));
    let v = json(&dir.path().join("verify.json"));
    let lag = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "classical_laguerre")
        .unwrap();
    assert_eq!(lag["status"], "pass");
}

#[test]
fn verify_report_is_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert_eq!(
        exlag(a.path(), &["verify", "--family", "L2"]).status.code(),
        Some(0)
    );
    assert_eq!(
        exlag(b.path(), &["verify", "--family", "L2"]).status.code(),
        Some(0)
    );
    let ra = fs::read(a.path().join("verify.json")).unwrap();
    let rb = fs::read(b.path().join("verify.json")).unwrap();
    assert_eq!(ra, rb);
    let m = json(&a.path().join("manifest.json"));
    assert!(m["created_unix"].as_u64().unwrap() > 0);
}

#[test]
fn dirac_landau_levels() {
    let dir = TempDir::new().unwrap();
    let o = exlag(
        dir.path(),
        &[
            "dirac", "--m", "0", "--g", "1/2", "--mass", "1", "--nmax", "3",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&dir.path().join("spectrum.json"));
    let e2 = v["levels"][2]["E"].as_f64().unwrap();
    assert!((e2 - 3.0).abs() < 1e-12, "{e2}");
    assert_eq!(v["susy"], "unbroken");
    let csv = fs::read_to_string(dir.path().join("components.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("r,f_plus,f_minus"));
}

#[test]
fn dirac_negative_m_is_rejected() {
    let dir = TempDir::new().unwrap();
    let o = exlag(dir.path(), &["dirac", "--m", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fp_spectral_matches_oracle() {
    let dir = TempDir::new().unwrap();
    let o = exlag(
        dir.path(),
        &[
            "fp", "--ell", "1", "--g", "1/1", "--cells", "1000", "--t", "0.5",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&dir.path().join("fp_report.json"));
    let d = v["comparisons"][0]["L1_distance"].as_f64().unwrap();
    assert!(d < 1e-4, "{d}");
    for f in ["spectral.csv", "oracle.csv"] {
        let s = fs::read_to_string(dir.path().join(f)).unwrap();
        assert_eq!(s.lines().next(), Some("t,x,P"));
    }
}
