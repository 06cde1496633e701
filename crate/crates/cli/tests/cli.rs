use hypsteklov::mesh::import_mesh;
use hypsteklov_cli::parse_plan;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypsteklov"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SPHERE: &str = r#"
id = "s"
[surface]
generator = "four-holed-sphere"
boundary_lengths = [1.0, 1.0, 1.0, 1.0]
interior_lengths = [0.3]
[mesh]
h = 0.3
refinements = 0
[solve]
count = 3
"#;

fn diagnostics(text: &str) -> Vec<String> {
    match parse_plan(text) {
        Ok(_) => Vec::new(),
        Err(d) => d.iter().map(|d| d.to_string()).collect(),
    }
}

#[test]
fn shipped_configs_validate() {
    for e in std::fs::read_dir(configs()).unwrap() {
        let path = e.unwrap().path();
        let out = bin().arg("validate").arg(&path).output().unwrap();
        assert!(out.status.success(), "{}: {}", path.display(), stdout(&out));
        assert!(stdout(&out).trim_end().ends_with(": ok"));
    }
}

#[test]
fn baseline_is_valid() {
    assert!(diagnostics(SPHERE).is_empty());
}

#[test]
fn negative_length_names_the_field() {
    let d = diagnostics(&SPHERE.replace("[1.0, 1.0, 1.0, 1.0]", "[1.0, -2.0, 1.0, 1.0]"));
    assert!(d.iter().any(|m| m.starts_with("surface.boundary_lengths[1]:")), "{d:?}");
}

#[test]
fn sweep_over_missing_curve_is_reported() {
    let text = format!("{SPHERE}\n[sweep]\nparameter = \"nope\"\nvalues = [0.1, 0.2]\n");
    let d = diagnostics(&text);
    assert!(d.iter().any(|m| m.starts_with("sweep") && m.contains("nope")), "{d:?}");
}

#[test]
fn signature_mismatch_is_reported() {
    let text = SPHERE.replace("[mesh]", "signature = [1, 4, 0]\n[mesh]");
    let d = diagnostics(&text);
    assert!(d.iter().any(|m| m.starts_with("surface.signature")), "{d:?}");
}

#[test]
fn unknown_boundary_label_is_reported() {
    let text = format!("{SPHERE}\n[solve.boundary_conditions]\nB9 = \"neumann\"\n");
    let d = diagnostics(&text);
    assert!(d.iter().any(|m| m.contains("B9")), "{d:?}");
}

#[test]
fn all_neumann_is_rejected() {
    let text = format!(
        "{SPHERE}\n[solve.boundary_conditions]\nB1 = \"neumann\"\nB2 = \"neumann\"\nB3 = \"neumann\"\nB4 = \"neumann\"\n"
    );
    assert!(!diagnostics(&text).is_empty());
}

#[test]
fn syntax_errors_carry_a_line() {
    let d = diagnostics("id = \"x\"\n[surface\n");
    assert!(d.iter().any(|m| m.contains("line 2")), "{d:?}");
}

#[test]
fn unknown_keys_are_rejected() {
    let d = diagnostics(&SPHERE.replace("count = 3", "count = 3\nfoo = 1"));
    assert!(!d.is_empty());
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", &SPHERE.replace("h = 0.3", "h = 7.0"));
    let out = bin().arg("validate").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("mesh.h"), "{}", stdout(&out));
    let out = bin().arg("validate").arg(dir.path().join("missing.toml")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_reports_and_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.toml",
        &format!("{SPHERE}\n[sweep]\nparameter = \"g1\"\nvalues = [0.3, 0.2, 0.15]\n"),
    );
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out_dir = dir.path().join(format!("w{workers}"));
        let out = bin()
            .args(["run", "--workers", workers, "--out"])
            .arg(&out_dir)
            .arg(&cfg)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        for f in ["spectra.csv", "bounds.csv", "convergence.csv", "diagnostics.csv", "manifest.toml"] {
            assert!(out_dir.join(f).is_file(), "{f}");
        }
        assert!(out_dir.join("points/p02/spectra.csv").is_file());
        outputs.push(out_dir);
    }
    for f in ["spectra.csv", "bounds.csv", "convergence.csv", "diagnostics.csv"] {
        let a = std::fs::read(outputs[0].join(f)).unwrap();
        let b = std::fs::read(outputs[1].join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let spectra = std::fs::read_to_string(outputs[0].join("spectra.csv")).unwrap();
    assert!(spectra.lines().next().unwrap().starts_with("problem_id,h,k,sigma_k,residual"));
    assert_eq!(spectra.lines().count(), 1 + 3 * 3);
}

#[test]
fn run_with_invalid_config_exits_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &SPHERE.replace("count = 3", "count = 0"));
    let out = bin().arg("run").arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_mesh_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SPHERE);
    let file = dir.path().join("mesh.txt");
    let out = bin().args(["export-mesh"]).arg(&cfg).arg("p00").arg("--out").arg(&file).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mesh = import_mesh(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(mesh.euler_characteristic, -2);
    assert_eq!(mesh.boundary_labels.len(), 4);
    let missing = bin().args(["export-mesh"]).arg(&cfg).arg("p07").output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}
