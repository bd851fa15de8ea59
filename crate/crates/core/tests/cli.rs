use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_apollonian"));
    c.env_remove("APOLLONIAN_DEPTH_CAP");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("apollonian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(c: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = c.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn validate_seed_files() {
    let (code, out, _) = run(bin().arg("validate").arg(data("strip.json")));
    assert_eq!(code, 0);
    assert!(out.contains("strongly integral: true"));
    assert_eq!(run(bin().arg("validate").arg(data("gasket.json"))).0, 0);

    let perturbed = scratch("perturbed.json");
    std::fs::write(&perturbed, r#"{"rows": [[2,0,0,1],[2,0,0,-1],[0,1,1,0],[0,1,-1,1]]}"#).unwrap();
    assert_eq!(run(bin().arg("validate").arg(&perturbed)).0, 1);

    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "{ rows: ").unwrap();
    assert_eq!(run(bin().arg("validate").arg(&garbage)).0, 2);
}

#[test]
fn generate_then_spectrum_and_render() {
    let path = scratch("gasket5.json");
    let (code, out, _) = run(bin()
        .args(["generate", "gasket", "--depth", "5", "--out"])
        .arg(&path));
    assert_eq!(code, 0);
    assert!(out.contains("circles: 488"));
    assert!(out.contains("expected 2(3^m+1): 488"));

    let (code, csv, _) = run(bin().arg("spectrum").arg(&path));
    assert_eq!(code, 0);
    assert!(csv.starts_with("curvature,count\n-1,1\n2,2\n3,2\n"));
    assert!(csv.lines().any(|l| l.starts_with("15,")));

    let (code, svg, _) = run(bin().arg("render").arg(&path).arg("--labels"));
    assert_eq!(code, 0);
    assert_eq!(svg.matches("<circle").count(), 488);
    assert!(svg.contains(">15<"));
    let (_, again, _) = run(bin().arg("render").arg(&path).arg("--labels"));
    assert_eq!(svg, again);

    // Too small for a dimension fit.
    assert_eq!(run(bin().arg("dim").arg(&path)).0, 1);
}

#[test]
fn generate_round_trip_keeps_exact_seed() {
    let path = scratch("strip-super.json");
    let (code, out, _) = run(bin()
        .args(["generate", "strip", "--kind", "super", "--depth", "3", "--check", "--out"])
        .arg(&path));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("no crossing: pass"));
    let text = std::fs::read_to_string(&path).unwrap();
    let loaded = apollonian::packing::LoadedPacking::from_json_str(&text).unwrap();
    assert_eq!(loaded.seed, apollonian::config::AccMatrix::strip());
}

#[test]
fn empty_packing_renders() {
    let path = scratch("empty.json");
    std::fs::write(
        &path,
        r#"{"seed": {"rows": [[1,-1,0,0],[0,2,1,0],[0,2,-1,0],[1,3,0,-2]]}, "kind": "apollonian", "depth": 0, "circles": []}"#,
    )
    .unwrap();
    let (code, svg, _) = run(bin().arg("render").arg(&path));
    assert_eq!(code, 0);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn words_reduce_and_depth_cap() {
    assert_eq!(run(bin().args(["words", "--length", "2"])).1.trim(), "44");
    assert_eq!(run(bin().args(["words", "--length", "3", "--list"])).1.lines().count(), 224);
    assert_eq!(run(bin().args(["reduce", "11"])).1.lines().next(), Some(""));
    assert_eq!(run(bin().args(["reduce", "1x"])).0, 2);

    let (code, _, err) = run(bin()
        .env("APOLLONIAN_DEPTH_CAP", "2")
        .args(["generate", "gasket", "--depth", "3"]));
    assert_eq!(code, 1);
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn moebius_and_schottky_checks() {
    let (code, out, _) = run(bin().args(["moebius", "gasket", "--ops", "t:1,0"]));
    assert_eq!(code, 0);
    assert!(out.contains("[4, 2, 3, 0]"));
    assert_eq!(run(bin().args(["moebius", "--verify", "20"])).0, 0);

    let (code, out, _) = run(bin().arg("schottky"));
    assert_eq!(code, 0);
    assert!(out.contains("traces: 2, 2, -2"));
    let (code, csv, err) = run(bin().args(["schottky", "--depth", "2", "--membership", "6"]));
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 1 + 12 * 3);
    assert!(err.contains("residual membership: 36/36"));

    assert_eq!(run(bin().args(["dim", "--calibrate", "1.5"])).1.trim(), "slope: 1.500051");
}
